//! Dense linear algebra over GF(p) with byte-sized entries.

/// Inverse table for the nonzero residues mod `p`; index 0 holds 0.
pub fn inverse_table(p: u32) -> Vec<u32> {
    let mut inv = vec![0; p as usize];
    for a in 1..p {
        inv[a as usize] = (1..p).find(|b| a * b % p == 1).unwrap();
    }
    inv
}

/// Row-reduces `rows` in place to reduced echelon form and returns the pivot
/// columns.
pub fn rref(rows: &mut [Vec<u32>], p: u32) -> Vec<usize> {
    let inv = inverse_table(p);
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] % p != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let s = inv[(rows[r][c] % p) as usize];
        for x in rows[r].iter_mut() {
            *x = *x * s % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = p - rows[i][c];
                for j in 0..ncols {
                    rows[i][j] = (rows[i][j] + f * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_small(rows: &[Vec<u32>], p: u32) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, p).len()
}

/// Basis of the right null space {x : M x = 0}.
pub fn nullspace(rows: &[Vec<u32>], ncols: usize, p: u32) -> Vec<Vec<u32>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; ncols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][f] % p) % p;
            }
            v
        })
        .collect()
}

/// Rank of a dense byte matrix over GF(p), destroying its contents.
///
/// Rows are reduced against each pivot with a multiplication table; entries
/// stay in `[0, p)` throughout.
pub fn rank_dense(mut rows: Vec<Vec<u8>>, p: u32) -> usize {
    let pu = p as usize;
    let inv = inverse_table(p);
    let mut mul = vec![0u8; pu * pu];
    for a in 0..pu {
        for b in 0..pu {
            mul[a * pu + b] = (a * b % pu) as u8;
        }
    }
    let mut add = vec![0u8; pu * pu];
    for a in 0..pu {
        for b in 0..pu {
            add[a * pu + b] = ((a + b) % pu) as u8;
        }
    }
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let s = inv[rows[rank][c] as usize] as usize;
        if s != 1 {
            for x in rows[rank][c..].iter_mut() {
                *x = mul[s * pu + *x as usize];
            }
        }
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            let lead = row[c] as usize;
            if lead == 0 {
                continue;
            }
            let f = (pu - lead) * pu;
            for (x, &y) in row[c..].iter_mut().zip(&pivot[c..]) {
                if y != 0 {
                    *x = add[*x as usize * pu + mul[f + y as usize] as usize];
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_plane_pair() {
        // x0 = 0 and x1 = 0 meet in the line spanned by e2, e3
        let rows = vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]];
        let ns = nullspace(&rows, 4, 5);
        assert_eq!(ns, vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
    }

    #[test]
    fn dense_rank_matches_small_rank() {
        let m: Vec<Vec<u32>> = vec![
            vec![1, 2, 3, 4],
            vec![2, 4, 6, 8],
            vec![0, 1, 1, 0],
            vec![1, 3, 4, 4],
        ];
        let bytes = m.iter().map(|r| r.iter().map(|&x| (x % 5) as u8).collect()).collect();
        assert_eq!(rank_small(&m, 5), 2);
        assert_eq!(rank_dense(bytes, 5), 2);
    }
}
