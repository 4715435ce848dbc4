//! The translation plane of a spread (Bruck–Bose) and the rank of its
//! incidence matrix.
//!
//! Points are numbered with the q⁴ affine points first, by vector code, then
//! the ideal points in the order of the sorted spread lines. Lines are the
//! cosets of each spread line in turn, ordered by their least vector code,
//! with the line at infinity last.

use crate::error::{Error, Result};
use crate::linalg;
use crate::projgeom::{decode, encode, Pg3};
use crate::spreadcore::{validate_spread, Spread};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneIncidence {
    q: u32,
    n_affine: usize,
    /// Sorted point indices of each line.
    lines: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointRole {
    Affine,
    Ideal,
}

impl PlaneIncidence {
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Order of the plane, q².
    pub fn order(&self) -> usize {
        (self.q * self.q) as usize
    }

    pub fn n_points(&self) -> usize {
        self.n_affine + self.order() + 1
    }

    pub fn n_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn line(&self, i: usize) -> &[u32] {
        &self.lines[i]
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    pub fn point_role(&self, p: usize) -> PointRole {
        if p < self.n_affine {
            PointRole::Affine
        } else {
            PointRole::Ideal
        }
    }

    pub fn line_at_infinity(&self) -> usize {
        self.lines.len() - 1
    }

    /// Lines × points incidence matrix with 0/1 entries.
    pub fn incidence_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.n_points();
        self.lines
            .iter()
            .map(|l| {
                let mut row = vec![0u8; n];
                for &p in l {
                    row[p as usize] = 1;
                }
                row
            })
            .collect()
    }

    /// Checks line and point degrees and that two points share exactly one
    /// line.
    pub fn validate_axioms(&self) -> Result<()> {
        let n = self.n_points();
        let k = self.order() + 1;
        if self.lines.len() != n {
            return Err(Error::Precondition(format!("{} lines for {n} points", self.lines.len())));
        }
        let mut degree = vec![0usize; n];
        let mut joined = vec![false; n * n];
        for (i, l) in self.lines.iter().enumerate() {
            if l.len() != k {
                return Err(Error::Precondition(format!("line {i} has {} points", l.len())));
            }
            for (a, &x) in l.iter().enumerate() {
                degree[x as usize] += 1;
                for &y in &l[a + 1..] {
                    let cell = &mut joined[x as usize * n + y as usize];
                    if *cell {
                        return Err(Error::Precondition(format!("points {x} and {y} share two lines")));
                    }
                    *cell = true;
                }
            }
        }
        if let Some(p) = degree.iter().position(|&d| d != k) {
            return Err(Error::Precondition(format!("point {p} lies on {} lines", degree[p])));
        }
        // with the degrees right, the pair count forces every pair to be joined
        Ok(())
    }

    /// One row per line: its sorted point indices.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let row: Vec<String> = l.iter().map(u32::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

pub fn build_plane(pg: &Pg3, s: &Spread) -> Result<PlaneIncidence> {
    validate_spread(pg, s.lines())?;
    let q = pg.q();
    let n_affine = q.pow(4) as usize;
    let mut lines = Vec::with_capacity(n_affine + (q * q) as usize + 1);
    let mut assigned = vec![false; n_affine];
    for (pos, &l) in s.lines().iter().enumerate() {
        let [u, v] = pg.line_basis_vectors(l);
        let subspace: Vec<[u32; 4]> = (0..q)
            .flat_map(|a| (0..q).map(move |b| [0, 1, 2, 3].map(|i| (a * u[i] + b * v[i]) % q)))
            .collect();
        assigned.iter_mut().for_each(|x| *x = false);
        let ideal = (n_affine + pos) as u32;
        for code in 0..n_affine {
            if assigned[code] {
                continue;
            }
            let x = decode(code as u32, q);
            let mut pts: Vec<u32> = subspace
                .iter()
                .map(|w| encode(&[0, 1, 2, 3].map(|i| (x[i] + w[i]) % q), q))
                .collect();
            for &p in &pts {
                assigned[p as usize] = true;
            }
            pts.sort_unstable();
            pts.push(ideal);
            lines.push(pts);
        }
    }
    let infinity: Vec<u32> = (0..=(q * q)).map(|i| n_affine as u32 + i).collect();
    lines.push(infinity);
    Ok(PlaneIncidence { q, n_affine, lines })
}

/// Rank over GF(p) of the incidence matrix.
pub fn p_rank(pl: &PlaneIncidence, p: u32) -> usize {
    linalg::rank_dense(pl.incidence_matrix(), p)
}

/// Builds the plane of a spread and returns its rank over the base field.
pub fn spread_p_rank(pg: &Pg3, s: &Spread) -> Result<usize> {
    let pl = build_plane(pg, s)?;
    Ok(p_rank(&pl, pg.q()))
}
