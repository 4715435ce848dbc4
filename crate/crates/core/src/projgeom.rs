//! The projective space PG(3,q): points, lines, incidence, and linear maps.
//!
//! Points are 4-vectors over GF(q) normalized so that the leftmost nonzero
//! coordinate is 1, indexed in lexicographic order. Lines are indexed in the
//! lexicographic order of their sorted point-index tuples, so sorting by
//! line id and sorting by point tuple agree.

use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::linalg;

pub type PointId = u16;
pub type LineId = u16;

pub type Vec4 = [u32; 4];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjPoint {
    pub coords: Vec4,
    pub index: PointId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjLine {
    pub index: LineId,
    pub points: Vec<PointId>,
    /// Reduced row echelon basis.
    pub basis: [Vec4; 2],
}

pub struct Pg3 {
    q: u32,
    points: Vec<Vec4>,
    code_to_point: Vec<PointId>,
    /// Flat table, `q + 1` sorted point ids per line.
    line_points: Vec<PointId>,
    line_through: Vec<LineId>,
    lines_on_point: Vec<Vec<LineId>>,
}

pub const NO_POINT: PointId = PointId::MAX;

impl Pg3 {
    pub fn new(q: u32) -> Result<Self> {
        if !is_prime(q) || q > 7 {
            return Err(Error::UnsupportedOrder(q));
        }
        let inv = linalg::inverse_table(q);
        let q4 = q.pow(4);
        let mut points = Vec::new();
        let mut code_to_point = vec![NO_POINT; q4 as usize];
        for code in 1..q4 {
            let v = decode(code, q);
            let lead = v.iter().find(|&&x| x != 0).copied().unwrap();
            if lead == 1 {
                code_to_point[code as usize] = points.len() as PointId;
                points.push(v);
            }
        }
        // non-normalized vectors point at their normalization
        for code in 1..q4 {
            if code_to_point[code as usize] == NO_POINT {
                let v = decode(code, q);
                let lead = v.iter().find(|&&x| x != 0).copied().unwrap();
                let s = inv[lead as usize];
                let w = v.map(|x| x * s % q);
                code_to_point[code as usize] = code_to_point[encode(&w, q) as usize];
            }
        }

        let n = points.len();
        let mut pg = Self {
            q,
            points,
            code_to_point,
            line_points: Vec::new(),
            line_through: vec![LineId::MAX; n * n],
            lines_on_point: vec![Vec::new(); n],
        };

        let mut seen = vec![false; n * n];
        let mut lines: Vec<Vec<PointId>> = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if seen[a * n + b] {
                    continue;
                }
                let pts = pg.span_points(a as PointId, b as PointId);
                for &x in &pts {
                    for &y in &pts {
                        seen[x as usize * n + y as usize] = true;
                    }
                }
                lines.push(pts);
            }
        }
        lines.sort();
        for (id, pts) in lines.iter().enumerate() {
            for &x in pts {
                pg.lines_on_point[x as usize].push(id as LineId);
                for &y in pts {
                    if x != y {
                        pg.line_through[x as usize * n + y as usize] = id as LineId;
                    }
                }
            }
            pg.line_points.extend_from_slice(pts);
        }
        Ok(pg)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn line_count(&self) -> usize {
        self.line_points.len() / (self.q as usize + 1)
    }

    pub fn points_per_line(&self) -> usize {
        self.q as usize + 1
    }

    pub fn coords(&self, p: PointId) -> Vec4 {
        self.points[p as usize]
    }

    pub fn point(&self, p: PointId) -> ProjPoint {
        ProjPoint {
            coords: self.coords(p),
            index: p,
        }
    }

    pub fn enumerate_points(&self) -> Vec<ProjPoint> {
        (0..self.point_count() as PointId).map(|p| self.point(p)).collect()
    }

    /// Point index of a nonzero vector, or `None` for the zero vector.
    pub fn point_of(&self, v: &Vec4) -> Option<PointId> {
        let code = encode(v, self.q);
        (code != 0).then(|| self.code_to_point[code as usize])
    }

    pub fn points_of_line(&self, l: LineId) -> &[PointId] {
        let k = self.points_per_line();
        &self.line_points[l as usize * k..(l as usize + 1) * k]
    }

    pub fn line(&self, l: LineId) -> ProjLine {
        let pts = self.points_of_line(l);
        let mut rows = vec![self.coords(pts[0]).to_vec(), self.coords(pts[1]).to_vec()];
        linalg::rref(&mut rows, self.q);
        ProjLine {
            index: l,
            points: pts.to_vec(),
            basis: [to_vec4(&rows[0]), to_vec4(&rows[1])],
        }
    }

    pub fn lines_on_point(&self, p: PointId) -> &[LineId] {
        &self.lines_on_point[p as usize]
    }

    /// Line through two distinct points, by table lookup.
    pub fn join(&self, a: PointId, b: PointId) -> LineId {
        debug_assert_ne!(a, b);
        self.line_through[a as usize * self.point_count() + b as usize]
    }

    pub fn line_span(&self, a: PointId, b: PointId) -> Result<LineId> {
        if a == b {
            return Err(Error::DegenerateSpan);
        }
        Ok(self.join(a, b))
    }

    /// Line spanned by two vectors, which must be linearly independent.
    pub fn line_of_vectors(&self, u: &Vec4, v: &Vec4) -> LineId {
        let a = self.point_of(u).expect("nonzero vector");
        let b = self.point_of(v).expect("nonzero vector");
        self.join(a, b)
    }

    pub fn incident(&self, p: PointId, l: LineId) -> bool {
        self.points_of_line(l).binary_search(&p).is_ok()
    }

    /// Common point of two lines, by merging their sorted point lists.
    pub fn meet_unchecked(&self, l1: LineId, l2: LineId) -> Option<PointId> {
        let (a, b) = (self.points_of_line(l1), self.points_of_line(l2));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some(a[i]),
            }
        }
        None
    }

    pub fn line_meet(&self, l1: LineId, l2: LineId) -> Result<Option<PointId>> {
        if l1 == l2 {
            return Err(Error::IdenticalLines);
        }
        Ok(self.meet_unchecked(l1, l2))
    }

    pub fn skew(&self, l1: LineId, l2: LineId) -> bool {
        l1 != l2 && self.meet_unchecked(l1, l2).is_none()
    }

    /// The unique line through `p` meeting the skew lines `l2` and `l3`,
    /// found as the intersection of the planes ⟨p, l2⟩ and ⟨p, l3⟩.
    pub fn transversal_through(&self, p: PointId, l2: LineId, l3: LineId) -> Result<LineId> {
        if self.incident(p, l2) || self.incident(p, l3) {
            return Err(Error::Precondition(format!(
                "point {p} lies on line {l2} or {l3}"
            )));
        }
        if !self.skew(l2, l3) {
            return Err(Error::Precondition(format!("lines {l2} and {l3} are not skew")));
        }
        let n2 = self.plane_normal(p, l2);
        let n3 = self.plane_normal(p, l3);
        let basis = linalg::nullspace(&[n2.to_vec(), n3.to_vec()], 4, self.q);
        debug_assert_eq!(basis.len(), 2);
        Ok(self.line_of_vectors(&to_vec4(&basis[0]), &to_vec4(&basis[1])))
    }

    /// Transversal without precondition checks, walking the points of `l2`.
    pub fn transversal_fast(&self, p: PointId, l2: LineId, l3: LineId) -> LineId {
        for &x in self.points_of_line(l2) {
            let m = self.join(p, x);
            if self.meet_unchecked(m, l3).is_some() {
                return m;
            }
        }
        unreachable!("skew lines always have a transversal through an outside point")
    }

    /// Normal vector of the plane spanned by a point and a line not through it.
    fn plane_normal(&self, p: PointId, l: LineId) -> Vec4 {
        let pts = self.points_of_line(l);
        let rows = vec![
            self.coords(p).to_vec(),
            self.coords(pts[0]).to_vec(),
            self.coords(pts[1]).to_vec(),
        ];
        let ns = linalg::nullspace(&rows, 4, self.q);
        debug_assert_eq!(ns.len(), 1);
        to_vec4(&ns[0])
    }

    /// Ordered basis of a line: its first two points.
    pub fn line_basis_vectors(&self, l: LineId) -> [Vec4; 2] {
        let pts = self.points_of_line(l);
        [self.coords(pts[0]), self.coords(pts[1])]
    }

    fn span_points(&self, a: PointId, b: PointId) -> Vec<PointId> {
        let (u, v) = (self.coords(a), self.coords(b));
        let q = self.q;
        let mut pts = vec![a];
        for t in 0..q {
            let w = [0, 1, 2, 3].map(|i| (v[i] + t * u[i]) % q);
            pts.push(self.point_of(&w).unwrap());
        }
        pts.sort_unstable();
        pts
    }
}

pub fn encode(v: &Vec4, q: u32) -> u32 {
    v.iter().fold(0, |acc, &x| acc * q + x)
}

pub fn decode(mut code: u32, q: u32) -> Vec4 {
    let mut v = [0; 4];
    for i in (0..4).rev() {
        v[i] = code % q;
        code /= q;
    }
    v
}

fn to_vec4(v: &[u32]) -> Vec4 {
    [v[0], v[1], v[2], v[3]]
}

/// An invertible 4×4 matrix over GF(q) acting on column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap {
    pub q: u32,
    pub matrix: [[u32; 4]; 4],
}

impl LinearMap {
    pub fn identity(q: u32) -> Self {
        let mut matrix = [[0; 4]; 4];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 1;
        }
        Self { q, matrix }
    }

    pub fn from_rows(q: u32, matrix: [[u32; 4]; 4]) -> Self {
        Self {
            q,
            matrix: matrix.map(|r| r.map(|x| x % q)),
        }
    }

    pub fn apply(&self, v: &Vec4) -> Vec4 {
        let q = self.q;
        let m = &self.matrix;
        [0, 1, 2, 3].map(|i| {
            (m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2] + m[i][3] * v[3]) % q
        })
    }

    pub fn apply_point(&self, pg: &Pg3, p: PointId) -> PointId {
        pg.point_of(&self.apply(&pg.coords(p))).expect("invertible map")
    }

    pub fn apply_line(&self, pg: &Pg3, l: LineId) -> LineId {
        let pts = pg.points_of_line(l);
        pg.join(self.apply_point(pg, pts[0]), self.apply_point(pg, pts[1]))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let q = self.q;
        let mut matrix = [[0; 4]; 4];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..4).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum::<u32>() % q;
            }
        }
        Self { q, matrix }
    }

    pub fn determinant(&self) -> u32 {
        let rows: Vec<Vec<u32>> = self.matrix.iter().map(|r| r.to_vec()).collect();
        if linalg::rank_small(&rows, self.q) < 4 {
            return 0;
        }
        // Laplace expansion; a 4x4 is small enough
        let q = self.q as i64;
        let m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        let d = det(&m);
        (((d % q) + q) % q) as u32
    }

    pub fn inverse(&self) -> Option<Self> {
        let q = self.q;
        let mut rows: Vec<Vec<u32>> = (0..4)
            .map(|i| {
                let mut r = self.matrix[i].to_vec();
                r.extend((0..4).map(|j| u32::from(i == j)));
                r
            })
            .collect();
        let piv = linalg::rref(&mut rows, q);
        if piv.len() < 4 || piv[3] != 3 {
            return None;
        }
        let mut matrix = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                matrix[i][j] = rows[i][4 + j];
            }
        }
        Some(Self { q, matrix })
    }
}

fn det(m: &[Vec<i64>]) -> i64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                .collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            s * m[0][c] * det(&minor)
        })
        .sum()
}
