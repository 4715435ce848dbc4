//! Spreads of PG(3,q), reguli, and the regular spread with its circles.
//!
//! The regular spread is built by field reduction: each point `(x, y)` of
//! PG(1,q²), normalized so the leftmost nonzero coordinate is 1, becomes the
//! line `{λ(x, y) : λ ∈ GF(q²)*}` of PG(3,q) with coordinates taken over the
//! basis `{1, ω}`. Spread line `i` of the regular spread is the line of the
//! `i`-th point of PG(1,q²): `(0, 1)` first, then `(1, y)` in element order.
//!
//! A circle is a regulus contained in the regular spread, i.e. a Baer subline
//! of PG(1,q²), stored as its sorted set of spread-line indices.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::{QuadExtElement, QuadField};
use crate::projgeom::{LineId, LinearMap, Pg3, PointId, Vec4};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpreadSource {
    Regular,
    Replaced { web: String, replacement: usize },
    Derived { parent: String, regulus: Vec<LineId> },
    External(String),
}

/// A set of `q² + 1` pairwise skew lines covering every point once.
#[derive(Clone, Debug)]
pub struct Spread {
    q: u32,
    lines: Vec<LineId>,
    pub source: SpreadSource,
}

impl PartialEq for Spread {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.lines == other.lines
    }
}

impl Eq for Spread {}

impl Spread {
    pub fn new(pg: &Pg3, mut lines: Vec<LineId>, source: SpreadSource) -> Result<Self> {
        lines.sort_unstable();
        validate_spread(pg, &lines)?;
        Ok(Self {
            q: pg.q(),
            lines,
            source,
        })
    }

    /// A line set that has not been checked to be a spread.
    pub fn new_unchecked(q: u32, mut lines: Vec<LineId>) -> Self {
        lines.sort_unstable();
        Self {
            q,
            lines,
            source: SpreadSource::External("unchecked".into()),
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn lines(&self) -> &[LineId] {
        &self.lines
    }

    pub fn contains(&self, l: LineId) -> bool {
        self.lines.binary_search(&l).is_ok()
    }

    pub fn with_source(mut self, source: SpreadSource) -> Self {
        self.source = source;
        self
    }

    /// The image of this spread under a linear map.
    pub fn transform(&self, pg: &Pg3, map: &LinearMap) -> Self {
        let lines = self.lines.iter().map(|&l| map.apply_line(pg, l)).collect();
        Spread::new(pg, lines, self.source.clone()).expect("linear maps preserve spreads")
    }
}

pub fn validate_spread(pg: &Pg3, lines: &[LineId]) -> Result<()> {
    let q = pg.q() as usize;
    if lines.len() != q * q + 1 {
        return Err(Error::InvalidSpread(format!(
            "expected {} lines, found {}",
            q * q + 1,
            lines.len()
        )));
    }
    let mut covered = vec![false; pg.point_count()];
    for &l in lines {
        if l as usize >= pg.line_count() {
            return Err(Error::InvalidSpread(format!("line id {l} out of range")));
        }
        for &p in pg.points_of_line(l) {
            if std::mem::replace(&mut covered[p as usize], true) {
                return Err(Error::InvalidSpread(format!("point {p} covered twice")));
            }
        }
    }
    // q²+1 lines of q+1 points with no overlap cover all (q⁴−1)/(q−1) points
    debug_assert!(covered.iter().all(|&c| c));
    Ok(())
}

/// A regulus and its opposite regulus, both as sorted line lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regulus {
    pub lines: Vec<LineId>,
    pub opposite: Vec<LineId>,
}

/// The regulus determined by three pairwise skew lines.
pub fn regulus_through(pg: &Pg3, l1: LineId, l2: LineId, l3: LineId) -> Result<Regulus> {
    if !(pg.skew(l1, l2) && pg.skew(l1, l3) && pg.skew(l2, l3)) {
        return Err(Error::Precondition(format!(
            "lines {l1}, {l2}, {l3} are not pairwise skew"
        )));
    }
    Ok(regulus_unchecked(pg, l1, l2, l3))
}

pub(crate) fn regulus_unchecked(pg: &Pg3, l1: LineId, l2: LineId, l3: LineId) -> Regulus {
    let mut opposite: Vec<LineId> = pg
        .points_of_line(l1)
        .iter()
        .map(|&p| pg.transversal_fast(p, l2, l3))
        .collect();
    let (o1, o2, o3) = (opposite[0], opposite[1], opposite[2]);
    let mut lines: Vec<LineId> = pg
        .points_of_line(o1)
        .iter()
        .map(|&p| pg.transversal_fast(p, o2, o3))
        .collect();
    opposite.sort_unstable();
    lines.sort_unstable();
    Regulus { lines, opposite }
}

pub type CircleId = u16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    pub id: CircleId,
    pub spread_line_indices: Vec<u8>,
}

/// The cyclic group of order `q + 1` induced by multiplication with a
/// primitive element of GF(q²); it fixes every regular-spread line.
#[derive(Clone, Debug)]
pub struct BruckKernelMap {
    pub scalar: QuadExtElement,
    pub map: LinearMap,
    pub point_permutation: Vec<PointId>,
}

impl BruckKernelMap {
    pub fn apply_line(&self, pg: &Pg3, l: LineId) -> LineId {
        let pts = pg.points_of_line(l);
        pg.join(
            self.point_permutation[pts[0] as usize],
            self.point_permutation[pts[1] as usize],
        )
    }

    /// Order as a permutation of the points.
    pub fn order(&self) -> usize {
        let n = self.point_permutation.len();
        let mut current: Vec<PointId> = (0..n as PointId).collect();
        for k in 1.. {
            current = current.iter().map(|&p| self.point_permutation[p as usize]).collect();
            if current.iter().enumerate().all(|(i, &p)| i == p as usize) {
                return k;
            }
        }
        unreachable!()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semitransversal {
    pub circle: CircleId,
    pub alpha: u32,
    pub orbit_index: usize,
    pub lines: Vec<LineId>,
}

/// A point of PG(1,q²) as a coordinate pair.
pub type Pg1Point = (QuadExtElement, QuadExtElement);

pub struct RegularSpread {
    fq2: QuadField,
    pg1: Vec<Pg1Point>,
    lines: Vec<LineId>,
    position: Vec<u8>,
    circles: Vec<Circle>,
    circle_lookup: Vec<CircleId>,
    circles_on_line: Vec<Vec<CircleId>>,
    kernel: BruckKernelMap,
    /// Opposite regulus of each circle, listed along one kernel orbit
    /// starting from its smallest line.
    opposite: Vec<Vec<LineId>>,
}

const NOT_IN_SPREAD: u8 = u8::MAX;

impl RegularSpread {
    pub fn build(pg: &Pg3) -> Result<Self> {
        let fq2 = QuadField::new(pg.q())?;
        let pg1 = pg1_points(&fq2);
        let omega = fq2.omega();
        let lines: Vec<LineId> = pg1
            .iter()
            .map(|&(x, y)| {
                let u = flatten(x, y);
                let v = flatten(omega.mul(x), omega.mul(y));
                pg.line_of_vectors(&u, &v)
            })
            .collect();
        let mut position = vec![NOT_IN_SPREAD; pg.line_count()];
        for (i, &l) in lines.iter().enumerate() {
            position[l as usize] = i as u8;
        }

        let circles = baer_sublines(&fq2, &pg1);
        let n = pg1.len();
        let mut circle_lookup = vec![CircleId::MAX; n * n * n];
        let mut circles_on_line = vec![Vec::new(); n];
        for c in &circles {
            let s = &c.spread_line_indices;
            for &a in s {
                circles_on_line[a as usize].push(c.id);
                for &b in s {
                    for &d in s {
                        if a != b && b != d && a != d {
                            circle_lookup[(a as usize * n + b as usize) * n + d as usize] = c.id;
                        }
                    }
                }
            }
        }

        let g = fq2.primitive_element();
        let map = mult_map(&fq2, g);
        let point_permutation = (0..pg.point_count() as PointId)
            .map(|p| map.apply_point(pg, p))
            .collect();
        let kernel = BruckKernelMap {
            scalar: g,
            map,
            point_permutation,
        };

        let mut rs = Self {
            fq2,
            pg1,
            lines,
            position,
            circles,
            circle_lookup,
            circles_on_line,
            kernel,
            opposite: Vec::new(),
        };
        rs.opposite = (0..rs.circles.len())
            .map(|c| rs.opposite_in_orbit_order(pg, c as CircleId))
            .collect();
        Ok(rs)
    }

    fn opposite_in_orbit_order(&self, pg: &Pg3, c: CircleId) -> Vec<LineId> {
        let ls = self.circle_lines(c);
        let reg = regulus_unchecked(pg, ls[0], ls[1], ls[2]);
        let mut orbit = vec![reg.opposite[0]];
        loop {
            let next = self.kernel.apply_line(pg, *orbit.last().unwrap());
            if next == orbit[0] {
                break;
            }
            orbit.push(next);
        }
        let mut sorted = orbit.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, reg.opposite, "kernel must act transitively on the opposite regulus");
        orbit
    }

    pub fn q(&self) -> u32 {
        self.fq2.q()
    }

    pub fn field(&self) -> &QuadField {
        &self.fq2
    }

    /// Number of spread lines, `q² + 1`.
    pub fn size(&self) -> usize {
        self.lines.len()
    }

    pub fn pg1_point(&self, i: usize) -> Pg1Point {
        self.pg1[i]
    }

    pub fn pg1_index(&self, p: Pg1Point) -> usize {
        pg1_normalize(p)
    }

    /// Line ids in PG(1,q²) order.
    pub fn line_ids(&self) -> &[LineId] {
        &self.lines
    }

    pub fn line_id(&self, i: usize) -> LineId {
        self.lines[i]
    }

    pub fn position_of(&self, l: LineId) -> Option<usize> {
        let p = self.position[l as usize];
        (p != NOT_IN_SPREAD).then_some(p as usize)
    }

    pub fn spread(&self, pg: &Pg3) -> Spread {
        Spread::new(pg, self.lines.clone(), SpreadSource::Regular).expect("regular spread is a spread")
    }

    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    pub fn enumerate_circles(&self) -> Vec<Circle> {
        self.circles.clone()
    }

    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn circle(&self, c: CircleId) -> &Circle {
        &self.circles[c as usize]
    }

    pub fn circle_lines(&self, c: CircleId) -> Vec<LineId> {
        self.circles[c as usize]
            .spread_line_indices
            .iter()
            .map(|&i| self.lines[i as usize])
            .collect()
    }

    pub fn circles_on_line(&self, i: usize) -> &[CircleId] {
        &self.circles_on_line[i]
    }

    /// The circle through three distinct spread-line indices.
    pub fn circle_through(&self, a: usize, b: usize, c: usize) -> CircleId {
        let n = self.size();
        self.circle_lookup[(a * n + b) * n + c]
    }

    pub fn bruck_kernel(&self) -> &BruckKernelMap {
        &self.kernel
    }

    /// Opposite regulus of a circle, sorted.
    pub fn opposite_regulus(&self, c: CircleId) -> Vec<LineId> {
        let mut v = self.opposite[c as usize].clone();
        v.sort_unstable();
        v
    }

    pub fn semitransversals(&self, c: CircleId, alpha: u32) -> Result<Vec<Semitransversal>> {
        let q1 = self.q() + 1;
        if alpha == 0 || q1 % alpha != 0 {
            return Err(Error::Precondition(format!("{alpha} does not divide {q1}")));
        }
        let orbit = &self.opposite[c as usize];
        let mut orbits: Vec<Vec<LineId>> = (0..alpha as usize)
            .map(|j| {
                let mut ls: Vec<LineId> = orbit.iter().skip(j).step_by(alpha as usize).copied().collect();
                ls.sort_unstable();
                ls
            })
            .collect();
        orbits.sort();
        Ok(orbits
            .into_iter()
            .enumerate()
            .map(|(orbit_index, lines)| Semitransversal {
                circle: c,
                alpha,
                orbit_index,
                lines,
            })
            .collect())
    }
}

fn flatten(x: QuadExtElement, y: QuadExtElement) -> Vec4 {
    [x.a.value(), x.b.value(), y.a.value(), y.b.value()]
}

/// Block-diagonal matrix of multiplication by `g` on GF(q²)² = GF(q)⁴.
fn mult_map(f: &QuadField, g: QuadExtElement) -> LinearMap {
    let q = f.q();
    let (ga, gb, ns) = (g.a.value(), g.b.value(), f.nonsquare());
    let block = [[ga, ns * gb % q], [gb, ga]];
    let mut m = [[0; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = block[i][j];
            m[i + 2][j + 2] = block[i][j];
        }
    }
    LinearMap::from_rows(q, m)
}

pub fn pg1_points(f: &QuadField) -> Vec<Pg1Point> {
    let mut pts = vec![(f.zero(), f.one())];
    pts.extend(f.elements().map(|y| (f.one(), y)));
    pts
}

/// Position of a point of PG(1,q²) in spread order.
pub fn pg1_normalize((x, y): Pg1Point) -> usize {
    if x.is_zero() {
        debug_assert!(!y.is_zero());
        0
    } else {
        1 + y.mul(x.inv().unwrap()).index() as usize
    }
}

fn det2(p: Pg1Point, r: Pg1Point) -> QuadExtElement {
    p.0.mul(r.1).sub(p.1.mul(r.0))
}

/// All Baer sublines of PG(1,q²): point `x` lies on the subline through
/// `a, b, c` iff the cross ratio (a, b; c, x) lies in GF(q) ∪ {∞}.
fn baer_sublines(f: &QuadField, pts: &[Pg1Point]) -> Vec<Circle> {
    let n = pts.len();
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut covered = vec![false; n * n * n];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if covered[(a * n + b) * n + c] {
                    continue;
                }
                let (pa, pb, pc) = (pts[a], pts[b], pts[c]);
                let k = det2(pa, pc);
                let h = det2(pb, pc);
                let members: Vec<u8> = (0..n)
                    .filter(|&x| {
                        let px = pts[x];
                        let num = k.mul(det2(pb, px));
                        let den = det2(pa, px).mul(h);
                        num.mul(den.frobenius()).is_in_subfield()
                    })
                    .map(|x| x as u8)
                    .collect();
                debug_assert_eq!(members.len(), f.q() as usize + 1);
                for &x in &members {
                    for &y in &members {
                        for &z in &members {
                            covered[(x as usize * n + y as usize) * n + z as usize] = true;
                        }
                    }
                }
                seen.insert(members);
            }
        }
    }
    seen.into_iter()
        .enumerate()
        .map(|(id, spread_line_indices)| Circle {
            id: id as CircleId,
            spread_line_indices,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(q: u32) -> (Pg3, RegularSpread) {
        let pg = Pg3::new(q).unwrap();
        let rs = RegularSpread::build(&pg).unwrap();
        (pg, rs)
    }

    /// Circles found geometrically: regulus closure of every skew triple of
    /// spread lines that stays inside the spread.
    fn circles_by_regulus_closure(pg: &Pg3, rs: &RegularSpread) -> Vec<Vec<u8>> {
        let n = rs.size();
        let mut found = BTreeSet::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let reg = regulus_through(pg, rs.line_id(a), rs.line_id(b), rs.line_id(c)).unwrap();
                    let mut idx: Vec<u8> = reg
                        .lines
                        .iter()
                        .map(|&l| rs.position_of(l).expect("regulus closes inside a regular spread") as u8)
                        .collect();
                    idx.sort_unstable();
                    found.insert(idx);
                }
            }
        }
        found.into_iter().collect()
    }

    #[test]
    fn regular_spread_q5() {
        let (pg, rs) = setup(5);
        let s = rs.spread(&pg);
        assert_eq!(s.lines().len(), 26);
        for (i, &a) in s.lines().iter().enumerate() {
            for &b in &s.lines()[i + 1..] {
                assert!(pg.skew(a, b));
            }
        }
        // line 0 is the x = 0 subspace
        let l0 = pg.points_of_line(rs.line_id(0));
        assert!(l0.iter().all(|&p| pg.coords(p)[0] == 0 && pg.coords(p)[1] == 0));
    }

    #[test]
    fn regular_spread_q7() {
        let (pg, rs) = setup(7);
        assert_eq!(rs.spread(&pg).lines().len(), 50);
    }

    #[test]
    fn circles_match_regulus_closure_q5() {
        let (pg, rs) = setup(5);
        let oracle = circles_by_regulus_closure(&pg, &rs);
        assert_eq!(oracle.len(), 130);
        let ours: Vec<Vec<u8>> = rs.circles().iter().map(|c| c.spread_line_indices.clone()).collect();
        assert_eq!(ours, oracle);
        for i in 0..26 {
            assert_eq!(rs.circles_on_line(i).len(), 30);
        }
        // 6 circles through any fixed pair of spread lines
        for (a, b) in [(0, 1), (3, 17), (24, 25)] {
            let n = rs
                .circles()
                .iter()
                .filter(|c| c.spread_line_indices.contains(&a) && c.spread_line_indices.contains(&b))
                .count();
            assert_eq!(n, 6);
        }
    }

    #[test]
    fn circles_match_regulus_closure_q7() {
        let (pg, rs) = setup(7);
        let oracle = circles_by_regulus_closure(&pg, &rs);
        assert_eq!(oracle.len(), 350);
        let ours: Vec<Vec<u8>> = rs.circles().iter().map(|c| c.spread_line_indices.clone()).collect();
        assert_eq!(ours, oracle);
    }

    #[test]
    fn regulus_seed_independence() {
        let (pg, rs) = setup(5);
        for c in [0, 57, 129] {
            let ls = rs.circle_lines(c);
            let reference = regulus_through(&pg, ls[0], ls[1], ls[2]).unwrap();
            let mut expect = ls.clone();
            expect.sort_unstable();
            assert_eq!(reference.lines, expect);
            for i in 0..6 {
                for j in i + 1..6 {
                    for k in j + 1..6 {
                        assert_eq!(regulus_through(&pg, ls[i], ls[j], ls[k]).unwrap(), reference);
                    }
                }
            }
            for &l in &reference.lines {
                for &m in &reference.opposite {
                    assert!(pg.meet_unchecked(l, m).is_some());
                }
            }
            // the two rulings cover the same quadric
            let pts = |ls: &[LineId]| {
                let mut v: Vec<PointId> = ls.iter().flat_map(|&l| pg.points_of_line(l).to_vec()).collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            assert_eq!(pts(&reference.lines), pts(&reference.opposite));
        }
        let ls = rs.circle_lines(0);
        let opp = rs.opposite_regulus(0);
        assert!(regulus_through(&pg, ls[0], ls[1], opp[0]).is_err());
    }

    #[test]
    fn bruck_kernel_q5() {
        let (pg, rs) = setup(5);
        let k = rs.bruck_kernel();
        assert_eq!(k.order(), 6);
        for &l in rs.line_ids() {
            assert_eq!(k.apply_line(&pg, l), l);
        }
        // orbit of a point is the full spread line through it
        for p in [0u16, 77, 155] {
            let mut orbit = vec![p];
            loop {
                let nxt = k.point_permutation[*orbit.last().unwrap() as usize];
                if nxt == p {
                    break;
                }
                orbit.push(nxt);
            }
            orbit.sort_unstable();
            let l = pg.lines_on_point(p).iter().find(|&&l| rs.position_of(l).is_some()).unwrap();
            assert_eq!(orbit, pg.points_of_line(*l));
        }
        // orbit of a non-spread line is the opposite regulus of some circle
        let opposites: BTreeSet<Vec<LineId>> = (0..130).map(|c| rs.opposite_regulus(c)).collect();
        for l in (0..806u16).filter(|&l| rs.position_of(l).is_none()).step_by(11) {
            let mut orbit = vec![l];
            loop {
                let nxt = k.apply_line(&pg, *orbit.last().unwrap());
                if nxt == l {
                    break;
                }
                orbit.push(nxt);
            }
            orbit.sort_unstable();
            assert_eq!(orbit.len(), 6);
            assert!(opposites.contains(&orbit));
        }
    }

    #[test]
    fn semitransversal_partitions() {
        let (_, rs) = setup(5);
        for (alpha, count, size) in [(1, 1, 6), (2, 2, 3), (3, 3, 2), (6, 6, 1)] {
            let st = rs.semitransversals(9, alpha).unwrap();
            assert_eq!(st.len(), count);
            let mut all: Vec<LineId> = st.iter().flat_map(|s| s.lines.clone()).collect();
            all.sort_unstable();
            assert_eq!(all, rs.opposite_regulus(9));
            assert!(st.iter().all(|s| s.lines.len() == size));
            for w in st.windows(2) {
                assert!(w[0].lines[0] < w[1].lines[0]);
            }
        }
        assert!(rs.semitransversals(9, 4).is_err());
    }

    #[test]
    fn spread_validation_errors() {
        let (pg, rs) = setup(5);
        let mut lines = rs.line_ids().to_vec();
        lines.pop();
        assert!(Spread::new(&pg, lines.clone(), SpreadSource::Regular).is_err());
        let opp = rs.opposite_regulus(0);
        lines.push(opp[0]);
        assert!(Spread::new(&pg, lines, SpreadSource::Regular).is_err());
    }
}
