//! Linear stabilizers and isomorphisms of spreads, invariant fingerprints and
//! labels for the planes of order 25.
//!
//! A map of GL(4,q) preserving a spread is pinned down by the images of three
//! spread lines and a 2×2 matrix. For pairwise skew lines L1, L2, L3 choose a
//! basis (e1, e2, f1, f2) with e in L1, f in L2 and L3 = ⟨e1+f1, e2+f2⟩; the
//! maps sending such a frame to another are P'·diag(B, B)·P⁻¹ for B in
//! GL(2,q). Candidate image triples are filtered by how many contained reguli
//! pass through each line and each pair of lines.

pub mod atlas;

use std::collections::HashMap;

use rayon::prelude::*;

use crate::linalg;
use crate::planes;
use crate::projgeom::{LineId, LinearMap, Pg3, Vec4};
use crate::spreadcore::{regulus_unchecked, Spread};
use crate::tables;
use crate::error::Result;

type Mat4 = [[u32; 4]; 4];
type Mat2 = [[u32; 2]; 2];

/// Regulus incidence data of a spread used to prune the frame search.
pub struct SpreadProfile {
    lines: Vec<LineId>,
    member: Vec<bool>,
    regulus_count: usize,
    /// Contained reguli through each line.
    on_line: Vec<u32>,
    /// For each ordered triple of lines, how many spread lines lie on the
    /// regulus through them; `n × n × n`.
    on_triple: Vec<u8>,
    /// For each ordered pair, the histogram of `on_triple` over third lines.
    pair_key: Vec<Vec<u32>>,
    /// Per line: its regulus count and its sorted pair keys.
    line_key: Vec<(u32, Vec<Vec<u32>>)>,
}

impl SpreadProfile {
    pub fn new(pg: &Pg3, s: &Spread) -> Self {
        let q = pg.q();
        let lines = s.lines().to_vec();
        let n = lines.len();
        let mut member = vec![false; pg.line_count()];
        for &l in &lines {
            member[l as usize] = true;
        }
        let full = (q + 1) as u8;
        let mut on_triple = vec![0u8; n * n * n];
        let mut on_line = vec![0; n];
        let mut regulus_count = 0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if on_triple[(a * n + b) * n + c] != 0 {
                        continue;
                    }
                    let reg = regulus_unchecked(pg, lines[a], lines[b], lines[c]);
                    let inside: Vec<usize> = reg.lines.iter().filter_map(|l| lines.binary_search(l).ok()).collect();
                    let m = inside.len() as u8;
                    if m == full {
                        regulus_count += 1;
                        for &x in &inside {
                            on_line[x] += 1;
                        }
                    }
                    // every triple inside shares this regulus
                    for &x in &inside {
                        for &y in &inside {
                            for &z in &inside {
                                if x != y && y != z && x != z {
                                    on_triple[(x * n + y) * n + z] = m;
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut pair_key = vec![Vec::new(); n * n];
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    let mut h = vec![0u32; full as usize + 1];
                    for c in (0..n).filter(|&c| c != a && c != b) {
                        h[on_triple[(a * n + b) * n + c] as usize] += 1;
                    }
                    pair_key[a * n + b] = h;
                }
            }
        }
        let line_key = (0..n)
            .map(|a| {
                let mut v: Vec<Vec<u32>> = (0..n).filter(|&b| b != a).map(|b| pair_key[a * n + b].clone()).collect();
                v.sort_unstable();
                (on_line[a], v)
            })
            .collect();
        Self {
            lines,
            member,
            regulus_count,
            on_line,
            on_triple,
            pair_key,
            line_key,
        }
    }

    pub fn regulus_count(&self) -> usize {
        self.regulus_count
    }

    /// Contained reguli through each spread line, in sorted line order.
    pub fn reguli_per_line(&self) -> &[u32] {
        &self.on_line
    }

    /// An isomorphism-invariant summary: regulus count and the sorted
    /// per-line keys.
    pub fn signature(&self) -> (usize, Vec<(u32, Vec<Vec<u32>>)>) {
        let mut keys = self.line_key.clone();
        keys.sort();
        (self.regulus_count, keys)
    }

    fn n(&self) -> usize {
        self.lines.len()
    }

    fn pair(&self, a: usize, b: usize) -> &[u32] {
        &self.pair_key[a * self.n() + b]
    }

    fn triple(&self, a: usize, b: usize, c: usize) -> u8 {
        let n = self.n();
        self.on_triple[(a * n + b) * n + c]
    }
}

/// The stabilizer of a spread in GL(4,q), as a number of maps.
pub fn spread_stabilizer_order(pg: &Pg3, s: &Spread) -> u64 {
    let p = SpreadProfile::new(pg, s);
    let mut count = 0u64;
    FrameSearch::new(pg, &p, &p).run(&mut |_| {
        count += 1;
        true
    });
    count
}

/// Every element of the stabilizer of a spread in GL(4,q).
pub fn spread_stabilizer(pg: &Pg3, s: &Spread) -> Vec<LinearMap> {
    let p = SpreadProfile::new(pg, s);
    let mut out = Vec::new();
    FrameSearch::new(pg, &p, &p).run(&mut |a| {
        out.push(a);
        true
    });
    out
}

/// A linear map carrying `s1` onto `s2`, if there is one.
pub fn spreads_isomorphic(pg: &Pg3, s1: &Spread, s2: &Spread) -> Option<LinearMap> {
    let p1 = SpreadProfile::new(pg, s1);
    let p2 = SpreadProfile::new(pg, s2);
    isomorphism_with_profiles(pg, &p1, &p2)
}

pub fn isomorphism_with_profiles(pg: &Pg3, p1: &SpreadProfile, p2: &SpreadProfile) -> Option<LinearMap> {
    if p1.n() != p2.n() || p1.signature() != p2.signature() {
        return None;
    }
    let mut found = None;
    FrameSearch::new(pg, p1, p2).run(&mut |a| {
        found = Some(a);
        false
    });
    found
}

/// The p-rank of the plane of order p² from a Desarguesian spread,
/// C(p+1, 2)² + 1.
pub fn desarguesian_p_rank(p: u32) -> usize {
    let c = (p * (p + 1) / 2) as usize;
    c * c + 1
}

/// Order of the collineation group of the plane: translations times the
/// spread stabilizer, and for the Desarguesian plane also the q⁴ + q² + 1
/// choices of the line at infinity.
pub fn full_group_order(q: u32, stabilizer_order: u64, p_rank: usize) -> u64 {
    let q = q as u64;
    let base = q.pow(4) * stabilizer_order;
    if p_rank == desarguesian_p_rank(q as u32) {
        base * (q.pow(4) + q * q + 1)
    } else {
        base
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Fingerprint {
    pub p_rank: usize,
    pub full_group_order: u64,
    pub regulus_count: usize,
    pub stabilizer_order: u64,
    pub label: Option<String>,
}

impl Fingerprint {
    pub fn label_or_unknown(&self) -> &str {
        self.label.as_deref().unwrap_or("unknown")
    }
}

pub fn fingerprint_and_label(pg: &Pg3, s: &Spread) -> Result<Fingerprint> {
    let profile = SpreadProfile::new(pg, s);
    fingerprint_with_profile(pg, s, &profile)
}

fn fingerprint_with_profile(pg: &Pg3, s: &Spread, profile: &SpreadProfile) -> Result<Fingerprint> {
    let p_rank = planes::spread_p_rank(pg, s)?;
    let mut stabilizer_order = 0u64;
    FrameSearch::new(pg, profile, profile).run(&mut |_| {
        stabilizer_order += 1;
        true
    });
    let full_group_order = full_group_order(pg.q(), stabilizer_order, p_rank);
    let label = if pg.q() == 5 {
        tables::label_for(p_rank, full_group_order).map(str::to_owned)
    } else {
        None
    };
    Ok(Fingerprint {
        p_rank,
        full_group_order,
        regulus_count: profile.regulus_count(),
        stabilizer_order,
        label,
    })
}

/// One isomorphism class of spreads met so far.
pub struct SpreadClass {
    pub representative: Spread,
    profile: SpreadProfile,
    fingerprint: Option<Fingerprint>,
}

impl SpreadClass {
    pub fn profile(&self) -> &SpreadProfile {
        &self.profile
    }
}

/// Sorts spreads into isomorphism classes: cheap regulus invariants first,
/// then an explicit isomorphism test within each bucket.
pub struct SpreadClassifier<'a> {
    pg: &'a Pg3,
    classes: Vec<SpreadClass>,
    buckets: HashMap<(usize, Vec<(u32, Vec<Vec<u32>>)>), Vec<usize>>,
}

impl<'a> SpreadClassifier<'a> {
    pub fn new(pg: &'a Pg3) -> Self {
        Self {
            pg,
            classes: Vec::new(),
            buckets: HashMap::new(),
        }
    }

    /// Index of the class of `s`, creating it if `s` is new.
    pub fn add(&mut self, s: &Spread) -> usize {
        let profile = SpreadProfile::new(self.pg, s);
        let key = profile.signature();
        let bucket = self.buckets.entry(key).or_default();
        for &i in bucket.iter() {
            if isomorphism_with_profiles(self.pg, &profile, &self.classes[i].profile).is_some() {
                return i;
            }
        }
        let i = self.classes.len();
        bucket.push(i);
        self.classes.push(SpreadClass {
            representative: s.clone(),
            profile,
            fingerprint: None,
        });
        i
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, i: usize) -> &SpreadClass {
        &self.classes[i]
    }

    pub fn classes(&self) -> &[SpreadClass] {
        &self.classes
    }

    /// The fingerprint of class `i`, computed on first use.
    pub fn fingerprint(&mut self, i: usize) -> Result<Fingerprint> {
        if let Some(f) = &self.classes[i].fingerprint {
            return Ok(f.clone());
        }
        let c = &self.classes[i];
        let f = fingerprint_with_profile(self.pg, &c.representative, &c.profile)?;
        self.classes[i].fingerprint = Some(f.clone());
        Ok(f)
    }

    /// Fingerprints of every class, computing missing ones in parallel.
    pub fn fingerprint_all(&mut self) -> Result<Vec<Fingerprint>> {
        let pg = self.pg;
        let fresh: Vec<(usize, Result<Fingerprint>)> = self
            .classes
            .par_iter()
            .enumerate()
            .filter(|(_, c)| c.fingerprint.is_none())
            .map(|(i, c)| (i, fingerprint_with_profile(pg, &c.representative, &c.profile)))
            .collect();
        for (i, f) in fresh {
            self.classes[i].fingerprint = Some(f?);
        }
        Ok(self.classes.iter().filter_map(|c| c.fingerprint.clone()).collect())
    }
}

/// Invertible 2×2 matrices over GF(q).
fn gl2(q: u32) -> Vec<Mat2> {
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if (a * d + q * q - b * c) % q != 0 {
                        out.push([[a, b], [c, d]]);
                    }
                }
            }
        }
    }
    out
}

fn mat_mul(x: &Mat4, y: &Mat4, q: u32) -> Mat4 {
    let mut m = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (0..4).map(|k| x[i][k] * y[k][j]).sum::<u32>() % q;
        }
    }
    m
}

fn mat_vec(m: &Mat4, v: &Vec4, q: u32) -> Vec4 {
    [0, 1, 2, 3].map(|i| (m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2] + m[i][3] * v[3]) % q)
}

fn invert4(m: &Mat4, q: u32) -> Option<Mat4> {
    LinearMap { q, matrix: *m }.inverse().map(|a| a.matrix)
}

/// The adapted basis of three pairwise skew lines, as the columns of a
/// matrix.
fn frame(pg: &Pg3, l1: LineId, l2: LineId, l3: LineId) -> Mat4 {
    let q = pg.q();
    let [e1, e2] = pg.line_basis_vectors(l1);
    let [g1, g2] = pg.line_basis_vectors(l2);
    let [u1, u2] = pg.line_basis_vectors(l3);
    let mut m = [[0; 4]; 4];
    for i in 0..4 {
        m[i] = [e1[i], e2[i], g1[i], g2[i]];
    }
    let minv = invert4(&m, q).expect("skew lines span the space");
    let split = |u: &Vec4| -> (Vec4, Vec4) {
        let c = mat_vec(&minv, u, q);
        let e = [0, 1, 2, 3].map(|i| (c[0] * e1[i] + c[1] * e2[i]) % q);
        let f = [0, 1, 2, 3].map(|i| (c[2] * g1[i] + c[3] * g2[i]) % q);
        (e, f)
    };
    let (a1, b1) = split(&u1);
    let (a2, b2) = split(&u2);
    let mut p = [[0; 4]; 4];
    for i in 0..4 {
        p[i] = [a1[i], a2[i], b1[i], b2[i]];
    }
    p
}

struct FrameSearch<'a> {
    pg: &'a Pg3,
    src: &'a SpreadProfile,
    dst: &'a SpreadProfile,
    gl2: Vec<Mat2>,
}

impl<'a> FrameSearch<'a> {
    fn new(pg: &'a Pg3, src: &'a SpreadProfile, dst: &'a SpreadProfile) -> Self {
        Self {
            pg,
            src,
            dst,
            gl2: gl2(pg.q()),
        }
    }

    /// Source lines with the fewest candidate images, chosen greedily.
    fn choose_base(&self) -> [usize; 3] {
        let (s, d) = (self.src, self.dst);
        let n = s.n();
        let a = (0..n)
            .min_by_key(|&a| (0..n).filter(|&x| d.line_key[x] == s.line_key[a]).count())
            .unwrap();
        let a_images: Vec<usize> = (0..n).filter(|&x| d.line_key[x] == s.line_key[a]).collect();
        let b = (0..n)
            .filter(|&b| b != a)
            .min_by_key(|&b| {
                a_images
                    .iter()
                    .map(|&x| (0..n).filter(|&y| y != x && self.pair_matches(a, b, x, y)).count())
                    .sum::<usize>()
            })
            .unwrap();
        let c = (0..n)
            .filter(|&c| c != a && c != b)
            .min_by_key(|&c| {
                (0..n)
                    .filter(|&z| d.line_key[z] == s.line_key[c])
                    .filter(|&z| (0..n).any(|x| x != z && d.pair(x, z) == s.pair(a, c)))
                    .count()
                    * 8
                    + s.triple(a, b, c) as usize
            })
            .unwrap();
        [a, b, c]
    }

    fn pair_matches(&self, a: usize, b: usize, x: usize, y: usize) -> bool {
        let (s, d) = (self.src, self.dst);
        d.line_key[y] == s.line_key[b] && d.pair(x, y) == s.pair(a, b)
    }

    /// Calls `visit` with every map carrying the source spread onto the
    /// target until it returns false.
    fn run(&self, visit: &mut dyn FnMut(LinearMap) -> bool) {
        let (s, d) = (self.src, self.dst);
        let n = s.n();
        let q = self.pg.q();
        let [a, b, c] = self.choose_base();
        let p_src = frame(self.pg, s.lines[a], s.lines[b], s.lines[c]);
        let p_inv = invert4(&p_src, q).expect("frame is a basis");
        let rest: Vec<(usize, [Vec4; 2])> = (0..n)
            .filter(|&x| x != a && x != b && x != c)
            .map(|x| (x, self.pg.line_basis_vectors(s.lines[x])))
            .collect();

        for a2 in (0..n).filter(|&x| d.line_key[x] == s.line_key[a]) {
            for b2 in (0..n).filter(|&y| y != a2 && self.pair_matches(a, b, a2, y)) {
                for c2 in (0..n).filter(|&z| {
                    z != a2
                        && z != b2
                        && d.line_key[z] == s.line_key[c]
                        && d.pair(a2, z) == s.pair(a, c)
                        && d.pair(b2, z) == s.pair(b, c)
                        && d.pair(a2, b2) == s.pair(a, b)
                        && d.triple(a2, b2, z) == s.triple(a, b, c)
                }) {
                    let p_dst = frame(self.pg, d.lines[a2], d.lines[b2], d.lines[c2]);
                    for bm in &self.gl2 {
                        let mut diag = [[0; 4]; 4];
                        for i in 0..2 {
                            for j in 0..2 {
                                diag[i][j] = bm[i][j];
                                diag[i + 2][j + 2] = bm[i][j];
                            }
                        }
                        let m = mat_mul(&mat_mul(&p_dst, &diag, q), &p_inv, q);
                        let ok = rest.iter().all(|(_, [u, v])| {
                            let img = self.pg.line_of_vectors(&mat_vec(&m, u, q), &mat_vec(&m, v, q));
                            d.member[img as usize]
                        });
                        if ok && !visit(LinearMap { q, matrix: m }) {
                            return;
                        }
                    }
                }
            }
        }
    }
}

/// Rank of a 4×4 matrix, for callers checking witnesses.
pub fn matrix_rank(m: &Mat4, q: u32) -> usize {
    let rows: Vec<Vec<u32>> = m.iter().map(|r| r.to_vec()).collect();
    linalg::rank_small(&rows, q)
}
