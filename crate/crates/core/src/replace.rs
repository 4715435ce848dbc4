//! Hemi- and Bruck-replacement of webs, complementation, nest unions, and
//! regulus reversal on arbitrary spreads.

use std::collections::{BTreeMap, HashSet};

use crate::context::Context;
use crate::error::{Error, Result};
use crate::projgeom::{LineId, Pg3};
use crate::spreadcore::{regulus_through, CircleId, Regulus, Spread, SpreadSource};
use crate::webs::Web;

/// Point set of PG(3,q) for q ≤ 7 (at most 400 points).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PointSet([u64; 7]);

impl PointSet {
    pub fn of_lines(pg: &Pg3, lines: &[LineId]) -> Self {
        let mut s = Self::default();
        for &l in lines {
            for &p in pg.points_of_line(l) {
                s.0[p as usize / 64] |= 1 << (p % 64);
            }
        }
        s
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut s = *self;
        for (a, b) in s.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReplacementMode {
    /// One `k`-semitransversal per circle.
    Bruck { k: u32 },
    /// One `(q+1)/2`-subset of each opposite regulus.
    Hemi,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CircleChoice {
    pub circle: CircleId,
    /// Index of the chosen kernel orbit, when the choice is one.
    pub orbit_index: Option<usize>,
    pub lines: Vec<LineId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Replacement {
    pub web: Web,
    pub mode: ReplacementMode,
    /// One choice per circle, in ascending circle order.
    pub choices: Vec<CircleChoice>,
}

impl Replacement {
    /// The identity replacement of the empty web.
    pub fn identity(k: u32) -> Self {
        Self {
            web: Web::empty(k),
            mode: ReplacementMode::Bruck { k },
            choices: Vec::new(),
        }
    }

    /// All chosen lines, sorted.
    pub fn lines(&self) -> Vec<LineId> {
        let mut v: Vec<LineId> = self.choices.iter().flat_map(|c| c.lines.iter().copied()).collect();
        v.sort_unstable();
        v
    }

    /// Checks one choice per circle of the right size inside the opposite
    /// regulus, pairwise disjoint chosen lines, and equality of the covered
    /// point sets.
    pub fn validate(&self, ctx: &Context) -> Result<()> {
        let rs = ctx.regular();
        let pg = ctx.pg();
        let q1 = ctx.q() + 1;
        let size = match self.mode {
            ReplacementMode::Bruck { k } => q1 / k,
            ReplacementMode::Hemi => q1 / 2,
        } as usize;
        let circles: Vec<CircleId> = self.choices.iter().map(|c| c.circle).collect();
        if circles != self.web.circles {
            return Err(Error::InvalidReplacement("choices do not match the web's circles".into()));
        }
        let mut seen = PointSet::default();
        for ch in &self.choices {
            if ch.lines.len() != size {
                return Err(Error::InvalidReplacement(format!(
                    "circle {} has {} chosen lines, expected {size}",
                    ch.circle,
                    ch.lines.len()
                )));
            }
            let opp = rs.opposite_regulus(ch.circle);
            if !ch.lines.iter().all(|l| opp.binary_search(l).is_ok()) {
                return Err(Error::InvalidReplacement(format!(
                    "choice for circle {} leaves its opposite regulus",
                    ch.circle
                )));
            }
            for &l in &ch.lines {
                let pts = PointSet::of_lines(pg, &[l]);
                if !seen.is_disjoint(&pts) {
                    return Err(Error::InvalidReplacement(format!("line {l} meets another chosen line")));
                }
                seen = seen.union(&pts);
            }
        }
        let replaced: Vec<LineId> = self.web.covered_lines.iter().map(|&i| rs.line_id(i as usize)).collect();
        if seen != PointSet::of_lines(pg, &replaced) {
            return Err(Error::InvalidReplacement("covered point sets differ".into()));
        }
        Ok(())
    }
}

/// Every Bruck replacement of a web, in lexicographic order of the chosen
/// orbit indices (circles ascending).
pub fn find_bruck_replacements(ctx: &Context, w: &Web) -> Result<Vec<Replacement>> {
    let q1 = ctx.q() + 1;
    if w.k == 0 || q1 % w.k != 0 {
        return Err(Error::Precondition(format!("k = {} does not divide {q1}", w.k)));
    }
    let pg = ctx.pg();
    let rs = ctx.regular();
    let options: Vec<Vec<(CircleChoice, PointSet)>> = w
        .circles
        .iter()
        .map(|&c| {
            rs.semitransversals(c, w.k).map(|sts| {
                sts.into_iter()
                    .map(|st| {
                        let pts = PointSet::of_lines(pg, &st.lines);
                        (
                            CircleChoice {
                                circle: c,
                                orbit_index: Some(st.orbit_index),
                                lines: st.lines,
                            },
                            pts,
                        )
                    })
                    .collect()
            })
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut stack = Vec::new();
    choose(&options, PointSet::default(), &mut stack, &mut |choices| {
        out.push(Replacement {
            web: w.clone(),
            mode: ReplacementMode::Bruck { k: w.k },
            choices: choices.to_vec(),
        });
    });
    for r in &out {
        // disjointness is enforced during the search; cover equality is checked here
        r.validate(ctx)?;
    }
    Ok(out)
}

/// Every hemi-replacement of a nest.
pub fn find_hemi_replacements(ctx: &Context, n: &Web) -> Result<Vec<Replacement>> {
    if n.k != 2 {
        return Err(Error::Precondition(format!("hemi-replacement needs a nest, got k = {}", n.k)));
    }
    let pg = ctx.pg();
    let rs = ctx.regular();
    let half = (ctx.q() as usize + 1) / 2;
    let options: Vec<Vec<(CircleChoice, PointSet)>> = n
        .circles
        .iter()
        .map(|&c| {
            let opp = rs.opposite_regulus(c);
            let orbits = rs.semitransversals(c, 2).expect("q + 1 is even");
            subsets(&opp, half)
                .into_iter()
                .map(|lines| {
                    let orbit_index = orbits.iter().find(|o| o.lines == lines).map(|o| o.orbit_index);
                    let pts = PointSet::of_lines(pg, &lines);
                    (
                        CircleChoice {
                            circle: c,
                            orbit_index,
                            lines,
                        },
                        pts,
                    )
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    choose(&options, PointSet::default(), &mut stack, &mut |choices| {
        out.push(Replacement {
            web: n.clone(),
            mode: ReplacementMode::Hemi,
            choices: choices.to_vec(),
        });
    });
    Ok(out)
}

fn choose(
    options: &[Vec<(CircleChoice, PointSet)>],
    covered: PointSet,
    stack: &mut Vec<CircleChoice>,
    emit: &mut dyn FnMut(&[CircleChoice]),
) {
    let depth = stack.len();
    if depth == options.len() {
        emit(stack);
        return;
    }
    for (choice, pts) in &options[depth] {
        if covered.is_disjoint(pts) {
            stack.push(choice.clone());
            choose(options, covered.union(pts), stack, emit);
            stack.pop();
        }
    }
}

fn subsets(items: &[LineId], size: usize) -> Vec<Vec<LineId>> {
    fn rec(items: &[LineId], size: usize, start: usize, cur: &mut Vec<LineId>, out: &mut Vec<Vec<LineId>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, size, 0, &mut Vec::new(), &mut out);
    out
}

/// Replaces each choice by its complement in the opposite regulus.
pub fn complement_replacement(ctx: &Context, r: &Replacement) -> Result<Replacement> {
    let bruck_nest = r.mode == ReplacementMode::Bruck { k: 2 };
    if r.mode != ReplacementMode::Hemi && !bruck_nest {
        return Err(Error::Precondition("only hemi-replacements have complements".into()));
    }
    let rs = ctx.regular();
    let choices = r
        .choices
        .iter()
        .map(|ch| {
            let lines: Vec<LineId> = rs
                .opposite_regulus(ch.circle)
                .into_iter()
                .filter(|l| ch.lines.binary_search(l).is_err())
                .collect();
            let orbit_index = rs
                .semitransversals(ch.circle, 2)
                .expect("q + 1 is even")
                .into_iter()
                .find(|o| o.lines == lines)
                .map(|o| o.orbit_index);
            CircleChoice {
                circle: ch.circle,
                orbit_index,
                lines,
            }
        })
        .collect();
    let out = Replacement {
        web: r.web.clone(),
        mode: r.mode,
        choices,
    };
    out.validate(ctx)?;
    Ok(out)
}

/// Joins two Bruck-replaceable nests that share exactly the lines of one
/// circle, dropping that circle and merging their Bruck replacements.
pub fn union_nests(ctx: &Context, n1: &Web, n2: &Web, shared: CircleId) -> Result<(Web, Replacement)> {
    let rs = ctx.regular();
    if n1.k != 2 || n2.k != 2 {
        return Err(Error::Precondition("both webs must be nests".into()));
    }
    if !n1.contains(shared) || !n2.contains(shared) {
        return Err(Error::Precondition(format!("circle {shared} is not in both nests")));
    }
    let common: Vec<u8> = n1
        .covered_lines
        .iter()
        .copied()
        .filter(|i| n2.covered_lines.binary_search(i).is_ok())
        .collect();
    if common != rs.circle(shared).spread_line_indices {
        return Err(Error::Precondition("nests overlap outside the shared circle".into()));
    }
    let h1 = find_bruck_replacements(ctx, n1)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Precondition("first nest is not Bruck-replaceable".into()))?;
    let mut h2 = find_bruck_replacements(ctx, n2)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Precondition("second nest is not Bruck-replaceable".into()))?;
    let orbit_of = |r: &Replacement| r.choices.iter().find(|c| c.circle == shared).unwrap().lines.clone();
    if orbit_of(&h1) == orbit_of(&h2) {
        h2 = complement_replacement(ctx, &h2)?;
    }
    Ok(merge_nests(ctx, n1, &h1, n2, &h2, shared))
}

fn merge_nests(ctx: &Context, n1: &Web, h1: &Replacement, n2: &Web, h2: &Replacement, shared: CircleId) -> (Web, Replacement) {
    let mut circles: Vec<CircleId> = n1.circles.iter().chain(&n2.circles).copied().filter(|&c| c != shared).collect();
    circles.sort_unstable();
    let web = Web::new(ctx.regular(), circles, 2).expect("a union of nests along one circle is a nest");
    let mut choices: Vec<CircleChoice> = h1
        .choices
        .iter()
        .chain(&h2.choices)
        .filter(|c| c.circle != shared)
        .cloned()
        .collect();
    choices.sort_by_key(|c| c.circle);
    let r = Replacement {
        web: web.clone(),
        mode: ReplacementMode::Bruck { k: 2 },
        choices,
    };
    (web, r)
}

/// A nest obtained as a union of two smaller Bruck-replaceable nests.
#[derive(Clone, Debug)]
pub struct NestUnion {
    /// Canonical form of the union.
    pub canonical: Web,
    /// The union as constructed, with its merged replacement.
    pub web: Web,
    pub replacement: Replacement,
    /// Indices of the two constituent nest classes.
    pub parts: (usize, usize),
}

/// All unions of two Bruck-replaceable nests (given as class
/// representatives) sharing exactly one circle's lines, up to equivalence.
pub fn nest_unions(ctx: &Context, nests: &[Web]) -> Result<Vec<NestUnion>> {
    let rs = ctx.regular();
    let group = ctx.group();
    let replaceable: Vec<(usize, Replacement)> = nests
        .iter()
        .enumerate()
        .filter_map(|(i, n)| {
            find_bruck_replacements(ctx, n)
                .ok()
                .and_then(|rs| rs.into_iter().next())
                .map(|r| (i, r))
        })
        .collect();
    // spread lines as bits; q² + 1 ≤ 50
    let mask: Vec<u64> = rs
        .circles()
        .iter()
        .map(|c| c.spread_line_indices.iter().fold(0u64, |m, &i| m | 1 << i))
        .collect();
    let web_mask = |cs: &[CircleId]| cs.iter().fold(0u64, |m, &c| m | mask[c as usize]);
    let mut found: BTreeMap<Vec<CircleId>, NestUnion> = BTreeMap::new();
    let mut tried: HashSet<(usize, Vec<CircleId>)> = HashSet::new();
    for (a, &(i, ref _h1)) in replaceable.iter().enumerate() {
        let n1 = &nests[i];
        let m1 = web_mask(&n1.circles);
        for &(j, _) in &replaceable[a..] {
            let n2 = &nests[j];
            for &shared in &n1.circles {
                for &c in &n2.circles {
                    for e in 0..group.base_stabilizer_order() {
                        let img = |x: CircleId| group.image_between(c, shared, e, x);
                        let m2 = n2.circles.iter().fold(0u64, |m, &x| m | mask[img(x) as usize]);
                        if m1 & m2 != mask[shared as usize] {
                            continue;
                        }
                        let mut image: Vec<CircleId> = n2.circles.iter().map(|&x| img(x)).collect();
                        image.sort_unstable();
                        if !tried.insert((i, image.clone())) {
                            continue;
                        }
                        let m2 = Web::new(rs, image, 2).expect("images of nests are nests");
                        let Ok((web, repl)) = union_nests(ctx, n1, &m2, shared) else {
                            continue;
                        };
                        repl.validate(ctx)?;
                        let canon = group.canonical(&web.circles);
                        found.entry(canon.clone()).or_insert_with(|| NestUnion {
                            canonical: Web::new(rs, canon, 2).unwrap(),
                            web,
                            replacement: repl,
                            parts: (i, j),
                        });
                    }
                }
            }
        }
    }
    Ok(found.into_values().collect())
}

/// Swaps the web's lines in `s` for the replacement's chosen lines.
pub fn apply_replacement(ctx: &Context, s: &Spread, r: &Replacement) -> Result<Spread> {
    let rs = ctx.regular();
    let mut removed: Vec<LineId> = r.web.covered_lines.iter().map(|&i| rs.line_id(i as usize)).collect();
    removed.sort_unstable();
    if !removed.iter().all(|&l| s.contains(l)) {
        return Err(Error::Precondition("web lines are not all in the spread".into()));
    }
    let mut lines: Vec<LineId> = s.lines().iter().copied().filter(|l| removed.binary_search(l).is_err()).collect();
    lines.extend(r.lines());
    Spread::new(ctx.pg(), lines, SpreadSource::Replaced {
        web: format!("{:?}", r.web.circles),
        replacement: 0,
    })
    .map_err(|e| Error::InvalidReplacement(format!("replacement produced a non-spread: {e}")))
}

/// All reguli contained in a spread.
pub fn reguli_in_spread(pg: &Pg3, s: &Spread) -> Vec<Regulus> {
    let lines = s.lines();
    let n = lines.len();
    let mut covered = vec![false; n * n * n];
    let mut out = Vec::new();
    let pos = |l: LineId| lines.binary_search(&l).ok();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if covered[(a * n + b) * n + c] {
                    continue;
                }
                let Some(reg) = regulus_within(pg, s, lines[a], lines[b], lines[c]) else {
                    continue;
                };
                let idx: Vec<usize> = reg.lines.iter().map(|&l| pos(l).unwrap()).collect();
                for &x in &idx {
                    for &y in &idx {
                        for &z in &idx {
                            covered[(x * n + y) * n + z] = true;
                        }
                    }
                }
                out.push(reg);
            }
        }
    }
    out.sort_by(|x, y| x.lines.cmp(&y.lines));
    out
}

/// The regulus through three spread lines, if all of it lies in the spread.
fn regulus_within(pg: &Pg3, s: &Spread, l1: LineId, l2: LineId, l3: LineId) -> Option<Regulus> {
    let mut opposite: Vec<LineId> = pg
        .points_of_line(l1)
        .iter()
        .map(|&p| pg.transversal_fast(p, l2, l3))
        .collect();
    let (o1, o2, o3) = (opposite[0], opposite[1], opposite[2]);
    let mut lines = Vec::with_capacity(opposite.len());
    for &p in pg.points_of_line(o1) {
        let m = pg.transversal_fast(p, o2, o3);
        if !s.contains(m) {
            return None;
        }
        lines.push(m);
    }
    opposite.sort_unstable();
    lines.sort_unstable();
    Some(Regulus { lines, opposite })
}

/// Swaps a regulus of the spread for its opposite regulus.
pub fn reverse_regulus(pg: &Pg3, s: &Spread, regulus: &[LineId]) -> Result<Spread> {
    if regulus.len() < 3 || !regulus.iter().all(|&l| s.contains(l)) {
        return Err(Error::Precondition("regulus is not contained in the spread".into()));
    }
    let reg = regulus_through(pg, regulus[0], regulus[1], regulus[2])?;
    let mut given = regulus.to_vec();
    given.sort_unstable();
    if reg.lines != given {
        return Err(Error::Precondition("lines do not form a regulus".into()));
    }
    let mut lines: Vec<LineId> = s.lines().iter().copied().filter(|l| reg.lines.binary_search(l).is_err()).collect();
    lines.extend(&reg.opposite);
    Spread::new(pg, lines, SpreadSource::Derived {
        parent: format!("{:?}", s.source),
        regulus: reg.lines,
    })
}
