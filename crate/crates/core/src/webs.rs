//! k-webs: sets of circles in which every covered spread line lies on
//! exactly k member circles. 1-webs are sets of pairwise disjoint circles and
//! 2-webs are nests.
//!
//! The search grows circle sets one circle at a time. While some covered
//! line is short of multiplicity k, only circles through the lowest such line
//! are tried; once every covered line is saturated the set is recorded and a
//! disjoint circle may start a new component. Every web containing a state is
//! reachable from it and that set of webs is equivariant under the spread
//! stabilizer, so a state whose minimal image was already expanded is skipped.

use std::collections::{BTreeSet, HashSet};

use crate::context::Context;
use crate::error::{Error, Result};
use crate::group::SpreadStabilizerGroup;
use crate::spreadcore::{CircleId, RegularSpread};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Web {
    pub k: u32,
    pub circles: Vec<CircleId>,
    pub covered_lines: Vec<u8>,
}

impl Web {
    /// Builds a web from its circles, checking the multiplicity condition.
    pub fn new(rs: &RegularSpread, mut circles: Vec<CircleId>, k: u32) -> Result<Self> {
        circles.sort_unstable();
        circles.dedup();
        if !verify_web(rs, &circles, k) {
            return Err(Error::NotAWeb { k });
        }
        let covered_lines = multiplicities(rs, &circles)
            .iter()
            .enumerate()
            .filter(|&(_, &m)| m > 0)
            .map(|(i, _)| i as u8)
            .collect();
        Ok(Self {
            k,
            circles,
            covered_lines,
        })
    }

    pub fn empty(k: u32) -> Self {
        Self {
            k,
            circles: Vec::new(),
            covered_lines: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    pub fn contains(&self, c: CircleId) -> bool {
        self.circles.binary_search(&c).is_ok()
    }
}

/// Number of member circles on each spread line.
pub fn multiplicities(rs: &RegularSpread, circles: &[CircleId]) -> Vec<u32> {
    let mut mult = vec![0; rs.size()];
    for &c in circles {
        for &i in &rs.circle(c).spread_line_indices {
            mult[i as usize] += 1;
        }
    }
    mult
}

pub fn verify_web(rs: &RegularSpread, circles: &[CircleId], k: u32) -> bool {
    multiplicities(rs, circles).iter().all(|&m| m == 0 || m == k)
}

/// The lexicographically least image of a web under the spread stabilizer.
pub fn canonical_web(ctx: &Context, w: &Web) -> Result<Web> {
    if !verify_web(ctx.regular(), &w.circles, w.k) {
        return Err(Error::NotAWeb { k: w.k });
    }
    let circles = ctx.group().canonical(&w.circles);
    Web::new(ctx.regular(), circles, w.k)
}

/// All nonempty k-webs up to equivalence, as canonical representatives
/// ordered by size and then lexicographically.
pub fn search_webs(ctx: &Context, k: u32) -> Vec<Web> {
    let rs = ctx.regular();
    let group = ctx.group();
    let mut search = WebSearch::new(rs, group, k);
    search.run();
    let mut reps: Vec<Vec<CircleId>> = search.found.into_iter().collect();
    reps.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    reps.into_iter()
        .map(|c| Web::new(rs, c, k).expect("search only records webs"))
        .collect()
}

/// Sets of pairwise disjoint circles up to equivalence.
pub fn search_disjoint_sets(ctx: &Context) -> Vec<Web> {
    search_webs(ctx, 1)
}

struct WebSearch<'a> {
    rs: &'a RegularSpread,
    group: &'a SpreadStabilizerGroup,
    k: u32,
    visited: HashSet<Vec<CircleId>>,
    found: BTreeSet<Vec<CircleId>>,
    chosen: Vec<CircleId>,
    in_set: Vec<bool>,
    mult: Vec<u32>,
}

impl<'a> WebSearch<'a> {
    fn new(rs: &'a RegularSpread, group: &'a SpreadStabilizerGroup, k: u32) -> Self {
        Self {
            rs,
            group,
            k,
            visited: HashSet::new(),
            found: BTreeSet::new(),
            chosen: Vec::new(),
            in_set: vec![false; rs.circle_count()],
            mult: vec![0; rs.size()],
        }
    }

    fn run(&mut self) {
        if self.rs.circle_count() == 0 {
            return;
        }
        // the group is transitive on circles
        self.push(0);
        self.visit();
        self.pop();
    }

    fn push(&mut self, c: CircleId) {
        self.chosen.push(c);
        self.in_set[c as usize] = true;
        for &i in &self.rs.circle(c).spread_line_indices {
            self.mult[i as usize] += 1;
        }
    }

    fn pop(&mut self) {
        let c = self.chosen.pop().unwrap();
        self.in_set[c as usize] = false;
        for &i in &self.rs.circle(c).spread_line_indices {
            self.mult[i as usize] -= 1;
        }
    }

    fn addable(&self, c: CircleId) -> bool {
        !self.in_set[c as usize]
            && self.rs.circle(c).spread_line_indices.iter().all(|&i| self.mult[i as usize] < self.k)
    }

    fn visit(&mut self) {
        let mut key = self.chosen.clone();
        key.sort_unstable();
        let canon = self.group.canonical(&key);
        if !self.visited.insert(canon.clone()) {
            return;
        }
        let k = self.k;
        let open: Vec<usize> = (0..self.rs.size())
            .filter(|&i| self.mult[i] > 0 && self.mult[i] < k)
            .collect();

        if open.is_empty() {
            self.found.insert(canon);
            let fresh: Vec<CircleId> = (0..self.rs.circle_count() as CircleId)
                .filter(|&c| {
                    self.rs.circle(c).spread_line_indices.iter().all(|&i| self.mult[i as usize] == 0)
                })
                .collect();
            for c in fresh {
                self.push(c);
                self.visit();
                self.pop();
            }
            return;
        }

        for &i in &open {
            let avail = self.rs.circles_on_line(i).iter().filter(|&&c| self.addable(c)).count() as u32;
            if avail < k - self.mult[i] {
                return;
            }
        }
        let candidates: Vec<CircleId> = self
            .rs
            .circles_on_line(open[0])
            .iter()
            .copied()
            .filter(|&c| self.addable(c))
            .collect();
        for c in candidates {
            self.push(c);
            self.visit();
            self.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_web_small_cases() {
        let ctx = Context::new(5).unwrap();
        let rs = ctx.regular();
        assert!(verify_web(rs, &[], 1));
        assert!(verify_web(rs, &[], 3));
        assert!(verify_web(rs, &[7], 1));
        assert!(!verify_web(rs, &[7], 2));
        assert!(Web::new(rs, vec![7], 2).is_err());
        let w = Web::new(rs, vec![7], 1).unwrap();
        assert_eq!(w.covered_lines.len(), 6);
    }

    #[test]
    fn canonical_form_is_orbit_invariant() {
        let ctx = Context::new(5).unwrap();
        let rs = ctx.regular();
        let g = ctx.group();
        let w = Web::new(rs, vec![3], 1).unwrap();
        let c = canonical_web(&ctx, &w).unwrap();
        assert_eq!(c.circles, vec![0]);
        assert!(canonical_web(&ctx, &Web { k: 2, ..w.clone() }).is_err());
        // a pair of disjoint circles
        let d = (1..130u16)
            .find(|&d| {
                let a = &rs.circle(0).spread_line_indices;
                rs.circle(d).spread_line_indices.iter().all(|x| !a.contains(x))
            })
            .unwrap();
        let w = Web::new(rs, vec![0, d], 1).unwrap();
        let c = canonical_web(&ctx, &w).unwrap();
        assert_eq!(canonical_web(&ctx, &c).unwrap(), c);
        for i in (0..g.order()).step_by(1231) {
            let perm = g.circle_permutation(rs, i);
            let img = Web::new(rs, crate::group::apply_perm(&perm, &w.circles), 1).unwrap();
            assert_eq!(canonical_web(&ctx, &img).unwrap(), c);
        }
    }
}
