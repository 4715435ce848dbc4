//! The stabilizer of the regular spread, acting on spread lines as PΓL(2,q²)
//! acts on PG(1,q²), and through that on circles.

use std::collections::HashSet;

use crate::spreadcore::{CircleId, Pg1Point, RegularSpread};

/// A permutation of the `q² + 1` spread-line indices.
pub type LinePerm = Vec<u8>;

pub struct SpreadStabilizerGroup {
    generators: Vec<LinePerm>,
    elements: Vec<LinePerm>,
    circle_count: usize,
    /// Circle permutations of the elements fixing circle 0.
    base_stabilizer: Vec<Vec<CircleId>>,
    /// For each circle `c`, a circle permutation sending `c` to circle 0.
    to_base: Vec<Vec<CircleId>>,
    /// Inverses of `to_base`.
    from_base: Vec<Vec<CircleId>>,
    /// Least circle in the orbit of each circle under `base_stabilizer`.
    orbit_min: Vec<CircleId>,
    /// Index into `base_stabilizer` of an element realising `orbit_min`.
    orbit_witness: Vec<usize>,
    /// For each orbit representative, the base stabilizer elements fixing it.
    pair_stabilizer: Vec<Vec<usize>>,
}

impl SpreadStabilizerGroup {
    /// Closes the generators x ↦ x + 1, x ↦ gx, x ↦ 1/x and the Frobenius
    /// map under composition.
    pub fn build(rs: &RegularSpread) -> Self {
        let f = rs.field();
        let g = f.primitive_element();
        let n = rs.size();
        let make = |map: &dyn Fn(Pg1Point) -> Pg1Point| -> LinePerm {
            (0..n).map(|i| rs.pg1_index(map(rs.pg1_point(i))) as u8).collect()
        };
        let generators = vec![
            make(&|(x0, x1)| (x0, x1.add(x0))),
            make(&|(x0, x1)| (x0, g.mul(x1))),
            make(&|(x0, x1)| (x1, x0)),
            make(&|(x0, x1)| (x0.frobenius(), x1.frobenius())),
        ];

        let identity: LinePerm = (0..n as u8).collect();
        let mut seen: HashSet<LinePerm> = HashSet::new();
        seen.insert(identity.clone());
        let mut elements = vec![identity];
        let mut head = 0;
        while head < elements.len() {
            for gen in &generators {
                let next: LinePerm = elements[head].iter().map(|&x| gen[x as usize]).collect();
                if seen.insert(next.clone()) {
                    elements.push(next);
                }
            }
            head += 1;
        }
        drop(seen);

        let circle_count = rs.circle_count();
        let circle_perm = |e: &LinePerm| -> Vec<CircleId> {
            rs.circles()
                .iter()
                .map(|c| {
                    let s = &c.spread_line_indices;
                    rs.circle_through(e[s[0] as usize] as usize, e[s[1] as usize] as usize, e[s[2] as usize] as usize)
                })
                .collect()
        };
        let image_of_base = |e: &LinePerm| -> CircleId {
            let s = &rs.circle(0).spread_line_indices;
            rs.circle_through(e[s[0] as usize] as usize, e[s[1] as usize] as usize, e[s[2] as usize] as usize)
        };

        let mut base_stabilizer = Vec::new();
        let mut from_base: Vec<Vec<CircleId>> = vec![Vec::new(); circle_count];
        for e in &elements {
            let d = image_of_base(e) as usize;
            if d == 0 {
                base_stabilizer.push(circle_perm(e));
            }
            if from_base[d].is_empty() {
                from_base[d] = circle_perm(e);
            }
        }
        assert!(from_base.iter().all(|p| !p.is_empty()), "circles form one orbit");
        let to_base = from_base.iter().map(|p| invert(p)).collect();

        let mut orbit_min: Vec<CircleId> = (0..circle_count as CircleId).collect();
        let mut orbit_witness = vec![0; circle_count];
        for y in 0..circle_count {
            for (i, s) in base_stabilizer.iter().enumerate() {
                if s[y] < orbit_min[y] {
                    orbit_min[y] = s[y];
                    orbit_witness[y] = i;
                }
            }
        }
        let mut pair_stabilizer = vec![Vec::new(); circle_count];
        for y in 0..circle_count {
            if orbit_min[y] as usize == y {
                pair_stabilizer[y] = (0..base_stabilizer.len())
                    .filter(|&i| base_stabilizer[i][y] as usize == y)
                    .collect();
            }
        }

        Self {
            generators,
            elements,
            circle_count,
            base_stabilizer,
            to_base,
            from_base,
            orbit_min,
            orbit_witness,
            pair_stabilizer,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[LinePerm] {
        &self.generators
    }

    pub fn element(&self, i: usize) -> &LinePerm {
        &self.elements[i]
    }

    /// The induced permutation on circles of element `i`.
    pub fn circle_permutation(&self, rs: &RegularSpread, i: usize) -> Vec<CircleId> {
        let e = &self.elements[i];
        rs.circles()
            .iter()
            .map(|c| {
                let s = &c.spread_line_indices;
                rs.circle_through(e[s[0] as usize] as usize, e[s[1] as usize] as usize, e[s[2] as usize] as usize)
            })
            .collect()
    }

    pub fn circle_count(&self) -> usize {
        self.circle_count
    }

    pub fn base_stabilizer_order(&self) -> usize {
        self.base_stabilizer.len()
    }

    /// Lexicographically least image of a circle set under the group.
    ///
    /// Since the action on circles is transitive every minimal image starts
    /// with circle 0. Its second entry is the least base-stabilizer orbit
    /// minimum reachable from an ordered pair of members, so only elements
    /// sending such a pair to (0, that minimum) are tried.
    pub fn canonical(&self, set: &[CircleId]) -> Vec<CircleId> {
        if set.len() <= 1 {
            return vec![0; set.len()];
        }
        let mut second = CircleId::MAX;
        for &c in set {
            let h = &self.to_base[c as usize];
            for &x in set {
                if x != c {
                    second = second.min(self.orbit_min[h[x as usize] as usize]);
                }
            }
        }
        let mut best: Option<Vec<CircleId>> = None;
        let mut moved = vec![0; set.len()];
        let mut image = vec![0; set.len()];
        for &c in set {
            let h = &self.to_base[c as usize];
            for (m, &x) in moved.iter_mut().zip(set) {
                *m = h[x as usize];
            }
            for &y in &moved {
                if y == 0 || self.orbit_min[y as usize] != second {
                    continue;
                }
                let u = &self.base_stabilizer[self.orbit_witness[y as usize]];
                for &t in &self.pair_stabilizer[second as usize] {
                    let s = &self.base_stabilizer[t];
                    for (z, &x) in image.iter_mut().zip(&moved) {
                        *z = s[u[x as usize] as usize];
                    }
                    image.sort_unstable();
                    if best.as_ref().map_or(true, |b| image < *b) {
                        best = Some(image.clone());
                    }
                }
            }
        }
        best.expect("a member pair reaches the second entry")
    }

    /// Lexicographically least image by trying every element that sends a
    /// member to circle 0.
    pub fn canonical_exhaustive(&self, set: &[CircleId]) -> Vec<CircleId> {
        let mut best: Option<Vec<CircleId>> = None;
        for &c in set {
            for p in self.maps_between(c, 0) {
                let image = apply_perm(&p, set);
                if best.as_ref().map_or(true, |b| image < *b) {
                    best = Some(image);
                }
            }
        }
        best.unwrap_or_default()
    }

    /// Image of circle `x` under the `s`-th element sending `from` to `to`,
    /// for `s` below [`Self::base_stabilizer_order`].
    pub fn image_between(&self, from: CircleId, to: CircleId, s: usize, x: CircleId) -> CircleId {
        let h = &self.to_base[from as usize];
        self.from_base[to as usize][self.base_stabilizer[s][h[x as usize] as usize] as usize]
    }

    /// Every group element sending circle `from` to circle `to`, as a circle
    /// permutation.
    pub fn maps_between(&self, from: CircleId, to: CircleId) -> impl Iterator<Item = Vec<CircleId>> + '_ {
        let h = &self.to_base[from as usize];
        let back = &self.from_base[to as usize];
        self.base_stabilizer.iter().map(move |s| {
            (0..self.circle_count)
                .map(|x| back[s[h[x] as usize] as usize])
                .collect()
        })
    }

    /// Size of the orbit of circle 0, by breadth-first search over generators.
    pub fn circle_orbit_size(&self, rs: &RegularSpread) -> usize {
        let gens: Vec<Vec<CircleId>> = self
            .generators
            .iter()
            .map(|e| {
                rs.circles()
                    .iter()
                    .map(|c| {
                        let s = &c.spread_line_indices;
                        rs.circle_through(e[s[0] as usize] as usize, e[s[1] as usize] as usize, e[s[2] as usize] as usize)
                    })
                    .collect()
            })
            .collect();
        let mut seen = vec![false; self.circle_count];
        seen[0] = true;
        let mut queue = vec![0 as CircleId];
        while let Some(c) = queue.pop() {
            for g in &gens {
                let d = g[c as usize];
                if !std::mem::replace(&mut seen[d as usize], true) {
                    queue.push(d);
                }
            }
        }
        seen.iter().filter(|&&s| s).count()
    }
}

pub fn invert(p: &[CircleId]) -> Vec<CircleId> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as CircleId;
    }
    inv
}

pub fn apply_perm(p: &[CircleId], set: &[CircleId]) -> Vec<CircleId> {
    let mut v: Vec<CircleId> = set.iter().map(|&c| p[c as usize]).collect();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::Pg3;

    #[test]
    fn order_and_transitivity_q5() {
        let pg = Pg3::new(5).unwrap();
        let rs = RegularSpread::build(&pg).unwrap();
        let g = SpreadStabilizerGroup::build(&rs);
        // 2 |PGL(2,25)|
        assert_eq!(g.order(), 2 * 26 * 25 * 24);
        assert_eq!(g.order(), 31200);
        assert_eq!(g.circle_orbit_size(&rs), 130);
        assert_eq!(g.base_stabilizer_order() * 130, g.order());
        // every element maps circles to circles
        for i in (0..g.order()).step_by(997) {
            let perm = g.circle_permutation(&rs, i);
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..130).collect::<Vec<CircleId>>());
            for (c, &d) in perm.iter().enumerate() {
                let img: Vec<u8> = {
                    let mut v: Vec<u8> = rs.circle(c as CircleId).spread_line_indices.iter().map(|&x| g.element(i)[x as usize]).collect();
                    v.sort_unstable();
                    v
                };
                assert_eq!(img, rs.circle(d).spread_line_indices);
            }
        }
    }

    #[test]
    fn maps_between_hit_target() {
        let pg = Pg3::new(5).unwrap();
        let rs = RegularSpread::build(&pg).unwrap();
        let g = SpreadStabilizerGroup::build(&rs);
        let maps: Vec<_> = g.maps_between(17, 99).collect();
        assert_eq!(maps.len(), 240);
        assert!(maps.iter().all(|m| m[17] == 99));
    }

    #[test]
    fn fast_canonical_matches_exhaustive() {
        use rand::{seq::SliceRandom, SeedableRng};
        let pg = Pg3::new(5).unwrap();
        let rs = RegularSpread::build(&pg).unwrap();
        let g = SpreadStabilizerGroup::build(&rs);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let all: Vec<CircleId> = (0..130).collect();
        for n in 0..9 {
            for _ in 0..6 {
                let mut set: Vec<CircleId> = all.choose_multiple(&mut rng, n).copied().collect();
                set.sort_unstable();
                assert_eq!(g.canonical(&set), g.canonical_exhaustive(&set));
            }
        }
    }

    #[test]
    #[ignore = "builds the 235200-element group at q = 7"]
    fn order_q7() {
        let pg = Pg3::new(7).unwrap();
        let rs = RegularSpread::build(&pg).unwrap();
        let g = SpreadStabilizerGroup::build(&rs);
        assert_eq!(g.order(), 2 * 50 * 49 * 48);
        assert_eq!(g.circle_orbit_size(&rs), 350);
    }
}
