//! Published values for the translation planes of order 25, kept as data so
//! computed results can be checked against them.

/// One plane of order 25: its label, the rank of its incidence matrix over
/// GF(5) and the order of its collineation group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlaneRecord {
    pub label: &'static str,
    pub p_rank: usize,
    pub group_order: u64,
}

const fn rec(label: &'static str, p_rank: usize, group_order: u64) -> PlaneRecord {
    PlaneRecord {
        label,
        p_rank,
        group_order,
    }
}

/// The 21 translation planes of order 25: five subregular (S), eight
/// derivable non-subregular (A) and eight without a regulus (B).
pub const PLANES_25: [PlaneRecord; 21] = [
    rec("S1", 226, 304_668_000_000),
    rec("S2", 251, 3_600_000),
    rec("S3", 260, 720_000),
    rec("S4", 258, 1_440_000),
    rec("S5", 259, 720_000),
    rec("A1", 262, 360_000),
    rec("A2", 255, 2_880_000),
    rec("A3", 253, 1_500_000),
    rec("A4", 256, 180_000),
    rec("A5", 259, 60_000),
    rec("A6", 259, 360_000),
    rec("A7", 260, 300_000),
    rec("A8", 257, 120_000),
    rec("B1", 258, 130_000),
    rec("B2", 262, 130_000),
    rec("B3", 264, 90_000),
    rec("B4", 239, 1_800_000),
    rec("B5", 261, 4_800_000),
    rec("B6", 258, 120_000),
    rec("B7", 261, 240_000),
    rec("B8", 262, 80_000),
];

/// Columns of the web-route grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Route {
    OneWeb,
    TwoWeb,
    Hybrid,
    ThreeWeb,
}

impl Route {
    pub const ALL: [Route; 4] = [Route::OneWeb, Route::TwoWeb, Route::Hybrid, Route::ThreeWeb];

    pub fn column(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Route::OneWeb => "1-web",
            Route::TwoWeb => "2-web",
            Route::Hybrid => "1-web+2-web",
            Route::ThreeWeb => "3-web",
        }
    }
}

/// Which planes of order 25 each kind of web replacement reaches, in the
/// column order of [`Route::ALL`].
pub const ROUTES_25: [(&str, [bool; 4]); 21] = [
    ("S1", [false, false, false, true]),
    ("S2", [true, false, false, true]),
    ("S3", [true, false, false, true]),
    ("S4", [true, false, false, true]),
    ("S5", [true, true, false, false]),
    ("A1", [false, true, false, true]),
    ("A2", [false, true, false, false]),
    ("A3", [false, true, false, false]),
    ("A4", [false, true, false, true]),
    ("A5", [false, false, true, true]),
    ("A6", [false, true, false, false]),
    ("A7", [false, false, true, false]),
    ("A8", [false, false, true, true]),
    ("B1", [false, false, false, true]),
    ("B2", [false, false, false, false]),
    ("B3", [false, true, false, false]),
    ("B4", [false, true, false, true]),
    ("B5", [false, true, false, false]),
    ("B6", [false, true, false, true]),
    ("B7", [false, true, false, true]),
    ("B8", [false, false, false, true]),
];

/// Inequivalent nests in the regular spread of PG(3,5).
pub const NESTS_Q5: usize = 14;
/// Nests at q = 5 with no Bruck replacement.
pub const NESTS_Q5_NOT_BRUCK: usize = 3;
/// Inequivalent unions of two Bruck-replaceable nests at q = 5.
pub const NEST_UNIONS_Q5: usize = 3;
/// Inequivalent 3-webs at q = 5.
pub const THREE_WEBS_Q5: usize = 25;
/// 3-webs at q = 5 with a Bruck replacement.
pub const THREE_WEBS_Q5_BRUCK: usize = 15;
/// Spreads from Bruck replacement of 3-webs at q = 5, up to isomorphism.
pub const THREE_WEB_SPREADS_Q5: usize = 13;
/// Non-regular spreads of PG(3,5) reached by 1-webs, 2-webs and hybrids.
pub const LOW_ROUTE_SPREADS_Q5: usize = 17;
/// Inequivalent nests in the regular spread of PG(3,7).
pub const NESTS_Q7: usize = 85;
/// Nests at q = 7 with a Bruck replacement.
pub const NESTS_Q7_BRUCK: usize = 59;
/// Nests at q = 7 that are unions of two smaller Bruck-replaceable nests.
pub const NEST_UNIONS_Q7: usize = 12;
/// Planes of order 49 from nest replacement, up to isomorphism.
pub const NEST_PLANES_Q7: usize = 12;

pub fn plane_record(label: &str) -> Option<&'static PlaneRecord> {
    PLANES_25.iter().find(|r| r.label == label)
}

/// Label of the plane of order 25 with the given invariants.
pub fn label_for(p_rank: usize, group_order: u64) -> Option<&'static str> {
    PLANES_25
        .iter()
        .find(|r| r.p_rank == p_rank && r.group_order == group_order)
        .map(|r| r.label)
}

pub fn routes_for(label: &str) -> Option<[bool; 4]> {
    ROUTES_25.iter().find(|(l, _)| *l == label).map(|&(_, r)| r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn invariant_pairs_are_distinct() {
        let pairs: HashSet<(usize, u64)> = PLANES_25.iter().map(|r| (r.p_rank, r.group_order)).collect();
        assert_eq!(pairs.len(), 21);
        for r in &PLANES_25 {
            assert_eq!(label_for(r.p_rank, r.group_order), Some(r.label));
        }
    }

    #[test]
    fn grid_matches_plane_list() {
        let a: Vec<&str> = PLANES_25.iter().map(|r| r.label).collect();
        let b: Vec<&str> = ROUTES_25.iter().map(|r| r.0).collect();
        assert_eq!(a, b);
        assert_eq!(routes_for("B2"), Some([false; 4]));
        let low = ROUTES_25
            .iter()
            .filter(|(l, r)| *l != "S1" && (r[0] || r[1] || r[2]))
            .count();
        assert_eq!(low, LOW_ROUTE_SPREADS_Q5);
        let three: usize = ROUTES_25.iter().filter(|(_, r)| r[3]).count();
        assert_eq!(three, THREE_WEB_SPREADS_Q5);
    }

    #[test]
    fn orders_split_over_translations() {
        // every group contains the 5⁴ translations
        for r in &PLANES_25 {
            assert_eq!(r.group_order % 625, 0, "{}", r.label);
        }
        assert_eq!(PLANES_25[0].group_order, 625 * 748_800 * 651);
    }
}
