//! Comparison of computed values against the published ones.

use std::collections::BTreeSet;
use std::fmt;

use crate::classify::atlas::{genealogy_atlas, Atlas, AtlasOptions};
use crate::classify::{fingerprint_and_label, SpreadClassifier};
use crate::context::Context;
use crate::error::Result;
use crate::replace::{apply_replacement, find_bruck_replacements, nest_unions, reguli_in_spread, reverse_regulus};
use crate::spreadcore::Spread;
use crate::tables::{self, Route};
use crate::webs::search_webs;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: impl fmt::Display, actual: impl fmt::Display) -> Self {
        Self {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: expected {}, got {}", self.name, self.expected, self.actual)
    }
}

fn set_string(s: &BTreeSet<String>) -> String {
    let v: Vec<&str> = s.iter().map(String::as_str).collect();
    format!("{{{}}}", v.join(","))
}

fn labels(ls: &[&str]) -> BTreeSet<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

/// Structure of the regular spread.
pub fn structure_checks(ctx: &Context) -> Vec<Check> {
    let pg = ctx.pg();
    let rs = ctx.regular();
    let s = ctx.regular_spread();
    let q = ctx.q() as usize;
    let covered: usize = s.lines().iter().map(|&l| pg.points_of_line(l).len()).sum();
    let kernel = rs.bruck_kernel();
    let fixes = s.lines().iter().all(|&l| kernel.apply_line(pg, l) == l);
    vec![
        Check::new("spread lines", q * q + 1, s.lines().len()),
        Check::new("points covered", pg.point_count(), covered),
        Check::new("reguli in the regular spread", q * (q * q + 1), reguli_in_spread(pg, &s).len()),
        Check::new("kernel order", q + 1, kernel.order()),
        Check::new("kernel fixes every spread line", true, fixes),
    ]
}

/// Nest census and unions at q = 5.
pub fn nest_checks(ctx: &Context) -> Result<Vec<Check>> {
    let nests = search_webs(ctx, 2);
    let mut not_bruck = 0;
    for n in &nests {
        if find_bruck_replacements(ctx, n)?.is_empty() {
            not_bruck += 1;
        }
    }
    let unions = nest_unions(ctx, &nests)?;
    let mut union_labels = BTreeSet::new();
    for u in &unions {
        let s = apply_replacement(ctx, &ctx.regular_spread(), &u.replacement)?;
        union_labels.insert(fingerprint_and_label(ctx.pg(), &s)?.label_or_unknown().to_owned());
    }
    Ok(vec![
        Check::new("nests", tables::NESTS_Q5, nests.len()),
        Check::new("nests without a Bruck replacement", tables::NESTS_Q5_NOT_BRUCK, not_bruck),
        Check::new("nest unions", tables::NEST_UNIONS_Q5, unions.len()),
        Check::new("nest union planes", set_string(&labels(&["A2", "B3", "B7"])), set_string(&union_labels)),
    ])
}

/// Checks drawn from the atlas: 3-web census, invariants and route grid.
pub fn atlas_checks(atlas: &Atlas) -> Vec<Check> {
    let mut out = Vec::new();
    let three = atlas.census(3);
    out.push(Check::new("3-webs", tables::THREE_WEBS_Q5, three.map_or(0, |c| c.webs)));
    out.push(Check::new("Bruck-replaceable 3-webs", tables::THREE_WEBS_Q5_BRUCK, three.map_or(0, |c| c.replaceable)));
    out.push(Check::new("spreads from 3-webs", tables::THREE_WEB_SPREADS_Q5, three.map_or(0, |c| c.spread_classes)));
    let webs_for = |label: &str| -> usize {
        atlas.entry(label).map_or(0, |e| {
            e.web_routes
                .iter()
                .filter(|r| r.route == Route::ThreeWeb)
                .map(|r| r.web_index)
                .collect::<BTreeSet<_>>()
                .len()
        })
    };
    out.push(Check::new("3-webs giving B8", 2, webs_for("B8")));
    out.push(Check::new("a 3-web gives the regular spread", true, webs_for("S1") > 0));

    for rec in tables::PLANES_25.iter().filter(|r| r.label != "B2") {
        let e = atlas.entry(rec.label);
        let pr = e.and_then(|e| e.p_rank).map_or("unreached".into(), |x| x.to_string());
        let go = e.and_then(|e| e.group_order).map_or("unreached".into(), |x| x.to_string());
        out.push(Check::new(format!("p-rank {}", rec.label), rec.p_rank, pr));
        out.push(Check::new(format!("group order {}", rec.label), rec.group_order, go));
        if let Some(rc) = e.and_then(|e| e.regulus_count) {
            let ok = match rec.label.as_bytes()[0] {
                b'B' => rc == 0,
                _ => rc >= 1,
            };
            out.push(Check::new(format!("regulus taxonomy {}", rec.label), true, ok));
        }
    }

    for route in Route::ALL {
        let expected: BTreeSet<String> = tables::ROUTES_25
            .iter()
            .filter(|(_, m)| m[route.column()])
            .map(|(l, _)| l.to_string())
            .collect();
        out.push(Check::new(
            format!("{} column", route.name()),
            set_string(&expected),
            set_string(&atlas.column(route)),
        ));
    }
    out.push(Check::new(
        "non-regular planes without 3-webs",
        tables::LOW_ROUTE_SPREADS_Q5,
        atlas.low_route_labels().len(),
    ));
    let unknown = atlas.entries.iter().filter(|e| e.label == "unknown").count();
    out.push(Check::new("unlabelled spread classes", 0, unknown));
    out
}

/// The first spread in the atlas carrying a label.
pub fn atlas_spread<'a>(atlas: &'a Atlas, label: &str) -> Option<&'a Spread> {
    atlas.entry(label).and_then(|e| e.classes.first()).map(|&c| &atlas.spreads[c])
}

/// Derivations of the A3 and A1 spreads.
pub fn derivation_checks(ctx: &Context, atlas: &Atlas) -> Result<Vec<Check>> {
    let pg = ctx.pg();
    let mut out = Vec::new();
    let name = |s: &Spread| -> Result<String> { Ok(fingerprint_and_label(pg, s)?.label_or_unknown().to_owned()) };
    match atlas_spread(atlas, "A3") {
        Some(a3) => {
            let reguli = reguli_in_spread(pg, a3);
            out.push(Check::new("reguli in A3", 5, reguli.len()));
            let common: BTreeSet<_> = reguli
                .iter()
                .map(|r| r.lines.iter().copied().collect::<BTreeSet<_>>())
                .reduce(|a, b| a.intersection(&b).copied().collect())
                .unwrap_or_default();
            let pairwise_one = reguli.iter().enumerate().all(|(i, r)| {
                reguli[i + 1..]
                    .iter()
                    .all(|t| r.lines.iter().filter(|l| t.lines.contains(l)).count() == 1)
            });
            out.push(Check::new("A3 reguli share one common line", true, pairwise_one && common.len() == 1));
            let mut derived = BTreeSet::new();
            let mut classes = SpreadClassifier::new(pg);
            for r in &reguli {
                let d = reverse_regulus(pg, a3, &r.lines)?;
                classes.add(&d);
                derived.insert(name(&d)?);
            }
            out.push(Check::new("derivations of A3", "{A7}", set_string(&derived)));
        }
        None => out.push(Check::new("A3 reached", true, false)),
    }
    match atlas_spread(atlas, "A1") {
        Some(a1) => {
            let mut derived = BTreeSet::new();
            for r in reguli_in_spread(pg, a1) {
                derived.insert(name(&reverse_regulus(pg, a1, &r.lines)?)?);
            }
            let want = labels(&["A5", "A6"]);
            let got: BTreeSet<String> = derived.intersection(&want).cloned().collect();
            out.push(Check::new("derivations of A1 include A5 and A6", set_string(&want), set_string(&got)));
        }
        None => out.push(Check::new("A1 reached", true, false)),
    }
    Ok(out)
}

/// Every check at q = 5, in order.
pub fn all_checks_q5(ctx: &Context) -> Result<Vec<Check>> {
    let mut out = structure_checks(ctx);
    out.extend(nest_checks(ctx)?);
    let atlas = genealogy_atlas(ctx, AtlasOptions::default())?;
    out.extend(atlas_checks(&atlas));
    out.extend(derivation_checks(ctx, &atlas)?);
    Ok(out)
}

/// Nest census at q = 7.
pub fn all_checks_q7(ctx: &Context) -> Result<Vec<Check>> {
    let mut out = structure_checks(ctx);
    let nests = search_webs(ctx, 2);
    let regular = ctx.regular_spread();
    let mut bruck = 0;
    let mut classes = SpreadClassifier::new(ctx.pg());
    for n in &nests {
        if let Some(r) = find_bruck_replacements(ctx, n)?.first() {
            bruck += 1;
            classes.add(&apply_replacement(ctx, &regular, r)?);
        }
    }
    let unions = nest_unions(ctx, &nests)?;
    out.push(Check::new("nests", tables::NESTS_Q7, nests.len()));
    out.push(Check::new("Bruck-replaceable nests", tables::NESTS_Q7_BRUCK, bruck));
    out.push(Check::new("nest unions", tables::NEST_UNIONS_Q7, unions.len()));
    out.push(Check::new("planes from nest replacement", tables::NEST_PLANES_Q7, classes.len()));
    Ok(out)
}
