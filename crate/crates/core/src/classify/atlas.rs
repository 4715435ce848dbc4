//! Which planes of order 25 each kind of web replacement reaches.
//!
//! Four routes are followed from the regular spread of PG(3,5): Bruck
//! replacement of 1-webs, of 2-webs (nests) and of 3-webs, and the hybrid of
//! a nest replacement followed by reversal of one regulus of the resulting
//! spread. Every spread met is sorted into isomorphism classes and each class
//! is named by its p-rank and collineation group order.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{Fingerprint, SpreadClassifier};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::projgeom::LineId;
use crate::replace::{apply_replacement, find_bruck_replacements, reguli_in_spread, reverse_regulus};
use crate::spreadcore::{CircleId, Spread};
use crate::tables::{self, Route};
use crate::webs::{search_webs, Web};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AtlasOptions {
    /// Follow every Bruck replacement of each web rather than only the
    /// first one found.
    pub all_replacements: bool,
}

impl Default for AtlasOptions {
    fn default() -> Self {
        Self {
            all_replacements: false,
        }
    }
}

/// One way of reaching a plane.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct WebRoute {
    pub route: Route,
    /// Index of the web in the census for its k.
    pub web_index: usize,
    pub circles: Vec<CircleId>,
    /// Index among the web's Bruck replacements.
    pub replacement: usize,
    /// For hybrids, the regulus reversed after the nest replacement.
    pub reversed_regulus: Option<Vec<LineId>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AtlasEntry {
    pub label: String,
    pub p_rank: Option<usize>,
    pub group_order: Option<u64>,
    pub regulus_count: Option<usize>,
    pub stabilizer_order: Option<u64>,
    pub web_routes: Vec<WebRoute>,
    /// Spread classes carrying this label, by first appearance.
    pub classes: Vec<usize>,
}

impl AtlasEntry {
    /// Columns in which this label is marked. A hybrid only counts when
    /// neither a 1-web nor a 2-web reaches the label on its own, since a
    /// nest replacement followed by a reversal is taken as a route to
    /// planes not otherwise reached.
    pub fn marks(&self) -> [bool; 4] {
        let mut m = self.raw_marks();
        let hybrid = Route::Hybrid.column();
        if m[Route::OneWeb.column()] || m[Route::TwoWeb.column()] {
            m[hybrid] = false;
        }
        m
    }

    /// Columns with at least one route, without the hybrid rule.
    pub fn raw_marks(&self) -> [bool; 4] {
        let mut m = [false; 4];
        for r in &self.web_routes {
            m[r.route.column()] = true;
        }
        m
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WebCensus {
    pub k: u32,
    pub webs: usize,
    pub replaceable: usize,
    /// Spread classes reached by the followed replacements.
    pub spread_classes: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Atlas {
    pub entries: Vec<AtlasEntry>,
    pub census: Vec<WebCensus>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub spreads: Vec<Spread>,
}

impl Atlas {
    pub fn entry(&self, label: &str) -> Option<&AtlasEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    /// The route grid in table order, one row per known label.
    pub fn grid(&self) -> Vec<(String, [bool; 4])> {
        tables::PLANES_25
            .iter()
            .map(|r| {
                let marks = self.entry(r.label).map_or([false; 4], AtlasEntry::marks);
                (r.label.to_owned(), marks)
            })
            .collect()
    }

    /// Labels marked in one column.
    pub fn column(&self, route: Route) -> BTreeSet<String> {
        self.grid()
            .into_iter()
            .filter(|(_, m)| m[route.column()])
            .map(|(l, _)| l)
            .collect()
    }

    /// Non-regular labels reached without 3-webs.
    pub fn low_route_labels(&self) -> BTreeSet<String> {
        self.grid()
            .into_iter()
            .filter(|(l, m)| l != "S1" && (m[0] || m[1] || m[2]))
            .map(|(l, _)| l)
            .collect()
    }

    pub fn census(&self, k: u32) -> Option<&WebCensus> {
        self.census.iter().find(|c| c.k == k)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("label\tp_rank\tgroup_order\tregulus_count");
        for r in Route::ALL {
            out.push('\t');
            out.push_str(r.name());
        }
        out.push('\n');
        for e in &self.entries {
            let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "{}\t{}\t{}\t{}",
                e.label,
                opt(e.p_rank.map(|x| x.to_string())),
                opt(e.group_order.map(|x| x.to_string())),
                opt(e.regulus_count.map(|x| x.to_string())),
            ));
            for m in e.marks() {
                out.push_str(if m { "\tx" } else { "\t" });
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("atlas serializes")
    }
}

/// Runs every route at q = 5 and names the planes reached.
pub fn genealogy_atlas(ctx: &Context, opts: AtlasOptions) -> Result<Atlas> {
    if ctx.q() != 5 {
        return Err(Error::Precondition("the atlas covers the planes of order 25 only".into()));
    }
    let pg = ctx.pg();
    let regular = ctx.regular_spread();
    let mut classifier = SpreadClassifier::new(pg);
    let mut hits: Vec<(usize, WebRoute)> = Vec::new();
    let mut census = Vec::new();
    let mut nest_spreads: Vec<(usize, usize, Vec<CircleId>, Spread)> = Vec::new();

    for k in 1..=3u32 {
        let webs = search_webs(ctx, k);
        let mut replaceable = 0;
        let mut reached = BTreeSet::new();
        for (wi, w) in webs.iter().enumerate() {
            let reps = followed(ctx, w, opts)?;
            if !reps.is_empty() {
                replaceable += 1;
            }
            for (ri, s) in reps {
                let class = classifier.add(&s);
                reached.insert(class);
                let route = match k {
                    1 => Route::OneWeb,
                    2 => Route::TwoWeb,
                    _ => Route::ThreeWeb,
                };
                hits.push((class, WebRoute {
                    route,
                    web_index: wi,
                    circles: w.circles.clone(),
                    replacement: ri,
                    reversed_regulus: None,
                }));
                if k == 2 {
                    nest_spreads.push((wi, ri, w.circles.clone(), s));
                }
            }
        }
        census.push(WebCensus {
            k,
            webs: webs.len(),
            replaceable,
            spread_classes: reached.len(),
        });
    }

    for (wi, ri, circles, s) in &nest_spreads {
        for reg in reguli_in_spread(pg, s) {
            let derived = reverse_regulus(pg, s, &reg.lines)?;
            let class = classifier.add(&derived);
            hits.push((class, WebRoute {
                route: Route::Hybrid,
                web_index: *wi,
                circles: circles.clone(),
                replacement: *ri,
                reversed_regulus: Some(reg.lines.clone()),
            }));
        }
    }
    let regular_class = classifier.add(&regular);

    let fingerprints: Vec<Fingerprint> = classifier.fingerprint_all()?;

    let mut entries: Vec<AtlasEntry> = tables::PLANES_25
        .iter()
        .map(|r| AtlasEntry {
            label: r.label.to_owned(),
            p_rank: None,
            group_order: None,
            regulus_count: None,
            stabilizer_order: None,
            web_routes: Vec::new(),
            classes: Vec::new(),
        })
        .collect();
    let mut notes = Vec::new();
    for (i, f) in fingerprints.iter().enumerate() {
        let label = f.label_or_unknown().to_owned();
        let idx = match entries.iter().position(|e| e.label == label && (label != "unknown" || e.classes.is_empty())) {
            Some(j) => j,
            None => {
                entries.push(AtlasEntry {
                    label: label.clone(),
                    p_rank: None,
                    group_order: None,
                    regulus_count: None,
                    stabilizer_order: None,
                    web_routes: Vec::new(),
                    classes: Vec::new(),
                });
                entries.len() - 1
            }
        };
        let e = &mut entries[idx];
        if !e.classes.is_empty() {
            notes.push(format!("label {label} is carried by more than one spread class"));
        }
        e.classes.push(i);
        e.p_rank = Some(f.p_rank);
        e.group_order = Some(f.full_group_order);
        e.regulus_count = Some(f.regulus_count);
        e.stabilizer_order = Some(f.stabilizer_order);
    }
    for (class, route) in hits {
        let label = fingerprints[class].label_or_unknown();
        let e = entries
            .iter_mut()
            .find(|e| e.label == label && e.classes.contains(&class))
            .expect("every class has an entry");
        e.web_routes.push(route);
    }
    for e in &mut entries {
        e.web_routes.sort();
    }
    if fingerprints[regular_class].label.as_deref() != Some("S1") {
        notes.push("the regular spread did not receive label S1".into());
    }
    notes.push("labels are assigned from (p-rank, group order) alone; which of A2 and S4 is the nearfield plane is not decided here".into());

    Ok(Atlas {
        entries,
        census,
        notes,
        spreads: classifier.classes().iter().map(|c| c.representative.clone()).collect(),
    })
}

/// The replaced spreads followed for one web, with replacement indices.
fn followed(ctx: &Context, w: &Web, opts: AtlasOptions) -> Result<Vec<(usize, Spread)>> {
    let regular = ctx.regular_spread();
    let reps = find_bruck_replacements(ctx, w)?;
    let take = if opts.all_replacements { reps.len() } else { reps.len().min(1) };
    reps.iter()
        .take(take)
        .enumerate()
        .map(|(i, r)| Ok((i, apply_replacement(ctx, &regular, r)?)))
        .collect()
}
