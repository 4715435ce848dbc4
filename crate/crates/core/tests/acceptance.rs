//! One line per acceptance criterion. Set SPREADWEB_Q7=1 to include the
//! long q = 7 census.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spreadweb::classify::atlas::{genealogy_atlas, Atlas, AtlasOptions};
use spreadweb::classify::{spread_stabilizer_order, SpreadClassifier};
use spreadweb::group::apply_perm;
use spreadweb::planes::spread_p_rank;
use spreadweb::projgeom::LinearMap;
use spreadweb::regression::{self, Check};
use spreadweb::replace::{apply_replacement, complement_replacement, find_bruck_replacements, find_hemi_replacements, nest_unions};
use spreadweb::spreadcore::Spread;
use spreadweb::tables::{self, Route, PLANES_25, ROUTES_25};
use spreadweb::webs::{search_webs, verify_web};
use spreadweb::{Context, Result};

struct Outcome {
    checks: Vec<Check>,
    skipped: bool,
}

impl Outcome {
    fn of(checks: Vec<Check>) -> Self {
        Self { checks, skipped: false }
    }
}

fn set(ls: impl IntoIterator<Item = String>) -> String {
    let v: Vec<String> = ls.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    format!("{{{}}}", v.join(","))
}

fn report(n: usize, title: &str, budget: Duration, f: impl FnOnce() -> Result<Outcome>) -> bool {
    let start = Instant::now();
    let outcome = f();
    let took = start.elapsed();
    match outcome {
        Ok(o) if o.skipped => {
            println!("SKIP [{n:>2}] {title}");
            true
        }
        Ok(o) => {
            let in_time = took <= budget;
            let ok = in_time && o.checks.iter().all(Check::passed);
            let tag = if ok { "PASS" } else { "FAIL" };
            println!("{tag} [{n:>2}] {title} ({:.1} s)", took.as_secs_f64());
            for c in o.checks.iter().filter(|c| !c.passed()) {
                println!("         {c}");
            }
            if !in_time {
                println!("         over the {} s budget", budget.as_secs());
            }
            ok
        }
        Err(e) => {
            println!("FAIL [{n:>2}] {title}: {e}");
            false
        }
    }
}

fn three_web_checks(ctx: &Context, atlas: &Atlas) -> Result<Vec<Check>> {
    let pg = ctx.pg();
    let webs = search_webs(ctx, 3);
    let regular = ctx.regular_spread();
    let mut replaceable = 0;
    let mut classes = SpreadClassifier::new(pg);
    for w in &webs {
        let reps = find_bruck_replacements(ctx, w)?;
        if !reps.is_empty() {
            replaceable += 1;
        }
        for r in &reps {
            classes.add(&apply_replacement(ctx, &regular, r)?);
        }
    }
    let labels: Vec<String> = classes
        .fingerprint_all()?
        .iter()
        .map(|f| f.label_or_unknown().to_owned())
        .collect();
    let expected = ROUTES_25.iter().filter(|(_, m)| m[Route::ThreeWeb.column()]).map(|(l, _)| l.to_string());
    let mut out = vec![
        Check::new("3-webs", tables::THREE_WEBS_Q5, webs.len()),
        Check::new("Bruck-replaceable 3-webs", tables::THREE_WEBS_Q5_BRUCK, replaceable),
        Check::new("spreads from 3-webs", tables::THREE_WEB_SPREADS_Q5, classes.len()),
        Check::new("3-web labels", set(expected), set(labels)),
    ];
    // the remaining two items come from the atlas's own 3-web pass
    out.extend(
        regression::atlas_checks(atlas)
            .into_iter()
            .filter(|c| c.name == "3-webs giving B8" || c.name == "a 3-web gives the regular spread"),
    );
    Ok(out)
}

fn union_checks(ctx: &Context) -> Result<Vec<Check>> {
    let nests = search_webs(ctx, 2);
    let unions = nest_unions(ctx, &nests)?;
    let mut valid = true;
    let mut labels = Vec::new();
    for u in &unions {
        valid &= u.replacement.validate(ctx).is_ok();
        let s = apply_replacement(ctx, &ctx.regular_spread(), &u.replacement)?;
        labels.push(spreadweb::classify::fingerprint_and_label(ctx.pg(), &s)?.label_or_unknown().to_owned());
    }
    Ok(vec![
        Check::new("union classes", tables::NEST_UNIONS_Q5, unions.len()),
        Check::new("union planes", "{A2,B3,B7}", set(labels)),
        Check::new("combined replacements valid", true, valid),
    ])
}

fn complement_checks(ctx: &Context) -> Result<Vec<Check>> {
    let mut found = 0;
    let mut valid = 0;
    let mut involutive = 0;
    for n in search_webs(ctx, 2) {
        for h in find_hemi_replacements(ctx, &n)? {
            found += 1;
            if let Ok(c) = complement_replacement(ctx, &h) {
                valid += 1;
                if complement_replacement(ctx, &c).ok().as_ref() == Some(&h) {
                    involutive += 1;
                }
            }
        }
    }
    Ok(vec![
        Check::new("hemi-replacements found", true, found > 0),
        Check::new("complements valid", found, valid),
        Check::new("complement is an involution", found, involutive),
    ])
}

fn invariant_checks(atlas: &Atlas, want_rank: bool) -> Vec<Check> {
    let prefix = if want_rank { "p-rank" } else { "group order" };
    regression::atlas_checks(atlas)
        .into_iter()
        .filter(|c| c.name.starts_with(prefix) && !c.name.starts_with("p-rank invariance"))
        .collect()
}

fn taxonomy_checks(atlas: &Atlas) -> Vec<Check> {
    let pairs: BTreeSet<(usize, u64)> = PLANES_25.iter().map(|r| (r.p_rank, r.group_order)).collect();
    let mut out = vec![Check::new("distinct (p-rank, order) pairs", 21, pairs.len())];
    out.extend(
        regression::atlas_checks(atlas)
            .into_iter()
            .filter(|c| c.name.starts_with("regulus taxonomy") || c.name == "unlabelled spread classes"),
    );
    let subregular: Vec<String> = PLANES_25
        .iter()
        .filter(|r| r.label.starts_with('S') && r.label != "S1")
        .filter(|r| atlas.entry(r.label).is_some_and(|e| e.raw_marks()[Route::OneWeb.column()]))
        .map(|r| r.label.to_owned())
        .collect();
    out.push(Check::new("subregular planes reached from disjoint reguli", "{S2,S3,S4,S5}", set(subregular)));
    out
}

fn grid_checks(atlas: &Atlas) -> Vec<Check> {
    let mut out: Vec<Check> = regression::atlas_checks(atlas)
        .into_iter()
        .filter(|c| c.name.ends_with(" column") || c.name == "non-regular planes without 3-webs")
        .collect();
    let b2 = atlas.entry("B2").map_or([false; 4], |e| e.marks());
    out.push(Check::new("B2 row empty", true, b2 == [false; 4]));
    out
}

fn q7_checks() -> Result<Outcome> {
    if std::env::var_os("SPREADWEB_Q7").is_none() {
        return Ok(Outcome {
            checks: Vec::new(),
            skipped: true,
        });
    }
    let ctx = Context::new(7)?;
    let checks = regression::all_checks_q7(&ctx)?
        .into_iter()
        .filter(|c| !c.name.starts_with("spread lines") && !c.name.starts_with("points") && !c.name.starts_with("reguli") && !c.name.starts_with("kernel"))
        .collect();
    Ok(Outcome::of(checks))
}

fn random_map(rng: &mut ChaCha8Rng) -> LinearMap {
    loop {
        let mut m = [[0u32; 4]; 4];
        for row in &mut m {
            for x in row.iter_mut() {
                *x = rng.gen_range(0..5);
            }
        }
        let map = LinearMap::from_rows(5, m);
        if map.determinant() != 0 {
            return map;
        }
    }
}

/// The property suite, using nothing from the published tables.
fn property_checks(ctx: &Context) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let rs = ctx.regular();
    let pg = ctx.pg();
    let group = ctx.group();

    let mut web_ok = true;
    for _ in 0..500 {
        let size = rng.gen_range(1..8);
        let mut circles: Vec<u16> = (0..size).map(|_| rng.gen_range(0..130)).collect();
        circles.sort_unstable();
        circles.dedup();
        let k = rng.gen_range(1..4);
        let mut count = [0u32; 26];
        for &c in &circles {
            for l in rs.circle_lines(c) {
                count[rs.position_of(l).unwrap()] += 1;
            }
        }
        web_ok &= verify_web(rs, &circles, k) == count.iter().all(|&m| m == 0 || m == k);
    }

    let mut canon_ok = true;
    for _ in 0..200 {
        let mut set: Vec<u16> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..130)).collect();
        set.sort_unstable();
        set.dedup();
        let perm = group.circle_permutation(rs, rng.gen_range(0..group.order()));
        let mut image = apply_perm(&perm, &set);
        image.sort_unstable();
        canon_ok &= group.canonical(&image) == group.canonical(&set);
    }

    let regular = ctx.regular_spread();
    let mut replaced: Vec<Spread> = Vec::new();
    let mut valid = true;
    for k in [1, 2, 3] {
        for w in search_webs(ctx, k) {
            for r in find_bruck_replacements(ctx, &w)? {
                match apply_replacement(ctx, &regular, &r) {
                    Ok(s) => {
                        if k == 2 && replaced.len() < 6 {
                            replaced.push(s);
                        }
                    }
                    Err(_) => valid = false,
                }
            }
        }
    }

    let mut rank_ok = true;
    let mut stab_ok = true;
    for s in &replaced {
        let g = random_map(&mut rng);
        let t = s.transform(pg, &g);
        rank_ok &= spread_p_rank(pg, s)? == spread_p_rank(pg, &t)?;
        let a = spread_stabilizer_order(pg, s);
        stab_ok &= a % 4 == 0 && a == spread_stabilizer_order(pg, &t);
    }
    Ok(vec![
        Check::new("web verification agrees with line counts", true, web_ok),
        Check::new("canonical form constant on orbits", true, canon_ok),
        Check::new("every replacement is a spread", true, valid),
        Check::new("p-rank invariant under GL(4,5)", true, rank_ok),
        Check::new("stabilizer order invariant under conjugation", true, stab_ok),
    ])
}

fn main() -> ExitCode {
    let ctx = Context::new(5).expect("q = 5 is supported");
    let secs = Duration::from_secs;
    let mut ok = true;

    ok &= report(1, "structure of the regular spread", secs(1), || Ok(Outcome::of(regression::structure_checks(&ctx))));
    ok &= report(2, "nest census", secs(60), || {
        let checks = regression::nest_checks(&ctx)?.into_iter().take(2).collect();
        Ok(Outcome::of(checks))
    });

    let start = Instant::now();
    let atlas = genealogy_atlas(&ctx, AtlasOptions::default());
    let atlas_time = start.elapsed();
    let atlas = match atlas {
        Ok(a) => a,
        Err(e) => {
            println!("FAIL atlas could not be built: {e}");
            return ExitCode::FAILURE;
        }
    };

    ok &= report(3, "3-web census", secs(600), || Ok(Outcome::of(three_web_checks(&ctx, &atlas)?)));
    ok &= report(4, "nest unions", secs(60), || Ok(Outcome::of(union_checks(&ctx)?)));
    ok &= report(5, "hemi-replacement complements", secs(60), || Ok(Outcome::of(complement_checks(&ctx)?)));
    ok &= report(6, "p-ranks of reachable planes", secs(100), || Ok(Outcome::of(invariant_checks(&atlas, true))));
    ok &= report(7, "group orders of reachable planes", secs(1200), || Ok(Outcome::of(invariant_checks(&atlas, false))));
    ok &= report(8, "fingerprints and taxonomy", secs(60), || Ok(Outcome::of(taxonomy_checks(&atlas))));
    ok &= report(9, "derivation genealogy", secs(300), || Ok(Outcome::of(regression::derivation_checks(&ctx, &atlas)?)));
    ok &= report(10, "web-route grid", secs(1800).saturating_sub(atlas_time), || Ok(Outcome::of(grid_checks(&atlas))));
    ok &= report(11, "nest census at q = 7", secs(4 * 3600), q7_checks);
    ok &= report(12, "property suite", secs(300), || Ok(Outcome::of(property_checks(&ctx)?)));

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
