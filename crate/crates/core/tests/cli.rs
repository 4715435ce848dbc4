use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use spreadweb::formats::parse_spread;
use spreadweb::Context;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spreadweb"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn listing(dir: &Path) -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read_to_string(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn regular_spread_file_and_p_rank() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["regular", "--q", "5", "--out", "regular_q5.spr"]);
    assert!(o.status.success());
    let text = fs::read_to_string(tmp.path().join("regular_q5.spr")).unwrap();
    let ctx = Context::new(5).unwrap();
    let s = parse_spread(ctx.pg(), &text, "regular_q5.spr").unwrap();
    assert_eq!(s, ctx.regular_spread());
    let o = run(tmp.path(), &["prank", "--spread", "regular_q5.spr"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "226");
}

#[test]
fn nest_search_writes_one_file_per_nest() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["search-webs", "--q", "5", "--k", "2", "--out", "nests"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("14 webs\n"));
    assert_eq!(listing(&tmp.path().join("nests")).len(), 14);
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let tmp = tempfile::tempdir().unwrap();
    for jobs in ["1", "4"] {
        let out = format!("j{jobs}");
        let o = run(tmp.path(), &["--jobs", jobs, "search-webs", "--q", "5", "--k", "2", "--out", &out]);
        assert!(o.status.success());
        let web = format!("{out}/web_q5_k2_005.web");
        let o = run(tmp.path(), &["--jobs", jobs, "replace", "--web", &web, "--all", "--out", &out]);
        assert!(o.status.success());
    }
    let strip = |v: Vec<(String, String)>| -> Vec<(String, String)> {
        // replacement files record the absolute web path
        v.into_iter().filter(|(n, _)| !n.ends_with(".rep")).collect()
    };
    assert_eq!(strip(listing(&tmp.path().join("j1"))), strip(listing(&tmp.path().join("j4"))));
}

#[test]
fn replaced_and_derived_spreads_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let ctx = Context::new(5).unwrap();
    assert!(run(tmp.path(), &["search-webs", "--q", "5", "--k", "2", "--out", "n"]).status.success());
    let o = run(tmp.path(), &["replace", "--web", "n/web_q5_k2_000.web", "--out", "r"]);
    assert!(o.status.success());
    let o = run(tmp.path(), &["derive", "--spread", "r/web_q5_k2_000_r00.spr", "--out", "d"]);
    assert!(o.status.success());
    let n = stdout(&o).lines().next().unwrap().split(' ').next().unwrap().parse::<usize>().unwrap();
    let derived = listing(&tmp.path().join("d"));
    assert_eq!(derived.len(), n);
    for (name, text) in listing(&tmp.path().join("r")).into_iter().chain(derived) {
        if name.ends_with(".spr") {
            let s = parse_spread(ctx.pg(), &text, &name).unwrap();
            assert_eq!(spreadweb::formats::write_spread(ctx.pg(), &s), text);
        }
    }
    let o = run(tmp.path(), &["iso", "--a", "r/web_q5_k2_000_r00.spr", "--b", "r/web_q5_k2_000_r00.spr"]);
    assert!(stdout(&o).starts_with("isomorphic"));
    let o = run(tmp.path(), &["stab", "--spread", "r/web_q5_k2_000_r00.spr"]);
    assert!(stdout(&o).contains("group order 360000"));
}

#[test]
fn malformed_input_reports_the_line() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(run(tmp.path(), &["regular", "--q", "5", "--out", "a.spr"]).status.success());
    let text = fs::read_to_string(tmp.path().join("a.spr")).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines[3] = "1 2 x";
    fs::write(tmp.path().join("bad.spr"), lines.join("\n")).unwrap();
    let o = run(tmp.path(), &["prank", "--spread", "bad.spr"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.spr:4"));
}

#[test]
fn usage_errors_exit_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(tmp.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(tmp.path(), &["prank"]).status.code(), Some(1));
    assert_eq!(run(tmp.path(), &["prank", "--spread", "missing.spr"]).status.code(), Some(1));
    assert_eq!(run(tmp.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn verify_exit_code_tracks_failures() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path(), &["verify", "--q", "5"]);
    let out = stdout(&o);
    let failed = out.lines().any(|l| l.starts_with("FAIL"));
    assert!(out.lines().any(|l| l.starts_with("PASS")));
    assert_eq!(o.status.code(), Some(if failed { 2 } else { 0 }));
}
