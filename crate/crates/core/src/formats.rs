//! Plain-text files for spreads, webs and replacements.
//!
//! Spread file: a header `q=<q>`, then one row per line listing its sorted
//! point indices, rows sorted. Web file: a header `q=<q> k=<k>`, then one row
//! per circle listing its sorted spread-line indices, rows sorted.
//! Replacement file: a header `web=<path>` naming the web file, then one row
//! `circle_id orbit_index` per circle, or `circle_id - line...` for a choice
//! that is not a kernel orbit.

use std::fs;
use std::path::Path;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::projgeom::{LineId, Pg3, PointId};
use crate::replace::{CircleChoice, Replacement, ReplacementMode};
use crate::spreadcore::{CircleId, RegularSpread, Spread, SpreadSource};
use crate::webs::Web;

fn parse_err(path: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_owned(),
        line,
        msg: msg.into(),
    }
}

/// Non-blank rows with their 1-based line numbers.
fn rows(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn numbers<T: std::str::FromStr>(path: &str, n: usize, row: &str) -> Result<Vec<T>> {
    row.split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(path, n, format!("not a number: {t:?}"))))
        .collect()
}

/// Reads `key=value` pairs from a header row.
fn header(path: &str, n: usize, row: &str, keys: &[&str]) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    let fields: Vec<&str> = row.split_whitespace().collect();
    if fields.len() != keys.len() {
        return Err(parse_err(path, n, format!("expected header {}", keys.iter().map(|k| format!("{k}=<n>")).collect::<Vec<_>>().join(" "))));
    }
    for (f, k) in fields.iter().zip(keys) {
        let v = f
            .strip_prefix(k)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| parse_err(path, n, format!("expected {k}=<n>, found {f:?}")))?;
        out.push(v.parse().map_err(|_| parse_err(path, n, format!("bad value for {k}: {v:?}")))?);
    }
    Ok(out)
}

pub fn write_spread(pg: &Pg3, s: &Spread) -> String {
    let mut out = format!("q={}\n", s.q());
    // line ids follow the order of their sorted point tuples
    for &l in s.lines() {
        let row: Vec<String> = pg.points_of_line(l).iter().map(|p| p.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_spread(pg: &Pg3, text: &str, path: &str) -> Result<Spread> {
    let mut it = rows(text);
    let (n, head) = it.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let q = header(path, n, head, &["q"])?[0];
    if q != pg.q() {
        return Err(parse_err(path, n, format!("file is for q={q}, expected q={}", pg.q())));
    }
    let mut lines = Vec::new();
    let mut last = n;
    for (n, row) in it {
        let pts: Vec<PointId> = numbers(path, n, row)?;
        lines.push(line_of_points(pg, &pts).map_err(|m| parse_err(path, n, m))?);
        last = n;
    }
    // whole-file problems are reported at the last row read
    Spread::new(pg, lines, SpreadSource::External(path.to_owned())).map_err(|e| parse_err(path, last, e.to_string()))
}

fn line_of_points(pg: &Pg3, pts: &[PointId]) -> std::result::Result<LineId, String> {
    if pts.len() != pg.points_per_line() {
        return Err(format!("expected {} points, found {}", pg.points_per_line(), pts.len()));
    }
    if let Some(&p) = pts.iter().find(|&&p| p as usize >= pg.point_count()) {
        return Err(format!("point {p} out of range"));
    }
    if pts[0] == pts[1] {
        return Err("repeated point".into());
    }
    let l = pg.join(pts[0], pts[1]);
    let mut sorted = pts.to_vec();
    sorted.sort_unstable();
    if pg.points_of_line(l) != sorted {
        return Err("points are not a line".into());
    }
    Ok(l)
}

pub fn write_web(q: u32, rs: &RegularSpread, w: &Web) -> String {
    let mut out = format!("q={} k={}\n", q, w.k);
    let mut rows: Vec<&Vec<u8>> = w.circles.iter().map(|&c| &rs.circle(c).spread_line_indices).collect();
    rows.sort();
    for r in rows {
        let row: Vec<String> = r.iter().map(|i| i.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_web(ctx: &Context, text: &str, path: &str) -> Result<Web> {
    let rs = ctx.regular();
    let mut it = rows(text);
    let (n, head) = it.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let hv = header(path, n, head, &["q", "k"])?;
    if hv[0] != ctx.q() {
        return Err(parse_err(path, n, format!("file is for q={}, expected q={}", hv[0], ctx.q())));
    }
    let k = hv[1];
    let mut circles = Vec::new();
    let mut last = n;
    for (n, row) in it {
        let idx: Vec<usize> = numbers(path, n, row)?;
        circles.push(circle_of_lines(rs, &idx).map_err(|m| parse_err(path, n, m))?);
        last = n;
    }
    Web::new(rs, circles, k).map_err(|e| parse_err(path, last, e.to_string()))
}

fn circle_of_lines(rs: &RegularSpread, idx: &[usize]) -> std::result::Result<CircleId, String> {
    let n = rs.size();
    if idx.len() != rs.q() as usize + 1 {
        return Err(format!("expected {} spread lines, found {}", rs.q() + 1, idx.len()));
    }
    if idx.iter().any(|&i| i >= n) {
        return Err("spread line index out of range".into());
    }
    if idx[0] == idx[1] || idx[0] == idx[2] || idx[1] == idx[2] {
        return Err("repeated spread line".into());
    }
    let c = rs.circle_through(idx[0], idx[1], idx[2]);
    let mut sorted: Vec<u8> = idx.iter().map(|&i| i as u8).collect();
    sorted.sort_unstable();
    if rs.circle(c).spread_line_indices != sorted {
        return Err("spread lines are not a circle".into());
    }
    Ok(c)
}

pub fn write_replacement(r: &Replacement, web_path: &str) -> String {
    let mut out = format!("web={web_path}\n");
    for c in &r.choices {
        match c.orbit_index {
            Some(o) => out.push_str(&format!("{} {}\n", c.circle, o)),
            None => {
                let ls: Vec<String> = c.lines.iter().map(|l| l.to_string()).collect();
                out.push_str(&format!("{} - {}\n", c.circle, ls.join(" ")));
            }
        }
    }
    out
}

/// The web file named in a replacement file's header.
pub fn replacement_web_path(text: &str, path: &str) -> Result<String> {
    let (n, head) = rows(text).next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    head.strip_prefix("web=")
        .map(str::to_owned)
        .ok_or_else(|| parse_err(path, n, "expected header web=<path>"))
}

/// Parses a replacement of a known web. Kernel-orbit rows use the orbits of
/// the web's own multiplicity.
pub fn parse_replacement(ctx: &Context, web: &Web, text: &str, path: &str) -> Result<Replacement> {
    let rs = ctx.regular();
    let mut it = rows(text);
    let (n, head) = it.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    if !head.starts_with("web=") {
        return Err(parse_err(path, n, "expected header web=<path>"));
    }
    let mut choices = Vec::new();
    let mut hemi = false;
    let mut last = n;
    for (n, row) in it {
        last = n;
        let fields: Vec<&str> = row.split_whitespace().collect();
        if fields.len() < 2 {
            return Err(parse_err(path, n, "expected `circle_id orbit_index`"));
        }
        let circle: CircleId = fields[0].parse().map_err(|_| parse_err(path, n, "bad circle id"))?;
        if !web.contains(circle) {
            return Err(parse_err(path, n, format!("circle {circle} is not in the web")));
        }
        if fields[1] == "-" {
            hemi = true;
            let lines: Vec<LineId> = numbers(path, n, &fields[2..].join(" "))?;
            choices.push(CircleChoice {
                circle,
                orbit_index: None,
                lines,
            });
        } else {
            let o: usize = fields[1].parse().map_err(|_| parse_err(path, n, "bad orbit index"))?;
            let alpha = if web.k == 2 || hemi { 2 } else { web.k };
            let orbits = rs.semitransversals(circle, alpha).map_err(|e| parse_err(path, n, e.to_string()))?;
            let st = orbits.get(o).ok_or_else(|| parse_err(path, n, format!("orbit index {o} out of range")))?;
            choices.push(CircleChoice {
                circle,
                orbit_index: Some(o),
                lines: st.lines.clone(),
            });
        }
    }
    choices.sort_by_key(|c| c.circle);
    let mode = if hemi { ReplacementMode::Hemi } else { ReplacementMode::Bruck { k: web.k } };
    let r = Replacement {
        web: web.clone(),
        mode,
        choices,
    };
    r.validate(ctx).map_err(|e| parse_err(path, last, e.to_string()))?;
    Ok(r)
}

/// One row per circle: `id: spread-line indices`.
pub fn write_circles(rs: &RegularSpread) -> String {
    let mut out = String::new();
    for c in rs.circles() {
        let row: Vec<String> = c.spread_line_indices.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!("{}: {}\n", c.id, row.join(" ")));
    }
    out
}

pub fn read_spread(pg: &Pg3, path: &Path) -> Result<Spread> {
    let text = fs::read_to_string(path)?;
    parse_spread(pg, &text, &path.display().to_string())
}

pub fn read_web(ctx: &Context, path: &Path) -> Result<Web> {
    let text = fs::read_to_string(path)?;
    parse_web(ctx, &text, &path.display().to_string())
}

/// Reads a replacement file and the web file it names, resolved relative to
/// the replacement file's directory.
pub fn read_replacement(ctx: &Context, path: &Path) -> Result<Replacement> {
    let text = fs::read_to_string(path)?;
    let shown = path.display().to_string();
    let web_ref = replacement_web_path(&text, &shown)?;
    let web_path = path.parent().unwrap_or(Path::new(".")).join(&web_ref);
    let web = read_web(ctx, &web_path)?;
    parse_replacement(ctx, &web, &text, &shown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::replace::find_bruck_replacements;
    use crate::webs::search_webs;

    #[test]
    fn spread_round_trip() {
        let ctx = Context::new(5).unwrap();
        let s = ctx.regular_spread();
        let text = write_spread(ctx.pg(), &s);
        assert!(text.starts_with("q=5\n"));
        assert_eq!(text.lines().count(), 27);
        assert_eq!(parse_spread(ctx.pg(), &text, "x").unwrap(), s);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let ctx = Context::new(5).unwrap();
        let mut text = write_spread(ctx.pg(), &ctx.regular_spread());
        text = text.replacen('\n', "\n0 1 2 3 4 x\n", 1);
        match parse_spread(ctx.pg(), &text, "f.spr") {
            Err(Error::Parse { line, path, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(path, "f.spr");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_spread(ctx.pg(), "k=5\n", "f"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_spread(ctx.pg(), "q=5\n0 1 2 3 4 7\n", "f"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_spread(ctx.pg(), "q=5\n\n0 1 2 3 4 5\n", "f"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn web_and_replacement_round_trip() {
        let ctx = Context::new(5).unwrap();
        let nests = search_webs(&ctx, 2);
        for n in &nests {
            let text = write_web(5, ctx.regular(), n);
            let back = parse_web(&ctx, &text, "w").unwrap();
            assert_eq!(&back, n);
            for r in find_bruck_replacements(&ctx, n).unwrap() {
                let rt = write_replacement(&r, "w.web");
                assert_eq!(replacement_web_path(&rt, "r").unwrap(), "w.web");
                assert_eq!(parse_replacement(&ctx, n, &rt, "r").unwrap(), r);
            }
        }
    }
}
