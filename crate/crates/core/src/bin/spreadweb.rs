use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use spreadweb::classify::atlas::{genealogy_atlas, AtlasOptions};
use spreadweb::classify::{fingerprint_and_label, spread_stabilizer_order, spreads_isomorphic};
use spreadweb::formats;
use spreadweb::planes::spread_p_rank;
use spreadweb::regression::{self, Check};
use spreadweb::replace::{apply_replacement, find_bruck_replacements, find_hemi_replacements, reguli_in_spread, reverse_regulus};
use spreadweb::webs::search_webs;
use spreadweb::{Context, Error};

#[derive(Parser)]
#[command(name = "spreadweb", version, about = "Regulus webs, spread replacement and translation planes of order q²")]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the regular spread.
    Regular {
        #[arg(long, default_value_t = 5)]
        q: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the circles of the regular spread by spread-line index.
    Circles {
        #[arg(long, default_value_t = 5)]
        q: u32,
    },
    /// Find all k-webs up to equivalence and write one file per web.
    SearchWebs {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bruck-replace a web in the regular spread.
    Replace {
        #[arg(long)]
        web: PathBuf,
        /// Write every replacement, not just the first.
        #[arg(long)]
        all: bool,
        /// Use hemi-replacements (nests only).
        #[arg(long)]
        hemi: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reverse each regulus contained in a spread.
    Derive {
        #[arg(long)]
        spread: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank of the plane's incidence matrix over the base field.
    Prank {
        #[arg(long)]
        spread: PathBuf,
    },
    /// Order of the spread's stabilizer in GL(4,q) and of the plane's group.
    Stab {
        #[arg(long)]
        spread: PathBuf,
    },
    /// Invariants and label of a spread.
    Fingerprint {
        #[arg(long)]
        spread: PathBuf,
    },
    /// Test two spreads for isomorphism and print a witness.
    Iso {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Reproduce the plane table and the web-route grid for q = 5.
    Atlas {
        #[arg(long, default_value_t = 5)]
        q: u32,
        /// Follow every Bruck replacement of each web.
        #[arg(long)]
        all_replacements: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare computed values with the published ones.
    Verify {
        #[arg(long, default_value_t = 5)]
        q: u32,
    },
}

enum Failure {
    Usage(String),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Mismatch) => ExitCode::from(2),
    }
}

fn context(q: u32) -> Result<Context, Failure> {
    if q != 5 && q != 7 {
        eprintln!("warning: no published values are embedded for q={q}");
    }
    Ok(Context::new(q)?)
}

/// Reads the `q=` header of a spread or web file.
fn file_q(path: &Path) -> Result<u32, Failure> {
    let text = fs::read_to_string(path)?;
    let head = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    head.split_whitespace()
        .find_map(|f| f.strip_prefix("q="))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Failure::Usage(format!("{}:1: expected a q=<q> header", path.display())))
}

fn out_dir(out: &Option<PathBuf>) -> Result<Option<&Path>, Failure> {
    if let Some(d) = out {
        fs::create_dir_all(d)?;
    }
    Ok(out.as_deref())
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or("out".into(), |s| s.to_string_lossy().into_owned())
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Regular { q, out } => {
            let ctx = context(q)?;
            let text = formats::write_spread(ctx.pg(), &ctx.regular_spread());
            match out {
                Some(p) => fs::write(p, text)?,
                None => print!("{text}"),
            }
        }
        Cmd::Circles { q } => {
            let ctx = context(q)?;
            print!("{}", formats::write_circles(ctx.regular()));
        }
        Cmd::SearchWebs { q, k, out } => {
            let ctx = context(q)?;
            let webs = search_webs(&ctx, k);
            println!("{} webs", webs.len());
            let dir = out_dir(&out)?.unwrap_or(Path::new("."));
            for (i, w) in webs.iter().enumerate() {
                let name = format!("web_q{q}_k{k}_{i:03}.web");
                fs::write(dir.join(&name), formats::write_web(q, ctx.regular(), w))?;
                println!("{name}\t{} circles\t{} lines", w.len(), w.covered_lines.len());
            }
        }
        Cmd::Replace { web, all, hemi, out } => {
            let ctx = context(file_q(&web)?)?;
            let w = formats::read_web(&ctx, &web)?;
            let reps = if hemi { find_hemi_replacements(&ctx, &w)? } else { find_bruck_replacements(&ctx, &w)? };
            println!("{} replacements", reps.len());
            let take = if all { reps.len() } else { reps.len().min(1) };
            let dir = out_dir(&out)?.unwrap_or(Path::new("."));
            let web_name = fs::canonicalize(&web)?;
            let base = stem(&web);
            for (i, r) in reps.iter().take(take).enumerate() {
                let s = apply_replacement(&ctx, &ctx.regular_spread(), r)?;
                let spr = format!("{base}_r{i:02}.spr");
                let rep = format!("{base}_r{i:02}.rep");
                fs::write(dir.join(&spr), formats::write_spread(ctx.pg(), &s))?;
                fs::write(dir.join(&rep), formats::write_replacement(r, &web_name.display().to_string()))?;
                println!("{spr}");
            }
        }
        Cmd::Derive { spread, out } => {
            let ctx = context(file_q(&spread)?)?;
            let s = formats::read_spread(ctx.pg(), &spread)?;
            let reguli = reguli_in_spread(ctx.pg(), &s);
            println!("{} reguli", reguli.len());
            let dir = out_dir(&out)?.unwrap_or(Path::new("."));
            let base = stem(&spread);
            for (i, r) in reguli.iter().enumerate() {
                let d = reverse_regulus(ctx.pg(), &s, &r.lines)?;
                let name = format!("{base}_d{i:02}.spr");
                fs::write(dir.join(&name), formats::write_spread(ctx.pg(), &d))?;
                println!("{name}");
            }
        }
        Cmd::Prank { spread } => {
            let ctx = context(file_q(&spread)?)?;
            let s = formats::read_spread(ctx.pg(), &spread)?;
            println!("{}", spread_p_rank(ctx.pg(), &s)?);
        }
        Cmd::Stab { spread } => {
            let ctx = context(file_q(&spread)?)?;
            let s = formats::read_spread(ctx.pg(), &spread)?;
            let stab = spread_stabilizer_order(ctx.pg(), &s);
            let rank = spread_p_rank(ctx.pg(), &s)?;
            println!("stabilizer {stab}");
            println!("group order {}", spreadweb::classify::full_group_order(ctx.q(), stab, rank));
        }
        Cmd::Fingerprint { spread } => {
            let ctx = context(file_q(&spread)?)?;
            let s = formats::read_spread(ctx.pg(), &spread)?;
            let f = fingerprint_and_label(ctx.pg(), &s)?;
            println!("p_rank {}", f.p_rank);
            println!("group_order {}", f.full_group_order);
            println!("regulus_count {}", f.regulus_count);
            println!("label {}", f.label_or_unknown());
        }
        Cmd::Iso { a, b } => {
            let q = file_q(&a)?;
            if file_q(&b)? != q {
                return Err(Failure::Usage("spreads are over different fields".into()));
            }
            let ctx = context(q)?;
            let s1 = formats::read_spread(ctx.pg(), &a)?;
            let s2 = formats::read_spread(ctx.pg(), &b)?;
            match spreads_isomorphic(ctx.pg(), &s1, &s2) {
                Some(m) => {
                    println!("isomorphic");
                    for row in m.matrix {
                        let r: Vec<String> = row.iter().map(u32::to_string).collect();
                        println!("{}", r.join(" "));
                    }
                }
                None => println!("not isomorphic"),
            }
        }
        Cmd::Atlas { q, all_replacements, out } => {
            let ctx = context(q)?;
            let atlas = genealogy_atlas(&ctx, AtlasOptions { all_replacements })?;
            print!("{}", atlas.to_tsv());
            for n in &atlas.notes {
                eprintln!("note: {n}");
            }
            if let Some(dir) = out_dir(&out)? {
                fs::write(dir.join("atlas.tsv"), atlas.to_tsv())?;
                fs::write(dir.join("atlas.json"), atlas.to_json())?;
                let spreads: Vec<(String, String)> = atlas
                    .entries
                    .par_iter()
                    .flat_map_iter(|e| e.classes.iter().map(move |&c| (e.label.clone(), c)))
                    .map(|(l, c)| (format!("{l}_{c:02}.spr"), formats::write_spread(ctx.pg(), &atlas.spreads[c])))
                    .collect();
                for (name, text) in spreads {
                    fs::write(dir.join(name), text)?;
                }
            }
        }
        Cmd::Verify { q } => {
            let ctx = context(q)?;
            let checks: Vec<Check> = match q {
                5 => regression::all_checks_q5(&ctx)?,
                7 => regression::all_checks_q7(&ctx)?,
                _ => regression::structure_checks(&ctx),
            };
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            println!("{} of {} checks passed", checks.len() - failed, checks.len());
            if failed > 0 {
                return Err(Failure::Mismatch);
            }
        }
    }
    Ok(())
}
