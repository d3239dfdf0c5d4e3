//! `goodcoord`: validate, analyze, shrink, build bases for, generate and
//! render rectilinear chart systems.
//!
//! Exit status: 0 on pass or when an artifact was produced, 1 when
//! witnesses were found (or no certified stage exists), 2 on invalid input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use goodcoord::atlas::Atlas;
use goodcoord::basis::{basis_family, build_compact_model, verify_nbb, KPoint};
use goodcoord::corpus::{builtin, generate, GenParams, BUILTINS};
use goodcoord::format::{analysis_json, kpoint_json, nbb_json, parse_atlas, serialize_atlas, shrink_json, to_text, validation_json};
use goodcoord::quotient::{analyze, AnalyzeOptions, RelationModel};
use goodcoord::rational::{dyadic, parse_rational, Rational};
use goodcoord::render::{render_svg, RenderOptions};
use goodcoord::shrink::{shrink_to_strong, ShrinkSchedule};
use goodcoord::validate::validate_weak_gcs;
use goodcoord::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "goodcoord", version, about = "Exact analysis of rectilinear chart systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the main artifact here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Analysis {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    falsifier_depth: u32,
}

impl Analysis {
    fn options(&self) -> AnalyzeOptions {
        AnalyzeOptions { seed: self.seed, falsifier_depth: self.falsifier_depth, ..AnalyzeOptions::default() }
    }
}

#[derive(Args, Clone)]
struct Schedule {
    /// Initial metric shrinking radius, e.g. `1/2`; chosen automatically when absent.
    #[arg(long, value_parser = rational_arg)]
    delta0: Option<Rational>,
    #[arg(long, default_value_t = 32)]
    max_n: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of a weak system.
    Validate {
        input: String,
        #[command(flatten)]
        out: Output,
    },
    /// Check transitivity and the Hausdorff property of the gluing relation.
    Analyze {
        input: String,
        #[command(flatten)]
        analysis: Analysis,
        #[command(flatten)]
        out: Output,
    },
    /// Shrink to a certified strong system.
    Shrink {
        input: String,
        #[command(flatten)]
        schedule: Schedule,
        #[command(flatten)]
        analysis: Analysis,
        /// Also write the full certificate and stage trace here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Shrink, build the compact model and check the dyadic basis at sample points.
    Basis {
        input: String,
        #[command(flatten)]
        schedule: Schedule,
        #[arg(long, default_value_t = 3)]
        level: u32,
        /// Points `label:x1,x2,...`; defaults to one point per support cell.
        #[arg(long = "point")]
        points: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Generate random weak systems.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Directory for `gen-<seed>.json` files; a single document goes to standard output otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw charts, pair domains and analysis witnesses as SVG.
    Render {
        input: String,
        /// Projection axes `a,b` for charts of dimension three and more.
        #[arg(long, value_parser = axes_arg, default_value = "0,1")]
        axes: (usize, usize),
        #[arg(long)]
        no_witnesses: bool,
        #[command(flatten)]
        out: Output,
    },
    /// List the builtin instances accepted in place of an input file.
    Builtins,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map(|(r, _)| r).map_err(|e| e.to_string())
}

fn axes_arg(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected `a,b`")?;
    Ok((a.trim().parse().map_err(|_| "bad axis")?, b.trim().parse().map_err(|_| "bad axis")?))
}

/// Failure with its exit status.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::MaxNExhausted { .. } | Error::NotStrong(_) | Error::NotTransitive(_) | Error::Inconclusive(_) => 1,
            _ => 2,
        };
        Fail(code, e.to_string())
    }
}

fn load(input: &str) -> Result<Atlas, Fail> {
    let path = Path::new(input);
    if !path.exists() {
        return builtin(input).ok_or_else(|| Fail(2, format!("{input}: no such file or builtin")));
    }
    let text = fs::read_to_string(path).map_err(|e| Fail(2, format!("{input}: {e}")))?;
    let parsed = parse_atlas(&text).map_err(|e| Fail(2, format!("{input}: {e}")))?;
    for w in &parsed.warnings {
        eprintln!("warning: {input}: {w}");
    }
    Ok(parsed.atlas)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Fail(2, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_point(a: &Atlas, s: &str) -> Result<KPoint, Fail> {
    let (label, coords) = s.rsplit_once(':').ok_or_else(|| Fail(2, format!("point `{s}`: expected label:x1,x2,...")))?;
    let chart = a.index(label)?;
    let x = coords.split(',').map(|c| rational_arg(c).map_err(|e| Fail(2, e))).collect::<Result<Vec<_>, _>>()?;
    Ok(KPoint::new(chart, x))
}

fn run(cli: Cli) -> Result<u8, Fail> {
    match cli.command {
        Command::Validate { input, out } => {
            let a = load(&input)?;
            let r = validate_weak_gcs(&a);
            emit(&out.out, &to_text(&validation_json(&r)))?;
            Ok(if r.pass() { 0 } else { 2 })
        }
        Command::Analyze { input, analysis, out } => {
            let a = load(&input)?;
            let r = validate_weak_gcs(&a);
            if !r.pass() {
                emit(&out.out, &to_text(&json!({"validation": validation_json(&r)})))?;
                return Ok(2);
            }
            let rm = RelationModel::from_atlas(&a)?;
            let an = analyze(&rm, &analysis.options())?;
            emit(&out.out, &to_text(&analysis_json(&rm, &an)))?;
            Ok(if an.strong() { 0 } else { 1 })
        }
        Command::Shrink { input, schedule, analysis, report, out } => {
            let a = load(&input)?;
            let sched = ShrinkSchedule { delta0: schedule.delta0, max_n: schedule.max_n, analyze: analysis.options() };
            let outcome = shrink_to_strong(&a, &sched)?;
            if let Some(p) = report {
                fs::write(&p, to_text(&shrink_json(&a, &outcome)?)).map_err(|e| Fail(2, format!("{}: {e}", p.display())))?;
            }
            emit(&out.out, &serialize_atlas(outcome.atlas()))?;
            Ok(0)
        }
        Command::Basis { input, schedule, level, points, out } => {
            let a = load(&input)?;
            let outcome = shrink_to_strong(&a, &ShrinkSchedule { delta0: schedule.delta0, max_n: schedule.max_n, ..Default::default() })?;
            let strong = outcome.atlas();
            let cm = build_compact_model(strong, &outcome.inner_sets()?)?;
            let fam = basis_family(level)?;
            let qs: Vec<KPoint> = if points.is_empty() {
                outcome
                    .initial
                    .core
                    .iter()
                    .enumerate()
                    .flat_map(|(p, c)| c.cells().into_iter().map(move |b| KPoint::new(p, b.sample_point())))
                    .collect()
            } else {
                points.iter().map(|s| parse_point(strong, s)).collect::<Result<_, _>>()?
            };
            let mut reports = Vec::new();
            let mut ok = true;
            for q in &qs {
                let opens = (1..=3).map(|k| cm.ball_open(q, &dyadic(k))).collect::<Result<Vec<_>, _>>()?;
                let r = verify_nbb(&cm, q, &fam, &opens)?;
                ok &= r.neighbourhoods_hold() && r.refinements_hold();
                let mut v = nbb_json(&cm.rm, &r);
                v["point"] = kpoint_json(&cm.rm, q);
                reports.push(v);
            }
            let doc: Value = json!({"level": level, "n": outcome.certificate.n, "points": reports, "pass": ok});
            emit(&out.out, &to_text(&doc))?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Gen { seed, count, out } => {
            let params = GenParams::default();
            match out {
                None if count == 1 => emit(&None, &serialize_atlas(&generate(seed, &params)))?,
                None => return Err(Fail(2, "--out <dir> is required when --count exceeds 1".into())),
                Some(dir) => {
                    fs::create_dir_all(&dir).map_err(|e| Fail(2, format!("{}: {e}", dir.display())))?;
                    for s in seed..seed + count {
                        let p = dir.join(format!("gen-{s}.json"));
                        fs::write(&p, serialize_atlas(&generate(s, &params))).map_err(|e| Fail(2, format!("{}: {e}", p.display())))?;
                    }
                }
            }
            Ok(0)
        }
        Command::Render { input, axes, no_witnesses, out } => {
            let a = load(&input)?;
            let opts = RenderOptions { axes };
            let svg = if no_witnesses || !validate_weak_gcs(&a).pass() {
                render_svg(&a, None, &opts)?
            } else {
                let rm = RelationModel::from_atlas(&a)?;
                let an = analyze(&rm, &AnalyzeOptions::default())?;
                render_svg(&a, Some((&rm, &an)), &opts)?
            };
            emit(&out.out, &svg)?;
            Ok(0)
        }
        Command::Builtins => {
            for b in BUILTINS {
                println!("{b}");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
