//! The `crosscount` command line. Every report goes to stdout as JSON.
//!
//! Exit codes: 0 when everything checks out, 1 when a report contains a
//! violation, 2 for usage and input errors.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use crosscount::constructions::{build_extremal, verify_construction, ConstructionSpec, Family};
use crosscount::disjointness::{build_graph, check_component_bound, check_weak_bound, Side};
use crosscount::geom::{orientation, Orientation, Point};
use crosscount::io::{load_pair, parse_rational, render_svg, save_pair, Metadata, PairFile, RenderOptions};
use crosscount::polygon::crossing_count;
use crosscount::ramsey::{
    es_number, find_cup_or_cap_lines, find_cup_or_cap_points, forms, is_transitive_order, lines_form, log_bound,
    longest_monotone, transitive_subtournament, Line, Tournament,
};
use crosscount::search::{
    build_corpus, conjecture_monitor, conjectured_bound, maximize_many, monitor_instance, parity_bound, pipeline_extract,
    CorpusSpec, PipelineParams, SearchConfig, SearchState, DEFAULT_KICK_AFTER,
};
use crosscount::structure::{audit_lemma2, eligible_pairs, find_associated_pair};
use crosscount::{Point2, Polygon, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "crosscount", version, about = "Exact crossing counts and structure checks for pairs of simple polygons")]
struct Cli {
    /// Seed for every randomized subcommand.
    #[arg(long, global = true, env = "CROSSCOUNT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Pair file holding P and Q.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    EvenEven,
    EvenOdd,
    OddOdd,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::EvenEven => Family::EvenEven,
            FamilyArg::EvenOdd => Family::EvenOdd,
            FamilyArg::OddOdd => Family::OddOdd,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RamseyOp {
    Es,
    Cupcap,
    Tournament,
    Monotone,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Audit {
    Lemma2,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an extremal pair for the given sizes.
    Generate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Count boundary crossings.
    Count(Input),
    /// Disjointness graph and the bounds it implies.
    Components(Input),
    /// Associated pairs and hooking flags of every eligible consecutive pair.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        audit: Option<Audit>,
    },
    /// Erdős–Szekeres numbers, cups and caps, tournaments, monotone runs.
    Ramsey {
        #[arg(long, value_enum)]
        op: RamseyOp,
        #[arg(long, default_value_t = 4)]
        r: usize,
        #[arg(long, default_value_t = 4)]
        s: usize,
        /// Random instance size for cupcap, tournament and monotone.
        #[arg(long)]
        size: Option<usize>,
        /// Explicit points "x,y;x,y;..." (cupcap) with rational coordinates.
        #[arg(long)]
        points: Option<String>,
        /// Read the cupcap pairs as lines "slope,intercept".
        #[arg(long)]
        lines: bool,
        /// Explicit sequence "3,1,2" (monotone).
        #[arg(long)]
        seq: Option<String>,
    },
    /// Hill-climb for odd/odd pairs with many crossings.
    Search {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Steps per seed; accepts forms like 1e6.
        #[arg(long, value_parser = parse_count, default_value = "100000")]
        budget: u64,
        /// Number of seeds, starting from the base seed.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long, default_value_t = DEFAULT_KICK_AFTER)]
        kick_after: u64,
        /// State file: resumed when present, written back afterwards.
        #[arg(long, value_name = "FILE")]
        resume: Option<PathBuf>,
        /// Write the best pair found.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Run the extraction stages and re-verify their certificates.
    Pipeline {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 37)]
        cup_size: usize,
        #[arg(long, default_value_t = 7)]
        monotone_len: usize,
    },
    /// Draw the pair as SVG.
    Render {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long)]
        crossings: bool,
        #[arg(long)]
        axis: bool,
        #[arg(long)]
        cones: bool,
        /// Sides to highlight, such as "P0,Q3".
        #[arg(long, value_delimiter = ',')]
        highlight: Vec<String>,
    },
    /// Check a pair against its family count, or against the conjectured bound.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        #[arg(long)]
        conjecture: bool,
        /// Crossing count claimed for the pair; defaults to the file's score.
        #[arg(long)]
        claimed: Option<usize>,
    },
    /// Build a reproducible corpus of random odd/odd pairs.
    Corpus {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        min: usize,
        #[arg(long, default_value_t = 11)]
        max: usize,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

/// Either a plain integer or `<mantissa>e<exponent>`.
fn parse_count(s: &str) -> Result<u64, String> {
    let bad = || format!("not a step count: {s}");
    match s.split_once(['e', 'E']) {
        None => s.parse().map_err(|_| bad()),
        Some((mant, exp)) => {
            let mant: u64 = mant.parse().map_err(|_| bad())?;
            let exp: u32 = exp.parse().map_err(|_| bad())?;
            10u64.checked_pow(exp).and_then(|p| p.checked_mul(mant)).ok_or_else(bad)
        }
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(Rational, Rational)>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (a, b) = pair.split_once(',').with_context(|| format!("expected \"x,y\", got {pair:?}"))?;
            let a = parse_rational(a.trim()).map_err(anyhow::Error::msg)?;
            let b = parse_rational(b.trim()).map_err(anyhow::Error::msg)?;
            Ok((a, b))
        })
        .collect()
}

fn parse_side(s: &str) -> Result<Side> {
    let (head, idx) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
    let index: usize = idx.parse().with_context(|| format!("bad side {s:?}"))?;
    match head {
        "P" | "p" => Ok(Side::p(index)),
        "Q" | "q" => Ok(Side::q(index)),
        _ => bail!("bad side {s:?}, expected P<i> or Q<i>"),
    }
}

/// Random points with distinct x and no three collinear.
fn random_gp_points(k: usize, rng: &mut ChaCha8Rng) -> Vec<Point2> {
    let mut pts: Vec<Point2> = Vec::with_capacity(k);
    while pts.len() < k {
        let c = Point::from_ints(rng.gen_range(-10_000..10_000), rng.gen_range(-10_000..10_000));
        let fresh = pts.iter().all(|p| p.x != c.x)
            && (0..pts.len()).all(|i| (i + 1..pts.len()).all(|j| orientation(&pts[i], &pts[j], &c) != Orientation::Collinear));
        if fresh {
            pts.push(c);
        }
    }
    pts
}

/// A report plus whether it records a violation.
struct Outcome {
    report: Value,
    violation: bool,
}

fn ok(report: Value) -> Result<Outcome> {
    Ok(Outcome { report, violation: false })
}

fn load(input: &Input) -> Result<(Polygon, Polygon, Metadata)> {
    let file: PairFile = load_pair(&input.input)?;
    Ok((file.p, file.q, file.metadata))
}

fn run(cli: Cli) -> Result<Outcome> {
    let seed = cli.seed;
    match cli.command {
        Command::Generate { m, n, family, out } => {
            let spec = match family {
                Some(f) => ConstructionSpec::new(m, n, f.into())?,
                None => ConstructionSpec::infer(m, n)?,
            };
            let (p, q) = build_extremal(&spec)?;
            let crossings = crossing_count(&p, &q)?.total;
            let meta = Metadata { family: Some(spec.family), score: Some(crossings), ..Metadata::default() };
            save_pair(&out, &p, &q, meta)?;
            ok(json!({ "m": m, "n": n, "family": spec.family, "crossings": crossings, "out": out }))
        }
        Command::Count(input) => {
            let (p, q, _) = load(&input)?;
            ok(json!({ "crossings": crossing_count(&p, &q)?.total }))
        }
        Command::Components(input) => {
            let (p, q, _) = load(&input)?;
            let report = check_component_bound(&p, &q)?;
            let g = build_graph(&p, &q)?;
            let (m, n) = (p.len(), q.len());
            let mut bounds = json!({
                "crossing_bound": (m * n + report.components) as i64 - (m + n) as i64,
                "component_bound_holds": report.holds,
            });
            let mut violation = !report.holds;
            if m % 2 == 1 && n % 2 == 1 {
                let weak = check_weak_bound(&p, &q)?;
                violation |= !weak.holds;
                bounds["weak"] = serde_json::to_value(&weak)?;
            }
            Ok(Outcome {
                report: json!({
                    "m": m,
                    "n": n,
                    "crossings": report.crossings,
                    "edges": report.edges,
                    "components": g.components(),
                    "component_count": report.components,
                    "bounds": bounds,
                }),
                violation,
            })
        }
        Command::Analyze { input, audit } => {
            let (p, q, _) = load(&input)?;
            let g = build_graph(&p, &q)?;
            let mut roles = Vec::new();
            for (role, a, b, gg) in [("P", &p, &q, g.clone()), ("Q", &q, &p, g.swapped())] {
                let pairs: Vec<Value> = eligible_pairs(a.len(), &gg)
                    .into_iter()
                    .map(|i| match find_associated_pair(a, i, b, &gg) {
                        Ok(ap) => json!({ "index": i, "associated": ap }),
                        Err(e) => json!({ "index": i, "error": e.to_string() }),
                    })
                    .collect();
                roles.push(json!({ "role": role, "eligible_pairs": pairs }));
            }
            let failed = roles.iter().any(|r| r["eligible_pairs"].as_array().unwrap().iter().any(|e| e.get("error").is_some()));
            let mut report = json!({ "m": p.len(), "n": q.len(), "components": g.component_count(), "roles": roles });
            let mut violation = failed;
            if let Some(Audit::Lemma2) = audit {
                let r = audit_lemma2(&p, &q, &g)?;
                violation |= !r.ok();
                report["lemma2"] = serde_json::to_value(&r)?;
            }
            Ok(Outcome { report, violation })
        }
        Command::Ramsey { op, r, s, size, points, lines, seq } => ramsey(op, r, s, size, points, lines, seq, seed),
        Command::Search { m, n, budget, seeds, kick_after, resume, out } => {
            let state = match resume.as_ref().filter(|p| p.exists()) {
                Some(path) => {
                    let mut state = SearchState::load(path)?;
                    if (state.m, state.n) != (m, n) {
                        bail!("state file is for ({}, {}), not ({m}, {n})", state.m, state.n);
                    }
                    state.advance(budget)?;
                    state
                }
                None => {
                    let config = SearchConfig { kick_after, ..SearchConfig::new(m, n, seed) };
                    let list: Vec<u64> = (0..seeds.max(1)).map(|k| seed.wrapping_add(k)).collect();
                    maximize_many(&config, &list, budget)?
                }
            };
            if let Some(path) = &resume {
                state.save(path)?;
            }
            if let Some(path) = &out {
                let meta = Metadata { seed: Some(state.seed), score: Some(state.score), ..Metadata::default() };
                save_pair(path, &state.best.p, &state.best.q, meta)?;
            }
            let verdict = conjecture_monitor(&state)?;
            Ok(Outcome {
                violation: !verdict.is_within_bound(),
                report: json!({
                    "m": m,
                    "n": n,
                    "seed": state.seed,
                    "steps": state.step,
                    "score": state.score,
                    "parity_bound": parity_bound(m, n),
                    "conjectured_bound": conjectured_bound(m, n),
                    "kicks": state.kicks,
                    "history": state.best_history,
                    "verdict": verdict,
                }),
            })
        }
        Command::Pipeline { input, cup_size, monotone_len } => {
            let (p, q, _) = load(&input)?;
            let params = PipelineParams { cup_size, monotone_len, ..PipelineParams::default() };
            let report = pipeline_extract(&p, &q, &params)?;
            Ok(Outcome { violation: !report.verified(), report: serde_json::to_value(&report)? })
        }
        Command::Render { input, out, crossings, axis, cones, highlight } => {
            let (p, q, _) = load(&input)?;
            let highlight_sides = highlight.iter().map(|s| parse_side(s)).collect::<Result<Vec<_>>>()?;
            let opts = RenderOptions { show_crossings: crossings, show_axis: axis, show_cones: cones, highlight_sides };
            let svg = render_svg(&p, &q, &opts);
            std::fs::write(&out, &svg).with_context(|| format!("writing {}", out.display()))?;
            ok(json!({ "out": out, "bytes": svg.len() }))
        }
        Command::Verify { input, family, conjecture, claimed } => {
            let (p, q, meta) = load(&input)?;
            let (m, n) = (p.len(), q.len());
            if conjecture {
                let crossings = crossing_count(&p, &q)?.total;
                let verdict = monitor_instance(&p, &q, claimed.or(meta.score).unwrap_or(crossings))?;
                return Ok(Outcome { violation: !verdict.is_within_bound(), report: json!({ "m": m, "n": n, "verdict": verdict }) });
            }
            let Some(family) = family.map(Family::from).or(meta.family).or_else(|| Family::for_sizes(m, n)) else {
                bail!("no extremal family for sizes ({m}, {n})");
            };
            let expected = family.expected_crossings(m, n);
            match verify_construction(&p, &q, family) {
                Ok(c) => ok(json!({ "family": family, "expected": expected, "crossings": c, "verified": true })),
                Err(e) => Ok(Outcome {
                    violation: true,
                    report: json!({ "family": family, "expected": expected, "verified": false, "error": e.to_string() }),
                }),
            }
        }
        Command::Corpus { count, min, max, out } => {
            if min < 3 || min > max {
                bail!("size range {min}..={max} is empty or below 3");
            }
            let corpus = build_corpus(&CorpusSpec::new(count, min..=max, min..=max, seed))?;
            let path = corpus.save(&out)?;
            ok(json!({ "entries": corpus.entries.len(), "seed": seed, "out": path }))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn ramsey(op: RamseyOp, r: usize, s: usize, size: Option<usize>, points: Option<String>, lines: bool, seq: Option<String>, seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match op {
        RamseyOp::Es => ok(json!({ "r": r, "s": s, "es": es_number(r, s)?.to_string() })),
        RamseyOp::Cupcap => {
            let pairs = match points {
                Some(text) => parse_pairs(&text)?,
                None => {
                    let k = match size {
                        Some(k) => k,
                        None => usize::try_from(es_number(r, s)? + 1u8).context("ES number too large for a random set")?,
                    };
                    random_gp_points(k, &mut rng).into_iter().map(|p| (p.x, p.y)).collect()
                }
            };
            let (found, holds) = if lines {
                let ls: Vec<Line<Rational>> = pairs.into_iter().map(|(a, b)| Line::new(a, b)).collect();
                let res = find_cup_or_cap_lines(&ls, r, s)?;
                let holds = lines_form(res.kind, &ls, &res.indices);
                (res, holds)
            } else {
                let pts: Vec<Point2> = pairs.into_iter().map(|(x, y)| Point::new(x, y)).collect();
                let res = find_cup_or_cap_points(&pts, r, s)?;
                let holds = forms(res.kind, &pts, &res.indices);
                (res, holds)
            };
            Ok(Outcome { violation: !holds, report: json!({ "r": r, "s": s, "lines": lines, "result": found, "verified": holds }) })
        }
        RamseyOp::Tournament => {
            let n = size.unwrap_or(32);
            let t = Tournament::random(n, &mut rng);
            let order = transitive_subtournament(&t);
            let holds = order.len() >= log_bound(n) && is_transitive_order(&t, &order);
            Ok(Outcome { violation: !holds, report: json!({ "size": n, "bound": log_bound(n), "order": order, "verified": holds }) })
        }
        RamseyOp::Monotone => {
            let values: Vec<i64> = match seq {
                Some(text) => text
                    .split(',')
                    .map(|v| v.trim().parse::<i64>().with_context(|| format!("bad sequence entry {v:?}")))
                    .collect::<Result<_>>()?,
                None => {
                    let mut v: Vec<i64> = (0..size.unwrap_or(r * r + 1) as i64).collect();
                    v.shuffle(&mut rng);
                    v
                }
            };
            let runs = longest_monotone(&values)?;
            // Any sequence longer than k² has a monotone run of length k + 1.
            let guaranteed = (0..).find(|g: &usize| g * g >= values.len()).unwrap_or(0);
            let holds = runs.longest() >= guaranteed;
            Ok(Outcome { violation: !holds, report: json!({ "sequence": values, "runs": runs, "guaranteed": guaranteed }) })
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code.
pub fn cli_main<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(outcome) => {
            println!("{}", serde_json::to_string_pretty(&outcome.report).expect("reports serialize"));
            i32::from(outcome.violation)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
