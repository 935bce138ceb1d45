//! `lbisim`: parse, reduce and explore terms, and decide equivalences.
//!
//! Exit status: 0 equivalent (or success), 1 inequivalent (or a failing
//! suite / false predicate), 2 usage or parse error, 3 budget exceeded.

use std::fs;
use std::io;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use lbisim_core::congruence::canonicalize;
use lbisim_core::dump;
use lbisim_core::equivalence::{
    pred_ccs, pred_open, CcsPredicate, Checker, GameResult, Mode, Pool, Relation, WitnessStep, DEFAULT_MAX_PAIRS,
};
use lbisim_core::lts::{SystemKind, TransitionSystem};
use lbisim_core::reduction::{barbs, reducts};
use lbisim_core::suite::{run_suite, SuiteSpec};
use lbisim_core::terms::{Calculus, Term};
use lbisim_core::Error;

#[derive(Parser)]
#[command(name = "lbisim", version, about = "Behavioural equivalences for CCS, asynchronous CCS and mobile ambients")]
struct Cli {
    /// ccs, accs or ma
    #[arg(long, global = true, default_value = "ccs")]
    calculus: Calculus,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Seed for generated corpora (overrides the suite file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Bound on explored state pairs per game.
    #[arg(long, global = true, env = "LBISIM_MAX_PAIRS", default_value_t = DEFAULT_MAX_PAIRS)]
    max_pairs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ordinary,
    Its,
}

#[derive(Clone, Copy, ValueEnum)]
enum PredKind {
    Open,
    Out,
    In,
    Tau,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two terms are related.
    Check {
        /// strong, async, ipo, semi-sat, barbed-semi-sat or l-bisim
        #[arg(long)]
        rel: String,
        /// LM, LA, LCCS, ALL, EMPTY or @file of label patterns
        #[arg(long)]
        labels: Option<String>,
        /// symbolic, or instantiate:@poolfile
        #[arg(long, default_value = "symbolic")]
        mode: String,
        /// term, @file or @- for stdin
        left: String,
        /// term or @file
        right: String,
    },
    /// Dump the reachable transition system of a term.
    Lts {
        #[arg(long, value_enum, default_value = "its")]
        kind: Kind,
        /// Same as `--kind its`.
        #[arg(long, conflicts_with_all = ["kind", "ordinary"])]
        its: bool,
        /// Same as `--kind ordinary`.
        #[arg(long, conflicts_with = "kind")]
        ordinary: bool,
        /// Bound on explored states.
        #[arg(long, default_value_t = 10_000)]
        max_states: usize,
        term: String,
    },
    /// One-step reductions.
    Reduce { term: String },
    /// Observable barbs.
    Barbs { term: String },
    /// Run a corpus suite described by a JSON file.
    Corpus { spec: String },
    /// Evaluate a stability predicate: `open` (ambients) or `out`, `in`,
    /// `tau` (CCS).
    Pred {
        #[arg(value_enum)]
        kind: PredKind,
        term: String,
        target: String,
        /// The name the predicate is about.
        #[arg(long, default_value = "a")]
        name: String,
        /// Continuation supplied by the probe.
        #[arg(long, default_value = "0")]
        t1: String,
    },
}

/// Reads `@path` arguments from disk, `@-` from stdin.
fn source(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some("-") => io::read_to_string(io::stdin()).context("reading stdin"),
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(arg.to_string()),
    }
}

fn term(calculus: Calculus, arg: &str) -> Result<Term> {
    let src = source(arg)?;
    Ok(Term::parse(calculus, src.trim())?)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialisable")
}

fn print_game(r: &GameResult) {
    println!("{}", if r.verdict { "equivalent" } else { "not equivalent" });
    for step in &r.witness {
        match step {
            WitnessStep::Move { left, right, attacker, label, attacker_target, answer, .. } => {
                println!("  at ({left}, {right}): {attacker} plays {label} to {attacker_target}");
                match answer {
                    Some(a) => println!("    best answer {} to {}", a.label, a.defender_target),
                    None => println!("    no answer"),
                }
            }
            WitnessStep::Barb { left, right, side, barb } => {
                println!("  at ({left}, {right}): only the {side} side shows barb {barb}");
            }
        }
    }
    println!("explored {} pairs", r.stats.explored_pairs);
}

fn run(cli: Cli) -> Result<u8> {
    let calc = cli.calculus;
    match &cli.command {
        Command::Check { rel, labels, mode, left, right } => {
            let labels = labels.as_deref().map(source).transpose()?;
            let relation = Relation::parse(calc, rel, labels.as_deref())?;
            let mode = match mode.as_str() {
                "symbolic" => Mode::Symbolic,
                "instantiate" => Mode::Instantiate(Pool::default()),
                m => match m.strip_prefix("instantiate:") {
                    Some(pool) => Mode::Instantiate(Pool::parse(calc, &source(pool)?)?),
                    None => return Err(Error::InvalidQuery(format!("unknown mode `{m}`")).into()),
                },
            };
            let (p, q) = (term(calc, left)?, term(calc, right)?);
            let checker = Checker::new(relation.clone()).with_mode(mode).with_max_pairs(cli.max_pairs);
            let r = checker.check(&p, &q)?;
            match cli.format {
                Format::Json => println!(
                    "{}",
                    json(&serde_json::json!({
                        "calculus": calc,
                        "relation": relation.to_string(),
                        "left": canonicalize(&p).to_string(),
                        "right": canonicalize(&q).to_string(),
                        "verdict": r.verdict,
                        "witness": r.witness,
                        "stats": r.stats,
                    }))
                ),
                _ => print_game(&r),
            }
            Ok(if r.verdict { 0 } else { 1 })
        }
        Command::Lts { kind, its, ordinary, max_states, term: t } => {
            let kind = match (kind, its, ordinary) {
                (_, true, _) => SystemKind::Its,
                (Kind::Ordinary, _, _) | (_, _, true) => SystemKind::Ordinary,
                (Kind::Its, _, _) => SystemKind::Its,
            };
            let ts = TransitionSystem::new(calc, kind)?;
            let reach = ts.explore(&canonicalize(&term(calc, t)?), *max_states)?;
            match cli.format {
                Format::Json => println!("{}", dump::to_json(&reach)),
                Format::Dot => print!("{}", dump::to_dot(&reach)),
                Format::Text => {
                    let d = dump::Dump::from(&reach);
                    println!("root {}", d.root);
                    for e in d.edges {
                        println!("{}  [{}]  {}  ({})", e.source, e.label, e.target, e.rule);
                    }
                }
            }
            Ok(0)
        }
        Command::Reduce { term: t } => {
            let steps = reducts(&term(calc, t)?);
            match cli.format {
                Format::Json => {
                    let v: Vec<_> = steps
                        .iter()
                        .map(|s| {
                            serde_json::json!({
                                "rule": s.rule, "target": s.target.to_string(), "position": s.position,
                            })
                        })
                        .collect();
                    println!("{}", json(&v));
                }
                _ => steps.iter().for_each(|s| println!("{} {}", s.rule, s.target)),
            }
            Ok(0)
        }
        Command::Barbs { term: t } => {
            let bs: Vec<String> = barbs(&term(calc, t)?).iter().map(|b| b.to_string()).collect();
            match cli.format {
                Format::Json => println!("{}", json(&bs)),
                _ => bs.iter().for_each(|b| println!("{b}")),
            }
            Ok(0)
        }
        Command::Corpus { spec } => {
            let path = spec.strip_prefix('@').unwrap_or(spec);
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let mut spec: SuiteSpec =
                serde_json::from_str(&text).map_err(|e| Error::InvalidQuery(format!("suite file: {e}")))?;
            if let Some(seed) = cli.seed {
                spec.seed = seed;
            }
            let report = run_suite(&spec, cli.max_pairs)?;
            match cli.format {
                Format::Json => println!("{}", json(&report)),
                _ => {
                    println!("{} terms, {} pairs", report.terms, report.pairs);
                    for row in &report.rows {
                        let tag = if row.pass() { "PASS" } else { "FAIL" };
                        println!("{tag} {} {}/{} ({} skipped)", row.check, row.agree, row.total, row.skipped);
                        row.failures.iter().for_each(|f| println!("  {f}"));
                    }
                }
            }
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Pred { kind, term: t, target, name, t1 } => {
            let (p, y, t1) = (term(calc, t)?, term(calc, target)?, term(calc, t1)?);
            let holds = match kind {
                PredKind::Open => pred_open(&p, &y, name, &t1)?,
                PredKind::Out => pred_ccs(CcsPredicate::Out, &p, &y, name, &t1)?,
                PredKind::In => pred_ccs(CcsPredicate::In, &p, &y, name, &t1)?,
                PredKind::Tau => pred_ccs(CcsPredicate::Tau, &p, &y, name, &t1)?,
            };
            match cli.format {
                Format::Json => println!("{}", json(&serde_json::json!({ "holds": holds }))),
                _ => println!("{holds}"),
            }
            Ok(if holds { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.format == Format::Dot && !matches!(cli.command, Command::Lts { .. }) {
        eprintln!("error: --format dot is only available for `lts`");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let budget = matches!(e.downcast_ref::<Error>(), Some(Error::DivergenceBudgetExceeded(_)));
            ExitCode::from(if budget { 3 } else { 2 })
        }
    }
}
