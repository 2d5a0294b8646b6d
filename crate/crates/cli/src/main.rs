use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use morse_core::analytic::{
    clique_link_probability, expected_morse_pentagons, expected_morse_squares, lemma31, long_cycle_bound,
    thresholds,
};
use morse_core::experiment::validation::{lemma31_monte_carlo, oracle_equivalence, square_identity};
use morse_core::experiment::{exhaustive_small_n_expectation, run_sweep, Limits, PropertyKind, SweepConfig};
use morse_core::io::{load_graph, save_graph};
use morse_core::{build_square_graph, cfs_report, density_from_coefficient, sample_gnp, DensityPoint, Seed};

#[derive(Parser)]
#[command(name = "morse", version, about = "Morse subgraphs and square graphs of random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a G(n, p) graph and write it as an edge list.
    #[command(group(ArgGroup::new("density").required(true).args(["p", "c"])))]
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<f64>,
        /// Density coefficient: p = min(1, c·√(ln n / n)).
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        seed: u64,
        /// Use the graph of this trial of a sweep with master seed `--seed`.
        #[arg(long)]
        trial: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a property on a graph file.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        property: String,
        #[arg(long)]
        search_budget: Option<u64>,
    },
    /// Build the square graph of a graph file and report its structure.
    Squaregraph {
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the square graph as an edge list here, plus a
        /// `.squares.json` file listing each square's vertices.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Run a Monte Carlo sweep described by a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Evaluate a closed-form quantity.
    Analytic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, value_enum)]
        which: Which,
        /// Cycle length, or the case number (1-3) for lemma31.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run the cross-validation corpus.
    Oracle {
        /// Largest n in the Morse equivalence corpus.
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// Graphs per corpus.
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Mu5,
    Mu4,
    Lemma31,
    Thresholds,
    CliqueLink,
    LongCycleBound,
}

/// Failure of a subcommand: `Usage` exits with 2, `Domain` with 1.
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<morse_core::Error> for Failure {
    fn from(e: morse_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Gen { n, p, c, seed, trial, out } => gen(n, p, c, seed, trial, &out),
        Command::Check { input, property, search_budget } => check(&input, &property, search_budget),
        Command::Squaregraph { input, dump } => squaregraph(&input, dump.as_deref()),
        Command::Sweep { config, workers } => sweep(&config, workers),
        Command::Analytic { n, p, c, which, k } => analytic(n, p, c, which, k),
        Command::Oracle { max_n, trials, seed } => oracle(max_n, trials, seed),
    }
}

fn density(n: usize, p: Option<f64>, c: Option<f64>) -> Result<DensityPoint, Failure> {
    match (p, c) {
        (Some(p), None) => Ok(DensityPoint::explicit(n, p)?),
        (None, Some(c)) => Ok(density_from_coefficient(c, n)?),
        (Some(_), Some(_)) => Err(Failure::Usage("give either --p or --c, not both".into())),
        (None, None) => Err(Failure::Usage("one of --p or --c is required".into())),
    }
}

fn gen(n: usize, p: Option<f64>, c: Option<f64>, seed: u64, trial: Option<u64>, out: &Path) -> Outcome {
    let point = density(n, p, c)?;
    let graph_seed = trial.map_or(Seed(seed), |t| Seed(seed).for_trial(t));
    let g = sample_gnp(point.n, point.p, graph_seed)?;
    save_graph(&g, out)?;
    Ok(json!({
        "n": g.n(),
        "c": point.c,
        "p": point.p,
        "seed": seed,
        "trial": trial,
        "edges": g.edge_count(),
        "out": out,
    }))
}

fn check(input: &Path, property: &str, search_budget: Option<u64>) -> Outcome {
    let property: PropertyKind = property.parse().map_err(|e: morse_core::Error| Failure::Usage(e.to_string()))?;
    let g = load_graph(input)?;
    let mut limits = Limits::default();
    if let Some(b) = search_budget {
        limits.search_budget = b;
    }
    let (outcome, witness) = property.evaluate_with_witness(&g, limits)?;
    Ok(json!({ "outcome": outcome, "witness": witness }))
}

fn squaregraph(input: &Path, dump: Option<&Path>) -> Outcome {
    let g = load_graph(input)?;
    let sq = build_square_graph(&g)?;
    let report = cfs_report(&g, &sq);
    let conn = sq.connectivity();
    let mut out = json!({
        "squares": sq.len(),
        "isolated": sq.isolated_count(),
        "components": sq.components().len(),
        "cfs": report.cfs,
        "connected": conn.connected,
        "empty": conn.empty,
        "host_disconnected": report.host_disconnected,
    });
    if let Some(path) = dump {
        let squares_path = squares_json_path(path);
        sq.write_dump(path, &squares_path)?;
        out["dump"] = json!({ "edges": path, "squares": squares_path });
    }
    Ok(out)
}

fn squares_json_path(dump: &Path) -> PathBuf {
    let mut s = dump.as_os_str().to_owned();
    s.push(".squares.json");
    PathBuf::from(s)
}

fn sweep(config: &Path, workers: Option<usize>) -> Outcome {
    let cfg = SweepConfig::load(config)?;
    let workers = workers
        .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
        .unwrap_or(1);
    if workers == 0 {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    let summary = run_sweep(&cfg, workers)?;
    Ok(json!({
        "jsonl": summary.jsonl,
        "csv": summary.csv,
        "cells": summary.cells,
    }))
}

fn analytic(n: usize, p: Option<f64>, c: Option<f64>, which: Which, k: Option<usize>) -> Outcome {
    let need_p = || density(n, p, c).map(|d| d.p);
    let need_k = |what: &str| k.ok_or_else(|| Failure::Usage(format!("--k is required for {what}")));
    let value = match which {
        Which::Thresholds => return Ok(json!({ "n": n, "thresholds": thresholds(n)? })),
        Which::Mu5 => expected_morse_pentagons(n, need_p()?)?,
        Which::Mu4 => expected_morse_squares(n, need_p()?)?,
        Which::Lemma31 => {
            let case = need_k("lemma31")?;
            let case = u8::try_from(case).map_err(|_| Failure::Domain(format!("no lemma31 case {case}")))?;
            lemma31(need_p()?, case)?
        }
        Which::CliqueLink => clique_link_probability(n, need_k("clique-link")?, need_p()?)?,
        Which::LongCycleBound => long_cycle_bound(n, need_p()?, need_k("long-cycle-bound")?)?,
    };
    Ok(json!({
        "which": which.to_possible_value().map(|v| v.get_name().to_string()),
        "n": n,
        "p": need_p()?,
        "k": k,
        "value": value,
    }))
}

fn oracle(max_n: usize, trials: u64, seed: u64) -> Outcome {
    if max_n < 5 {
        return Err(Failure::Usage("--max-n must be at least 5".into()));
    }
    let seed = Seed(seed);
    let eq = oracle_equivalence(trials, 5, max_n, 100, seed)?;
    let sq = square_identity(trials, 5, max_n.max(40), seed)?;
    let exact = exhaustive_small_n_expectation(5, 0.5, PropertyKind::MorseCycleCount(5))?;
    let lemma = (1..=3u8)
        .map(|w| lemma31_monte_carlo(0.3, w, 1_000_000, Seed(seed.0.wrapping_add(u64::from(w)))))
        .collect::<Result<Vec<_>, _>>()?;
    let ok = eq.mismatches == 0
        && sq.existence_mismatches == 0
        && sq.count_mismatches == 0
        && exact == 12.0 / 1024.0
        && lemma.iter().all(|e| e.z_score() < 4.0);
    let out = json!({
        "ok": ok,
        "morse_equivalence": eq,
        "square_identity": sq,
        "exhaustive_n5_morse_pentagons": { "value": exact, "expected": 12.0 / 1024.0 },
        "lemma31_monte_carlo": lemma,
    });
    if ok {
        Ok(out)
    } else {
        println!("{out}");
        Err(Failure::Domain("cross-validation found disagreements".into()))
    }
}
