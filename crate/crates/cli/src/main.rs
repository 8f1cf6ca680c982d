//! `nbwalk`: exact counts, exact and spectral return probabilities, Monte
//! Carlo estimates, and verification suites for non-backtracking walks.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 request exceeds a capability or resource budget (see `NBWALK_BUDGET`).

use clap::{Parser, Subcommand, ValueEnum};
use nbwalk_core::budget::Budgets;
use nbwalk_core::export;
use nbwalk_core::graph::{FiniteGraph, TorusSpec};
use nbwalk_core::lattice::{self, WalkKind};
use nbwalk_core::sim::{simulate_walks, SimConfig, SimTarget};
use nbwalk_core::spectrum;
use nbwalk_core::verify;
use nbwalk_core::{BigCount, Error};
use serde_json::json;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "nbwalk",
    version,
    about = "Non-backtracking walk statistics: exact counts, return probabilities, simulations",
    propagate_version = true
)]
struct Cli {
    /// Write the artifact to this file instead of stdout; a
    /// `<out>.manifest.json` run manifest lands beside it
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Artifact format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Worker threads for parallel sections (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum WalkArg {
    Nb,
    Simple,
}

impl From<WalkArg> for WalkKind {
    fn from(w: WalkArg) -> WalkKind {
        match w {
            WalkArg::Nb => WalkKind::NonBacktracking,
            WalkArg::Simple => WalkKind::Simple,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Trinomial difference in dimension 2, alternating closed form elsewhere
    Auto,
    /// Direct alternating double sum (dimension 2 only)
    Sum,
    /// Central-trinomial difference (dimension 2 only)
    Trinomial,
    /// Alternating closed form over simple-walk counts (any dimension)
    ClosedForm,
    /// Dynamic-programming enumeration oracle (budget-limited)
    Dp,
}

#[derive(Subcommand)]
enum Command {
    /// Exact counts of closed non-backtracking walks at the origin of Z^d
    Enumerate {
        /// Lattice dimension
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Count walks of lengths 2, 4, ..., 2*n-max
        #[arg(long = "n-max", default_value_t = 16)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Exact return-probability series at the origin of Z^d
    Series {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Series entries for lengths 2, 4, ..., 2*k-max
        #[arg(long = "k-max", default_value_t = 32)]
        k_max: usize,
        #[arg(long, value_enum, default_value_t = WalkArg::Nb)]
        walk: WalkArg,
    },
    /// Return probabilities on a discrete torus, from its explicit spectrum
    Spectrum {
        /// Vertices per axis (at least 3)
        #[arg(long, default_value_t = 11)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long = "k-max", default_value_t = 16)]
        k_max: usize,
    },
    /// Monte Carlo estimate of return probabilities
    Simulate {
        #[arg(long, value_enum, default_value_t = WalkArg::Nb)]
        walk: WalkArg,
        /// Walk on Z^dim (mutually exclusive with --graph)
        #[arg(long, conflicts_with = "graph")]
        dim: Option<usize>,
        /// Walk on the graph in this edge-list file (`u v` per line, `#` comments)
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Start vertex when walking on a graph
        #[arg(long, default_value_t = 0, requires = "graph")]
        start: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 32)]
        steps: usize,
        /// RNG seed; identical seeds reproduce identical statistics
        #[arg(long)]
        seed: u64,
    },
    /// Run verification suites (exit 1 if any check fails)
    Verify {
        /// One of: sun, trinomial, oracle, bounds, closed-form,
        /// asymptotics, series, conjecture, spectral, all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long = "k-max")]
        k_max: Option<usize>,
        #[arg(long = "n-max")]
        n_max: Option<usize>,
        /// Evaluation-grid size for polynomial sweeps
        #[arg(long)]
        grid: Option<usize>,
        /// Graph degrees for polynomial suites (repeatable)
        #[arg(long = "r")]
        degrees: Vec<usize>,
    },
}

#[derive(serde::Serialize)]
struct RunManifest {
    artifact_version: u32,
    subcommand: String,
    argv: Vec<String>,
    params: serde_json::Value,
    seed: Option<u64>,
    outputs: Vec<String>,
    duration_ms: u128,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_capability() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

/// Everything a subcommand produces: artifact text, manifest ingredients,
/// and the process exit code.
struct Outcome {
    artifact: String,
    params: serde_json::Value,
    seed: Option<u64>,
    code: ExitCode,
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let started = Instant::now();
    let budgets = Budgets::from_env()?;
    if let Some(workers) = cli.workers {
        if workers == 0 {
            return Err(Error::InvalidArgument("--workers must be positive".into()));
        }
        // each invocation is its own process, so building the global pool
        // here is safe; a second call would fail, and that is a bug
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    }
    let name = subcommand_name(&cli.command);
    let outcome = match &cli.command {
        Command::Enumerate { dim, n_max, method } => {
            cmd_enumerate(*dim, *n_max, *method, cli.format, &budgets)?
        }
        Command::Series { dim, k_max, walk } => {
            cmd_series(*dim, *k_max, *walk, cli.format, &budgets)?
        }
        Command::Spectrum { n, dim, k_max } => {
            cmd_spectrum(*n, *dim, *k_max, cli.format, &budgets)?
        }
        Command::Simulate {
            walk,
            dim,
            graph,
            start,
            trials,
            steps,
            seed,
        } => cmd_simulate(
            *walk,
            *dim,
            graph.as_deref(),
            *start,
            *trials,
            *steps,
            *seed,
            cli.format,
            &budgets,
        )?,
        Command::Verify {
            suite,
            k_max,
            n_max,
            grid,
            degrees,
        } => cmd_verify(
            suite,
            *k_max,
            *n_max,
            *grid,
            degrees,
            cli.format,
            &budgets,
        )?,
    };
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &outcome.artifact)
                .map_err(|e| Error::InvalidArgument(format!("writing {}: {e}", path.display())))?;
            let manifest = RunManifest {
                artifact_version: 1,
                subcommand: name.to_string(),
                argv: std::env::args().collect(),
                params: outcome.params,
                seed: outcome.seed,
                outputs: vec![path.display().to_string()],
                duration_ms: started.elapsed().as_millis(),
            };
            let mpath = manifest_path(path);
            std::fs::write(
                &mpath,
                serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
            )
            .map_err(|e| Error::InvalidArgument(format!("writing {}: {e}", mpath.display())))?;
        }
        None => print!("{}", outcome.artifact),
    }
    Ok(outcome.code)
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Enumerate { .. } => "enumerate",
        Command::Series { .. } => "series",
        Command::Spectrum { .. } => "spectrum",
        Command::Simulate { .. } => "simulate",
        Command::Verify { .. } => "verify",
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn cmd_enumerate(
    dim: usize,
    n_max: usize,
    method: MethodArg,
    format: Format,
    budgets: &Budgets,
) -> Result<Outcome, Error> {
    if dim == 0 || n_max == 0 {
        return Err(Error::InvalidArgument(
            "--dim and --n-max must be positive".into(),
        ));
    }
    let method = match (method, dim) {
        (MethodArg::Auto, 2) => MethodArg::Trinomial,
        (MethodArg::Auto, _) => MethodArg::ClosedForm,
        (MethodArg::Sum | MethodArg::Trinomial, d) if d != 2 => {
            // the two-dimensional shortcuts have no meaning elsewhere
            return Err(Error::Capacity {
                what: "dimension-2 closed form applied to another dimension",
                needed: d as u128,
                budget: 2,
            });
        }
        (m, _) => m,
    };
    let method_label = match method {
        MethodArg::Auto => unreachable!("auto resolved above"),
        MethodArg::Sum => "sum",
        MethodArg::Trinomial => "trinomial",
        MethodArg::ClosedForm => "closed-form",
        MethodArg::Dp => "dp",
    };
    let counts: Vec<String> = match method {
        MethodArg::Sum => {
            let table = nbwalk_core::combinatorics::BinomialTable::with_rows(2 * n_max);
            (1..=n_max)
                .map(|n| lattice::nb_closed_count_z2_sum(n, &table).to_string())
                .collect()
        }
        MethodArg::Trinomial => (1..=n_max)
            .map(|n| lattice::nb_closed_count_z2_trinomial(n).to_string())
            .collect(),
        MethodArg::ClosedForm => lattice::nb_closed_counts_zd(dim, n_max)?
            .into_iter()
            .skip(1)
            .map(|c| c.to_string())
            .collect(),
        MethodArg::Dp => (1..=n_max)
            .map(|n| lattice::lattice_dp_oracle(dim, 2 * n, true, budgets).map(|c| c.to_string()))
            .collect::<Result<_, _>>()?,
        MethodArg::Auto => unreachable!(),
    };
    let totals: Vec<BigCount> = (1..=n_max)
        .map(|n| lattice::lattice_total_walks(dim, 2 * n, true))
        .collect();
    let artifact = match format {
        Format::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "# kind=closed-walk-counts");
            let _ = writeln!(out, "# dimension={dim}");
            let _ = writeln!(out, "# method={method_label}");
            let _ = writeln!(out, "length,count,total");
            for (i, c) in counts.iter().enumerate() {
                let _ = writeln!(out, "{},{},{}", 2 * (i + 1), c, totals[i]);
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = counts
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    json!({
                        "length": 2 * (i + 1),
                        "count": c,
                        "total": totals[i].to_string(),
                    })
                })
                .collect();
            pretty(&json!({
                "kind": "closed-walk-counts",
                "dimension": dim,
                "method": method_label,
                "entries": rows,
            }))
        }
    };
    Ok(Outcome {
        artifact,
        params: json!({"dim": dim, "n_max": n_max, "method": method_label}),
        seed: None,
        code: ExitCode::SUCCESS,
    })
}

fn cmd_series(
    dim: usize,
    k_max: usize,
    walk: WalkArg,
    format: Format,
    budgets: &Budgets,
) -> Result<Outcome, Error> {
    if dim == 0 || k_max == 0 {
        return Err(Error::InvalidArgument(
            "--dim and --k-max must be positive".into(),
        ));
    }
    let series = match WalkKind::from(walk) {
        WalkKind::NonBacktracking => lattice::nb_return_series(dim, k_max, budgets)?,
        WalkKind::Simple => lattice::simple_return_series(dim, k_max, budgets)?,
    };
    let artifact = match format {
        Format::Csv => export::series_csv(&series),
        Format::Json => pretty(&export::series_json(&series)),
    };
    Ok(Outcome {
        artifact,
        params: json!({
            "dim": dim,
            "k_max": k_max,
            "walk": match walk { WalkArg::Nb => "nb", WalkArg::Simple => "simple" },
        }),
        seed: None,
        code: ExitCode::SUCCESS,
    })
}

fn cmd_spectrum(
    n: usize,
    dim: usize,
    k_max: usize,
    format: Format,
    budgets: &Budgets,
) -> Result<Outcome, Error> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("--k-max must be positive".into()));
    }
    let spec = TorusSpec::new(n, dim)?;
    let spectrum = spectrum::torus_spectrum(spec, budgets)?;
    let probs = spectrum::spectral_return_probs(&spectrum, k_max, budgets)?;
    let artifact = match format {
        Format::Csv => export::spectral_csv(&probs),
        Format::Json => pretty(&export::spectral_json(&probs)),
    };
    Ok(Outcome {
        artifact,
        params: json!({"n": n, "dim": dim, "k_max": k_max}),
        seed: None,
        code: ExitCode::SUCCESS,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    walk: WalkArg,
    dim: Option<usize>,
    graph: Option<&Path>,
    start: usize,
    trials: u64,
    steps: usize,
    seed: u64,
    format: Format,
    budgets: &Budgets,
) -> Result<Outcome, Error> {
    let target = match (dim, graph) {
        (Some(d), None) => SimTarget::Lattice { dim: d },
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("reading {}: {e}", path.display())))?;
            let g = FiniteGraph::parse_edge_list(&text, budgets)?;
            SimTarget::Graph { graph: g, start }
        }
        (None, None) => SimTarget::Lattice { dim: 2 },
        (Some(_), Some(_)) => unreachable!("clap rejects --dim with --graph"),
    };
    let cfg = SimConfig {
        walk: walk.into(),
        target,
        trials,
        max_steps: steps,
        seed,
    };
    let stats = simulate_walks(&cfg)?;
    let artifact = match format {
        Format::Csv => export::sim_csv(&stats),
        Format::Json => pretty(&export::sim_json(&stats)),
    };
    Ok(Outcome {
        artifact,
        params: json!({
            "walk": match walk { WalkArg::Nb => "nb", WalkArg::Simple => "simple" },
            "dim": dim,
            "graph": graph.map(|p| p.display().to_string()),
            "start": start,
            "trials": trials,
            "steps": steps,
        }),
        seed: Some(seed),
        code: ExitCode::SUCCESS,
    })
}

fn cmd_verify(
    suite: &str,
    k_max: Option<usize>,
    n_max: Option<usize>,
    grid: Option<usize>,
    degrees: &[usize],
    format: Format,
    budgets: &Budgets,
) -> Result<Outcome, Error> {
    let mut results: Vec<verify::CheckResult> = Vec::new();
    let run_one = |name: &str, results: &mut Vec<verify::CheckResult>| -> Result<(), Error> {
        match name {
            "sun" => results.extend(verify::suite_sun(n_max.unwrap_or(200))),
            "trinomial" => {
                results.extend(verify::suite_trinomial(n_max.unwrap_or(48), 8, budgets)?)
            }
            "oracle" => results.extend(verify::suite_oracle(k_max.unwrap_or(8), budgets)?),
            "bounds" => {
                let rs = if degrees.is_empty() {
                    vec![3, 4, 5, 6]
                } else {
                    degrees.to_vec()
                };
                results.extend(verify::suite_bounds(
                    &rs,
                    k_max.unwrap_or(120),
                    grid.unwrap_or(801),
                )?);
            }
            "closed-form" => {
                let rs = if degrees.is_empty() {
                    vec![3, 4, 7, 10]
                } else {
                    degrees.to_vec()
                };
                results.extend(verify::suite_closed_form(
                    &rs,
                    k_max.unwrap_or(100),
                    grid.unwrap_or(501),
                )?);
            }
            "asymptotics" => results.extend(verify::suite_asymptotics(5_000, 1_000)),
            "series" => {
                results.extend(verify::suite_series(k_max.unwrap_or(10_000), 240, budgets)?)
            }
            "conjecture" => {
                let k2 = k_max.unwrap_or(32);
                results.extend(verify::suite_conjecture(k2, k2.min(16), budgets)?);
            }
            "spectral" => results.extend(verify::suite_spectral(budgets)?),
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown suite {other:?}; expected one of {:?}",
                    verify::SUITE_NAMES
                )))
            }
        }
        Ok(())
    };
    if suite == "all" {
        for name in verify::SUITE_NAMES.iter().filter(|&&s| s != "all") {
            run_one(name, &mut results)?;
        }
    } else {
        run_one(suite, &mut results)?;
    }
    let failures = results.iter().filter(|r| !r.pass).count();
    let artifact = match format {
        Format::Csv => {
            let mut out = String::new();
            for r in &results {
                let _ = writeln!(
                    out,
                    "{} {} — {}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
            }
            let _ = writeln!(out, "{} checks, {} failed", results.len(), failures);
            out
        }
        Format::Json => pretty(&json!({
            "kind": "verification",
            "suite": suite,
            "checks": results,
            "failures": failures,
        })),
    };
    Ok(Outcome {
        artifact,
        params: json!({
            "suite": suite,
            "k_max": k_max,
            "n_max": n_max,
            "grid": grid,
            "r": degrees,
        }),
        seed: None,
        code: if failures == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        },
    })
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("artifact serializes");
    s.push('\n');
    s
}
