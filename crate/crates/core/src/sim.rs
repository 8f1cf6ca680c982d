//! Monte Carlo estimation of return probabilities for simple and
//! non-backtracking walks on lattices and finite graphs.
//!
//! Reproducibility contract: trial `t` draws from a ChaCha8 stream keyed by
//! `(seed, t)` regardless of worker count or scheduling, and per-trial
//! results are integers merged by addition, so every run with the same
//! configuration produces byte-identical statistics.

use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::lattice::WalkKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Two-sided 95% normal quantile used for Wilson intervals.
pub const WILSON_Z95: f64 = 1.959963984540054;

/// Lattice dimensions above this are rejected (fixed-size position buffer).
pub const MAX_SIM_DIM: usize = 8;

/// What the walker moves on.
#[derive(Debug, Clone)]
pub enum SimTarget {
    /// `Z^dim`, started at the origin.
    Lattice { dim: usize },
    /// A finite graph, started at `start`; "origin" means that vertex.
    Graph { graph: FiniteGraph, start: usize },
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub walk: WalkKind,
    pub target: SimTarget,
    pub trials: u64,
    pub max_steps: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be positive".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidArgument("max_steps must be positive".into()));
        }
        match &self.target {
            SimTarget::Lattice { dim } => {
                if *dim == 0 || *dim > MAX_SIM_DIM {
                    return Err(Error::InvalidArgument(format!(
                        "lattice dimension must be in 1..={MAX_SIM_DIM}, got {dim}"
                    )));
                }
            }
            SimTarget::Graph { graph, start } => {
                if graph.vertex_count() == 0 {
                    return Err(Error::InvalidArgument("graph has no vertices".into()));
                }
                if *start >= graph.vertex_count() {
                    return Err(Error::InvalidArgument(format!(
                        "start vertex {start} outside 0..{}",
                        graph.vertex_count()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Aggregated outcome of a batch of walk trials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnStats {
    pub walk: WalkKind,
    pub trials: u64,
    pub max_steps: usize,
    pub seed: u64,
    /// `"Z^d"` for lattices, the graph content hash for graphs.
    pub target_label: String,
    /// `at_origin[s]`: trials sitting at the origin after step `s`
    /// (`at_origin[0] == trials`).
    pub at_origin: Vec<u64>,
    /// `first_return[s]`: trials whose first visit back to the origin
    /// happened at step `s` (index 0 unused).
    pub first_return: Vec<u64>,
    /// Trials absorbed before `max_steps`: a non-backtracking walker whose
    /// only available move was the reversal (or an isolated start vertex).
    pub stuck: u64,
}

impl ReturnStats {
    /// Point estimate of the return probability at one step.
    pub fn p_hat(&self, step: usize) -> f64 {
        self.at_origin[step] as f64 / self.trials as f64
    }

    /// Wilson 95% interval for the return probability at one step.
    pub fn wilson_at(&self, step: usize) -> (f64, f64) {
        wilson_interval(self.at_origin[step], self.trials, WILSON_Z95)
    }

    /// Trials that returned at least once within `horizon` steps.
    pub fn returned_by(&self, horizon: usize) -> u64 {
        self.first_return[1..=horizon.min(self.max_steps)].iter().sum()
    }

    /// Point estimate and Wilson 95% interval for returning within `horizon`.
    pub fn return_by_estimate(&self, horizon: usize) -> (f64, (f64, f64)) {
        let hits = self.returned_by(horizon);
        (
            hits as f64 / self.trials as f64,
            wilson_interval(hits, self.trials, WILSON_Z95),
        )
    }
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Clone)]
struct Partial {
    at_origin: Vec<u64>,
    first_return: Vec<u64>,
    stuck: u64,
}

impl Partial {
    fn new(steps: usize) -> Self {
        Partial {
            at_origin: vec![0; steps + 1],
            first_return: vec![0; steps + 1],
            stuck: 0,
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        for (a, b) in self.at_origin.iter_mut().zip(&other.at_origin) {
            *a += b;
        }
        for (a, b) in self.first_return.iter_mut().zip(&other.first_return) {
            *a += b;
        }
        self.stuck += other.stuck;
        self
    }
}

fn trial_rng(base: &ChaCha8Rng, trial: u64) -> ChaCha8Rng {
    let mut rng = base.clone();
    rng.set_stream(trial);
    rng.set_word_pos(0);
    rng
}

fn lattice_trial(
    dim: usize,
    nb: bool,
    max_steps: usize,
    rng: &mut ChaCha8Rng,
    acc: &mut Partial,
) {
    let mut pos = [0i64; MAX_SIM_DIM];
    let mut off_axes = 0usize; // coordinates currently nonzero
    let mut last_dir = usize::MAX;
    let mut returned = false;
    for step in 1..=max_steps {
        // directions: 2*axis (+1) and 2*axis+1 (-1); reversal is dir ^ 1
        let dir = if nb && last_dir != usize::MAX {
            let mut t = rng.gen_range(0..2 * dim - 1);
            if t >= (last_dir ^ 1) {
                t += 1;
            }
            t
        } else {
            rng.gen_range(0..2 * dim)
        };
        let axis = dir >> 1;
        let old = pos[axis];
        let new = if dir & 1 == 0 { old + 1 } else { old - 1 };
        if old == 0 {
            off_axes += 1;
        } else if new == 0 {
            off_axes -= 1;
        }
        pos[axis] = new;
        last_dir = dir;
        if off_axes == 0 {
            acc.at_origin[step] += 1;
            if !returned {
                acc.first_return[step] += 1;
                returned = true;
            }
        }
    }
}

fn graph_trial(
    g: &FiniteGraph,
    start: usize,
    nb: bool,
    max_steps: usize,
    rng: &mut ChaCha8Rng,
    acc: &mut Partial,
) {
    let mut cur = start;
    let mut prev = usize::MAX;
    let mut returned = false;
    for step in 1..=max_steps {
        let nbrs = g.neighbors(cur);
        let deg = nbrs.len();
        if deg == 0 {
            acc.stuck += 1;
            return;
        }
        let next = if nb && prev != usize::MAX {
            // prev is always adjacent to cur on an undirected graph
            let rev = nbrs
                .binary_search(&(prev as u32))
                .expect("previous vertex is a neighbor");
            if deg == 1 {
                // the only move is the reversal: absorbed
                acc.stuck += 1;
                return;
            }
            let mut t = rng.gen_range(0..deg - 1);
            if t >= rev {
                t += 1;
            }
            nbrs[t] as usize
        } else {
            nbrs[rng.gen_range(0..deg)] as usize
        };
        prev = cur;
        cur = next;
        if cur == start {
            acc.at_origin[step] += 1;
            if !returned {
                acc.first_return[step] += 1;
                returned = true;
            }
        }
    }
}

/// Run all trials in parallel and aggregate per-step origin statistics.
pub fn simulate_walks(cfg: &SimConfig) -> Result<ReturnStats> {
    cfg.validate()?;
    let nb = cfg.walk == WalkKind::NonBacktracking;
    let base = ChaCha8Rng::seed_from_u64(cfg.seed);
    let steps = cfg.max_steps;
    let merged = (0..cfg.trials)
        .into_par_iter()
        .fold(
            || Partial::new(steps),
            |mut acc, trial| {
                let mut rng = trial_rng(&base, trial);
                match &cfg.target {
                    SimTarget::Lattice { dim } => {
                        lattice_trial(*dim, nb, steps, &mut rng, &mut acc)
                    }
                    SimTarget::Graph { graph, start } => {
                        graph_trial(graph, *start, nb, steps, &mut rng, &mut acc)
                    }
                }
                acc
            },
        )
        .reduce(|| Partial::new(steps), Partial::merge);
    let mut at_origin = merged.at_origin;
    at_origin[0] = cfg.trials;
    Ok(ReturnStats {
        walk: cfg.walk,
        trials: cfg.trials,
        max_steps: steps,
        seed: cfg.seed,
        target_label: match &cfg.target {
            SimTarget::Lattice { dim } => format!("Z^{dim}"),
            SimTarget::Graph { graph, .. } => graph.content_hash(),
        },
        at_origin,
        first_return: merged.first_return,
        stuck: merged.stuck,
    })
}

/// Exact-versus-empirical comparison row at one even length.
#[derive(Debug, Clone)]
pub struct ProbeRow {
    /// Walk length `2k`.
    pub length: usize,
    pub exact_nb: f64,
    pub exact_simple: f64,
    /// Exact verdict that the non-backtracking probability does not exceed
    /// the simple one at this length (rational comparison upstream).
    pub exact_holds: bool,
    pub est_nb: f64,
    pub ci_nb: (f64, f64),
    pub est_simple: f64,
    pub ci_simple: (f64, f64),
}

/// Exact lattice return probabilities side by side with Monte Carlo
/// estimates, for lengths `2..=2*k_max` on `Z^d`. The two walk families
/// use disjoint stream key spaces derived from `seed`.
pub fn conjecture_probe(
    d: usize,
    k_max: usize,
    trials: u64,
    seed: u64,
    budgets: &crate::budget::Budgets,
) -> Result<Vec<ProbeRow>> {
    let points = crate::lattice::conjecture_compare(d, k_max, budgets)?;
    let nb_stats = simulate_walks(&SimConfig {
        walk: WalkKind::NonBacktracking,
        target: SimTarget::Lattice { dim: d },
        trials,
        max_steps: 2 * k_max,
        seed,
    })?;
    let simple_stats = simulate_walks(&SimConfig {
        walk: WalkKind::Simple,
        target: SimTarget::Lattice { dim: d },
        trials,
        max_steps: 2 * k_max,
        seed: seed.wrapping_add(0x9e3779b97f4a7c15),
    })?;
    let to_f64 =
        |q: &crate::BigRatio| crate::combinatorics::bigint_ratio_to_f64(q.numer(), q.denom());
    Ok(points
        .into_iter()
        .map(|pt| {
            let s = 2 * pt.k;
            ProbeRow {
                length: s,
                exact_nb: to_f64(&pt.p_nb),
                exact_simple: to_f64(&pt.p_simple),
                exact_holds: pt.holds,
                est_nb: nb_stats.p_hat(s),
                ci_nb: nb_stats.wilson_at(s),
                est_simple: simple_stats.p_hat(s),
                ci_simple: simple_stats.wilson_at(s),
            }
        })
        .collect())
}
