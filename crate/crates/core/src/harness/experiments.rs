//! The Monte Carlo experiments. Every trial is a pure function of
//! (config, n, trial seed), so records replay exactly and output order is
//! independent of the worker count.

use super::config::{ConcentrationMode, ExperimentConfig, ExperimentKind, Format, KappaCap};
use super::records::{cell, opt_cell, write_records, Record};
use super::stats::{trial_seed, wilson, splitmix64, Z95};
use crate::error::{Error, Result};
use crate::graph::{er_sample, min_interconnection, min_interconnection_sampled, neighborhood_size_range, ratio_to_f64, Graph, VertexSet};
use crate::invariants::{delta, delicate_check, f_invariant, kappa_with, tau, KappaOptions, KappaValue};
use crate::subsets::Colex;
use crate::value::{binomial, Extended};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::time::Instant;

const TOL: f64 = 1e-9;

/// One unit of work: which n, which trial, and its derived seed.
#[derive(Debug, Clone, Copy)]
struct Trial {
    index: u64,
    seed: u64,
    n: usize,
    p: f64,
}

fn trials(cfg: &ExperimentConfig) -> Vec<Trial> {
    let mut out = Vec::new();
    for (pos, n) in cfg.sizes().into_iter().enumerate() {
        let p = cfg.probability.at(n);
        for t in 0..cfg.trials {
            let index = (pos * cfg.trials + t) as u64;
            out.push(Trial {
                index,
                seed: trial_seed(cfg.seed, index),
                n,
                p,
            });
        }
    }
    out
}

impl Trial {
    fn graph(&self, cfg: &ExperimentConfig) -> Graph {
        match &cfg.input {
            Some(g) => g.clone(),
            None => er_sample(self.n, self.p, self.seed),
        }
    }
}

/// Runs `f` over all trials, in parallel when `workers > 1`, keeping trial
/// order.
fn map_trials<R: Send>(cfg: &ExperimentConfig, f: impl Fn(&Trial) -> R + Sync) -> Result<Vec<R>> {
    let all = trials(cfg);
    if cfg.workers <= 1 {
        return Ok(all.iter().map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Validation(format!("cannot start {} workers: {e}", cfg.workers)))?;
    Ok(pool.install(|| all.par_iter().map(&f).collect()))
}

fn timed<T>(on: bool, f: impl FnOnce() -> T) -> (T, Option<u64>) {
    let start = Instant::now();
    let out = f();
    (out, on.then(|| start.elapsed().as_millis() as u64))
}

/// Groups rows by n, in first-appearance order.
fn by_n<R>(rows: &[R], n_of: impl Fn(&R) -> usize) -> Vec<(usize, Vec<&R>)> {
    let mut out: Vec<(usize, Vec<&R>)> = Vec::new();
    for r in rows {
        let n = n_of(r);
        match out.iter_mut().find(|(m, _)| *m == n) {
            Some((_, v)) => v.push(r),
            None => out.push((n, vec![r])),
        }
    }
    out
}

fn fraction(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

// ---------------------------------------------------------------- equality

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Equal,
    Unequal,
    Unknown,
    Error,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Equal => "equal",
            Outcome::Unequal => "unequal",
            Outcome::Unknown => "unknown",
            Outcome::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityRecord {
    pub trial: u64,
    pub seed: u64,
    pub n: usize,
    pub p: f64,
    pub i: usize,
    pub edges: usize,
    pub delta: Extended,
    pub kappa_cap: usize,
    pub kappa: Option<KappaValue>,
    pub outcome: Outcome,
    pub both_infinite: bool,
    pub error: Option<String>,
    pub wall_ms: Option<u64>,
}

impl Record for EqualityRecord {
    const HEADER: &'static [&'static str] = &[
        "trial", "seed", "n", "p", "i", "edges", "delta", "kappa_cap", "kappa", "kappa_lower_bound", "outcome",
        "both_infinite", "error", "wall_ms",
    ];
    fn fields(&self) -> Vec<String> {
        let lower = match self.kappa {
            Some(KappaValue::UnknownAtLeast(b)) => b.to_string(),
            _ => String::new(),
        };
        vec![
            cell(self.trial),
            cell(self.seed),
            cell(self.n),
            cell(self.p),
            cell(self.i),
            cell(self.edges),
            cell(self.delta),
            cell(self.kappa_cap),
            opt_cell(&self.kappa),
            lower,
            cell(self.outcome),
            cell(self.both_infinite),
            opt_cell(&self.error),
            opt_cell(&self.wall_ms),
        ]
    }
}

/// Per-n tally. `fraction` is P(κ = δ) over decided trials (both-infinite
/// included); `finite_fraction` excludes the both-infinite trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualitySummary {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub decided: usize,
    pub equal: usize,
    pub both_infinite: usize,
    pub unequal: usize,
    pub unknown: usize,
    pub errors: usize,
    pub fraction: Option<f64>,
    pub ci_low: f64,
    pub ci_high: f64,
    pub finite_fraction: Option<f64>,
}

impl Record for EqualitySummary {
    const HEADER: &'static [&'static str] = &[
        "n", "p", "trials", "decided", "equal", "both_infinite", "unequal", "unknown", "errors", "fraction", "ci_low",
        "ci_high", "finite_fraction",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            cell(self.n),
            cell(self.p),
            cell(self.trials),
            cell(self.decided),
            cell(self.equal),
            cell(self.both_infinite),
            cell(self.unequal),
            cell(self.unknown),
            cell(self.errors),
            opt_cell(&self.fraction),
            cell(self.ci_low),
            cell(self.ci_high),
            opt_cell(&self.finite_fraction),
        ]
    }
}

fn equality_trial(cfg: &ExperimentConfig, t: &Trial) -> EqualityRecord {
    let ((g, d, cap, kappa), wall_ms) = timed(cfg.timing, || {
        let g = t.graph(cfg);
        let d = delta(&g, cfg.i);
        let n = g.n();
        let cap = match cfg.kappa_cap {
            KappaCap::Absolute(c) => c.min(n),
            KappaCap::DeltaPlus(k) => d.finite().map_or(n, |d| (d + k).min(n)),
        };
        let opts = KappaOptions {
            size_cap: Some(cap),
            probe: true,
            method: cfg.kappa_method,
        };
        let kappa = kappa_with(&g, cfg.i, &opts, &cfg.caps);
        (g, d, cap, kappa)
    });
    let (kappa, error) = match kappa {
        Ok(r) => (Some(r.value), None),
        Err(e @ Error::ResourceGuard { .. }) => {
            let Error::ResourceGuard { lower_bound, .. } = e else { unreachable!() };
            (Some(KappaValue::UnknownAtLeast(lower_bound.unwrap_or(0))), Some(e.to_string()))
        }
        Err(e) => (None, Some(e.to_string())),
    };
    let (outcome, both_infinite) = match (kappa, d) {
        (None, _) => (Outcome::Error, false),
        (Some(KappaValue::Infinite), Extended::Infinite) => (Outcome::Equal, true),
        (Some(KappaValue::Infinite), Extended::Finite(_)) => (Outcome::Unequal, false),
        (Some(KappaValue::Finite(k)), d) => {
            (if d == Extended::Finite(k) { Outcome::Equal } else { Outcome::Unequal }, false)
        }
        // a lower bound already past δ decides the trial
        (Some(KappaValue::UnknownAtLeast(b)), Extended::Finite(d)) if b > d => (Outcome::Unequal, false),
        (Some(KappaValue::UnknownAtLeast(_)), _) => (Outcome::Unknown, false),
    };
    EqualityRecord {
        trial: t.index,
        seed: t.seed,
        n: g.n(),
        p: t.p,
        i: cfg.i,
        edges: g.edge_count(),
        delta: d,
        kappa_cap: cap,
        kappa,
        outcome,
        both_infinite,
        error,
        wall_ms,
    }
}

pub fn summarize_equality(records: &[EqualityRecord]) -> Vec<EqualitySummary> {
    by_n(records, |r| r.n)
        .into_iter()
        .map(|(n, rows)| {
            let count = |o: Outcome| rows.iter().filter(|r| r.outcome == o).count();
            let (equal, unequal, unknown, errors) =
                (count(Outcome::Equal), count(Outcome::Unequal), count(Outcome::Unknown), count(Outcome::Error));
            let both_infinite = rows.iter().filter(|r| r.both_infinite).count();
            let decided = equal + unequal;
            let (ci_low, ci_high) = wilson(equal, decided, Z95);
            EqualitySummary {
                n,
                p: rows[0].p,
                trials: rows.len(),
                decided,
                equal,
                both_infinite,
                unequal,
                unknown,
                errors,
                fraction: fraction(equal, decided),
                ci_low,
                ci_high,
                finite_fraction: fraction(equal - both_infinite, decided - both_infinite),
            }
        })
        .collect()
}

/// Samples graphs and compares δ^i with κ^i (searched up to the configured
/// cap). Per-trial failures are recorded, never fatal.
pub fn run_equality_experiment(cfg: &ExperimentConfig) -> Result<(Vec<EqualityRecord>, Vec<EqualitySummary>)> {
    cfg.validate()?;
    let records = map_trials(cfg, |t| equality_trial(cfg, t))?;
    let summary = summarize_equality(&records);
    Ok((records, summary))
}

// ----------------------------------------------------------- concentration

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationRecord {
    pub trial: u64,
    pub seed: u64,
    pub n: usize,
    pub p: f64,
    pub mode: &'static str,
    /// k for neighborhoods; a and b for interconnection.
    pub k: Option<usize>,
    pub a: Option<usize>,
    pub b: Option<usize>,
    /// d⁻_k, or b_{a,b} (an upper bound on it when sampled).
    pub observed_low: Option<usize>,
    /// d⁺_k.
    pub observed_high: Option<usize>,
    pub bound_low: f64,
    pub bound_high: Option<f64>,
    pub sampled: bool,
    pub pass: Option<bool>,
    pub error: Option<String>,
    pub wall_ms: Option<u64>,
}

impl Record for ConcentrationRecord {
    const HEADER: &'static [&'static str] = &[
        "trial", "seed", "n", "p", "mode", "k", "a", "b", "observed_low", "observed_high", "bound_low", "bound_high",
        "sampled", "pass", "error", "wall_ms",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            cell(self.trial),
            cell(self.seed),
            cell(self.n),
            cell(self.p),
            cell(self.mode),
            opt_cell(&self.k),
            opt_cell(&self.a),
            opt_cell(&self.b),
            opt_cell(&self.observed_low),
            opt_cell(&self.observed_high),
            cell(self.bound_low),
            opt_cell(&self.bound_high),
            cell(self.sampled),
            opt_cell(&self.pass),
            opt_cell(&self.error),
            opt_cell(&self.wall_ms),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PassSummary {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub fraction: Option<f64>,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Record for PassSummary {
    const HEADER: &'static [&'static str] =
        &["n", "p", "trials", "passed", "failed", "errors", "fraction", "ci_low", "ci_high"];
    fn fields(&self) -> Vec<String> {
        vec![
            cell(self.n),
            cell(self.p),
            cell(self.trials),
            cell(self.passed),
            cell(self.failed),
            cell(self.errors),
            opt_cell(&self.fraction),
            cell(self.ci_low),
            cell(self.ci_high),
        ]
    }
}

fn concentration_trial(cfg: &ExperimentConfig, t: &Trial) -> ConcentrationRecord {
    let eps = ratio_to_f64(cfg.epsilon);
    let neighborhoods = cfg.mode == ConcentrationMode::Neighborhoods;
    let mut rec = ConcentrationRecord {
        trial: t.index,
        seed: t.seed,
        n: t.n,
        p: t.p,
        mode: if neighborhoods { "neighborhoods" } else { "interconnection" },
        k: neighborhoods.then_some(cfg.k),
        a: (!neighborhoods).then_some(cfg.a),
        b: (!neighborhoods).then_some(cfg.b),
        observed_low: None,
        observed_high: None,
        bound_low: 0.0,
        bound_high: None,
        sampled: false,
        pass: None,
        error: None,
        wall_ms: None,
    };
    let (result, wall_ms) = timed(cfg.timing, || -> Result<()> {
        let g = t.graph(cfg);
        let n = g.n() as f64;
        if neighborhoods {
            let target = n * t.p.powi(cfg.k as i32);
            rec.bound_low = target * (1.0 - eps);
            rec.bound_high = Some(target * (1.0 + eps));
            let (lo, hi) = neighborhood_size_range(&g, cfg.k, cfg.caps.enumeration)?;
            rec.observed_low = Some(lo);
            rec.observed_high = Some(hi);
            rec.pass = Some(lo as f64 >= rec.bound_low - TOL && hi as f64 <= target * (1.0 + eps) + TOL);
        } else {
            rec.bound_low = (cfg.a * cfg.b) as f64 * t.p * (1.0 - eps);
            let exact = binomial(g.n(), cfg.a) <= cfg.caps.enumeration as u128;
            let value = match (exact, cfg.samples) {
                (false, Some(samples)) => {
                    rec.sampled = true;
                    min_interconnection_sampled(&g, cfg.a, cfg.b, samples, splitmix64(t.seed))?
                }
                _ => min_interconnection(&g, cfg.a, cfg.b, cfg.caps.enumeration)?,
            };
            rec.observed_low = Some(value);
            rec.pass = Some(value as f64 >= rec.bound_low - TOL);
        }
        Ok(())
    });
    rec.error = result.err().map(|e| e.to_string());
    rec.wall_ms = wall_ms;
    rec
}

fn summarize_passes<R>(rows: &[R], n_of: impl Fn(&R) -> usize, p_of: impl Fn(&R) -> f64, pass_of: impl Fn(&R) -> Option<bool>) -> Vec<PassSummary> {
    by_n(rows, n_of)
        .into_iter()
        .map(|(n, rows)| {
            let passed = rows.iter().filter(|r| pass_of(r) == Some(true)).count();
            let failed = rows.iter().filter(|r| pass_of(r) == Some(false)).count();
            let (ci_low, ci_high) = wilson(passed, passed + failed, Z95);
            PassSummary {
                n,
                p: p_of(rows[0]),
                trials: rows.len(),
                passed,
                failed,
                errors: rows.len() - passed - failed,
                fraction: fraction(passed, passed + failed),
                ci_low,
                ci_high,
            }
        })
        .collect()
}

/// Checks the neighborhood-size sandwich or the interconnection lower bound
/// on sampled graphs.
pub fn run_concentration_experiment(cfg: &ExperimentConfig) -> Result<(Vec<ConcentrationRecord>, Vec<PassSummary>)> {
    cfg.validate()?;
    let records = map_trials(cfg, |t| concentration_trial(cfg, t))?;
    let summary = summarize_passes(&records, |r| r.n, |r| r.p, |r| r.pass);
    Ok((records, summary))
}

// ---------------------------------------------------------------- chernoff

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChernoffSummary {
    pub seed: u64,
    pub m: usize,
    pub p: f64,
    pub epsilon: f64,
    pub mu: f64,
    pub draws: usize,
    pub outside: usize,
    pub frequency: f64,
    pub bound: f64,
    pub std_error: f64,
    pub pass: bool,
}

impl Record for ChernoffSummary {
    const HEADER: &'static [&'static str] =
        &["seed", "m", "p", "epsilon", "mu", "draws", "outside", "frequency", "bound", "std_error", "pass"];
    fn fields(&self) -> Vec<String> {
        vec![
            cell(self.seed),
            cell(self.m),
            cell(self.p),
            cell(self.epsilon),
            cell(self.mu),
            cell(self.draws),
            cell(self.outside),
            cell(self.frequency),
            cell(self.bound),
            cell(self.std_error),
            cell(self.pass),
        ]
    }
}

/// Empirical tail of a Binomial(m, p) sum against 2 exp(-μ ε² / 3).
pub fn run_chernoff_experiment(cfg: &ExperimentConfig) -> Result<ChernoffSummary> {
    cfg.validate()?;
    let p = cfg.probability.at(cfg.m);
    let eps = ratio_to_f64(cfg.epsilon);
    let mu = cfg.m as f64 * p;
    let (lo, hi) = (mu * (1.0 - eps) - TOL, mu * (1.0 + eps) + TOL);
    let seed = trial_seed(cfg.seed, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outside = 0;
    for _ in 0..cfg.draws {
        let sum = (0..cfg.m).filter(|_| rng.gen_bool(p)).count() as f64;
        if sum < lo || sum > hi {
            outside += 1;
        }
    }
    let frequency = outside as f64 / cfg.draws as f64;
    let bound = 2.0 * (-mu * eps * eps / 3.0).exp();
    let std_error = (frequency * (1.0 - frequency) / cfg.draws as f64).sqrt();
    Ok(ChernoffSummary {
        seed,
        m: cfg.m,
        p,
        epsilon: eps,
        mu,
        draws: cfg.draws,
        outside,
        frequency,
        bound,
        std_error,
        pass: frequency <= bound + 3.0 * std_error,
    })
}

// ----------------------------------------------------------- delicate scan

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelicateTrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub n: usize,
    pub p: f64,
    pub i: usize,
    /// Largest |C| allowed by the size clause.
    pub size_bound: usize,
    pub sampled: bool,
    pub sets_checked: usize,
    /// Sets where ‖H̃_i‖_h > ℓ_i.
    pub h_violations: usize,
    /// Sets with no dominated vertex and ‖H̃^i‖_c below n^{i+1} p^{r_i}.
    pub c_violations: usize,
    /// Sets failing (∗) overall.
    pub violations: usize,
    pub guard_errors: usize,
    pub error: Option<String>,
    pub wall_ms: Option<u64>,
}

impl Record for DelicateTrialRecord {
    const HEADER: &'static [&'static str] = &[
        "trial", "seed", "n", "p", "i", "size_bound", "sampled", "sets_checked", "h_violations", "c_violations",
        "violations", "guard_errors", "error", "wall_ms",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            cell(self.trial),
            cell(self.seed),
            cell(self.n),
            cell(self.p),
            cell(self.i),
            cell(self.size_bound),
            cell(self.sampled),
            cell(self.sets_checked),
            cell(self.h_violations),
            cell(self.c_violations),
            cell(self.violations),
            cell(self.guard_errors),
            opt_cell(&self.error),
            opt_cell(&self.wall_ms),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelicateSummary {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub trials_with_violation: usize,
    pub sets_checked: usize,
    pub h_violations: usize,
    pub c_violations: usize,
    pub violations: usize,
    pub guard_errors: usize,
}

impl Record for DelicateSummary {
    const HEADER: &'static [&'static str] = &[
        "n", "p", "trials", "trials_with_violation", "sets_checked", "h_violations", "c_violations", "violations",
        "guard_errors",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            cell(self.n),
            cell(self.p),
            cell(self.trials),
            cell(self.trials_with_violation),
            cell(self.sets_checked),
            cell(self.h_violations),
            cell(self.c_violations),
            cell(self.violations),
            cell(self.guard_errors),
        ]
    }
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, size: usize) -> VertexSet {
    let mut order: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.gen_range(i..n);
        order.swap(i, j);
    }
    VertexSet::from_indices(n, order[..size].iter().copied())
}

fn delicate_trial(cfg: &ExperimentConfig, t: &Trial) -> DelicateTrialRecord {
    let eps = ratio_to_f64(cfg.epsilon);
    let g = t.graph(cfg);
    let n = g.n();
    let size_bound = super::config::delicate_size_bound(n, t.p, cfg.i, eps).min(n);
    let sets: u128 = (0..=size_bound).map(|s| binomial(n, s)).sum();
    let sampled = sets > cfg.caps.enumeration as u128 && cfg.samples.is_some();
    let mut rec = DelicateTrialRecord {
        trial: t.index,
        seed: t.seed,
        n,
        p: t.p,
        i: cfg.i,
        size_bound,
        sampled,
        sets_checked: 0,
        h_violations: 0,
        c_violations: 0,
        violations: 0,
        guard_errors: 0,
        error: None,
        wall_ms: None,
    };
    let (result, wall_ms) = timed(cfg.timing, || -> Result<()> {
        let mut check = |c: &VertexSet| -> Result<()> {
            match delicate_check(&g, cfg.i, c, cfg.epsilon, cfg.ell, cfg.r, t.p, &cfg.caps) {
                Ok(d) => {
                    rec.sets_checked += 1;
                    rec.h_violations += usize::from(!d.h_norm_ok);
                    rec.c_violations += usize::from(!d.dominated_vertex_exists && !d.c_norm_ok);
                    rec.violations += usize::from(d.verdict == Some(false));
                    Ok(())
                }
                Err(e) if e.is_resource_guard() => {
                    rec.guard_errors += 1;
                    Ok(())
                }
                Err(e) => Err(e),
            }
        };
        if sampled {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(t.seed));
            for _ in 0..cfg.samples.unwrap_or(0) {
                let size = rng.gen_range(0..=size_bound);
                check(&random_subset(&mut rng, n, size))?;
            }
        } else {
            if sets > cfg.caps.enumeration as u128 {
                return Err(Error::guard("deletion sets within the size bound", sets, cfg.caps.enumeration));
            }
            for s in 0..=size_bound {
                for c in Colex::new(n, s) {
                    check(&VertexSet::from_indices(n, c))?;
                }
            }
        }
        Ok(())
    });
    rec.error = result.err().map(|e| e.to_string());
    rec.wall_ms = wall_ms;
    rec
}

pub fn summarize_delicate(records: &[DelicateTrialRecord]) -> Vec<DelicateSummary> {
    by_n(records, |r| r.n)
        .into_iter()
        .map(|(n, rows)| {
            let sum = |f: fn(&DelicateTrialRecord) -> usize| rows.iter().map(|r| f(r)).sum();
            DelicateSummary {
                n,
                p: rows[0].p,
                trials: rows.len(),
                trials_with_violation: rows.iter().filter(|r| r.violations > 0).count(),
                sets_checked: sum(|r| r.sets_checked),
                h_violations: sum(|r| r.h_violations),
                c_violations: sum(|r| r.c_violations),
                violations: sum(|r| r.violations),
                guard_errors: sum(|r| r.guard_errors),
            }
        })
        .collect()
}

/// Evaluates condition (∗) on every deletion set within the size bound (or
/// on random ones, when `samples` is set and enumeration would exceed the
/// cap) and counts violations per clause.
pub fn run_delicate_scan(cfg: &ExperimentConfig) -> Result<(Vec<DelicateTrialRecord>, Vec<DelicateSummary>)> {
    cfg.validate()?;
    let records = map_trials(cfg, |t| delicate_trial(cfg, t))?;
    let summary = summarize_delicate(&records);
    Ok((records, summary))
}

// ------------------------------------------------------------------ survey

/// f is only attempted up to this many vertices.
pub const SURVEY_F_MAX_N: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyRecord {
    pub trial: u64,
    pub seed: u64,
    pub n: usize,
    pub p: f64,
    pub f: Option<Extended>,
    /// f was searched over |C| ≤ c_size_cap < n only.
    pub f_partial: Option<bool>,
    /// n p² / 4.
    pub f_threshold: f64,
    pub f_ok: Option<bool>,
    pub tau: Option<Extended>,
    /// 3 n p² / 2.
    pub tau_threshold: f64,
    pub tau_ok: Option<bool>,
    pub error: Option<String>,
    pub wall_ms: Option<u64>,
}

impl Record for SurveyRecord {
    const HEADER: &'static [&'static str] = &[
        "trial", "seed", "n", "p", "f", "f_partial", "f_threshold", "f_ok", "tau", "tau_threshold", "tau_ok", "error",
        "wall_ms",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            cell(self.trial),
            cell(self.seed),
            cell(self.n),
            cell(self.p),
            opt_cell(&self.f),
            opt_cell(&self.f_partial),
            cell(self.f_threshold),
            opt_cell(&self.f_ok),
            opt_cell(&self.tau),
            cell(self.tau_threshold),
            opt_cell(&self.tau_ok),
            opt_cell(&self.error),
            opt_cell(&self.wall_ms),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveySummary {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub f_checked: usize,
    pub f_ok: usize,
    pub tau_checked: usize,
    pub tau_ok: usize,
    pub errors: usize,
}

impl Record for SurveySummary {
    const HEADER: &'static [&'static str] = &["n", "p", "trials", "f_checked", "f_ok", "tau_checked", "tau_ok", "errors"];
    fn fields(&self) -> Vec<String> {
        vec![
            cell(self.n),
            cell(self.p),
            cell(self.trials),
            cell(self.f_checked),
            cell(self.f_ok),
            cell(self.tau_checked),
            cell(self.tau_ok),
            cell(self.errors),
        ]
    }
}

fn exceeds(v: Extended, threshold: f64, strict: bool) -> bool {
    match v {
        Extended::Infinite => true,
        Extended::Finite(x) if strict => x as f64 > threshold,
        Extended::Finite(x) => x as f64 >= threshold - TOL,
    }
}

fn survey_trial(cfg: &ExperimentConfig, t: &Trial) -> SurveyRecord {
    let n = t.n as f64;
    let mut rec = SurveyRecord {
        trial: t.index,
        seed: t.seed,
        n: t.n,
        p: t.p,
        f: None,
        f_partial: None,
        f_threshold: n * t.p * t.p / 4.0,
        f_ok: None,
        tau: None,
        tau_threshold: 1.5 * n * t.p * t.p,
        tau_ok: None,
        error: None,
        wall_ms: None,
    };
    let (result, wall_ms) = timed(cfg.timing, || -> Result<()> {
        let g = t.graph(cfg);
        let tv = tau(&g, &cfg.caps)?;
        rec.tau = Some(tv);
        rec.tau_ok = Some(exceeds(tv, rec.tau_threshold, true));
        if g.n() <= SURVEY_F_MAX_N {
            let f = f_invariant(&g, cfg.c_size_cap, &cfg.caps)?;
            rec.f = Some(f.value);
            rec.f_partial = Some(f.partial);
            rec.f_ok = Some(exceeds(f.value, rec.f_threshold, false));
        }
        Ok(())
    });
    rec.error = result.err().map(|e| e.to_string());
    rec.wall_ms = wall_ms;
    rec
}

pub fn summarize_survey(records: &[SurveyRecord]) -> Vec<SurveySummary> {
    by_n(records, |r| r.n)
        .into_iter()
        .map(|(n, rows)| SurveySummary {
            n,
            p: rows[0].p,
            trials: rows.len(),
            f_checked: rows.iter().filter(|r| r.f_ok.is_some()).count(),
            f_ok: rows.iter().filter(|r| r.f_ok == Some(true)).count(),
            tau_checked: rows.iter().filter(|r| r.tau_ok.is_some()).count(),
            tau_ok: rows.iter().filter(|r| r.tau_ok == Some(true)).count(),
            errors: rows.iter().filter(|r| r.error.is_some()).count(),
        })
        .collect()
}

/// Computes f (for n ≤ 12) and τ on sampled graphs and compares them with
/// n p² / 4 and 3 n p² / 2.
pub fn run_f_and_tau_survey(cfg: &ExperimentConfig) -> Result<(Vec<SurveyRecord>, Vec<SurveySummary>)> {
    cfg.validate()?;
    let records = map_trials(cfg, |t| survey_trial(cfg, t))?;
    let summary = summarize_survey(&records);
    Ok((records, summary))
}

// ------------------------------------------------------------------ report

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Equality(Vec<EqualityRecord>, Vec<EqualitySummary>),
    Concentration(Vec<ConcentrationRecord>, Vec<PassSummary>),
    Chernoff(ChernoffSummary),
    Delicate(Vec<DelicateTrialRecord>, Vec<DelicateSummary>),
    Survey(Vec<SurveyRecord>, Vec<SurveySummary>),
}

impl Report {
    pub fn write_records(&self, format: Format, w: impl Write) -> Result<()> {
        match self {
            Report::Equality(r, _) => write_records(r, format, w),
            Report::Concentration(r, _) => write_records(r, format, w),
            Report::Chernoff(s) => write_records(std::slice::from_ref(s), format, w),
            Report::Delicate(r, _) => write_records(r, format, w),
            Report::Survey(r, _) => write_records(r, format, w),
        }
    }

    pub fn write_summary(&self, format: Format, w: impl Write) -> Result<()> {
        match self {
            Report::Equality(_, s) => write_records(s, format, w),
            Report::Concentration(_, s) => write_records(s, format, w),
            Report::Chernoff(s) => write_records(std::slice::from_ref(s), format, w),
            Report::Delicate(_, s) => write_records(s, format, w),
            Report::Survey(_, s) => write_records(s, format, w),
        }
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    Ok(match cfg.kind {
        ExperimentKind::Equality => {
            let (r, s) = run_equality_experiment(cfg)?;
            Report::Equality(r, s)
        }
        ExperimentKind::Concentration => {
            let (r, s) = run_concentration_experiment(cfg)?;
            Report::Concentration(r, s)
        }
        ExperimentKind::Chernoff => Report::Chernoff(run_chernoff_experiment(cfg)?),
        ExperimentKind::DelicateScan => {
            let (r, s) = run_delicate_scan(cfg)?;
            Report::Delicate(r, s)
        }
        ExperimentKind::Survey => {
            let (r, s) = run_f_and_tau_survey(cfg)?;
            Report::Survey(r, s)
        }
    })
}
