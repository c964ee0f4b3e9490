//! Batch checks of the `1 - 1/e` input-probability ceiling.
//!
//! [`ensemble_run`] draws channels with Dirichlet rows from a per-trial
//! ChaCha stream keyed by `(seed, trial)`, so results do not depend on
//! evaluation order; [`ensemble_run_parallel`] returns the same records.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Gamma};
use rayon::prelude::*;
use thiserror::Error;

use crate::info::{f_kernel, FArgs};
use crate::simplex::{Channel, Distribution, Nats};
use crate::solve::{blahut_arimoto, SolveError, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::{INV_E, MAX_INPUT_PROB};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("invalid ensemble configuration: {0}")]
    InvalidConfig(String),
    #[error("surface grid needs at least one step")]
    GridTooSmall,
}

impl VerifyError {
    pub fn kind(&self) -> &'static str {
        match self {
            VerifyError::InvalidConfig(_) => "InvalidConfig",
            VerifyError::GridTooSmall => "GridTooSmall",
        }
    }
}

/// Largest optimal input probability of one channel against `1 - 1/e`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub capacity: Nats,
    pub input: Distribution,
    pub max_input_prob: f64,
    pub threshold: f64,
    /// `threshold - max_input_prob`.
    pub margin: f64,
    /// Zero-capacity channel; passes automatically.
    pub trivial: bool,
    pub pass: bool,
}

/// Solves `ch` with Blahut–Arimoto and compares `max_x P*(x)` with `1 - 1/e`.
pub fn verify_bound(ch: &Channel, tol: Nats) -> Result<BoundReport, SolveError> {
    verify_bound_with(ch, tol, DEFAULT_MAX_ITER)
}

pub fn verify_bound_with(
    ch: &Channel,
    tol: Nats,
    max_iter: usize,
) -> Result<BoundReport, SolveError> {
    let res = blahut_arimoto(ch, tol, max_iter)?;
    let max_input_prob = res.input.max_prob();
    let margin = MAX_INPUT_PROB - max_input_prob;
    let trivial = res.capacity.value() < tol.value();
    Ok(BoundReport {
        capacity: res.capacity,
        input: res.input,
        max_input_prob,
        threshold: MAX_INPUT_PROB,
        margin,
        trivial,
        pass: trivial || margin > 0.0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    pub m: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Dirichlet parameter shared by every row entry.
    pub concentration: f64,
    pub tol: Nats,
    pub max_iter: usize,
}

impl EnsembleConfig {
    pub fn new(m: usize, n: usize, trials: usize, seed: u64) -> Self {
        EnsembleConfig {
            m,
            n,
            trials,
            seed,
            concentration: 1.0,
            tol: Nats::new(DEFAULT_TOL),
            max_iter: DEFAULT_MAX_ITER,
        }
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.m < 2 || self.n < 2 {
            return Err(VerifyError::InvalidConfig(format!(
                "alphabets must have at least 2 symbols, got m={} n={}",
                self.m, self.n
            )));
        }
        if !(self.concentration > 0.0 && self.concentration.is_finite()) {
            return Err(VerifyError::InvalidConfig(format!(
                "concentration must be positive, got {}",
                self.concentration
            )));
        }
        if !(self.tol.value() > 0.0 && self.tol.value().is_finite()) || self.max_iter == 0 {
            return Err(VerifyError::InvalidConfig(
                "solver tolerance and iteration cap must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Per-trial generator: ChaCha8 keyed by `seed`, stream `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A Dirichlet(`concentration`) law on `n` symbols.
///
/// # Panics
///
/// Panics if `concentration` is not positive and finite.
pub fn sample_dirichlet<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    concentration: f64,
) -> Distribution {
    let gamma = Gamma::new(concentration, 1.0).expect("positive concentration");
    loop {
        let draws: Vec<f64> = (0..n).map(|_| gamma.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 && total.is_finite() {
            return Distribution::from_convex(draws.into_iter().map(|g| g / total).collect());
        }
    }
}

/// An `m x n` channel with independent Dirichlet rows.
pub fn sample_channel<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    n: usize,
    concentration: f64,
) -> Channel {
    let rows = (0..m)
        .map(|_| sample_dirichlet(rng, n, concentration))
        .collect();
    Channel::from_rows(rows).expect("m, n >= 2")
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub outcome: Result<BoundReport, SolveError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    /// Smallest margin over solved non-trivial channels.
    pub min_margin: Option<f64>,
    /// Largest optimal input probability over solved channels.
    pub max_input_prob: Option<f64>,
    /// Non-trivial channels with margin `<= 0`.
    pub failures: usize,
    pub solver_errors: usize,
    pub trivial: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleOutcome {
    pub records: Vec<TrialRecord>,
    pub summary: EnsembleSummary,
}

fn run_trial(config: &EnsembleConfig, trial: usize) -> TrialRecord {
    let mut rng = trial_rng(config.seed, trial as u64);
    let ch = sample_channel(&mut rng, config.m, config.n, config.concentration);
    TrialRecord {
        trial,
        outcome: verify_bound_with(&ch, config.tol, config.max_iter),
    }
}

/// Runs `config.trials` random channels on the calling thread.
pub fn ensemble_run(config: &EnsembleConfig) -> Result<EnsembleOutcome, VerifyError> {
    config.validate()?;
    let records: Vec<TrialRecord> = (0..config.trials).map(|t| run_trial(config, t)).collect();
    Ok(summarize(records))
}

/// [`ensemble_run`] spread over the rayon pool; records are identical.
pub fn ensemble_run_parallel(config: &EnsembleConfig) -> Result<EnsembleOutcome, VerifyError> {
    config.validate()?;
    let records: Vec<TrialRecord> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect();
    Ok(summarize(records))
}

fn summarize(records: Vec<TrialRecord>) -> EnsembleOutcome {
    let mut summary = EnsembleSummary {
        min_margin: None,
        max_input_prob: None,
        failures: 0,
        solver_errors: 0,
        trivial: 0,
    };
    for rec in &records {
        match &rec.outcome {
            Err(_) => summary.solver_errors += 1,
            Ok(rep) => {
                summary.max_input_prob = Some(
                    summary
                        .max_input_prob
                        .map_or(rep.max_input_prob, |v| v.max(rep.max_input_prob)),
                );
                if rep.trivial {
                    summary.trivial += 1;
                    continue;
                }
                summary.min_margin =
                    Some(summary.min_margin.map_or(rep.margin, |v| v.min(rep.margin)));
                if rep.margin <= 0.0 {
                    summary.failures += 1;
                }
            }
        }
    }
    EnsembleOutcome { records, summary }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub p1: f64,
    pub p2: f64,
    pub value: f64,
}

/// `f(1/e; p1, p2)` on the `(grid_k + 1)^2` uniform grid over `[0, 1]^2`,
/// `p1` varying slowest.
pub fn f_surface(grid_k: usize) -> Result<Vec<SurfacePoint>, VerifyError> {
    if grid_k == 0 {
        return Err(VerifyError::GridTooSmall);
    }
    let step = |i: usize| i as f64 / grid_k as f64;
    let mut out = Vec::with_capacity((grid_k + 1) * (grid_k + 1));
    for i in 0..=grid_k {
        for j in 0..=grid_k {
            let (p1, p2) = (step(i), step(j));
            debug_assert!(FArgs::at_inv_e(p1, p2).is_ok());
            out.push(SurfacePoint {
                p1,
                p2,
                value: f_kernel(INV_E, p1, p2),
            });
        }
    }
    Ok(out)
}
