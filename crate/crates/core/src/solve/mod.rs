//! Capacity solvers.
//!
//! - [`blahut_arimoto`]: alternating maximization for any channel,
//!   terminated on the upper/lower capacity sandwich.
//! - [`binary_optimal_input`]: bisection on `dI/d alpha` for two-input
//!   channels, bracketed by `[1/e, 1 - 1/e]`.
//! - [`constrained_binary_capacity`]: the binary problem under a `(0, 1)`
//!   input cost and budget `rho`.
//!
//! [`SolverRegistry`] exposes the general-purpose solvers behind the
//! [`CapacitySolver`] trait so callers can pick one by name.

mod binary;
mod blahut_arimoto;
mod registry;

use thiserror::Error;

use crate::info::InfoError;
use crate::simplex::{Distribution, Nats};

pub use binary::{
    binary_optimal_input, constrained_binary_capacity, BinaryOptimum, ConstrainedOptimum, CostSpec,
    BISECTION_TOL,
};
pub use blahut_arimoto::blahut_arimoto;
pub use registry::{BinaryEqualizer, BlahutArimoto, CapacitySolver, SolverOptions, SolverRegistry};

/// Default sandwich tolerance in nats.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default Blahut–Arimoto iteration cap.
pub const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("no convergence after {iterations} iterations (gap {gap:e} nats)")]
    NoConvergence { iterations: usize, gap: f64 },
    #[error("the two rows are identical; every input is optimal")]
    IdenticalRows,
    #[error("budget rho = {0} outside [0, 1]")]
    RhoOutOfRange(f64),
    #[error("only the binary cost vector (0, 1) is supported, got {0:?}")]
    UnsupportedCost(Vec<f64>),
    #[error("solver needs {expected} inputs, channel has {found}")]
    UnsupportedAlphabet { expected: usize, found: usize },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("iteration cap must be at least 1")]
    InvalidMaxIter,
    #[error("unknown solver {0:?}")]
    UnknownSolver(String),
    #[error(transparent)]
    Info(#[from] InfoError),
}

impl SolveError {
    pub fn kind(&self) -> &'static str {
        match self {
            SolveError::NoConvergence { .. } => "NoConvergence",
            SolveError::IdenticalRows => "IdenticalRows",
            SolveError::RhoOutOfRange(_) => "RhoOutOfRange",
            SolveError::UnsupportedCost(_) => "UnsupportedCost",
            SolveError::UnsupportedAlphabet { .. } => "UnsupportedAlphabet",
            SolveError::InvalidTolerance(_) => "InvalidTolerance",
            SolveError::InvalidMaxIter => "InvalidMaxIter",
            SolveError::UnknownSolver(_) => "UnknownSolver",
            SolveError::Info(e) => e.kind(),
        }
    }
}

/// A solved channel: capacity with the optimal input and induced output.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    /// Mutual information of `input`, a lower bound within `gap` of capacity.
    pub capacity: Nats,
    pub input: Distribution,
    pub output: Distribution,
    pub iterations: usize,
    /// `max_x D(P(.|x) || output) - capacity` at termination.
    pub gap: Nats,
    /// Zero-capacity channel with all rows equal.
    pub trivial: bool,
}

fn check_tol(tol: f64) -> Result<(), SolveError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(SolveError::InvalidTolerance(tol))
    }
}
