//! Dual (information-ball) view of capacity.
//!
//! Capacity equals `min_Q max_x D(P(.|x) || Q)`: the radius of the smallest
//! KL ball around a center `Q` that contains every row. The minimizing center
//! is the capacity-achieving output law, and rows carrying input mass sit
//! exactly on the boundary of that ball.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::info::{kl_slices, InfoError};
use crate::simplex::{Channel, Distribution, Nats};
use crate::solve::CapacityResult;

/// Input mass above which a symbol counts as supported in [`kkt_verify`].
pub const SUPPORT_THRESHOLD: f64 = 1e-7;

/// Relative singular-value cutoff for the rank test in [`mixture_coefficients`].
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Largest tolerated residual of `Q - sum_i alpha_i P_i`.
pub const MAX_RESIDUAL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("rows are affinely dependent; mixture weights are not unique")]
    NonUnique,
    #[error("center is not in the affine hull of the rows (residual {0:e})")]
    ResidualTooLarge(f64),
    #[error(transparent)]
    Info(#[from] InfoError),
}

impl GeomError {
    pub fn kind(&self) -> &'static str {
        match self {
            GeomError::NonUnique => "NonUnique",
            GeomError::ResidualTooLarge(_) => "ResidualTooLarge",
            GeomError::Info(e) => e.kind(),
        }
    }
}

/// `max_x D(P(.|x) || q)`; `+inf` if some row puts mass where `q` has none.
pub fn dual_radius(ch: &Channel, q: &Distribution) -> Result<Nats, InfoError> {
    Ok(Nats::new(
        row_divergences(ch, q)?
            .into_iter()
            .map(Nats::value)
            .fold(0.0, f64::max),
    ))
}

/// `D(P(.|x) || q)` for every row `x`.
pub fn row_divergences(ch: &Channel, q: &Distribution) -> Result<Vec<Nats>, InfoError> {
    if q.len() != ch.outputs() {
        return Err(InfoError::LengthMismatch {
            left: ch.outputs(),
            right: q.len(),
        });
    }
    Ok(ch
        .rows()
        .iter()
        .map(|r| Nats::new(kl_slices(r.as_slice(), q.as_slice())))
        .collect())
}

/// Outcome of checking a capacity certificate against the ball picture.
#[derive(Debug, Clone, PartialEq)]
pub struct KktReport {
    pub radius: Nats,
    pub divergences: Vec<Nats>,
    /// Inputs whose mass exceeds the support threshold.
    pub support: Vec<usize>,
    /// Largest amount by which any condition is exceeded; 0 when all hold.
    pub max_violation: f64,
    pub pass: bool,
}

/// Checks, with `C = result.capacity` and `Q = result.output`:
///
/// 1. `D(P_x || Q) <= C + tol` for every row,
/// 2. `D(P_x || Q) >= C - tol` for every supported row,
/// 3. `|radius - C| <= tol`.
pub fn kkt_verify(ch: &Channel, result: &CapacityResult, tol: Nats) -> KktReport {
    kkt_verify_with_threshold(ch, result, tol, SUPPORT_THRESHOLD)
}

/// [`kkt_verify`] with an explicit support threshold.
pub fn kkt_verify_with_threshold(
    ch: &Channel,
    result: &CapacityResult,
    tol: Nats,
    support_threshold: f64,
) -> KktReport {
    let c = result.capacity.value();
    let tol = tol.value();
    let divergences = match row_divergences(ch, &result.output) {
        Ok(d) => d,
        Err(_) => {
            // A certificate for a different output alphabet cannot pass.
            return KktReport {
                radius: Nats::INFINITY,
                divergences: Vec::new(),
                support: Vec::new(),
                max_violation: f64::INFINITY,
                pass: false,
            };
        }
    };
    let radius = divergences.iter().map(|d| d.value()).fold(0.0, f64::max);
    let support: Vec<usize> = result
        .input
        .iter()
        .enumerate()
        .filter(|(_, p)| *p > support_threshold)
        .map(|(x, _)| x)
        .collect();

    let mut worst: f64 = 0.0;
    for d in &divergences {
        worst = worst.max(d.value() - (c + tol));
    }
    for &x in &support {
        worst = worst.max((c - tol) - divergences[x].value());
    }
    worst = worst.max((radius - c).abs() - tol);
    let max_violation = worst.max(0.0);
    KktReport {
        radius: Nats::new(radius),
        divergences,
        support,
        max_violation,
        pass: max_violation == 0.0,
    }
}

/// Weights `alpha` with `sum alpha_i = 1` and `Q = sum alpha_i P_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureCoefficients {
    pub weights: Vec<f64>,
    /// Max-abs residual of the reconstruction.
    pub residual: f64,
}

/// Solves `Q = sum_i alpha_i P_i`, `sum_i alpha_i = 1` in least squares.
///
/// The affine constraint is eliminated by writing `alpha_m = 1 - sum_{i<m}
/// alpha_i`, leaving `Q - P_m = sum_{i<m} alpha_i (P_i - P_m)`. Rank is
/// judged on the singular values of that difference matrix.
pub fn mixture_coefficients(
    ch: &Channel,
    q: &Distribution,
) -> Result<MixtureCoefficients, GeomError> {
    if q.len() != ch.outputs() {
        return Err(InfoError::LengthMismatch {
            left: ch.outputs(),
            right: q.len(),
        }
        .into());
    }
    let m = ch.inputs();
    let n = ch.outputs();
    let last = ch.row(m - 1).as_slice();
    let a = DMatrix::from_fn(n, m - 1, |y, i| ch.row(i)[y] - last[y]);
    let b = DVector::from_fn(n, |y, _| q[y] - last[y]);

    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_THRESHOLD * smax)
        .count();
    if smax == 0.0 || rank < m - 1 {
        return Err(GeomError::NonUnique);
    }
    let x = svd
        .solve(&b, RANK_THRESHOLD * smax)
        .map_err(|_| GeomError::NonUnique)?;
    let residual = (&a * &x - &b).amax();
    if residual > MAX_RESIDUAL {
        return Err(GeomError::ResidualTooLarge(residual));
    }
    let mut weights: Vec<f64> = x.iter().copied().collect();
    weights.push(1.0 - weights.iter().sum::<f64>());
    Ok(MixtureCoefficients { weights, residual })
}
