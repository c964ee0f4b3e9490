use super::{check_tol, SolveError};
use crate::info::{binary_derivative, kl_slices};
use crate::simplex::{Distribution, Nats, ROW_EQUALITY_TOLERANCE};
use crate::{INV_E, MAX_INPUT_PROB};

/// Bracket width used when callers want the equalizer to machine precision.
pub const BISECTION_TOL: f64 = 1e-15;

const MAX_BISECTIONS: usize = 200;

/// Optimum of a two-input channel `[P1; P2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryOptimum {
    /// Optimal probability of the input whose row is `P1`.
    pub alpha_star: f64,
    pub capacity: Nats,
    pub iterations: usize,
}

/// Capacity-achieving weight on `P1` for the channel with rows `P1`, `P2`.
///
/// `dI/d alpha = D(P1 || Q_alpha) - D(P2 || Q_alpha)` is non-increasing,
/// positive at `alpha = 1/e` and negative at `alpha = 1 - 1/e` whenever the
/// rows differ, so plain bisection on that bracket always finds the root.
/// Stops once the bracket is narrower than `tol`.
pub fn binary_optimal_input(
    p1: &Distribution,
    p2: &Distribution,
    tol: f64,
) -> Result<BinaryOptimum, SolveError> {
    check_tol(tol)?;
    let diff = p1
        .max_abs_diff(p2)
        .ok_or(crate::info::InfoError::LengthMismatch {
            left: p1.len(),
            right: p2.len(),
        })?;
    if diff <= ROW_EQUALITY_TOLERANCE {
        return Err(SolveError::IdenticalRows);
    }
    let (a, b) = (p1.as_slice(), p2.as_slice());
    let (mut lo, mut hi) = (INV_E, MAX_INPUT_PROB);
    let mut iterations = 0;
    while hi - lo > tol && iterations < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let g = binary_derivative(mid, a, b);
        if g > 0.0 {
            lo = mid;
        } else if g < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            hi = mid;
        }
    }
    let alpha_star = 0.5 * (lo + hi);
    Ok(BinaryOptimum {
        alpha_star,
        capacity: Nats::new(binary_mutual_information(alpha_star, a, b)),
        iterations,
    })
}

pub(crate) fn binary_mutual_information(alpha: f64, p1: &[f64], p2: &[f64]) -> f64 {
    let q: Vec<f64> = p1
        .iter()
        .zip(p2)
        .map(|(x, y)| alpha * x + (1.0 - alpha) * y)
        .collect();
    let mut acc = 0.0;
    if alpha > 0.0 {
        acc += alpha * kl_slices(p1, &q);
    }
    if alpha < 1.0 {
        acc += (1.0 - alpha) * kl_slices(p2, &q);
    }
    acc
}

/// Per-symbol input costs with a budget on the expected cost.
///
/// Only the binary vector `(0, 1)` is supported: symbol 1 is the costly one.
#[derive(Debug, Clone, PartialEq)]
pub struct CostSpec {
    pub costs: Vec<f64>,
    pub budget: f64,
}

impl CostSpec {
    /// Costs `(0, 1)` with expected-cost budget `rho`.
    pub fn binary(rho: f64) -> Self {
        CostSpec {
            costs: vec![0.0, 1.0],
            budget: rho,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstrainedOptimum {
    /// Optimal `Pr{X = 1}`, the mass on the costly symbol.
    pub alpha_star: f64,
    pub capacity: Nats,
    /// Optimal `Pr{X = 1}` without the budget.
    pub unconstrained_alpha: f64,
    pub constraint_active: bool,
}

/// Capacity of `[P2; P1]` subject to `E[l(X)] <= rho` with `l = (0, 1)`.
///
/// `p_costly` is the row of symbol 1 and `p_free` the row of symbol 0. With
/// `alpha = Pr{X = 1}` the mutual information is concave in `alpha`, so the
/// optimum is `min(rho, alpha_unconstrained)`. Since the unconstrained
/// optimum always exceeds `1/e`, any `rho <= 1/e` is returned unchanged.
pub fn constrained_binary_capacity(
    p_costly: &Distribution,
    p_free: &Distribution,
    cost: &CostSpec,
) -> Result<ConstrainedOptimum, SolveError> {
    if cost.costs != [0.0, 1.0] {
        return Err(SolveError::UnsupportedCost(cost.costs.clone()));
    }
    let rho = cost.budget;
    if !(0.0..=1.0).contains(&rho) {
        return Err(SolveError::RhoOutOfRange(rho));
    }
    let free = binary_optimal_input(p_costly, p_free, BISECTION_TOL)?;
    let constraint_active = rho < free.alpha_star;
    let alpha_star = if constraint_active {
        rho
    } else {
        free.alpha_star
    };
    Ok(ConstrainedOptimum {
        alpha_star,
        capacity: Nats::new(binary_mutual_information(
            alpha_star,
            p_costly.as_slice(),
            p_free.as_slice(),
        )),
        unconstrained_alpha: free.alpha_star,
        constraint_active,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn d(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    /// Independent grid search over the weight on `p1`.
    fn grid_argmax(p1: &[f64], p2: &[f64], steps: usize) -> (f64, f64) {
        let mi = |a: f64| -> f64 {
            let mut acc = 0.0;
            for (&x, &y) in p1.iter().zip(p2) {
                let q = a * x + (1.0 - a) * y;
                if x > 0.0 {
                    acc += a * x * (x / q).ln();
                }
                if y > 0.0 {
                    acc += (1.0 - a) * y * (y / q).ln();
                }
            }
            acc
        };
        (0..=steps)
            .map(|k| k as f64 / steps as f64)
            .map(|a| (a, mi(a)))
            .fold((0.0, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            })
    }

    #[test]
    fn examples() {
        let r = binary_optimal_input(&d(&[1.0, 0.0]), &d(&[0.0, 1.0]), 1e-12).unwrap();
        assert!((r.alpha_star - 0.5).abs() < 1e-12);
        assert!((r.capacity.value() - LN_2).abs() < 1e-15);

        let r = binary_optimal_input(&d(&[1.0, 0.0]), &d(&[0.5, 0.5]), 1e-12).unwrap();
        let (a, c) = grid_argmax(&[1.0, 0.0], &[0.5, 0.5], 100_000);
        assert!((a - 0.6).abs() < 1e-9);
        assert!((r.alpha_star - 0.6).abs() < 1e-11);
        assert!((r.capacity.value() - c).abs() < 1e-12);
        assert!((r.capacity.value() - 1.25f64.ln()).abs() < 1e-15);

        let r = binary_optimal_input(&d(&[0.9, 0.1]), &d(&[0.1, 0.9]), 1e-12).unwrap();
        assert!((r.alpha_star - 0.5).abs() < 1e-12);
    }

    #[test]
    fn identical_rows_rejected() {
        let p = d(&[0.3, 0.7]);
        assert_eq!(
            binary_optimal_input(&p, &p, 1e-9),
            Err(SolveError::IdenticalRows)
        );
    }

    #[test]
    fn cost_examples() {
        let pairs = [
            (d(&[1.0, 0.0]), d(&[0.5, 0.5])),
            (d(&[0.2, 0.3, 0.5]), d(&[0.6, 0.3, 0.1])),
        ];
        for (p1, p2) in &pairs {
            let r = constrained_binary_capacity(p1, p2, &CostSpec::binary(0.2)).unwrap();
            assert_eq!(r.alpha_star, 0.2);
            assert!(r.constraint_active);
            let r = constrained_binary_capacity(p1, p2, &CostSpec::binary(INV_E)).unwrap();
            assert_eq!(r.alpha_star, INV_E);
        }
        // Costly symbol is the noisy Z(0.5) input; its free optimum is 0.4.
        let noisy = d(&[0.5, 0.5]);
        let clean = d(&[1.0, 0.0]);
        let r = constrained_binary_capacity(&noisy, &clean, &CostSpec::binary(0.5)).unwrap();
        assert!((r.alpha_star - 0.4).abs() < 1e-12);
        assert!(!r.constraint_active);
        assert!((r.capacity.value() - 1.25f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn cost_errors() {
        let (a, b) = (d(&[1.0, 0.0]), d(&[0.5, 0.5]));
        assert_eq!(
            constrained_binary_capacity(&a, &b, &CostSpec::binary(1.5)),
            Err(SolveError::RhoOutOfRange(1.5))
        );
        let cost = CostSpec {
            costs: vec![1.0, 2.0],
            budget: 0.5,
        };
        assert!(matches!(
            constrained_binary_capacity(&a, &b, &cost),
            Err(SolveError::UnsupportedCost(_))
        ));
        assert_eq!(
            constrained_binary_capacity(&a, &a, &CostSpec::binary(0.5)),
            Err(SolveError::IdenticalRows)
        );
    }
}
