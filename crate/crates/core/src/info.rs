//! Information-theoretic kernels.
//!
//! Every sum uses the `0 ln 0 = 0` convention term by term. KL divergence
//! returns `+inf` instead of failing when the first argument is not
//! absolutely continuous with respect to the second.

use thiserror::Error;

use crate::simplex::{Channel, Distribution, Nats};
use crate::INV_E;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InfoError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("mixture weight {0} outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error("{name} = {value} outside [0, 1]")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },
    #[error("partial derivatives are singular at p1 = 0")]
    SingularAtZero,
}

impl InfoError {
    pub fn kind(&self) -> &'static str {
        match self {
            InfoError::LengthMismatch { .. } => "LengthMismatch",
            InfoError::AlphaOutOfRange(_) => "AlphaOutOfRange",
            InfoError::ProbabilityOutOfRange { .. } => "ProbabilityOutOfRange",
            InfoError::SingularAtZero => "SingularAtZero",
        }
    }
}

fn same_len(left: usize, right: usize) -> Result<(), InfoError> {
    if left == right {
        Ok(())
    } else {
        Err(InfoError::LengthMismatch { left, right })
    }
}

fn check_alpha(alpha: f64) -> Result<(), InfoError> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(InfoError::AlphaOutOfRange(alpha))
    }
}

/// `x ln(x / m)` with `0 ln(0 / m) = 0` and `x ln(x / 0) = +inf` for `x > 0`.
#[inline]
fn x_ln_x_over(x: f64, m: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if m <= 0.0 {
        f64::INFINITY
    } else {
        x * (x / m).ln()
    }
}

pub(crate) fn kl_slices(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        let term = x_ln_x_over(pi, qi);
        if term == f64::INFINITY {
            return f64::INFINITY;
        }
        acc += term;
    }
    acc.max(0.0)
}

/// Writes `sum_x input[x] * row_x` into `out`.
pub(crate) fn output_into(input: &[f64], ch: &Channel, out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    for (&px, row) in input.iter().zip(ch.rows()) {
        if px == 0.0 {
            continue;
        }
        for (o, &pyx) in out.iter_mut().zip(row.as_slice()) {
            *o += px * pyx;
        }
    }
}

/// `D(p || q)` in nats.
pub fn kl_divergence(p: &Distribution, q: &Distribution) -> Result<Nats, InfoError> {
    same_len(p.len(), q.len())?;
    Ok(Nats::new(kl_slices(p.as_slice(), q.as_slice())))
}

/// Output law `Q(y) = sum_x P(x) P(y|x)` induced by `input`.
pub fn induced_output(input: &Distribution, ch: &Channel) -> Result<Distribution, InfoError> {
    same_len(input.len(), ch.inputs())?;
    let mut q = vec![0.0; ch.outputs()];
    output_into(input.as_slice(), ch, &mut q);
    Ok(Distribution::from_convex(q))
}

/// `I(X; Y)` for input law `input` on channel `ch`.
pub fn mutual_information(input: &Distribution, ch: &Channel) -> Result<Nats, InfoError> {
    same_len(input.len(), ch.inputs())?;
    let mut q = vec![0.0; ch.outputs()];
    output_into(input.as_slice(), ch, &mut q);
    Ok(Nats::new(mutual_information_slices(
        input.as_slice(),
        ch,
        &q,
    )))
}

pub(crate) fn mutual_information_slices(input: &[f64], ch: &Channel, q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&px, row) in input.iter().zip(ch.rows()) {
        if px == 0.0 {
            continue;
        }
        for (&pyx, &qy) in row.as_slice().iter().zip(q) {
            // qy >= px * pyx > 0 whenever the term is live.
            acc += px * x_ln_x_over(pyx, qy);
        }
    }
    acc.max(0.0)
}

/// `alpha * p1 + (1 - alpha) * p2`.
pub fn mixture(
    alpha: f64,
    p1: &Distribution,
    p2: &Distribution,
) -> Result<Distribution, InfoError> {
    same_len(p1.len(), p2.len())?;
    check_alpha(alpha)?;
    Ok(Distribution::from_convex(mix_slices(
        alpha,
        p1.as_slice(),
        p2.as_slice(),
    )))
}

fn mix_slices(alpha: f64, p1: &[f64], p2: &[f64]) -> Vec<f64> {
    let beta = 1.0 - alpha;
    p1.iter()
        .zip(p2)
        .map(|(a, b)| alpha * a + beta * b)
        .collect()
}

/// Arguments of the kernel `f(alpha; p1, p2)`; all three lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FArgs {
    alpha: f64,
    p1: f64,
    p2: f64,
}

impl FArgs {
    pub fn new(alpha: f64, p1: f64, p2: f64) -> Result<Self, InfoError> {
        check_alpha(alpha)?;
        for (name, value) in [("p1", p1), ("p2", p2)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(InfoError::ProbabilityOutOfRange { name, value });
            }
        }
        Ok(FArgs { alpha, p1, p2 })
    }

    /// Shorthand for the `alpha = 1/e` slice.
    pub fn at_inv_e(p1: f64, p2: f64) -> Result<Self, InfoError> {
        FArgs::new(INV_E, p1, p2)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }
}

/// The per-output-symbol kernel
///
/// ```text
/// f(a; p1, p2) = p1 ln(p1 / m) - p2 ln(p2 / m) - (p1 - p2),   m = a p1 + (1 - a) p2
/// ```
///
/// Summed over output symbols it equals `D(P1 || Q_a) - D(P2 || Q_a)`, the
/// derivative of the binary-input mutual information in the weight `a` of
/// `P1`. On the slice `a = 1/e` it is non-negative and vanishes exactly
/// when `p1 = p2` or `p2 = 0`.
pub fn f_eval(args: FArgs) -> f64 {
    f_kernel(args.alpha, args.p1, args.p2)
}

#[inline]
pub(crate) fn f_kernel(alpha: f64, p1: f64, p2: f64) -> f64 {
    let m = alpha * p1 + (1.0 - alpha) * p2;
    x_ln_x_over(p1, m) - x_ln_x_over(p2, m) - (p1 - p2)
}

/// `dI/d alpha` for the two-row channel `[P1; P2]` with `Pr{row P1} = alpha`,
/// computed as `D(P1 || Q_alpha) - D(P2 || Q_alpha)`.
///
/// Infinite at an endpoint when the supports differ there.
pub fn d_mutual_info_binary(
    alpha: f64,
    p1: &Distribution,
    p2: &Distribution,
) -> Result<f64, InfoError> {
    same_len(p1.len(), p2.len())?;
    check_alpha(alpha)?;
    Ok(binary_derivative(alpha, p1.as_slice(), p2.as_slice()))
}

pub(crate) fn binary_derivative(alpha: f64, p1: &[f64], p2: &[f64]) -> f64 {
    let beta = 1.0 - alpha;
    let (mut d1, mut d2) = (0.0, 0.0);
    for (&a, &b) in p1.iter().zip(p2) {
        let q = alpha * a + beta * b;
        d1 += x_ln_x_over(a, q);
        d2 += x_ln_x_over(b, q);
    }
    d1.max(0.0) - d2.max(0.0)
}

/// First and second partial derivatives of `f(1/e; p1, p2)` in `p1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FPartials {
    pub first: f64,
    pub second: f64,
}

/// Closed-form `df/dp1` and `d2f/dp1^2` of `f(1/e; p1, p2)`.
///
/// The second derivative is `p2((e-1)^2 p2 - p1) / (p1 (p1 + (e-1) p2)^2)`,
/// so for fixed `p2 = c > 0` the slice is convex below `p1 = (e-1)^2 c` and
/// concave above it.
pub fn f_partials(p1: f64, p2: f64) -> Result<FPartials, InfoError> {
    FArgs::at_inv_e(p1, p2)?;
    if p1 == 0.0 {
        return Err(InfoError::SingularAtZero);
    }
    let e = std::f64::consts::E;
    let m = INV_E * p1 + (1.0 - INV_E) * p2;
    let first = (p1 / m).ln() - (p1 - p2) / (e * m);
    let s = p1 + (e - 1.0) * p2;
    let second = p2 * ((e - 1.0).powi(2) * p2 - p1) / (p1 * s * s);
    Ok(FPartials { first, second })
}

/// Where the `p1`-slice of `f(1/e; ., c)` switches from convex to concave.
pub fn convexity_switch(c: f64) -> f64 {
    (std::f64::consts::E - 1.0).powi(2) * c
}
