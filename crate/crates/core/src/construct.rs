//! Z-channels and channels built to make a given input law optimal.
//!
//! A Z-channel has a clean input with row `(1, 0)` and a noisy input with
//! row `(delta, 1 - delta)`. At `delta = 0` it is noiseless and the optimal
//! input is uniform; as `delta -> 1` the capacity vanishes while the clean
//! symbol's optimal probability rises towards, but never reaches, `1 - 1/e`.
//! Together with reflection this family realizes every optimal mass in
//! `(1/e, 1 - 1/e)`.
//!
//! [`construct_channel`] uses that to make any law with a subset of mass in
//! `(1/e, 1 - 1/e)` capacity-achieving: rows in the subset copy one base row,
//! the rest copy the other, so only the two group masses matter.

use itertools::Itertools;
use thiserror::Error;

use crate::simplex::{Channel, ChannelError, Distribution};
use crate::solve::{binary_optimal_input, SolveError, BISECTION_TOL};
use crate::{INV_E, MAX_INPUT_PROB};

/// Largest alphabet [`find_subset`] will enumerate.
pub const MAX_SUBSET_SYMBOLS: usize = 24;

/// Default accuracy of the achieved optimal mass in [`solve_delta_for_target`].
pub const CONSTRUCTION_TOL: f64 = 1e-9;

const MAX_DELTA_BISECTIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructError {
    #[error("delta = {0} outside [0, 1)")]
    DeltaOutOfRange(f64),
    #[error("noisy index must be 0 or 1, got {0}")]
    InvalidNoisyIndex(usize),
    #[error("target mass {0} outside the open interval (1/e, 1 - 1/e)")]
    TargetOutOfRange(f64),
    #[error("no subset has mass strictly inside (1/e, 1 - 1/e)")]
    Infeasible,
    #[error("{0} symbols exceed the enumeration limit of {MAX_SUBSET_SYMBOLS}")]
    TooManySymbols(usize),
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("subset mass {0} outside (1/e, 1 - 1/e)")]
    SubsetMassOutOfRange(f64),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

impl ConstructError {
    pub fn kind(&self) -> &'static str {
        match self {
            ConstructError::DeltaOutOfRange(_) => "DeltaOutOfRange",
            ConstructError::InvalidNoisyIndex(_) => "InvalidNoisyIndex",
            ConstructError::TargetOutOfRange(_) => "TargetOutOfRange",
            ConstructError::Infeasible => "Infeasible",
            ConstructError::TooManySymbols(_) => "TooManySymbols",
            ConstructError::InvalidSubset(_) => "InvalidSubset",
            ConstructError::SubsetMassOutOfRange(_) => "SubsetMassOutOfRange",
            ConstructError::Solve(e) => e.kind(),
            ConstructError::Channel(e) => e.kind(),
        }
    }
}

/// A binary Z-channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZChannel {
    /// Probability that the noisy input lands on output 0.
    pub delta: f64,
    /// Which input (0 or 1) is noisy.
    pub noisy_index: usize,
}

impl ZChannel {
    pub fn new(delta: f64, noisy_index: usize) -> Result<Self, ConstructError> {
        if !(0.0..1.0).contains(&delta) {
            return Err(ConstructError::DeltaOutOfRange(delta));
        }
        if noisy_index > 1 {
            return Err(ConstructError::InvalidNoisyIndex(noisy_index));
        }
        Ok(ZChannel { delta, noisy_index })
    }

    /// Rows indexed by input symbol.
    pub fn rows(&self) -> [Distribution; 2] {
        let clean = Distribution::point_mass(2, 0);
        let noisy = Distribution::from_convex(vec![self.delta, 1.0 - self.delta]);
        if self.noisy_index == 0 {
            [noisy, clean]
        } else {
            [clean, noisy]
        }
    }

    pub fn channel(&self) -> Channel {
        Channel::from_rows(self.rows().to_vec()).expect("2x2 stochastic rows")
    }
}

/// The Z-channel with noisy input `noisy_index` and flip probability `delta`.
pub fn z_channel(delta: f64, noisy_index: usize) -> Result<Channel, ConstructError> {
    Ok(ZChannel::new(delta, noisy_index)?.channel())
}

/// Optimal probability of the clean input of a Z-channel.
pub fn z_optimal_clean_prob(delta: f64) -> Result<f64, ConstructError> {
    let z = ZChannel::new(delta, 1)?;
    let [clean, noisy] = z.rows();
    Ok(binary_optimal_input(&clean, &noisy, BISECTION_TOL)?.alpha_star)
}

/// Finds a Z-channel whose optimal input gives symbol 0 mass `p_target`.
///
/// Targets at or above 1/2 make symbol 0 the clean input; targets below 1/2
/// make it the noisy one. `delta` is located by bisection, relying on the
/// clean mass being non-decreasing in `delta`.
pub fn solve_delta_for_target(p_target: f64, tol: f64) -> Result<ZChannel, ConstructError> {
    if !(p_target > INV_E && p_target < MAX_INPUT_PROB) {
        return Err(ConstructError::TargetOutOfRange(p_target));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SolveError::InvalidTolerance(tol).into());
    }
    let (clean_target, noisy_index) = if p_target >= 0.5 {
        (p_target, 1)
    } else {
        (1.0 - p_target, 0)
    };

    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut best = (0.0, (0.5 - clean_target).abs());
    for _ in 0..MAX_DELTA_BISECTIONS {
        if best.1 <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let clean = z_optimal_clean_prob(mid)?;
        let err = (clean - clean_target).abs();
        if err < best.1 {
            best = (mid, err);
        }
        if clean < clean_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ZChannel::new(best.0, noisy_index)
}

/// A set of input symbols and their total probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Subset {
    pub indices: Vec<usize>,
    pub mass: f64,
}

fn inside_open_interval(mass: f64) -> bool {
    mass > INV_E && mass < MAX_INPUT_PROB
}

/// Smallest, then lexicographically first, subset whose mass lies strictly
/// inside `(1/e, 1 - 1/e)`.
pub fn find_subset(p: &Distribution) -> Result<Subset, ConstructError> {
    let m = p.len();
    if m > MAX_SUBSET_SYMBOLS {
        return Err(ConstructError::TooManySymbols(m));
    }
    for size in 1..m {
        for indices in (0..m).combinations(size) {
            let mass: f64 = indices.iter().map(|&i| p[i]).sum();
            if inside_open_interval(mass) {
                return Ok(Subset { indices, mass });
            }
        }
    }
    Err(ConstructError::Infeasible)
}

/// A channel for which the requested input law is capacity-achieving.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionResult {
    pub channel: Channel,
    pub subset: Subset,
    /// Base Z-channel; its row 0 is copied onto the subset, row 1 elsewhere.
    pub base: ZChannel,
}

impl ConstructionResult {
    /// The two distinct rows: `[subset row, complement row]`.
    pub fn base_rows(&self) -> [Distribution; 2] {
        self.base.rows()
    }
}

/// Builds a channel on which `p` is capacity-achieving, choosing the subset
/// with [`find_subset`].
pub fn construct_channel(p: &Distribution) -> Result<ConstructionResult, ConstructError> {
    let subset = find_subset(p)?;
    build(p, subset)
}

/// Like [`construct_channel`] with a caller-chosen subset.
pub fn construct_channel_with_subset(
    p: &Distribution,
    indices: &[usize],
) -> Result<ConstructionResult, ConstructError> {
    let m = p.len();
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != indices.len() {
        return Err(ConstructError::InvalidSubset("repeated index".into()));
    }
    if let Some(&bad) = sorted.iter().find(|&&i| i >= m) {
        return Err(ConstructError::InvalidSubset(format!(
            "index {bad} out of range for {m} symbols"
        )));
    }
    if sorted.is_empty() || sorted.len() == m {
        return Err(ConstructError::InvalidSubset(
            "subset must be non-empty and proper".into(),
        ));
    }
    let mass: f64 = sorted.iter().map(|&i| p[i]).sum();
    if !inside_open_interval(mass) {
        return Err(ConstructError::SubsetMassOutOfRange(mass));
    }
    build(
        p,
        Subset {
            indices: sorted,
            mass,
        },
    )
}

fn build(p: &Distribution, subset: Subset) -> Result<ConstructionResult, ConstructError> {
    let base = solve_delta_for_target(subset.mass, CONSTRUCTION_TOL)?;
    let [in_subset, outside] = base.rows();
    let rows = (0..p.len())
        .map(|x| {
            if subset.indices.contains(&x) {
                in_subset.clone()
            } else {
                outside.clone()
            }
        })
        .collect();
    Ok(ConstructionResult {
        channel: Channel::from_rows(rows)?,
        subset,
        base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::mutual_information;
    use crate::simplex::Nats;
    use crate::solve::blahut_arimoto;

    fn d(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    /// Closed-form optimal clean mass of a Z-channel, used only as an oracle.
    fn clean_mass_closed_form(delta: f64) -> f64 {
        if delta == 0.0 {
            return 0.5;
        }
        let h = -delta * delta.ln() - (1.0 - delta) * (1.0 - delta).ln();
        1.0 - 1.0 / ((1.0 - delta) * (1.0 + (h / (1.0 - delta)).exp()))
    }

    #[test]
    fn z_channel_examples() {
        let id = z_channel(0.0, 1).unwrap();
        assert_eq!(id.to_matrix(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let z = z_channel(0.5, 1).unwrap();
        assert_eq!(z.to_matrix(), vec![vec![1.0, 0.0], vec![0.5, 0.5]]);
        let z = z_channel(0.5, 0).unwrap();
        assert_eq!(z.to_matrix(), vec![vec![0.5, 0.5], vec![1.0, 0.0]]);
        assert_eq!(z_channel(1.0, 1), Err(ConstructError::DeltaOutOfRange(1.0)));
        assert_eq!(
            z_channel(-0.1, 1),
            Err(ConstructError::DeltaOutOfRange(-0.1))
        );
        assert_eq!(z_channel(0.1, 2), Err(ConstructError::InvalidNoisyIndex(2)));
    }

    #[test]
    fn capacity_vanishes_in_the_noisy_limit() {
        let mut prev = f64::INFINITY;
        for delta in [0.9, 0.99, 0.999, 0.9999] {
            let c = blahut_arimoto(&z_channel(delta, 1).unwrap(), Nats::new(1e-12), 1_000_000)
                .unwrap()
                .capacity
                .value();
            assert!(c < prev);
            prev = c;
        }
        assert!(prev < 1e-4);
    }

    #[test]
    fn clean_prob_examples() {
        assert!((z_optimal_clean_prob(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((z_optimal_clean_prob(0.5).unwrap() - 0.6).abs() < 1e-14);
        let v = z_optimal_clean_prob(0.99).unwrap();
        assert!(v < MAX_INPUT_PROB && MAX_INPUT_PROB - v < 0.01);
        // 40-digit evaluation of the closed form at 0.99: 0.63163232681356416628.
        assert!((v - 0.631_632_326_813_564_2).abs() < 1e-12);
        assert_eq!(
            z_optimal_clean_prob(1.0),
            Err(ConstructError::DeltaOutOfRange(1.0))
        );
    }

    #[test]
    fn clean_prob_matches_closed_form_and_is_monotone() {
        let mut grid: Vec<f64> = (0..20).map(|k| k as f64 * 0.05).collect();
        grid.push(0.99);
        let mut prev = 0.0;
        for delta in grid {
            let v = z_optimal_clean_prob(delta).unwrap();
            assert!(
                (v - clean_mass_closed_form(delta)).abs() < 1e-12,
                "delta={delta}"
            );
            assert!(v >= prev);
            assert!((0.5..MAX_INPUT_PROB).contains(&v));
            prev = v;
        }
        let near = z_optimal_clean_prob(1.0 - 1e-4).unwrap();
        assert!(near > MAX_INPUT_PROB - 1e-3 && near < MAX_INPUT_PROB);
    }

    #[test]
    fn delta_solver_examples() {
        let z = solve_delta_for_target(0.5, 1e-9).unwrap();
        assert_eq!(z.delta, 0.0);
        let z = solve_delta_for_target(0.6, 1e-9).unwrap();
        assert_eq!(z.noisy_index, 1);
        assert!((z.delta - 0.5).abs() < 1e-6, "{z:?}");
        let z = solve_delta_for_target(0.4, 1e-9).unwrap();
        assert_eq!(z.noisy_index, 0);
        assert!((z.delta - 0.5).abs() < 1e-6);
        for bad in [MAX_INPUT_PROB, INV_E, 0.2, 0.7] {
            assert_eq!(
                solve_delta_for_target(bad, 1e-9),
                Err(ConstructError::TargetOutOfRange(bad))
            );
        }
    }

    #[test]
    fn delta_solver_hits_target() {
        for target in [0.37, 0.41, 0.45, 0.52, 0.58, 0.62, 0.63] {
            let z = solve_delta_for_target(target, 1e-9).unwrap();
            let [r0, r1] = z.rows();
            let got = binary_optimal_input(&r0, &r1, BISECTION_TOL)
                .map(|o| o.alpha_star)
                .unwrap_or(0.5);
            assert!((got - target).abs() <= 1e-9, "target {target}: {got}");
        }
    }

    #[test]
    fn subset_examples() {
        let s = find_subset(&d(&[0.5, 0.3, 0.2])).unwrap();
        assert_eq!(s.indices, vec![0]);
        assert_eq!(s.mass, 0.5);
        assert_eq!(
            find_subset(&d(&[0.7, 0.2, 0.1])),
            Err(ConstructError::Infeasible)
        );
        assert_eq!(
            find_subset(&d(&[MAX_INPUT_PROB, INV_E])),
            Err(ConstructError::Infeasible)
        );
        // Smallest size first, then lexicographic.
        let s = find_subset(&d(&[0.3, 0.3, 0.2, 0.2])).unwrap();
        assert_eq!(s.indices, vec![0, 1]);
        let big = Distribution::uniform(25);
        assert_eq!(find_subset(&big), Err(ConstructError::TooManySymbols(25)));
    }

    #[test]
    fn construct_examples() {
        let r = construct_channel(&d(&[0.4, 0.6])).unwrap();
        let rows = r.channel.to_matrix();
        assert_eq!(rows[1], vec![1.0, 0.0]);
        assert!((rows[0][0] - 0.5).abs() < 1e-6);
        let ba = blahut_arimoto(&r.channel, Nats::new(1e-9), 100_000).unwrap();
        assert!((ba.input[0] - 0.4).abs() < 1e-5);

        let r = construct_channel(&d(&[0.5, 0.3, 0.2])).unwrap();
        assert_eq!(
            r.channel.to_matrix(),
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 1.0]]
        );
        assert_eq!(r.subset.indices, vec![0]);

        assert_eq!(
            construct_channel(&d(&[0.7, 0.2, 0.1])),
            Err(ConstructError::Infeasible)
        );
    }

    #[test]
    fn construct_with_explicit_subset() {
        let p = d(&[0.1, 0.2, 0.3, 0.4]);
        let r = construct_channel_with_subset(&p, &[2, 0]).unwrap();
        assert_eq!(r.subset.indices, vec![0, 2]);
        assert!((r.subset.mass - 0.4).abs() < 1e-15);
        let i = mutual_information(&p, &r.channel).unwrap().value();
        let c = blahut_arimoto(&r.channel, Nats::new(1e-9), 100_000)
            .unwrap()
            .capacity
            .value();
        assert!(i >= c - 2e-9);
        assert!(matches!(
            construct_channel_with_subset(&p, &[0]),
            Err(ConstructError::SubsetMassOutOfRange(_))
        ));
        assert!(matches!(
            construct_channel_with_subset(&p, &[0, 0]),
            Err(ConstructError::InvalidSubset(_))
        ));
        assert!(matches!(
            construct_channel_with_subset(&p, &[7]),
            Err(ConstructError::InvalidSubset(_))
        ));
        assert!(matches!(
            construct_channel_with_subset(&p, &[]),
            Err(ConstructError::InvalidSubset(_))
        ));
    }
}
