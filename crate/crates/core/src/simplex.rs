//! Validated probability-simplex points, row-stochastic channels and the
//! [`Nats`] unit.
//!
//! Values are immutable once constructed. Inputs are never renormalized:
//! a vector that misses the simplex by more than [`SUM_TOLERANCE`] is
//! rejected with the deviation attached.

use std::fmt;
use std::ops::Index;

use thiserror::Error;

/// Absolute tolerance on `|sum - 1|` for a vector to count as a distribution.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Rows closer than this in max-abs distance are treated as the same law.
pub const ROW_EQUALITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    #[error("distribution has no entries")]
    EmptyInput,
    #[error("entry {index} is not finite")]
    NonFinite { index: usize },
    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },
    #[error("entries sum to {sum}, deviating from 1 by {deviation:e}")]
    SumNotOne { sum: f64, deviation: f64 },
}

impl SimplexError {
    /// Stable identifier used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            SimplexError::EmptyInput => "EmptyInput",
            SimplexError::NonFinite { .. } => "NonFinite",
            SimplexError::NegativeEntry { .. } => "NegativeEntry",
            SimplexError::SumNotOne { .. } => "SumNotOne",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("channel needs at least 2 input rows, got {0}")]
    TooFewRows(usize),
    #[error("channel needs at least 2 output columns, got {0}")]
    TooFewColumns(usize),
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row} is not a distribution: {source}")]
    RowNotDistribution {
        row: usize,
        #[source]
        source: SimplexError,
    },
}

impl ChannelError {
    pub fn kind(&self) -> &'static str {
        match self {
            ChannelError::TooFewRows(_) => "TooFewRows",
            ChannelError::TooFewColumns(_) => "TooFewColumns",
            ChannelError::RaggedMatrix { .. } => "RaggedMatrix",
            ChannelError::RowNotDistribution { .. } => "RowNotDistribution",
        }
    }
}

/// An information quantity in natural-log units.
///
/// Divergences may be `+inf` when absolute continuity fails; see
/// [`Nats::is_infinite`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Nats(f64);

impl Nats {
    pub const ZERO: Nats = Nats(0.0);
    pub const INFINITY: Nats = Nats(f64::INFINITY);

    pub fn new(value: f64) -> Self {
        Nats(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// The same quantity expressed in bits.
    pub fn in_bits(self) -> f64 {
        self.0 / std::f64::consts::LN_2
    }
}

impl fmt::Display for Nats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} nats", self.0)
    }
}

/// A point on the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates `raw` without rescaling it.
    pub fn new(raw: Vec<f64>) -> Result<Self, SimplexError> {
        check_simplex(&raw)?;
        Ok(Distribution { probs: raw })
    }

    /// Uniform law on `len` symbols.
    ///
    /// # Panics
    ///
    /// Panics if `len == 0`.
    pub fn uniform(len: usize) -> Self {
        assert!(len > 0, "uniform distribution needs at least one symbol");
        Distribution {
            probs: vec![1.0 / len as f64; len],
        }
    }

    /// Point mass on `index`.
    pub fn point_mass(len: usize, index: usize) -> Self {
        assert!(index < len, "point mass index {index} out of range {len}");
        let mut probs = vec![0.0; len];
        probs[index] = 1.0;
        Distribution { probs }
    }

    /// For vectors produced by convex combinations of validated laws; the
    /// simplex property holds up to rounding.
    pub(crate) fn from_convex(probs: Vec<f64>) -> Self {
        debug_assert!(check_simplex_with(&probs, 1e-9).is_ok(), "{probs:?}");
        Distribution { probs }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    /// Always `false`: a distribution has at least one entry.
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.probs.iter().copied()
    }

    /// Largest single-symbol probability.
    pub fn max_prob(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }

    /// Largest absolute entrywise difference; `None` on length mismatch.
    pub fn max_abs_diff(&self, other: &Distribution) -> Option<f64> {
        (self.len() == other.len()).then(|| {
            self.probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }

    /// Total variation distance `1/2 sum |p - q|`; `None` on length mismatch.
    pub fn total_variation(&self, other: &Distribution) -> Option<f64> {
        (self.len() == other.len()).then(|| {
            0.5 * self
                .probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
        })
    }
}

impl Index<usize> for Distribution {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.probs[index]
    }
}

impl AsRef<[f64]> for Distribution {
    fn as_ref(&self) -> &[f64] {
        &self.probs
    }
}

impl TryFrom<Vec<f64>> for Distribution {
    type Error = SimplexError;

    fn try_from(raw: Vec<f64>) -> Result<Self, SimplexError> {
        Distribution::new(raw)
    }
}

fn check_simplex(raw: &[f64]) -> Result<(), SimplexError> {
    check_simplex_with(raw, SUM_TOLERANCE)
}

fn check_simplex_with(raw: &[f64], tolerance: f64) -> Result<(), SimplexError> {
    if raw.is_empty() {
        return Err(SimplexError::EmptyInput);
    }
    for (index, &value) in raw.iter().enumerate() {
        if !value.is_finite() {
            return Err(SimplexError::NonFinite { index });
        }
        if value < 0.0 {
            return Err(SimplexError::NegativeEntry { index, value });
        }
    }
    let sum: f64 = raw.iter().sum();
    let deviation = (sum - 1.0).abs();
    if deviation > tolerance {
        return Err(SimplexError::SumNotOne { sum, deviation });
    }
    Ok(())
}

/// Validates a raw probability vector.
pub fn validate_distribution(raw: &[f64]) -> Result<Distribution, SimplexError> {
    Distribution::new(raw.to_vec())
}

/// A discrete memoryless channel: `m >= 2` rows, each a law on `n >= 2`
/// output symbols. Row `x` is `P(. | x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    rows: Vec<Distribution>,
    outputs: usize,
}

impl Channel {
    pub fn new(raw: Vec<Vec<f64>>) -> Result<Self, ChannelError> {
        if raw.len() < 2 {
            return Err(ChannelError::TooFewRows(raw.len()));
        }
        let outputs = raw[0].len();
        for (row, entries) in raw.iter().enumerate() {
            if entries.len() != outputs {
                return Err(ChannelError::RaggedMatrix {
                    row,
                    expected: outputs,
                    found: entries.len(),
                });
            }
        }
        if outputs < 2 {
            return Err(ChannelError::TooFewColumns(outputs));
        }
        let rows = raw
            .into_iter()
            .enumerate()
            .map(|(row, entries)| {
                Distribution::new(entries)
                    .map_err(|source| ChannelError::RowNotDistribution { row, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Channel { rows, outputs })
    }

    /// Builds a channel from already validated rows.
    pub fn from_rows(rows: Vec<Distribution>) -> Result<Self, ChannelError> {
        if rows.len() < 2 {
            return Err(ChannelError::TooFewRows(rows.len()));
        }
        let outputs = rows[0].len();
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != outputs) {
            return Err(ChannelError::RaggedMatrix {
                row,
                expected: outputs,
                found: r.len(),
            });
        }
        if outputs < 2 {
            return Err(ChannelError::TooFewColumns(outputs));
        }
        Ok(Channel { rows, outputs })
    }

    /// Input alphabet size `m`.
    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    /// Output alphabet size `n`.
    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn row(&self, x: usize) -> &Distribution {
        &self.rows[x]
    }

    pub fn rows(&self) -> &[Distribution] {
        &self.rows
    }

    /// True when every row equals row 0 (a zero-capacity channel).
    pub fn has_identical_rows(&self) -> bool {
        let first = &self.rows[0];
        self.rows[1..].iter().all(|r| {
            r.max_abs_diff(first)
                .is_some_and(|d| d <= ROW_EQUALITY_TOLERANCE)
        })
    }

    /// Row-major copy of the transition matrix.
    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.as_slice().to_vec()).collect()
    }
}

/// Validates a raw transition matrix.
pub fn validate_channel(raw: &[Vec<f64>]) -> Result<Channel, ChannelError> {
    Channel::new(raw.to_vec())
}
