//! Number formatting and unit scaling for emitted documents.
//!
//! Every float is rounded to 12 significant digits and then printed in its
//! shortest round-trip form, so `0.600000000000` prints as `0.6`.

use clap::ValueEnum;
use dmc_core::Nats;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Nats,
    Bits,
}

impl Units {
    pub fn suffix(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }

    /// Scales a nats quantity for display.
    pub fn scale(self, x: Nats) -> f64 {
        match self {
            Units::Nats => x.value(),
            Units::Bits => x.in_bits(),
        }
    }

    /// `"{base}_{suffix}"`, e.g. `capacity_bits`.
    pub fn key(self, base: &str) -> String {
        format!("{base}_{}", self.suffix())
    }
}

/// Rounds to 12 significant digits; non-finite values pass through.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// JSON number (`null` when not finite).
pub fn num(x: f64) -> Value {
    Value::from(sig12(x))
}

pub fn nums(xs: impl IntoIterator<Item = f64>) -> Value {
    Value::Array(xs.into_iter().map(num).collect())
}

/// CSV cell for a float.
pub fn cell(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        num(x).to_string()
    }
}
