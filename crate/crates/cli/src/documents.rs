//! JSON input documents.
//!
//! ```text
//! channel:       {"rows": [[1, 0], [0.5, 0.5]], "labels": ["a", "b"]}
//! distribution:  {"p": [0.4, 0.6]}
//! ```

use std::fs;
use std::io;
use std::path::Path;

use dmc_core::{Channel, Distribution};
use serde::Deserialize;

use crate::CliError;

/// Row sums within this distance of 1 are rescaled under `--renormalize`.
pub const RENORMALIZE_WINDOW: f64 = 1e-6;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDocument {
    pub rows: Vec<Vec<f64>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionDocument {
    pub p: Vec<f64>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| {
        let kind = match e.kind() {
            io::ErrorKind::NotFound => "FileNotFound",
            io::ErrorKind::InvalidData => "NotUtf8",
            _ => "Io",
        };
        CliError::parse(kind, format!("{}: {e}", path.display()))
    })
}

fn decode<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        let kind = if e.is_data() {
            "MalformedDocument"
        } else {
            "MalformedJson"
        };
        CliError::parse(
            kind,
            format!(
                "{} at line {} column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ),
        )
    })
}

fn renormalize(v: &mut [f64]) {
    let sum: f64 = v.iter().sum();
    if sum > 0.0 && (sum - 1.0).abs() <= RENORMALIZE_WINDOW {
        v.iter_mut().for_each(|x| *x /= sum);
    }
}

pub fn load_channel(path: &Path, renorm: bool) -> Result<Channel, CliError> {
    let mut doc: ChannelDocument = decode(path, &read(path)?)?;
    if let Some(labels) = &doc.labels {
        if labels.len() != doc.rows.len() {
            return Err(CliError::parse(
                "MalformedDocument",
                format!(
                    "{} labels for {} rows in {}",
                    labels.len(),
                    doc.rows.len(),
                    path.display()
                ),
            ));
        }
    }
    if renorm {
        doc.rows.iter_mut().for_each(|r| renormalize(r));
    }
    Channel::new(doc.rows).map_err(|e| CliError::domain(e.kind(), e.to_string()))
}

pub fn load_distribution(path: &Path, renorm: bool) -> Result<Distribution, CliError> {
    let mut doc: DistributionDocument = decode(path, &read(path)?)?;
    if renorm {
        renormalize(&mut doc.p);
    }
    Distribution::new(doc.p).map_err(|e| CliError::domain(e.kind(), e.to_string()))
}
