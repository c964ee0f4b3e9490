#![allow(dead_code)]

use std::path::PathBuf;

use dmc_cli::{run_command, Outcome};

/// Golden cases: file stem and arguments after the program name. `@` expands
/// to the test data directory.
pub const GOLDEN: &[(&str, &str)] = &[
    ("capacity_z05", "capacity @/z05.json"),
    ("capacity_z05_bits", "capacity @/z05.json --units bits"),
    (
        "capacity_z05_ba",
        "capacity @/z05.json --solver blahut-arimoto",
    ),
    ("capacity_trivial", "capacity @/trivial.json"),
    ("capacity_three", "capacity @/three.json"),
    ("binary_optimal_z05", "binary-optimal @/z05.json"),
    ("equalizer_bsc", "equalizer @/bsc01.json"),
    ("cost_capacity_z05", "cost-capacity @/z05.json --rho 0.2"),
    ("verify_bound_three", "verify-bound @/three.json"),
    (
        "ensemble_small",
        "ensemble --m 3 --n 4 --trials 20 --seed 11",
    ),
    (
        "ensemble_summary",
        "ensemble --m 6 --n 6 --trials 50 --seed 3 --summary",
    ),
    ("construct_feasible", "construct @/p_feasible.json"),
    ("construct_subset", "construct @/p_four.json --subset 0,3"),
    ("f_surface_4", "f-surface --grid 4"),
    ("dual_radius_z05", "dual-radius @/z05.json @/q08.json"),
    (
        "dual_radius_infinite",
        "dual-radius @/z05.json @/q_point.json",
    ),
];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn data_dir() -> PathBuf {
    crate_dir().join("tests/data")
}

pub fn golden_path(name: &str) -> PathBuf {
    crate_dir().join("tests/golden").join(format!("{name}.out"))
}

pub fn argv(args: &str) -> Vec<String> {
    let data = data_dir();
    std::iter::once("dmc".to_string())
        .chain(args.split_whitespace().map(|a| match a.strip_prefix('@') {
            Some(rest) => format!("{}{rest}", data.display()),
            None => a.to_string(),
        }))
        .collect()
}

pub fn run(args: &str) -> Outcome {
    run_command(argv(args))
}

/// Checks every golden case; returns the names that differ.
pub fn golden_mismatches() -> Vec<String> {
    GOLDEN
        .iter()
        .filter(|(name, args)| {
            let out = run(args);
            let expected = std::fs::read_to_string(golden_path(name)).unwrap_or_default();
            out.code != 0 || out.stdout != expected
        })
        .map(|(name, _)| name.to_string())
        .collect()
}

/// Parses `x` printed with 12 significant digits.
pub fn printed(v: &serde_json::Value) -> f64 {
    v.as_f64().expect("number")
}

/// Checks that every `*_bits` number equals the matching `*_nats` value over
/// ln 2 to the printed precision.
pub fn units_coherent(args: &str) -> bool {
    let nats: serde_json::Value = serde_json::from_str(&run(args).stdout).unwrap();
    let bits: serde_json::Value =
        serde_json::from_str(&run(&format!("{args} --units bits")).stdout).unwrap();
    let (nats, bits) = (nats.as_object().unwrap(), bits.as_object().unwrap());
    let mut seen = 0;
    for (key, value) in nats {
        let Some(base) = key.strip_suffix("_nats") else {
            continue;
        };
        let b = &bits[&format!("{base}_bits")];
        let pairs: Vec<(f64, f64)> = match (value, b) {
            (serde_json::Value::Array(xs), serde_json::Value::Array(ys)) => xs
                .iter()
                .zip(ys)
                .map(|(x, y)| (printed(x), printed(y)))
                .collect(),
            _ => vec![(printed(value), printed(b))],
        };
        for (n, b) in pairs {
            seen += 1;
            let expect = n / std::f64::consts::LN_2;
            // Both sides carry 12 significant digits.
            if (b - expect).abs() > 1e-11 * expect.abs().max(f64::MIN_POSITIVE) {
                return false;
            }
        }
    }
    seen > 0
}
