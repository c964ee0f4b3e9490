//! Capacity toolkit for discrete memoryless channels (DMCs).
//!
//! The crate computes capacity-achieving input and output distributions,
//! checks the `1 - 1/e` ceiling on capacity-achieving input probabilities,
//! and builds channels for which a given input distribution is optimal.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`simplex`] | validated [`Distribution`], [`Channel`] and [`Nats`] types |
//! | [`info`] | KL divergence, mutual information, binary mixtures, the `f` kernel |
//! | [`solve`] | Blahut–Arimoto, the binary equalizer solver, cost-constrained binary capacity, and a name-keyed solver registry |
//! | [`geom`] | information-ball radius, KKT certificates, ball-center mixture weights |
//! | [`construct`] | Z-channels and channel construction for a target input law |
//! | [`verify`] | bound reports, seeded Dirichlet ensembles, the `f(1/e; ., .)` surface |
//!
//! All information quantities are in nats. Bits only appear at presentation
//! boundaries via [`Nats::in_bits`].
//!
//! ```
//! use dmc_core::{solve::blahut_arimoto, Channel, Nats};
//!
//! let z = Channel::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
//! let res = blahut_arimoto(&z, Nats::new(1e-9), 100_000).unwrap();
//! assert!((res.capacity.value() - 1.25f64.ln()).abs() < 1e-8);
//! assert!(res.input.max_prob() < dmc_core::MAX_INPUT_PROB);
//! ```

pub mod construct;
pub mod geom;
pub mod info;
pub mod simplex;
pub mod solve;
pub mod verify;

pub use simplex::{validate_channel, validate_distribution, Channel, Distribution, Nats};

/// `1/e`, the lower end of the interval that every binary equalizer lies in.
pub const INV_E: f64 = 1.0 / std::f64::consts::E;

/// `1 - 1/e`: no capacity-achieving input probability reaches this value.
pub const MAX_INPUT_PROB: f64 = 1.0 - INV_E;
