use std::collections::BTreeMap;
use std::fmt;

use super::{
    binary_optimal_input, blahut_arimoto, CapacityResult, SolveError, BISECTION_TOL,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use crate::info::{induced_output, kl_slices, mutual_information};
use crate::simplex::{Channel, Distribution, Nats};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: Nats,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: Nats::new(DEFAULT_TOL),
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// A capacity algorithm that can be selected by name.
pub trait CapacitySolver: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn solve(&self, ch: &Channel, opts: &SolverOptions) -> Result<CapacityResult, SolveError>;
}

impl fmt::Debug for dyn CapacitySolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CapacitySolver")
            .field("name", &self.name())
            .finish()
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct BlahutArimoto;

impl CapacitySolver for BlahutArimoto {
    fn name(&self) -> &'static str {
        "blahut-arimoto"
    }

    fn description(&self) -> &'static str {
        "alternating maximization, any input alphabet"
    }

    fn solve(&self, ch: &Channel, opts: &SolverOptions) -> Result<CapacityResult, SolveError> {
        blahut_arimoto(ch, opts.tol, opts.max_iter)
    }
}

/// Bisection on the binary equalizer condition; two-input channels only.
#[derive(Debug, Default, Clone, Copy)]
pub struct BinaryEqualizer;

impl CapacitySolver for BinaryEqualizer {
    fn name(&self) -> &'static str {
        "equalizer"
    }

    fn description(&self) -> &'static str {
        "bisection on D(P1||Q) = D(P2||Q), two-input channels"
    }

    fn solve(&self, ch: &Channel, opts: &SolverOptions) -> Result<CapacityResult, SolveError> {
        if ch.inputs() != 2 {
            return Err(SolveError::UnsupportedAlphabet {
                expected: 2,
                found: ch.inputs(),
            });
        }
        let (input, iterations) = match binary_optimal_input(ch.row(0), ch.row(1), BISECTION_TOL) {
            Ok(opt) => (
                Distribution::from_convex(vec![opt.alpha_star, 1.0 - opt.alpha_star]),
                opt.iterations,
            ),
            Err(SolveError::IdenticalRows) => (Distribution::uniform(2), 0),
            Err(e) => return Err(e),
        };
        let output = induced_output(&input, ch)?;
        let capacity = mutual_information(&input, ch)?;
        let upper = ch
            .rows()
            .iter()
            .map(|r| kl_slices(r.as_slice(), output.as_slice()))
            .fold(0.0, f64::max);
        let gap = (upper - capacity.value()).max(0.0);
        if gap > opts.tol.value() {
            return Err(SolveError::NoConvergence { iterations, gap });
        }
        Ok(CapacityResult {
            trivial: capacity.value() < opts.tol.value() && ch.has_identical_rows(),
            capacity,
            input,
            output,
            iterations,
            gap: Nats::new(gap),
        })
    }
}

/// Name-keyed set of [`CapacitySolver`]s.
#[derive(Debug, Default)]
pub struct SolverRegistry {
    solvers: BTreeMap<&'static str, Box<dyn CapacitySolver>>,
}

impl SolverRegistry {
    /// Empty registry.
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry with `blahut-arimoto` and `equalizer`.
    pub fn with_defaults() -> Self {
        let mut reg = Self::new();
        reg.register(Box::new(BlahutArimoto));
        reg.register(Box::new(BinaryEqualizer));
        reg
    }

    /// Adds `solver`, returning any solver previously registered under its name.
    pub fn register(&mut self, solver: Box<dyn CapacitySolver>) -> Option<Box<dyn CapacitySolver>> {
        self.solvers.insert(solver.name(), solver)
    }

    pub fn get(&self, name: &str) -> Result<&dyn CapacitySolver, SolveError> {
        self.solvers
            .get(name)
            .map(|s| s.as_ref())
            .ok_or_else(|| SolveError::UnknownSolver(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.solvers.keys().copied()
    }

    pub fn solve(
        &self,
        name: &str,
        ch: &Channel,
        opts: &SolverOptions,
    ) -> Result<CapacityResult, SolveError> {
        self.get(name)?.solve(ch, opts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(rows: &[&[f64]]) -> Channel {
        Channel::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn defaults_are_registered() {
        let reg = SolverRegistry::with_defaults();
        assert_eq!(
            reg.names().collect::<Vec<_>>(),
            ["blahut-arimoto", "equalizer"]
        );
        assert!(matches!(
            reg.get("newton"),
            Err(SolveError::UnknownSolver(n)) if n == "newton"
        ));
    }

    #[test]
    fn solvers_agree_on_two_inputs() {
        let reg = SolverRegistry::with_defaults();
        let c = ch(&[&[0.7, 0.2, 0.1], &[0.1, 0.3, 0.6]]);
        let opts = SolverOptions::default();
        let ba = reg.solve("blahut-arimoto", &c, &opts).unwrap();
        let eq = reg.solve("equalizer", &c, &opts).unwrap();
        assert!((ba.capacity.value() - eq.capacity.value()).abs() <= 2e-9);
        assert!(ba.input.total_variation(&eq.input).unwrap() < 1e-6);
        assert!(eq.gap.value() < 1e-14);
    }

    #[test]
    fn equalizer_handles_trivial_and_rejects_wide_inputs() {
        let eq = BinaryEqualizer;
        let flat = ch(&[&[0.4, 0.6], &[0.4, 0.6]]);
        let r = eq.solve(&flat, &SolverOptions::default()).unwrap();
        assert!(r.trivial);
        assert_eq!(r.capacity, Nats::ZERO);
        let three = ch(&[&[1.0, 0.0], &[0.0, 1.0], &[0.5, 0.5]]);
        assert!(matches!(
            eq.solve(&three, &SolverOptions::default()),
            Err(SolveError::UnsupportedAlphabet {
                expected: 2,
                found: 3
            })
        ));
    }

    #[test]
    fn register_replaces_by_name() {
        struct Fixed;
        impl CapacitySolver for Fixed {
            fn name(&self) -> &'static str {
                "equalizer"
            }
            fn description(&self) -> &'static str {
                "stub"
            }
            fn solve(&self, _: &Channel, _: &SolverOptions) -> Result<CapacityResult, SolveError> {
                Err(SolveError::IdenticalRows)
            }
        }
        let mut reg = SolverRegistry::with_defaults();
        let old = reg.register(Box::new(Fixed)).unwrap();
        assert_eq!(old.description(), BinaryEqualizer.description());
        assert_eq!(reg.get("equalizer").unwrap().description(), "stub");
    }
}
