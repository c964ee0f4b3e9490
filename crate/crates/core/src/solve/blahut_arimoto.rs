use super::{check_tol, CapacityResult, SolveError};
use crate::info::{kl_slices, mutual_information_slices, output_into};
use crate::simplex::{Channel, Distribution, Nats};

/// Blahut–Arimoto from the uniform input.
///
/// Each step evaluates `D_x = D(P(.|x) || Q_t)`; `sum_x p_t(x) D_x` is the
/// mutual information of the current input and `max_x D_x` bounds the
/// capacity from above. Returns as soon as the two differ by at most `tol`,
/// otherwise applies `p(x) <- p(x) exp(D_x) / Z`.
pub fn blahut_arimoto(
    ch: &Channel,
    tol: Nats,
    max_iter: usize,
) -> Result<CapacityResult, SolveError> {
    check_tol(tol.value())?;
    if max_iter == 0 {
        return Err(SolveError::InvalidMaxIter);
    }
    let m = ch.inputs();
    let mut input = vec![1.0 / m as f64; m];
    let mut q = vec![0.0; ch.outputs()];
    let mut div = vec![0.0; m];
    let mut gap = f64::INFINITY;

    for updates in 0..max_iter {
        output_into(&input, ch, &mut q);
        for (d, row) in div.iter_mut().zip(ch.rows()) {
            *d = kl_slices(row.as_slice(), &q);
        }
        let lower = mutual_information_slices(&input, ch, &q);
        let upper = div.iter().copied().fold(0.0, f64::max);
        gap = (upper - lower).max(0.0);
        if gap <= tol.value() {
            let trivial = lower < tol.value() && ch.has_identical_rows();
            return Ok(CapacityResult {
                capacity: Nats::new(lower),
                input: Distribution::from_convex(input),
                output: Distribution::from_convex(q),
                iterations: updates,
                gap: Nats::new(gap),
                trivial,
            });
        }

        // Shift by the largest finite divergence on the support so exp()
        // stays in range; symbols already at zero mass stay there.
        let shift = input
            .iter()
            .zip(&div)
            .filter(|(p, d)| **p > 0.0 && d.is_finite())
            .map(|(_, d)| *d)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut z = 0.0;
        for (p, d) in input.iter_mut().zip(&div) {
            if *p > 0.0 {
                *p *= (d - shift).exp();
                z += *p;
            }
        }
        input.iter_mut().for_each(|p| *p /= z);
    }
    Err(SolveError::NoConvergence {
        iterations: max_iter,
        gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::mutual_information;

    fn ch(rows: &[&[f64]]) -> Channel {
        Channel::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn trivial_channel() {
        let c = ch(&[&[0.2, 0.8], &[0.2, 0.8]]);
        let r = blahut_arimoto(&c, Nats::new(1e-9), 100).unwrap();
        assert_eq!(r.capacity, Nats::ZERO);
        assert!(r.trivial);
        assert_eq!(r.input, Distribution::uniform(2));
    }

    #[test]
    fn identity_three() {
        let c = ch(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let r = blahut_arimoto(&c, Nats::new(1e-12), 10).unwrap();
        assert!((r.capacity.value() - 3f64.ln()).abs() < 1e-15);
        assert!(r.input.max_abs_diff(&Distribution::uniform(3)).unwrap() < 1e-15);
        assert!(!r.trivial);
    }

    #[test]
    fn z_half() {
        let c = ch(&[&[1.0, 0.0], &[0.5, 0.5]]);
        let r = blahut_arimoto(&c, Nats::new(1e-9), 100_000).unwrap();
        assert!((r.capacity.value() - 1.25f64.ln()).abs() < 1e-9);
        assert!((r.input[0] - 0.6).abs() < 1e-6);
        assert!(r.gap.value() <= 1e-9);
        let i = mutual_information(&r.input, &c).unwrap();
        assert!((i.value() - r.capacity.value()).abs() < 1e-15);
        assert!((r.output[0] - 0.8).abs() < 1e-6);
    }

    #[test]
    fn gives_up_with_last_gap() {
        let c = ch(&[&[0.9, 0.1, 0.0], &[0.1, 0.2, 0.7], &[0.3, 0.3, 0.4]]);
        match blahut_arimoto(&c, Nats::new(1e-15), 2) {
            Err(SolveError::NoConvergence { iterations: 2, gap }) => assert!(gap > 0.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            blahut_arimoto(&c, Nats::new(0.0), 2),
            Err(SolveError::InvalidTolerance(_))
        ));
        assert_eq!(
            blahut_arimoto(&c, Nats::new(1e-9), 0),
            Err(SolveError::InvalidMaxIter)
        );
    }

    #[test]
    fn output_matches_input_mixture() {
        let c = ch(&[&[0.7, 0.2, 0.1], &[0.1, 0.1, 0.8], &[0.3, 0.4, 0.3]]);
        let r = blahut_arimoto(&c, Nats::new(1e-10), 100_000).unwrap();
        for y in 0..3 {
            let q: f64 = (0..3).map(|x| r.input[x] * c.row(x)[y]).sum();
            assert!((q - r.output[y]).abs() < 1e-12);
        }
    }
}
