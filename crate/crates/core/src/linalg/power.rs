use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stopping controls for [`power_method`].
#[derive(Debug, Clone, Copy)]
pub struct PowerOptions {
    /// Relative change of the Rayleigh quotient between successive steps.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 2000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenEstimate {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    /// False when `max_iter` was reached; `value` is then the last estimate.
    pub converged: bool,
}

/// Dominant eigenvalue of an operator that is self-adjoint with nonnegative
/// spectrum with respect to `inner`.
///
/// `apply(x, y)` writes the operator applied to `x` into `y`. The start vector
/// is drawn uniformly from `[-1, 1]^n` with the given seed.
pub fn power_method<F, G>(n: usize, mut apply: F, mut inner: G, opts: PowerOptions) -> EigenEstimate
where
    F: FnMut(&[f64], &mut [f64]),
    G: FnMut(&[f64], &[f64]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut y = vec![0.0; n];
    let nx = inner(&x, &x).sqrt();
    super::scale(1.0 / nx, &mut x);

    let mut prev = f64::NAN;
    let mut value = 0.0;
    for it in 1..=opts.max_iter {
        apply(&x, &mut y);
        value = inner(&x, &y);
        let ny2 = inner(&y, &y);
        if ny2 == 0.0 {
            return EigenEstimate {
                value: 0.0,
                vector: x,
                iterations: it,
                converged: true,
            };
        }
        // With no previous estimate, accept x only if it is already an eigenvector.
        let exact = !prev.is_finite() && {
            let r: Vec<f64> = y.iter().zip(&x).map(|(yi, xi)| yi - value * xi).collect();
            inner(&r, &r) <= (64.0 * f64::EPSILON * value).powi(2)
        };
        let settled = prev.is_finite() && (value - prev).abs() < opts.tol * value.abs();
        let ny = ny2.sqrt();
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / ny;
        }
        if exact || settled {
            return EigenEstimate {
                value,
                vector: x,
                iterations: it,
                converged: true,
            };
        }
        prev = value;
    }
    EigenEstimate {
        value,
        vector: x,
        iterations: opts.max_iter,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dot;

    #[test]
    fn identity_one_step() {
        let est = power_method(5, |x, y| y.copy_from_slice(x), dot, PowerOptions::default());
        assert_eq!(est.iterations, 1);
        assert!(est.converged);
        assert!((est.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dominant_diagonal_entry() {
        let d = [1.0, 2.0, 3.0];
        let opts = PowerOptions::default();
        let est = power_method(
            3,
            |x, y| {
                for i in 0..3 {
                    y[i] = d[i] * x[i];
                }
            },
            dot,
            opts,
        );
        assert!(est.converged);
        assert!((est.value - 3.0).abs() < 10.0 * opts.tol * 3.0);
    }

    #[test]
    fn deterministic_for_seed() {
        let run = || {
            power_method(
                4,
                |x, y| {
                    for i in 0..4 {
                        y[i] = (i + 1) as f64 * x[i] + 0.1 * x[(i + 1) % 4] + 0.1 * x[(i + 3) % 4];
                    }
                },
                dot,
                PowerOptions { seed: 7, ..Default::default() },
            )
        };
        let (a, b) = (run(), run());
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.vector, b.vector);
    }

    #[test]
    fn flags_non_convergence() {
        let est = power_method(
            2,
            |x, y| {
                y[0] = x[0];
                y[1] = 0.999999 * x[1];
            },
            dot,
            PowerOptions { tol: 1e-300, max_iter: 3, seed: 1 },
        );
        assert!(!est.converged);
        assert_eq!(est.iterations, 3);
    }
}
