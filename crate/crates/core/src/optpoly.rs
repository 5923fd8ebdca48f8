//! Polynomials minimizing `γ(p) = sup_{0<λ≤1} λp²/(1-p²)`, computed by a
//! nested Newton iteration, and their iteration coefficients `β_i`.
//!
//! With `w = λ/(1 - p²)` and `f = w^{1/2} p`, the optimum equioscillates:
//! `f(0) = |f(x_1)| = ... = |f(x_{k-1})| = |f(1)|`, where `f(0)² = 1/(2Σ 1/r_i)`
//! and the interior extrema `x_i` solve
//!
//! ```text
//! g(x) = (1 - p(x)²)/2 + x q(x) = 0,    q = p'/p = Σ 1/(x - r_i).
//! ```
//!
//! The outer iteration is Newton on `F_i = f(0) - |f(x_i)|` in the roots; the
//! inner one is a bracketed Newton for each `x_i ∈ (r_i, r_{i+1})`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{lu_solve, DenseMatrix};
use crate::poly::{cheb4_roots, cheb_w_all, PolynomialSpec};

pub const DEFAULT_TOL: f64 = 1e-14;
pub const DEFAULT_MAX_OUTER: usize = 100;
const MAX_INNER: usize = 200;

/// Roots and interior extrema of a weighted polynomial `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquioscillationState {
    /// `r_1 < ... < r_k` in `(0, 1)`.
    pub roots: Vec<f64>,
    /// `x_1 < ... < x_{k-1}` with `r_i < x_i < r_{i+1}`; `x_k = 1` is implicit.
    pub extrema: Vec<f64>,
    /// `max_i |f(0) - |f(x_i)||` at the returned roots.
    pub residual: f64,
    pub iterations: usize,
}

impl EquioscillationState {
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// `f(0) = (2 Σ 1/r_i)^{-1/2}`.
    pub fn f0(&self) -> f64 {
        f_at_zero(&self.roots)
    }

    /// `γ⁻¹ = 2 Σ 1/r_i`, the value of the optimized bound's denominator term.
    pub fn gamma_inv(&self) -> f64 {
        gamma_inv_from_roots(&self.roots)
    }

    /// Whether `r_i < x_i < r_{i+1}` holds for every interior extremum.
    pub fn interlaces(&self) -> bool {
        self.extrema
            .iter()
            .enumerate()
            .all(|(i, &x)| self.roots[i] < x && x < self.roots[i + 1])
    }
}

/// `2 Σ 1/r_i`.
pub fn gamma_inv_from_roots(roots: &[f64]) -> f64 {
    2.0 * roots.iter().map(|r| 1.0 / r).sum::<f64>()
}

fn f_at_zero(roots: &[f64]) -> f64 {
    gamma_inv_from_roots(roots).powf(-0.5)
}

fn p_of(roots: &[f64], x: f64) -> f64 {
    roots.iter().fold(1.0, |acc, r| acc * (1.0 - x / r))
}

/// `|f(x)| = (x/(1 - p²))^{1/2} |p|` together with `w(x)`.
fn abs_f(roots: &[f64], x: f64) -> (f64, f64) {
    let p = p_of(roots, x);
    let w = x / (1.0 - p * p);
    (w.sqrt() * p.abs(), w)
}

/// `(g(x), -g'(x))`.
fn g_and_neg_slope(roots: &[f64], x: f64) -> (f64, f64) {
    let p = p_of(roots, x);
    let p2 = p * p;
    let mut q = 0.0;
    let mut slope = 0.0;
    for &r in roots {
        let d = 1.0 / (x - r);
        q += d;
        slope += d * (p2 + r * d);
    }
    (0.5 * (1.0 - p2) + x * q, slope)
}

/// Solves `g = 0` on the open bracket `(lo, hi)` where `g(lo+) = +∞` and
/// `g(hi-) = -∞`, starting from `guess`. Newton steps leaving the current
/// bracket are replaced by bisection.
fn solve_extremum(roots: &[f64], lo: f64, hi: f64, guess: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let mut x = if guess > a && guess < b { guess } else { 0.5 * (a + b) };
    for _ in 0..MAX_INNER {
        let (g, neg_slope) = g_and_neg_slope(roots, x);
        if g == 0.0 {
            return Ok(x);
        }
        if g > 0.0 {
            a = x;
        } else {
            b = x;
        }
        let newton = x + g / neg_slope;
        let next = if newton > a && newton < b && neg_slope.is_finite() {
            newton
        } else {
            0.5 * (a + b)
        };
        let step = (next - x).abs();
        x = next;
        if step <= tol * x.abs().max(f64::MIN_POSITIVE) || b - a <= 4.0 * f64::EPSILON * b {
            return Ok(x);
        }
    }
    if b - a < 1e-10 * b {
        return Ok(x);
    }
    Err(Error::Bracket(format!(
        "extremum search in ({lo}, {hi}) did not settle; last bracket ({a}, {b})"
    )))
}

/// Interior extrema `x_1..x_{k-1}` of `f` for the given ascending roots.
///
/// Guesses outside their interlacing bracket are replaced by its midpoint.
pub fn find_extrema(roots: &[f64], guesses: &[f64], tol: f64) -> Result<Vec<f64>> {
    let k = roots.len();
    if k <= 1 {
        return Ok(Vec::new());
    }
    if guesses.len() != k - 1 {
        return Err(Error::DimensionMismatch {
            context: "find_extrema (guesses)",
            expected: k - 1,
            found: guesses.len(),
        });
    }
    if roots.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("roots must be strictly increasing".into()));
    }
    (0..k - 1)
        .map(|i| solve_extremum(roots, roots[i], roots[i + 1], guesses[i], tol))
        .collect()
}

/// Starting extrema `½ - ½cos((i+½)π/(k+½))`, `i = 1..k-1`.
pub fn initial_extrema(k: usize) -> Vec<f64> {
    let kh = k as f64 + 0.5;
    (1..k)
        .map(|i| 0.5 - 0.5 * ((i as f64 + 0.5) * PI / kh).cos())
        .collect()
}

fn residual_vector(roots: &[f64], extrema: &[f64]) -> (Vec<f64>, Vec<(f64, f64)>) {
    let f0 = f_at_zero(roots);
    let evals: Vec<(f64, f64)> = extrema
        .iter()
        .copied()
        .chain(std::iter::once(1.0))
        .map(|x| abs_f(roots, x))
        .collect();
    (evals.iter().map(|(af, _)| f0 - af).collect(), evals)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn admissible(roots: &[f64]) -> bool {
    roots.first().is_some_and(|&r| r > 0.0)
        && roots.last().is_some_and(|&r| r < 1.0)
        && roots.windows(2).all(|w| w[0] < w[1])
}

/// Roots of the degree-`k` polynomial minimizing `γ`, via outer Newton on the
/// equioscillation residual starting from the fourth-kind Chebyshev roots.
pub fn optimal_roots(k: usize, tol: f64) -> Result<EquioscillationState> {
    optimal_roots_with(k, tol, DEFAULT_MAX_OUTER)
}

pub fn optimal_roots_with(k: usize, tol: f64, max_outer: usize) -> Result<EquioscillationState> {
    if k == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let inner_tol = 4.0 * f64::EPSILON;
    let mut roots = cheb4_roots(k);
    let mut extrema = find_extrema(&roots, &initial_extrema(k), inner_tol)?;
    let (mut f, mut evals) = residual_vector(&roots, &extrema);
    let mut res = inf_norm(&f);

    for it in 0..max_outer {
        if res <= tol {
            return Ok(EquioscillationState {
                roots,
                extrema,
                residual: res,
                iterations: it,
            });
        }
        let f0 = f_at_zero(&roots);
        let f03 = f0 * f0 * f0;
        let xs: Vec<f64> = extrema.iter().copied().chain(std::iter::once(1.0)).collect();
        let jac = DenseMatrix::from_fn(k, |i, j| {
            let (af, w) = evals[i];
            let r = roots[j];
            f03 / (r * r) + w * af / (r * (xs[i] - r))
        });
        let neg_f: Vec<f64> = f.iter().map(|v| -v).collect();
        let delta = lu_solve(&jac, &neg_f)?;

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = roots.iter().zip(&delta).map(|(r, d)| r + t * d).collect();
            if admissible(&trial) {
                if let Ok(ext) = find_extrema(&trial, &extrema, inner_tol) {
                    let (tf, tev) = residual_vector(&trial, &ext);
                    let tres = inf_norm(&tf);
                    if tres.is_finite() && (t == 1.0 || tres < res) {
                        accepted = Some((trial, ext, tf, tev, tres));
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        let Some((r_new, x_new, f_new, ev_new, res_new)) = accepted else {
            return Err(Error::NoConvergence {
                iterations: it,
                residual: res,
            });
        };
        // Rounding floor: once the full step no longer helps, the previous
        // iterate is as good as double precision allows.
        if res_new >= res && res < 1e3 * tol {
            return Ok(EquioscillationState {
                roots,
                extrema,
                residual: res,
                iterations: it,
            });
        }
        roots = r_new;
        extrema = x_new;
        f = f_new;
        evals = ev_new;
        res = res_new;
    }
    if res <= tol {
        return Ok(EquioscillationState {
            roots,
            extrema,
            residual: res,
            iterations: max_outer,
        });
    }
    Err(Error::NoConvergence {
        iterations: max_outer,
        residual: res,
    })
}

/// Nodes `cos(iπ/(k+½))`, `i = 1..k`, and weights `(1 - x_i)/(k+½)` of the
/// `k`-point Gauss rule for `(1/π)∫ ((1-x)/(1+x))^{1/2} h(x) dx`, the weight
/// under which the `W_n` are orthonormal. Exact for degree ≤ 2k - 1.
pub fn gauss_nodes(k: usize) -> Vec<(f64, f64)> {
    let kh = k as f64 + 0.5;
    (1..=k)
        .map(|i| {
            let x = (i as f64 * PI / kh).cos();
            (x, (1.0 - x) / kh)
        })
        .collect()
}

/// `Σ w_i h(x_i)` with the `k`-point rule of [`gauss_nodes`].
pub fn quadrature_check(h: impl Fn(f64) -> f64, k: usize) -> f64 {
    gauss_nodes(k).into_iter().map(|(x, w)| w * h(x)).sum()
}

/// Fourth-kind expansion `p(λ) = Σ_{j=0}^{k} α_j W_j(1 - 2λ)` of the
/// polynomial with the given roots.
///
/// `α_0..α_{k-1}` come from the Gauss rule; `α_k` is fixed by the leading
/// coefficient, `α_k = Π 1/(4 r_i)`.
pub fn cheb4_expansion(roots: &[f64]) -> Vec<f64> {
    let k = roots.len();
    let mut alpha = vec![0.0; k + 1];
    for (x, w) in gauss_nodes(k) {
        let pw = w * p_of(roots, 0.5 * (1.0 - x));
        let ws = cheb_w_all(k - 1, x);
        for (a, wj) in alpha.iter_mut().zip(&ws) {
            *a += pw * wj;
        }
    }
    if k > 0 {
        alpha[k] = (-roots.iter().map(|r| (4.0 * r).ln()).sum::<f64>()).exp();
    }
    alpha
}

/// The `β` recursion `β_0 = 1`, `β_{i+1} = β_i - (2i+1) α_i`, returning
/// `β_1..β_k` and the residual `β_{k+1}`, which vanishes in exact arithmetic.
pub fn beta_recursion(alpha: &[f64]) -> (Vec<f64>, f64) {
    let k = alpha.len().saturating_sub(1);
    let mut beta = 1.0;
    let mut out = Vec::with_capacity(k);
    for (i, a) in alpha.iter().enumerate() {
        beta -= (2 * i + 1) as f64 * a;
        if i < k {
            out.push(beta);
        }
    }
    (out, beta)
}

/// Iteration coefficients `β_1..β_k` from the expansion coefficients.
/// Fails if `|β_{k+1}|` exceeds `1e-8`.
pub fn betas_from_expansion(alpha: &[f64]) -> Result<Vec<f64>> {
    let (out, residual) = beta_recursion(alpha);
    if residual.abs() > 1e-8 {
        return Err(Error::BetaResidual(residual));
    }
    Ok(out)
}

/// `β_1..β_k` for the polynomial with the given roots.
pub fn opt_betas(roots: &[f64]) -> Result<Vec<f64>> {
    betas_from_expansion(&cheb4_expansion(roots))
}

/// The optimal degree-`k` polynomial with its expansion and `β` attached.
pub fn optimal_polynomial(k: usize) -> Result<PolynomialSpec> {
    let state = optimal_roots(k, DEFAULT_TOL)?;
    let alpha = cheb4_expansion(&state.roots);
    let betas = betas_from_expansion(&alpha)?;
    PolynomialSpec::from_roots(state.roots)?
        .with_cheb4_coeffs(alpha)?
        .with_betas(betas)
}

/// `β_1..β_k` of the optimal degree-`k` polynomial.
pub fn optimal_betas(k: usize) -> Result<Vec<f64>> {
    let state = optimal_roots(k, DEFAULT_TOL)?;
    opt_betas(&state.roots)
}

/// `(4/π²)(2k+1)² - 2/3`, the two-term asymptotic lower estimate of `γ_opt⁻¹`.
pub fn gamma_inv_asymptotic(k: usize) -> f64 {
    let n = (2 * k + 1) as f64;
    4.0 / (PI * PI) * n * n - 2.0 / 3.0
}
