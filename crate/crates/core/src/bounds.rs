//! Closed-form V-cycle convergence bounds on `‖E‖²_A`, as functions of the
//! approximation constant `C ≥ 1` and the polynomial degree `k`.
//!
//! Every bound has the shape `C/(C + γ⁻¹)`; the variants differ in which `γ`
//! (or discounted `C′`) they use. The sharpened fourth-kind bound needs the
//! constants `w`, `φ*`, `λ*`, `y` of [`SharpConstants`], which are computed by
//! golden-section search and bisection rather than from asymptotic series.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::poly::{gamma_mu, golden_max, PolynomialSpec};

/// Floor applied to a non-positive sharpened constant `C′`.
pub const C_PRIME_FLOOR: f64 = 1e-15;

fn check_c(c: f64) -> Result<()> {
    if c >= 1.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("approximation constant C = {c} must be finite and at least 1")))
    }
}

/// `C / (C + 1/γ)`.
pub fn bound_generic(c: f64, gamma: f64) -> Result<f64> {
    check_c(c)?;
    if !(gamma >= 0.0) {
        return Err(Error::InvalidArgument(format!("γ = {gamma} must be nonnegative")));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    Ok(c / (c + 1.0 / gamma))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleBound {
    pub value: f64,
    /// Whether `(1 - ω)^{2k} ≤ 1/(1 + 2ωk)`, the hypothesis of the bound.
    pub valid: bool,
}

/// `(1 - ω)^{2k} ≤ 1/(1 + 2ωk)`.
pub fn omega_condition(omega: f64, k: usize) -> bool {
    (1.0 - omega).powi(2 * k as i32) <= 1.0 / (1.0 + 2.0 * omega * k as f64)
}

/// `C/(C + 2ωk)` for `k` steps of the damped iteration.
pub fn bound_simple(c: f64, omega: f64, k: usize) -> SimpleBound {
    SimpleBound {
        value: c / (c + 2.0 * omega * k as f64),
        valid: omega > 0.0 && omega < 2.0 && omega_condition(omega, k),
    }
}

/// `2 - ln(4k)/(2k)`.
pub fn omega_max_asymptotic(k: usize) -> f64 {
    let k = k as f64;
    2.0 - (4.0 * k).ln() / (2.0 * k)
}

/// Largest `ω` satisfying [`omega_condition`], by bisection on `[1, 2)`.
///
/// On `(1, 2)` the left side increases and the right side decreases in `ω`,
/// so the admissible set is an interval ending at the returned value.
pub fn omega_max_exact(k: usize) -> f64 {
    if k == 0 {
        return 2.0;
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    while hi - lo > 4.0 * f64::EPSILON {
        let mid = 0.5 * (lo + hi);
        if omega_condition(mid, k) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `C/(C + (4/3)k(k+1))`.
pub fn bound_cheb(c: f64, k: usize) -> f64 {
    let k = k as f64;
    c / (c + 4.0 / 3.0 * k * (k + 1.0))
}

/// `C/(2k+1)²`, the square of the two-level bound `C^{1/2}/(2k+1)`.
pub fn bound_cheb_two_level(c: f64, k: usize) -> f64 {
    let n = (2 * k + 1) as f64;
    c / (n * n)
}

/// `C/(C + (4/π²)(2k+1)² - 2/3)`.
pub fn bound_opt_conjecture(c: f64, k: usize) -> f64 {
    let n = (2 * k + 1) as f64;
    c / (c + 4.0 / (PI * PI) * n * n - 2.0 / 3.0)
}

/// The piecewise factor `f(C, k)` of the sharpened fourth-kind bound.
pub fn sharp_f(c: f64, k: usize) -> f64 {
    let n = (2 * k + 1) as f64;
    let n2 = n * n;
    if c < n2 / 7.97 + 0.512 {
        (1.0 + 65.0 / (15.0 * n2 - 33.0)) * (1.0 - 40.0 * c / (10.0 * n2 - n + 19.0))
    } else {
        (1.0 + 2.0 * c) / (32.0 * c * c - 10.0) * (n2 + 1.79 + 1.0 / n2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpBound {
    pub value: f64,
    /// `C′ = C - βf` after flooring.
    pub c_prime: f64,
    /// Set when `C - βf ≤ 0` and `C′` was replaced by [`C_PRIME_FLOOR`].
    pub clamped: bool,
}

/// `C′/(C′ + (4/3)k(k+1))` with `C′ = C - βf(C, k)`.
pub fn bound_cheb_sharp(c: f64, k: usize) -> SharpBound {
    let raw = c - beta_const() * sharp_f(c, k);
    let (c_prime, clamped) = if raw > 0.0 { (raw, false) } else { (C_PRIME_FLOOR, true) };
    let kf = k as f64;
    SharpBound {
        value: c_prime / (c_prime + 4.0 / 3.0 * kf * (kf + 1.0)),
        c_prime,
        clamped,
    }
}

/// `h_n(φ) = csc²φ - n⁻² csc²(φ/n)`; `n = None` is the limit `csc²φ - φ⁻²`.
fn h(n: Option<f64>, phi: f64) -> f64 {
    let s = phi.sin();
    let tail = match n {
        Some(n) => {
            let t = (phi / n).sin();
            1.0 / (n * n * t * t)
        }
        None => 1.0 / (phi * phi),
    };
    1.0 / (s * s) - tail
}

/// `inf_{4 < φ ≤ 3π/2} h_n(φ)`. The minimum is interior: `h_n` has a
/// positive slope at `3π/2` for finite `n`.
fn w_of(n: Option<f64>) -> f64 {
    let (_, neg) = golden_max(&|phi| -h(n, phi), 4.0, 1.5 * PI);
    (-neg).min(h(n, 1.5 * PI))
}

/// The root of `h_n(φ) = w` in `(0, π)` near 2; `h_n` increases there.
fn phi_star_of(n: Option<f64>, w: f64) -> Result<f64> {
    let (mut lo, mut hi) = (0.5, 3.0);
    let f = |phi: f64| h(n, phi) - w;
    if !(f(lo) < 0.0 && f(hi) > 0.0) {
        return Err(Error::Bracket(format!(
            "φ* not bracketed on [{lo}, {hi}]: h - w = {}, {}",
            f(lo),
            f(hi)
        )));
    }
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Limits of the sharp constants as `n → ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticConstants {
    /// `w₀ = min csc²φ - φ⁻²` near `3π/2`.
    pub w0: f64,
    pub phi_star: f64,
    /// `y₀ = 1/(3w₀)`.
    pub y0: f64,
    /// `β = 1 - y₀`.
    pub beta: f64,
}

pub fn asymptotic_constants() -> &'static AsymptoticConstants {
    static LIMIT: OnceLock<AsymptoticConstants> = OnceLock::new();
    LIMIT.get_or_init(|| {
        let w0 = w_of(None);
        let phi_star = phi_star_of(None, w0).expect("limit φ* is bracketed");
        let y0 = 1.0 / (3.0 * w0);
        AsymptoticConstants {
            w0,
            phi_star,
            y0,
            beta: 1.0 - y0,
        }
    })
}

/// `β = 1 - 1/(3w₀) = 0.650914713503148…`.
pub fn beta_const() -> f64 {
    asymptotic_constants().beta
}

/// The constants entering the sharpened fourth-kind bound for `n = 2k + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpConstants {
    pub n: usize,
    pub w: f64,
    pub phi_star: f64,
    /// `λ* = sin²(φ*/n)`.
    pub lambda_star: f64,
    /// `y = (n² - 1)/(3n²w)`.
    pub y: f64,
    pub beta_const: f64,
}

impl SharpConstants {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("n = {n} must be odd and at least 3")));
        }
        let nf = n as f64;
        let w = w_of(Some(nf));
        let phi_star = phi_star_of(Some(nf), w)?;
        let s = (phi_star / nf).sin();
        Ok(Self {
            n,
            w,
            phi_star,
            lambda_star: s * s,
            y: (nf * nf - 1.0) / (3.0 * nf * nf * w),
            beta_const: beta_const(),
        })
    }

    pub fn for_degree(k: usize) -> Result<Self> {
        Self::new(2 * k + 1)
    }

    /// Whether `C⁻¹ ≤ λ*(2 - λ*)`, selecting the interior-optimum branch.
    fn interior_branch(&self, c: f64) -> bool {
        1.0 / c <= self.lambda_star * (2.0 - self.lambda_star)
    }

    /// The `μ` maximizing the discount: `1 - (1 - C⁻¹)^{1/2}` or `λ*`.
    pub fn mu_star(&self, c: f64) -> f64 {
        if self.interior_branch(c) {
            1.0 - (1.0 - 1.0 / c).sqrt()
        } else {
            self.lambda_star
        }
    }

    /// `C - C′` from the exact constants.
    pub fn discount(&self, c: f64) -> f64 {
        let (ls, y) = (self.lambda_star, self.y);
        if self.interior_branch(c) {
            (1.0 - y) / ls * g(c)
        } else {
            (1.0 - ls * c) / (1.0 - ls) * (1.0 - y)
        }
    }
}

/// `g(C) = 1 + 2(C - 1)(1 - (1 - C⁻¹)^{-1/2})`.
pub fn g(c: f64) -> f64 {
    if c == 1.0 {
        return 1.0;
    }
    1.0 + 2.0 * (c - 1.0) * (1.0 - 1.0 / (1.0 - 1.0 / c).sqrt())
}

/// The exact discount `C - C′` for degree `k`.
pub fn cheb_sharp_exact_discount(c: f64, k: usize) -> Result<f64> {
    check_c(c)?;
    Ok(SharpConstants::for_degree(k)?.discount(c))
}

/// `C/(C + γ⁻¹)` with `γ = ((1 - C⁻¹)γ₀ + (C⁻¹ - μ)γ_μ)/(1 - μ)`; `γ = γ_μ`
/// when `C = 1`.
pub fn bound_sharp_generic(c: f64, p: &PolynomialSpec, mu: f64) -> Result<f64> {
    check_c(c)?;
    let inv_c = 1.0 / c;
    if !(mu >= 0.0) || mu > inv_c {
        return Err(Error::InvalidArgument(format!("μ = {mu} outside [0, 1/C = {inv_c}]")));
    }
    let gamma_m = gamma_mu(p, mu.min(1.0 - f64::EPSILON), None)?;
    let gamma = if c == 1.0 {
        gamma_m
    } else {
        let g0 = if mu == 0.0 { gamma_m } else { gamma_mu(p, 0.0, None)? };
        ((1.0 - inv_c) * g0 + (inv_c - mu) * gamma_m) / (1.0 - mu)
    };
    bound_generic(c, gamma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub c: f64,
    pub k: usize,
    pub simple_43: f64,
    pub simple_32: f64,
    pub cheb: f64,
    pub cheb_two_level: f64,
    pub cheb_sharp: f64,
    pub opt_conjecture: f64,
}

/// Every closed-form bound at `(C, k)`. The damped-iteration columns use
/// `ω = 4/3` and `ω = 3/2`, both of which satisfy the `ω` condition.
pub fn bound_row(c: f64, k: usize) -> BoundRow {
    BoundRow {
        c,
        k,
        simple_43: bound_simple(c, 4.0 / 3.0, k).value,
        simple_32: bound_simple(c, 1.5, k).value,
        cheb: bound_cheb(c, k),
        cheb_two_level: bound_cheb_two_level(c, k),
        cheb_sharp: bound_cheb_sharp(c, k).value,
        opt_conjecture: bound_opt_conjecture(c, k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generic_examples() {
        assert!((bound_generic(2.0, 3.0 / 8.0).unwrap() - 3.0 / 7.0).abs() < 1e-15);
        assert_eq!(bound_generic(1.0, 1.0).unwrap(), 0.5);
        assert!(bound_generic(5.0, 1e-12).unwrap() < 1e-10);
        assert!(bound_generic(0.5, 1.0).is_err());
    }

    #[test]
    fn simple_examples() {
        assert!(bound_simple(2.0, 1.5, 1).valid);
        assert!(!bound_simple(2.0, 1.9, 1).valid);
        for k in 1..10 {
            let c = 3.7;
            assert_eq!(bound_simple(c, 1.0, k).value, c / (c + 2.0 * k as f64));
        }
        assert!((omega_max_exact(1) - 1.5).abs() < 1e-12);
        assert!((omega_max_asymptotic(1) - (2.0 - 4f64.ln() / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn cheb_examples() {
        assert!((bound_cheb(2.0, 3) - 2.0 / 18.0).abs() < 1e-15);
        assert!((bound_cheb(128.0, 10) - 128.0 / (128.0 + 440.0 / 3.0)).abs() < 1e-15);
        assert!((bound_cheb(7.0, 1) - bound_simple(7.0, 4.0 / 3.0, 1).value).abs() < 1e-15);
        assert!((bound_cheb_two_level(2.0, 1) - 2.0 / 9.0).abs() < 1e-15);
        assert_eq!(bound_cheb_two_level(9.0, 1), 1.0);
        assert!((bound_cheb_two_level(128.0, 10) - 128.0 / 441.0).abs() < 1e-15);
    }

    #[test]
    fn sharp_example() {
        let f = sharp_f(2.0, 3);
        let expect = (1.0 + 65.0 / 702.0) * (1.0 - 80.0 / 502.0);
        assert!((f - expect).abs() < 1e-15);
        let s = bound_cheb_sharp(2.0, 3);
        assert!((s.c_prime - (2.0 - beta_const() * expect)).abs() < 1e-14);
        assert!((s.c_prime - 1.4021).abs() < 1e-4);
        assert!((s.value - 0.0806).abs() < 1e-4);
        assert!(!s.clamped);
    }

    #[test]
    fn opt_conjecture_example() {
        let v = bound_opt_conjecture(2.0, 1);
        assert!((v - 2.0 / (2.0 + 36.0 / (PI * PI) - 2.0 / 3.0)).abs() < 1e-15);
        assert!((v - 0.4015).abs() < 5e-5);
    }

    #[test]
    fn limits() {
        let a = asymptotic_constants();
        assert!((a.beta - 0.650914713503148).abs() < 1e-12);
        assert!((a.w0 - 0.95487649).abs() < 1e-7);
        assert!((a.y0 - 0.349085).abs() < 1e-5);
        assert!((a.phi_star - 1.99661).abs() < 1e-4);
    }

    #[test]
    fn finite_n_approaches_limit() {
        let a = asymptotic_constants();
        let s = SharpConstants::new(2001).unwrap();
        assert!((s.w - a.w0).abs() < 1e-6);
        assert!((s.phi_star - a.phi_star).abs() < 1e-6);
        assert!(s.y > 0.0 && s.y < 0.35 && s.lambda_star > 0.0 && s.lambda_star < 1.0);
        // Series oracles: w ≈ w₀ - 1/(3n²), λ* ≈ 3.98647/n² at n = 101.
        let s = SharpConstants::new(101).unwrap();
        let n2 = 101.0f64 * 101.0;
        assert!((s.w - (a.w0 - 1.0 / (3.0 * n2) - 1.47441 / (n2 * n2))).abs() < 1e-9);
        assert!((s.lambda_star - (3.98647 / n2 - 5.29731 / (n2 * n2))).abs() < 1e-8);
        assert!(SharpConstants::new(4).is_err());
    }

    #[test]
    fn discount_at_c_one() {
        let s = SharpConstants::for_degree(3).unwrap();
        assert!((s.discount(1.0) - (1.0 - s.y)).abs() < 1e-15);
        assert_eq!(g(1.0), 1.0);
    }

    #[test]
    fn sharp_generic_reductions() {
        let p = PolynomialSpec::cheb4(3);
        for c in [2.0, 8.0, 32.0] {
            let g0 = gamma_mu(&p, 0.0, None).unwrap();
            let base = bound_generic(c, g0).unwrap();
            assert!((bound_sharp_generic(c, &p, 0.0).unwrap() - base).abs() < 1e-15);
            assert!((bound_sharp_generic(c, &p, 1.0 / c).unwrap() - base).abs() < 1e-14);
            assert!(bound_sharp_generic(c, &p, 1.1 / c).is_err());
        }
    }
}
