//! Fourth-kind Chebyshev polynomials, smoother polynomials `p` with
//! `p(0) = 1`, and the smoothing functional
//!
//! ```text
//! γ_μ(p) = sup_{μ < λ ≤ 1} λ p(λ)² / (1 - p(λ)²).
//! ```

use crate::error::{Error, Result};

/// `W_n(x)` by the three-term recurrence `W_n = 2x W_{n-1} - W_{n-2}`,
/// `W_0 = 1`, `W_1 = 2x + 1`.
pub fn cheb_w(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x + 1.0;
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `W_0(x), ..., W_n(x)`.
pub fn cheb_w_all(n: usize, x: f64) -> Vec<f64> {
    let mut w = Vec::with_capacity(n + 1);
    w.push(1.0);
    if n >= 1 {
        w.push(2.0 * x + 1.0);
    }
    for i in 2..=n {
        w.push(2.0 * x * w[i - 1] - w[i - 2]);
    }
    w
}

/// The scaled and shifted smoother polynomial `p_k(λ) = W_k(1 - 2λ) / (2k + 1)`.
pub fn cheb4_smoother_poly(k: usize, lambda: f64) -> f64 {
    cheb_w(k, 1.0 - 2.0 * lambda) / (2 * k + 1) as f64
}

/// Roots of `p_k`: `½ - ½ cos(iπ / (k + ½))`, ascending.
pub fn cheb4_roots(k: usize) -> Vec<f64> {
    let kh = k as f64 + 0.5;
    (1..=k)
        .map(|i| 0.5 - 0.5 * (i as f64 * std::f64::consts::PI / kh).cos())
        .collect()
}

/// Evaluates `Σ_{i=0}^{k} (β_i - β_{i+1}) / (2i+1) · W_i(1 - 2λ)` with
/// `β_0 = 1`, `β_{k+1} = 0`, where `betas = [β_1, ..., β_k]`.
pub fn eval_beta_expansion(betas: &[f64], lambda: f64) -> f64 {
    let k = betas.len();
    let beta = |i: usize| match i {
        0 => 1.0,
        i if i > k => 0.0,
        i => betas[i - 1],
    };
    let w = cheb_w_all(k, 1.0 - 2.0 * lambda);
    (0..=k)
        .map(|i| (beta(i) - beta(i + 1)) / (2 * i + 1) as f64 * w[i])
        .sum()
}

/// A smoother polynomial of degree `k` normalized by `p(0) = 1`.
///
/// The product form over the roots is authoritative. A fourth-kind Chebyshev
/// expansion `p(λ) = Σ α_i W_i(1 - 2λ)` and the iteration coefficients
/// `β_1..β_k` may be attached when they are known.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSpec {
    roots: Vec<f64>,
    cheb4_coeffs: Option<Vec<f64>>,
    betas: Option<Vec<f64>>,
}

impl PolynomialSpec {
    /// `p(λ) = Π (1 - λ / r_i)`. Roots must be positive and finite.
    pub fn from_roots(mut roots: Vec<f64>) -> Result<Self> {
        if let Some(r) = roots.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::InvalidArgument(format!("root {r} is not positive")));
        }
        roots.sort_by(f64::total_cmp);
        Ok(Self {
            roots,
            cheb4_coeffs: None,
            betas: None,
        })
    }

    /// The fourth-kind Chebyshev smoother polynomial of degree `k`.
    pub fn cheb4(k: usize) -> Self {
        let mut alpha = vec![0.0; k + 1];
        alpha[k] = 1.0 / (2 * k + 1) as f64;
        Self {
            roots: cheb4_roots(k),
            cheb4_coeffs: Some(alpha),
            betas: Some(vec![1.0; k]),
        }
    }

    /// `(1 - ωλ)^k`.
    pub fn simple(omega: f64, k: usize) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidArgument(format!("damping {omega} must be positive")));
        }
        Self::from_roots(vec![1.0 / omega; k])
    }

    pub fn with_cheb4_coeffs(mut self, alpha: Vec<f64>) -> Result<Self> {
        if alpha.len() != self.degree() + 1 {
            return Err(Error::InvalidArgument(format!(
                "expected {} expansion coefficients, got {}",
                self.degree() + 1,
                alpha.len()
            )));
        }
        self.cheb4_coeffs = Some(alpha);
        Ok(self)
    }

    pub fn with_betas(mut self, betas: Vec<f64>) -> Result<Self> {
        if betas.len() != self.degree() {
            return Err(Error::InvalidArgument(format!(
                "expected {} betas, got {}",
                self.degree(),
                betas.len()
            )));
        }
        self.betas = Some(betas);
        Ok(self)
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    pub fn cheb4_coeffs(&self) -> Option<&[f64]> {
        self.cheb4_coeffs.as_deref()
    }

    pub fn betas(&self) -> Option<&[f64]> {
        self.betas.as_deref()
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.roots.iter().fold(1.0, |acc, r| acc * (1.0 - lambda / r))
    }

    /// Evaluates the attached Chebyshev expansion, if any.
    pub fn eval_cheb4_expansion(&self, lambda: f64) -> Option<f64> {
        let alpha = self.cheb4_coeffs.as_ref()?;
        let w = cheb_w_all(alpha.len() - 1, 1.0 - 2.0 * lambda);
        Some(alpha.iter().zip(&w).map(|(a, wi)| a * wi).sum())
    }

    /// `p'(0) = -Σ 1 / r_i`.
    pub fn derivative_at_zero(&self) -> f64 {
        -self.roots.iter().map(|r| 1.0 / r).sum::<f64>()
    }

    /// `1 - p(λ)` without cancellation for small `λ`.
    pub fn one_minus(&self, lambda: f64) -> f64 {
        match self.roots.first() {
            Some(&r1) if lambda.abs() < 0.5 * r1 => {
                let log_p: f64 = self.roots.iter().map(|r| (-lambda / r).ln_1p()).sum();
                -log_p.exp_m1()
            }
            _ => 1.0 - self.eval(lambda),
        }
    }

    /// `1 - p(λ)²`.
    pub fn one_minus_sq(&self, lambda: f64) -> f64 {
        let p = self.eval(lambda);
        self.one_minus(lambda) * (1.0 + p)
    }

    /// `λ p(λ)² / (1 - p(λ)²)`, continuously extended by `1 / (-2 p'(0))` at 0.
    pub fn gamma_integrand(&self, lambda: f64) -> f64 {
        if lambda == 0.0 {
            return 1.0 / (-2.0 * self.derivative_at_zero());
        }
        let p = self.eval(lambda);
        lambda * p * p / self.one_minus_sq(lambda)
    }
}

/// Default grid size used for suprema over `(μ, 1]`.
pub fn default_grid_density(k: usize) -> usize {
    64 * (k + 1)
}

/// Chebyshev-spaced points `a + (b - a)(1 - cos(jπ/n))/2`, `j = 1..=n`
/// (the left endpoint is excluded, the right one included).
pub fn chebyshev_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (1..=n)
        .map(|j| {
            if j == n {
                b
            } else {
                a + (b - a) * 0.5 * (1.0 - (j as f64 * std::f64::consts::PI / n as f64).cos())
            }
        })
        .collect()
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
pub fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Local maxima of `f` over the grid, each refined by golden-section search
/// within its neighbouring grid cells. Returns `(λ, f(λ))` pairs.
pub fn local_maxima(f: &impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let grid = chebyshev_grid(a, b, n);
    let vals: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    let m = grid.len();
    let mut out = Vec::new();
    for j in 0..m {
        let left = if j == 0 { f64::NEG_INFINITY } else { vals[j - 1] };
        let right = if j + 1 == m { f64::NEG_INFINITY } else { vals[j + 1] };
        if vals[j] >= left && vals[j] >= right {
            let lo = if j == 0 { a } else { grid[j - 1] };
            let hi = if j + 1 == m { b } else { grid[j + 1] };
            let (x, v) = golden_max(f, lo, hi);
            // The grid value itself stays a candidate (endpoint maxima).
            out.push(if v >= vals[j] { (x, v) } else { (grid[j], vals[j]) });
        }
    }
    out
}

/// `sup_{a < λ ≤ b} f(λ)` from the refined local maxima.
pub fn sup_on_interval(f: &impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> (f64, f64) {
    local_maxima(f, a, b, n)
        .into_iter()
        .fold((b, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best })
}

/// `γ_μ(p) = sup_{μ < λ ≤ 1} λ p² / (1 - p²)`.
///
/// With `μ = 0` the limit `1 / (-2 p'(0))` at `λ → 0` is included as a
/// candidate. `grid_density` defaults to [`default_grid_density`].
pub fn gamma_mu(p: &PolynomialSpec, mu: f64, grid_density: Option<usize>) -> Result<f64> {
    if !(0.0..1.0).contains(&mu) {
        return Err(Error::InvalidArgument(format!("μ = {mu} outside [0, 1)")));
    }
    let n = grid_density.unwrap_or_else(|| default_grid_density(p.degree()));
    for lambda in chebyshev_grid(mu, 1.0, n) {
        let v = p.eval(lambda);
        if v.abs() >= 1.0 {
            return Err(Error::InvalidPolynomial { lambda, value: v.abs() });
        }
    }
    let f = |t: f64| p.gamma_integrand(t);
    let (_, mut best) = sup_on_interval(&f, mu, 1.0, n);
    if mu == 0.0 {
        best = best.max(p.gamma_integrand(0.0));
    }
    Ok(best)
}

/// `p(0) = 1` and `max |p| < 1 - 1e-12` over the grid on `(0, 1]`.
pub fn poly_is_valid(p: &PolynomialSpec, grid_density: Option<usize>) -> bool {
    let n = grid_density.unwrap_or_else(|| default_grid_density(p.degree()));
    (p.eval(0.0) - 1.0).abs() <= 1e-14
        && p.degree() > 0
        && chebyshev_grid(0.0, 1.0, n)
            .into_iter()
            .all(|t| p.eval(t).abs() < 1.0 - 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_values() {
        assert_eq!(cheb_w(0, 0.37), 1.0);
        assert_eq!(cheb_w(1, 0.5), 2.0);
        assert_eq!(cheb_w(3, 1.0), 7.0);
        for n in 0..20 {
            assert_eq!(cheb_w(n, 1.0), (2 * n + 1) as f64);
        }
    }

    #[test]
    fn explicit_low_degree() {
        assert!((cheb4_smoother_poly(1, 0.75)).abs() < 1e-15);
        assert!((cheb4_smoother_poly(2, 0.25) - 0.2).abs() < 1e-15);
        for k in 0..30 {
            assert!((cheb4_smoother_poly(k, 0.0) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn roots_vanish() {
        for k in 1..15 {
            for r in cheb4_roots(k) {
                assert!(cheb4_smoother_poly(k, r).abs() < 1e-12, "k={k} r={r}");
            }
        }
    }

    #[test]
    fn gamma_known_values() {
        let g = gamma_mu(&PolynomialSpec::cheb4(1), 0.0, None).unwrap();
        assert!((g - 3.0 / 8.0).abs() < 1e-14);
        let g = gamma_mu(&PolynomialSpec::simple(1.0, 1).unwrap(), 0.0, None).unwrap();
        assert!((g - 0.5).abs() < 1e-14);
        let opt1 = PolynomialSpec::from_roots(vec![2.0 / 3.0]).unwrap();
        let g = gamma_mu(&opt1, 0.0, None).unwrap();
        assert!((g - 1.0 / 3.0).abs() < 1e-14);
        assert!((opt1.gamma_integrand(1.0) - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_rejects_invalid() {
        let p = PolynomialSpec::simple(2.0, 1).unwrap();
        assert!(matches!(
            gamma_mu(&p, 0.0, None),
            Err(Error::InvalidPolynomial { .. })
        ));
        assert!(gamma_mu(&PolynomialSpec::cheb4(2), 1.0, None).is_err());
    }

    #[test]
    fn validity() {
        for k in 1..=50 {
            assert!(poly_is_valid(&PolynomialSpec::cheb4(k), None), "k={k}");
        }
        assert!(!poly_is_valid(&PolynomialSpec::simple(2.0, 1).unwrap(), None));
        assert!(poly_is_valid(&PolynomialSpec::simple(1.5, 1).unwrap(), None));
    }

    #[test]
    fn small_lambda_limit() {
        let p = PolynomialSpec::cheb4(5);
        let lim = p.gamma_integrand(0.0);
        assert!((lim - 1.0 / (4.0 / 3.0 * 30.0)).abs() < 1e-15);
        let near = p.gamma_integrand(1e-12);
        assert!((near - lim).abs() < 1e-9 * lim);
    }

    #[test]
    fn beta_expansion_of_cheb4() {
        for k in 1..8 {
            let betas = vec![1.0; k];
            for &t in &[0.0, 0.1, 0.5, 0.93, 1.0] {
                let a = eval_beta_expansion(&betas, t);
                assert!((a - cheb4_smoother_poly(k, t)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn attached_expansion_agrees() {
        let p = PolynomialSpec::cheb4(6);
        for &t in &[0.0, 0.2, 0.7, 1.0] {
            assert!((p.eval(t) - p.eval_cheb4_expansion(t).unwrap()).abs() < 1e-12);
        }
        assert!(PolynomialSpec::cheb4(2).with_betas(vec![1.0]).is_err());
    }
}
