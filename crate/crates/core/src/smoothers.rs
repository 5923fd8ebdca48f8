//! Polynomial smoothers `G = p(B̂A)` with `B̂ = B / ρ(BA)` for a diagonal SPD `B`.
//!
//! Three iterations are provided:
//!
//! * simple damped: `x ← x + (ω/ρ) B (b - Ax)`, `k` times, `p(λ) = (1 - ωλ)^k`;
//! * fourth-kind Chebyshev: the three-term recurrence
//!   `z_i = (2i-3)/(2i+1) z_{i-1} + (8i-4)/(2i+1) (1/ρ) B r_{i-1}`, `x_i = x_{i-1} + z_i`,
//!   realizing `p_k(λ) = W_k(1 - 2λ)/(2k+1)`;
//! * optimized: the same `z_i`, but `x_i = x_{i-1} + β_i z_i` while the
//!   auxiliary residual is updated without `β_i`, `r_i = r_{i-1} - A z_i`.
//!
//! The Chebyshev smoother is run through the same kernel as the optimized
//! one with every `β_i = 1`, which is algebraically identical to recomputing
//! `r = b - Ax` each step.

use crate::error::{check_dim, Error, Result};
use crate::linalg::SparseMatrix;
use crate::poly::{cheb4_smoother_poly, eval_beta_expansion};

/// `B = diag(inverse_diagonal)` together with the measured `ρ(BA)`.
///
/// `B` is stored unscaled; iterations divide by `rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSmoother {
    inverse_diagonal: Vec<f64>,
    rho_ba: f64,
}

impl DiagonalSmoother {
    pub fn new(inverse_diagonal: Vec<f64>, rho_ba: f64) -> Result<Self> {
        if let Some((row, &value)) = inverse_diagonal.iter().enumerate().find(|(_, d)| !(**d > 0.0)) {
            return Err(Error::NonPositiveDiagonal { row, value });
        }
        if !(rho_ba > 0.0 && rho_ba.is_finite()) {
            return Err(Error::InvalidArgument(format!("ρ(BA) = {rho_ba} must be positive")));
        }
        Ok(Self {
            inverse_diagonal,
            rho_ba,
        })
    }

    pub fn inverse_diagonal(&self) -> &[f64] {
        &self.inverse_diagonal
    }

    pub fn rho(&self) -> f64 {
        self.rho_ba
    }

    pub fn dim(&self) -> usize {
        self.inverse_diagonal.len()
    }

    /// Copy with `ρ(BA)` multiplied by `factor` (e.g. `1 + ε` to overestimate).
    pub fn with_rho_scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.inverse_diagonal.clone(), self.rho_ba * factor)
    }

    /// Diagonal of the normalized smoother `B̂ = B / ρ`.
    pub fn normalized_diagonal(&self) -> Vec<f64> {
        self.inverse_diagonal.iter().map(|d| d / self.rho_ba).collect()
    }
}

/// Which polynomial smoother to run, and its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum SmootherConfig {
    Simple { omega: f64, k: usize },
    Cheb4 { k: usize },
    /// `betas = [β_1, ..., β_k]`.
    Optimized { betas: Vec<f64> },
}

impl SmootherConfig {
    /// Optimized smoother of degree `k`, with coefficients computed by
    /// [`crate::optpoly`].
    pub fn optimized(k: usize) -> Result<Self> {
        Ok(Self::Optimized {
            betas: crate::optpoly::optimal_betas(k)?,
        })
    }

    pub fn degree(&self) -> usize {
        match self {
            Self::Simple { k, .. } | Self::Cheb4 { k } => *k,
            Self::Optimized { betas } => betas.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Simple { omega, .. } if !(*omega > 0.0 && *omega < 2.0) => Err(Error::InvalidArgument(
                format!("damping ω = {omega} outside (0, 2)"),
            )),
            Self::Optimized { betas } if betas.iter().any(|b| !b.is_finite()) => {
                Err(Error::InvalidArgument("non-finite β coefficient".into()))
            }
            _ => Ok(()),
        }
    }

    /// The error-propagation polynomial `p(λ)` realized by this smoother.
    pub fn polynomial_value(&self, lambda: f64) -> f64 {
        match self {
            Self::Simple { omega, k } => (1.0 - omega * lambda).powi(*k as i32),
            Self::Cheb4 { k } => cheb4_smoother_poly(*k, lambda),
            Self::Optimized { betas } => eval_beta_expansion(betas, lambda),
        }
    }
}

fn check_inputs(a: &SparseMatrix, b: &DiagonalSmoother, x: &[f64], rhs: &[f64]) -> Result<()> {
    check_dim("smoother (matrix)", a.n_rows(), a.n_cols())?;
    check_dim("smoother (smoother size)", a.n_rows(), b.dim())?;
    check_dim("smoother (x)", a.n_rows(), x.len())?;
    check_dim("smoother (b)", a.n_rows(), rhs.len())
}

/// `k` steps of `x ← x + (ω/ρ) B (b - Ax)`.
pub fn smooth_simple(
    a: &SparseMatrix,
    b: &DiagonalSmoother,
    x: &mut [f64],
    rhs: &[f64],
    omega: f64,
    k: usize,
) -> Result<()> {
    check_inputs(a, b, x, rhs)?;
    let step = omega / b.rho();
    let mut ax = vec![0.0; x.len()];
    for _ in 0..k {
        a.spmv_into(x, &mut ax);
        for ((xi, (bi, axi)), di) in x.iter_mut().zip(rhs.iter().zip(&ax)).zip(b.inverse_diagonal()) {
            *xi += step * di * (bi - axi);
        }
    }
    Ok(())
}

/// `k` steps of the fourth-kind Chebyshev iteration.
pub fn smooth_cheb4(a: &SparseMatrix, b: &DiagonalSmoother, x: &mut [f64], rhs: &[f64], k: usize) -> Result<()> {
    check_inputs(a, b, x, rhs)?;
    chebyshev_kernel(a, b, x, rhs, std::iter::repeat_n(1.0, k));
    Ok(())
}

/// The optimized (over-relaxed) fourth-kind iteration with coefficients `betas`.
pub fn smooth_opt(a: &SparseMatrix, b: &DiagonalSmoother, x: &mut [f64], rhs: &[f64], betas: &[f64]) -> Result<()> {
    check_inputs(a, b, x, rhs)?;
    chebyshev_kernel(a, b, x, rhs, betas.iter().copied());
    Ok(())
}

fn chebyshev_kernel(
    a: &SparseMatrix,
    b: &DiagonalSmoother,
    x: &mut [f64],
    rhs: &[f64],
    betas: impl ExactSizeIterator<Item = f64>,
) {
    let k = betas.len();
    if k == 0 {
        return;
    }
    let n = x.len();
    let mut r = vec![0.0; n];
    a.spmv_into(x, &mut r);
    for (ri, bi) in r.iter_mut().zip(rhs) {
        *ri = bi - *ri;
    }
    let mut z = vec![0.0; n];
    let inv_rho = 1.0 / b.rho();
    for (step, beta) in betas.enumerate() {
        let i = (step + 1) as f64;
        let c_prev = (2.0 * i - 3.0) / (2.0 * i + 1.0);
        let c_res = (8.0 * i - 4.0) / (2.0 * i + 1.0) * inv_rho;
        for (((zj, xj), rj), dj) in z.iter_mut().zip(x.iter_mut()).zip(&r).zip(b.inverse_diagonal()) {
            *zj = c_prev * *zj + c_res * dj * rj;
            *xj += beta * *zj;
        }
        if step + 1 < k {
            a.spmv_acc_into(-1.0, &z, &mut r);
        }
    }
}

/// Runs the configured smoother in place.
pub fn smooth(a: &SparseMatrix, b: &DiagonalSmoother, cfg: &SmootherConfig, x: &mut [f64], rhs: &[f64]) -> Result<()> {
    match cfg {
        SmootherConfig::Simple { omega, k } => smooth_simple(a, b, x, rhs, *omega, *k),
        SmootherConfig::Cheb4 { k } => smooth_cheb4(a, b, x, rhs, *k),
        SmootherConfig::Optimized { betas } => smooth_opt(a, b, x, rhs, betas),
    }
}
