use crate::error::{check_dim, Result};

use super::{dot, SparseMatrix};

/// A square linear map acting on vectors of length [`dim`](LinearOperator::dim).
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// Writes `y = Op(x)`. Callers guarantee `x.len() == y.len() == dim()`.
    fn apply_into(&self, x: &[f64], y: &mut [f64]);

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.apply_into(x, &mut y);
        y
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Identity(pub usize);

impl LinearOperator for Identity {
    fn dim(&self) -> usize {
        self.0
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
    }
}

#[derive(Debug, Clone)]
pub struct Diagonal(pub Vec<f64>);

impl LinearOperator for Diagonal {
    fn dim(&self) -> usize {
        self.0.len()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        for ((yi, xi), di) in y.iter_mut().zip(x).zip(&self.0) {
            *yi = di * xi;
        }
    }
}

/// Wraps a closure as an operator.
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64], &mut [f64])> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64], &mut [f64])> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        (self.f)(x, y)
    }
}

impl LinearOperator for SparseMatrix {
    fn dim(&self) -> usize {
        debug_assert_eq!(self.n_rows(), self.n_cols());
        self.n_rows()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.spmv_into(x, y);
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply_into(x, y)
    }
}

/// `uᵀ (W v)`.
pub fn weighted_inner<W: LinearOperator + ?Sized>(u: &[f64], v: &[f64], w: &W) -> Result<f64> {
    check_dim("weighted_inner", u.len(), v.len())?;
    check_dim("weighted_inner weight", w.dim(), v.len())?;
    let mut wv = vec![0.0; v.len()];
    w.apply_into(v, &mut wv);
    Ok(dot(u, &wv))
}

/// `sqrt(uᵀ W u)`.
pub fn norm_w<W: LinearOperator + ?Sized>(u: &[f64], w: &W) -> Result<f64> {
    weighted_inner(u, u, w).map(f64::sqrt)
}
