//! Sparse and dense linear algebra primitives.
//!
//! Vectors are plain `[f64]` slices. All reductions run in index order so
//! results are bit-reproducible for a given input.

mod band;
mod dense;
mod market;
mod operator;
mod power;
mod sparse;

pub use band::BandCholesky;
pub use dense::{dense_cholesky_solve, lu_solve, Cholesky, DenseMatrix};
pub use market::{read_matrix_market, write_matrix_market};
pub use operator::{norm_w, weighted_inner, Diagonal, FnOperator, Identity, LinearOperator};
pub use power::{power_method, EigenEstimate, PowerOptions};
pub use sparse::SparseMatrix;

/// Euclidean inner product, summed in index order.
pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).fold(0.0, |acc, (a, b)| acc + a * b)
}

pub fn norm2(u: &[f64]) -> f64 {
    dot(u, u).sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}
