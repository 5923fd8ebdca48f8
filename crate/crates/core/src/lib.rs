//! Multigrid V-cycles for symmetric positive definite systems with polynomial
//! smoothers.
//!
//! The crate provides
//!
//! * sparse and small dense linear algebra ([`linalg`]),
//! * the anisotropic bilinear finite element Poisson model problem ([`fem`]),
//! * fourth-kind Chebyshev polynomials and the smoothing functional γ ([`poly`]),
//! * numerically optimized smoother polynomials ([`optpoly`]),
//! * the simple, fourth-kind Chebyshev and optimized smoother iterations ([`smoothers`]),
//! * hierarchy construction, V-cycles and empirical constants ([`multigrid`]),
//! * closed-form V-cycle convergence bounds ([`bounds`]).

pub mod bounds;
pub mod error;
pub mod fem;
pub mod linalg;
pub mod multigrid;
pub mod optpoly;
pub mod poly;
pub mod smoothers;

pub use error::{Error, Result};
