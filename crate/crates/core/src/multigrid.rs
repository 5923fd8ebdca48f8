//! Multigrid hierarchies, symmetric V-cycles, and empirical measurement of the
//! contraction factor `‖E‖²_A` and of the constants `C` and `C_N`.
//!
//! Notation: `π_f = I - P A_c⁻¹ Pᵀ A` is the coarse-grid correction with an
//! exact coarse solve, `B̂ = B/ρ(BA)` is the normalized smoother, and
//!
//! ```text
//! C   = sup_{u ∈ Range π_f} ‖u‖²_{B̂⁻¹} / ‖u‖²_A,
//! C_N = sup_{u ∈ Range π_f} ‖u‖²_{N⁻¹} / ‖u‖²_A,   N⁻¹ = A (I - G²)⁻¹.
//! ```
//!
//! Both equal the top eigenvalue of `X⁻¹ M_f` with `M_f = A⁻¹ - P A_c⁻¹ Pᵀ`
//! and `X` the respective symmetric operator.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::fem::{assemble_poisson_q1, build_prolongation, jacobi_smoother, GridSpec};
use crate::linalg::{dot, power_method, BandCholesky, Cholesky, DenseMatrix, PowerOptions, SparseMatrix};
use crate::poly::PolynomialSpec;
use crate::smoothers::{smooth, DiagonalSmoother, SmootherConfig};

/// Coarsest systems up to this size are factored densely.
const DENSE_COARSE_MAX: usize = 400;

#[derive(Debug, Clone, Copy)]
pub struct HierarchyOptions {
    /// Stop coarsening once the interior side is at most this.
    pub min_interior: usize,
    /// Controls for the per-level `ρ(BA)` estimate.
    pub power: PowerOptions,
    /// Multiplies each measured `ρ(BA)`; `1 + ε` overestimates it.
    pub rho_scale: f64,
}

impl Default for HierarchyOptions {
    fn default() -> Self {
        Self {
            min_interior: 3,
            power: PowerOptions::default(),
            rho_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Level {
    pub a: SparseMatrix,
    pub smoother: DiagonalSmoother,
    /// Interpolation from the next coarser level; `None` on the coarsest.
    pub prolongation: Option<SparseMatrix>,
    pub grid: Option<GridSpec>,
}

#[derive(Debug, Clone)]
enum CoarseSolver {
    Dense(Cholesky),
    Band(BandCholesky),
}

impl CoarseSolver {
    fn new(a: &SparseMatrix) -> Result<Self> {
        if a.n_rows() <= DENSE_COARSE_MAX {
            Ok(Self::Dense(Cholesky::factor(&a.to_dense()?)?))
        } else {
            Ok(Self::Band(BandCholesky::factor(a)?))
        }
    }

    fn solve_in_place(&self, x: &mut [f64]) {
        match self {
            Self::Dense(c) => c.solve_in_place(x),
            Self::Band(c) => c.solve_in_place(x),
        }
    }
}

/// Levels ordered fine to coarse; the last level is solved exactly.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    levels: Vec<Level>,
    coarse: CoarseSolver,
}

impl Hierarchy {
    /// Galerkin hierarchy `A_{ℓ+1} = P_ℓᵀ A_ℓ P_ℓ` from a fine matrix and the
    /// interpolation operators, finest first.
    pub fn from_galerkin(a: SparseMatrix, prolongations: Vec<SparseMatrix>, opts: &HierarchyOptions) -> Result<Self> {
        Self::with_grids(a, prolongations.into_iter().map(|p| (p, None)).collect(), None, opts)
    }

    fn with_grids(
        a: SparseMatrix,
        prolongations: Vec<(SparseMatrix, Option<GridSpec>)>,
        fine_grid: Option<GridSpec>,
        opts: &HierarchyOptions,
    ) -> Result<Self> {
        let mut levels = Vec::with_capacity(prolongations.len() + 1);
        let mut a = a;
        let mut grid = fine_grid;
        for (p, coarse_grid) in prolongations {
            check_dim("hierarchy (prolongation rows)", a.n_rows(), p.n_rows())?;
            let a_c = a.galerkin(&p)?;
            if !a_c.is_symmetric(1e-12) {
                return Err(Error::MalformedMatrix("Galerkin operator is not symmetric".into()));
            }
            let smoother = Self::smoother_for(&a, opts)?;
            levels.push(Level {
                a,
                smoother,
                prolongation: Some(p),
                grid,
            });
            a = a_c;
            grid = coarse_grid;
        }
        let coarse = CoarseSolver::new(&a)?;
        let smoother = Self::smoother_for(&a, opts)?;
        levels.push(Level {
            a,
            smoother,
            prolongation: None,
            grid,
        });
        Ok(Self { levels, coarse })
    }

    fn smoother_for(a: &SparseMatrix, opts: &HierarchyOptions) -> Result<DiagonalSmoother> {
        let s = jacobi_smoother(a, opts.power)?;
        if opts.rho_scale == 1.0 {
            Ok(s)
        } else {
            s.with_rho_scaled(opts.rho_scale)
        }
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, l: usize) -> &Level {
        &self.levels[l]
    }

    pub fn dim(&self) -> usize {
        self.levels[0].a.n_rows()
    }

    /// The first `n_levels` levels, with the last of them solved exactly.
    pub fn truncated(&self, n_levels: usize) -> Result<Self> {
        if n_levels == 0 || n_levels > self.n_levels() {
            return Err(Error::InvalidArgument(format!(
                "cannot keep {n_levels} of {} levels",
                self.n_levels()
            )));
        }
        let mut levels = self.levels[..n_levels].to_vec();
        levels[n_levels - 1].prolongation = None;
        let coarse = CoarseSolver::new(&levels[n_levels - 1].a)?;
        Ok(Self { levels, coarse })
    }
}

/// Builds the model-problem hierarchy: bilinear interpolation and Galerkin
/// coarsening until the interior side is at most `opts.min_interior`.
pub fn build_hierarchy(grid: &GridSpec, opts: &HierarchyOptions) -> Result<Hierarchy> {
    let a = assemble_poisson_q1(grid);
    let mut prolongations = Vec::new();
    let mut g = *grid;
    while g.side() > opts.min_interior && g.m() > 2 {
        let c = g.coarsen()?;
        prolongations.push((build_prolongation(&g, &c)?.matrix, Some(c)));
        g = c;
    }
    Hierarchy::with_grids(a, prolongations, Some(*grid), opts)
}

/// Smoother and sweep counts for one V-cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct VCycleConfig {
    pub smoother: SmootherConfig,
    /// Applications of the smoother polynomial before the coarse correction.
    pub pre_sweeps: usize,
    pub post_sweeps: usize,
}

impl VCycleConfig {
    /// One application of `p(B̂A)` before and after the coarse correction.
    pub fn symmetric(smoother: SmootherConfig) -> Self {
        Self {
            smoother,
            pre_sweeps: 1,
            post_sweeps: 1,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.pre_sweeps == self.post_sweeps
    }
}

/// One V-cycle for `A x = b` on the finest level, updating `x` in place.
pub fn v_cycle(h: &Hierarchy, cfg: &VCycleConfig, x: &mut [f64], b: &[f64]) -> Result<()> {
    check_dim("v_cycle (x)", h.dim(), x.len())?;
    check_dim("v_cycle (b)", h.dim(), b.len())?;
    cfg.smoother.validate()?;
    cycle_level(h, cfg, 0, x, b)
}

fn cycle_level(h: &Hierarchy, cfg: &VCycleConfig, l: usize, x: &mut [f64], b: &[f64]) -> Result<()> {
    let level = &h.levels[l];
    let Some(p) = &level.prolongation else {
        x.copy_from_slice(b);
        h.coarse.solve_in_place(x);
        return Ok(());
    };
    for _ in 0..cfg.pre_sweeps {
        smooth(&level.a, &level.smoother, &cfg.smoother, x, b)?;
    }
    let mut r = vec![0.0; x.len()];
    level.a.spmv_into(x, &mut r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let mut rc = vec![0.0; p.n_cols()];
    p.spmv_transpose_into(&r, &mut rc);
    let mut ec = vec![0.0; p.n_cols()];
    cycle_level(h, cfg, l + 1, &mut ec, &rc)?;
    p.spmv_into(&ec, &mut r);
    for (xi, ci) in x.iter_mut().zip(&r) {
        *xi += ci;
    }
    for _ in 0..cfg.post_sweeps {
        smooth(&level.a, &level.smoother, &cfg.smoother, x, b)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionEstimate {
    /// `‖E_V‖_A`, which equals `‖E‖²_A` for the symmetric cycle.
    pub value: f64,
    pub cycles: usize,
    pub converged: bool,
}

/// Asymptotic `A`-norm contraction of the symmetric V-cycle: power iteration
/// `e ← E_V e` with `b = 0` from a seeded random start, stopping when the
/// ratio `‖e_{n+1}‖_A / ‖e_n‖_A` changes by less than `tol` (relative).
pub fn measure_contraction(
    h: &Hierarchy,
    cfg: &VCycleConfig,
    seed: u64,
    tol: f64,
    max_cycles: usize,
) -> Result<ContractionEstimate> {
    if !cfg.is_symmetric() {
        return Err(Error::InvalidArgument("contraction measurement needs a symmetric cycle".into()));
    }
    let n = h.dim();
    let a = &h.levels[0].a;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let zero = vec![0.0; n];
    let mut ae = vec![0.0; n];
    let a_norm = |v: &[f64], tmp: &mut [f64]| {
        a.spmv_into(v, tmp);
        dot(v, tmp).max(0.0).sqrt()
    };
    let mut norm = a_norm(&e, &mut ae);
    let mut prev = f64::NAN;
    let mut ratio = 0.0;
    for cycle in 1..=max_cycles {
        crate::linalg::scale(1.0 / norm, &mut e);
        v_cycle(h, cfg, &mut e, &zero)?;
        norm = a_norm(&e, &mut ae);
        ratio = norm;
        if norm == 0.0 || !norm.is_finite() {
            return Ok(ContractionEstimate {
                value: if norm == 0.0 { 0.0 } else { f64::NAN },
                cycles: cycle,
                converged: norm == 0.0,
            });
        }
        if (ratio - prev).abs() <= tol * ratio {
            return Ok(ContractionEstimate {
                value: ratio,
                cycles: cycle,
                converged: true,
            });
        }
        prev = ratio;
    }
    Ok(ContractionEstimate {
        value: ratio,
        cycles: max_cycles,
        converged: false,
    })
}

/// Algebraic description of one coarse-grid correction.
#[derive(Debug, Clone, Copy)]
pub struct TwoLevel<'a> {
    pub a: &'a SparseMatrix,
    pub smoother: &'a DiagonalSmoother,
    pub p: &'a SparseMatrix,
    pub a_c: &'a SparseMatrix,
}

impl<'a> TwoLevel<'a> {
    /// The finest pair `(A_0, P_0, A_1)` of a hierarchy.
    pub fn from_hierarchy(h: &'a Hierarchy) -> Result<Self> {
        let Some(p) = &h.levels[0].prolongation else {
            return Err(Error::InvalidArgument("hierarchy has a single level".into()));
        };
        Ok(Self {
            a: &h.levels[0].a,
            smoother: &h.levels[0].smoother,
            p,
            a_c: &h.levels[1].a,
        })
    }

    fn check(&self) -> Result<()> {
        let n = self.a.n_rows();
        check_dim("two-level (A)", n, self.a.n_cols())?;
        check_dim("two-level (B)", n, self.smoother.dim())?;
        check_dim("two-level (P rows)", n, self.p.n_rows())?;
        check_dim("two-level (A_c)", self.p.n_cols(), self.a_c.n_rows())?;
        if self.p.n_cols() >= n {
            return Err(Error::DegenerateCoarseSpace);
        }
        Ok(())
    }

    /// `M_f = A⁻¹ - P A_c⁻¹ Pᵀ` as a dense matrix.
    pub fn dense_mf(&self) -> Result<DMatrix<f64>> {
        self.check()?;
        let n = self.a.n_rows();
        let fine = BandCholesky::factor(self.a)?;
        let coarse = CoarseSolver::new(self.a_c)?;
        let mut m = DMatrix::zeros(n, n);
        let mut col = vec![0.0; n];
        let mut rc = vec![0.0; self.p.n_cols()];
        let mut corr = vec![0.0; n];
        let mut unit = vec![0.0; n];
        for j in 0..n {
            unit[j] = 1.0;
            self.apply_mf(&fine, &coarse, &unit, &mut col, &mut rc, &mut corr);
            unit[j] = 0.0;
            m.column_mut(j).copy_from_slice(&col);
        }
        // Symmetrize away rounding.
        let mt = m.transpose();
        Ok((m + mt) * 0.5)
    }

    fn apply_mf(
        &self,
        fine: &BandCholesky,
        coarse: &CoarseSolver,
        f: &[f64],
        out: &mut [f64],
        rc: &mut [f64],
        corr: &mut [f64],
    ) {
        out.copy_from_slice(f);
        fine.solve_in_place(out);
        self.p.spmv_transpose_into(f, rc);
        coarse.solve_in_place(rc);
        self.p.spmv_into(rc, corr);
        for (o, c) in out.iter_mut().zip(corr.iter()) {
            *o -= c;
        }
    }

    /// Dense `π_f = I - P A_c⁻¹ Pᵀ A`.
    pub fn dense_pi_f(&self) -> Result<DMatrix<f64>> {
        self.check()?;
        let a = sparse_to_dmatrix(self.a)?;
        let m_c = {
            let mf = self.dense_mf()?;
            let a_inv = dense_inverse_spd(self.a)?;
            a_inv - mf
        };
        Ok(DMatrix::identity(a.nrows(), a.nrows()) - m_c * a)
    }
}

fn sparse_to_dmatrix(a: &SparseMatrix) -> Result<DMatrix<f64>> {
    let d = a.to_dense()?;
    Ok(DMatrix::from_row_slice(d.n(), d.n(), d.values()))
}

fn dense_inverse_spd(a: &SparseMatrix) -> Result<DMatrix<f64>> {
    let n = a.n_rows();
    let c = BandCholesky::factor(a)?;
    let mut inv = DMatrix::zeros(n, n);
    let mut col = vec![0.0; n];
    for j in 0..n {
        col.iter_mut().for_each(|v| *v = 0.0);
        col[j] = 1.0;
        c.solve_in_place(&mut col);
        inv.column_mut(j).copy_from_slice(&col);
    }
    Ok(inv)
}

/// How `measure_c` computes the top eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CMethod {
    /// Power iteration with banded Cholesky solves on both levels.
    Power,
    /// Full symmetric eigendecomposition of the dense scaled `M_f`.
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantEstimate {
    pub value: f64,
    pub converged: bool,
}

/// `C` for the normalized smoother `B̂ = B/ρ(BA)`.
pub fn measure_c(tl: &TwoLevel<'_>, method: CMethod, opts: PowerOptions) -> Result<ConstantEstimate> {
    tl.check()?;
    let d_hat = tl.smoother.normalized_diagonal();
    let est = match method {
        CMethod::Dense => {
            let mf = tl.dense_mf()?;
            let s: Vec<f64> = d_hat.iter().map(|d| 1.0 / d.sqrt()).collect();
            let n = mf.nrows();
            let h = DMatrix::from_fn(n, n, |i, j| s[i] * mf[(i, j)] * s[j]);
            ConstantEstimate {
                value: top_eigenvalue(h),
                converged: true,
            }
        }
        CMethod::Power => {
            let n = tl.a.n_rows();
            let fine = BandCholesky::factor(tl.a)?;
            let coarse = CoarseSolver::new(tl.a_c)?;
            let mut rc = vec![0.0; tl.p.n_cols()];
            let mut corr = vec![0.0; n];
            let e = power_method(
                n,
                |f, y| {
                    tl.apply_mf(&fine, &coarse, f, y, &mut rc, &mut corr);
                    for (yi, d) in y.iter_mut().zip(&d_hat) {
                        *yi /= d;
                    }
                },
                |u, v| u.iter().zip(v).zip(&d_hat).map(|((a, b), d)| a * d * b).sum(),
                opts,
            );
            ConstantEstimate {
                value: e.value,
                converged: e.converged,
            }
        }
    };
    if !(est.value > 0.0) {
        return Err(Error::DegenerateCoarseSpace);
    }
    Ok(est)
}

/// `C_N` for the symmetrized smoother of `G = p(B̂A)`, densely.
pub fn measure_cn(tl: &TwoLevel<'_>, p: &PolynomialSpec) -> Result<f64> {
    tl.check()?;
    let n = tl.a.n_rows();
    let d_hat = tl.smoother.normalized_diagonal();
    let sq: Vec<f64> = d_hat.iter().map(|d| d.sqrt()).collect();
    let a = sparse_to_dmatrix(tl.a)?;
    // Ŝ = B̂^{1/2} A B̂^{1/2} = Q Λ Qᵀ; Λ is the spectrum of B̂A.
    let s_hat = DMatrix::from_fn(n, n, |i, j| sq[i] * a[(i, j)] * sq[j]);
    let eig = SymmetricEigen::new(s_hat);
    // N = R Rᵀ with R = B̂^{1/2} Q diag(((1 - p²)/λ)^{1/2}).
    let mut scale = Vec::with_capacity(n);
    for &lambda in eig.eigenvalues.iter() {
        let v = p.eval(lambda);
        if !(v.abs() < 1.0) {
            return Err(Error::InvalidPolynomial { lambda, value: v });
        }
        scale.push((lambda / p.one_minus_sq(lambda)).sqrt());
    }
    let mf = tl.dense_mf()?;
    let inv_sq: Vec<f64> = sq.iter().map(|s| 1.0 / s).collect();
    let scaled = DMatrix::from_fn(n, n, |i, j| inv_sq[i] * mf[(i, j)] * inv_sq[j]);
    let q = &eig.eigenvectors;
    let mut h = q.transpose() * scaled * q;
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] *= scale[i] * scale[j];
        }
    }
    let value = top_eigenvalue(h);
    if !(value > 0.0) {
        return Err(Error::DegenerateCoarseSpace);
    }
    Ok(value)
}

fn top_eigenvalue(h: DMatrix<f64>) -> f64 {
    let ht = h.transpose();
    let sym = (h + ht) * 0.5;
    sym.symmetric_eigenvalues().iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Dense error-propagation matrix of one V-cycle (`b = 0` applied to each
/// unit vector), for verification at small sizes.
pub fn dense_cycle_operator(h: &Hierarchy, cfg: &VCycleConfig) -> Result<DenseMatrix> {
    let n = h.dim();
    let zero = vec![0.0; n];
    let mut m = DenseMatrix::zeros(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        v_cycle(h, cfg, &mut e, &zero)?;
        for (i, v) in e.iter().enumerate() {
            m.set(i, j, *v);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(m: u32, aspect: f64) -> Hierarchy {
        build_hierarchy(&GridSpec::new(m, aspect).unwrap(), &HierarchyOptions::default()).unwrap()
    }

    #[test]
    fn level_count() {
        let h = small(3, 1.0);
        assert_eq!(h.n_levels(), 2);
        assert_eq!(h.level(1).a.n_rows(), 9);
        assert_eq!(small(5, 1.0).n_levels(), 4);
        assert_eq!(small(2, 1.0).n_levels(), 1);
    }

    #[test]
    fn rho_is_estimated_on_every_level() {
        let h = small(5, 2.0);
        for l in h.levels() {
            let rho = l.smoother.rho();
            assert!(rho > 1.0 && rho < 3.0, "{rho}");
        }
    }

    #[test]
    fn single_level_is_direct_solve() {
        let h = small(2, 1.0);
        let cfg = VCycleConfig::symmetric(SmootherConfig::Cheb4 { k: 2 });
        let c = measure_contraction(&h, &cfg, 1, 1e-8, 10).unwrap();
        assert!(c.value < 1e-14);
    }

    #[test]
    fn exact_solution_is_fixed() {
        let h = small(4, 2.0);
        let n = h.dim();
        let x0: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let b = h.level(0).a.spmv(&x0).unwrap();
        let mut x = x0.clone();
        v_cycle(&h, &VCycleConfig::symmetric(SmootherConfig::Cheb4 { k: 3 }), &mut x, &b).unwrap();
        for (u, v) in x.iter().zip(&x0) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_smoothing_gives_projection() {
        let h = small(4, 1.0).truncated(2).unwrap();
        let tl = TwoLevel::from_hierarchy(&h).unwrap();
        let pi_f = tl.dense_pi_f().unwrap();
        let n = h.dim();
        let e0: Vec<f64> = (0..n).map(|i| ((i * 13) % 7) as f64 - 3.0).collect();
        let cfg = VCycleConfig {
            smoother: SmootherConfig::Cheb4 { k: 0 },
            pre_sweeps: 0,
            post_sweeps: 0,
        };
        // Solving A x = 0 from x₀ = -e₀ leaves error e = 0 - x.
        let mut x: Vec<f64> = e0.iter().map(|v| -v).collect();
        v_cycle(&h, &cfg, &mut x, &vec![0.0; n]).unwrap();
        let expect = &pi_f * nalgebra::DVector::from_vec(e0);
        for (xi, ei) in x.iter().zip(expect.iter()) {
            assert!((-xi - ei).abs() < 1e-10);
        }
    }

    #[test]
    fn projection_identities() {
        let h = small(4, 2.0).truncated(2).unwrap();
        let tl = TwoLevel::from_hierarchy(&h).unwrap();
        let pi_f = tl.dense_pi_f().unwrap();
        let n = pi_f.nrows();
        let pi_c = DMatrix::identity(n, n) - &pi_f;
        assert!((&pi_f * &pi_f - &pi_f).amax() < 1e-10);
        assert!((&pi_c * &pi_f).amax() < 1e-10);
        let a = sparse_to_dmatrix(tl.a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = nalgebra::DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let an = |v: &nalgebra::DVector<f64>| (v.transpose() * &a * v)[(0, 0)];
        let (uf, uc) = (&pi_f * &u, &pi_c * &u);
        assert!((an(&u) - an(&uf) - an(&uc)).abs() < 1e-10 * an(&u));
    }

    #[test]
    fn symmetric_cycle_is_a_self_adjoint() {
        let h = small(4, 2.0);
        let cfg = VCycleConfig::symmetric(SmootherConfig::Optimized {
            betas: crate::optpoly::optimal_betas(3).unwrap(),
        });
        let ev = dense_cycle_operator(&h, &cfg).unwrap();
        let a = h.level(0).a.to_dense().unwrap();
        let n = ev.n();
        let mut scale = 0.0f64;
        let mut asym = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let (mut x, mut y) = (0.0, 0.0);
                for l in 0..n {
                    x += a.get(i, l) * ev.get(l, j);
                    y += a.get(j, l) * ev.get(l, i);
                }
                scale = scale.max(x.abs());
                asym = asym.max((x - y).abs());
            }
        }
        assert!(asym < 1e-12 * scale.max(1.0), "{asym}");
    }

    #[test]
    fn degenerate_coarse_space() {
        let a = assemble_poisson_q1(&GridSpec::new(2, 1.0).unwrap());
        let p = SparseMatrix::identity(a.n_rows());
        let s = jacobi_smoother(&a, PowerOptions::default()).unwrap();
        let tl = TwoLevel {
            a: &a,
            smoother: &s,
            p: &p,
            a_c: &a,
        };
        assert!(matches!(measure_c(&tl, CMethod::Dense, PowerOptions::default()), Err(Error::DegenerateCoarseSpace)));
    }

    #[test]
    fn c_routes_agree_and_exceed_one() {
        let h = small(4, 2.0);
        let tl = TwoLevel::from_hierarchy(&h).unwrap();
        let dense = measure_c(&tl, CMethod::Dense, PowerOptions::default()).unwrap();
        let opts = PowerOptions {
            max_iter: 20000,
            ..PowerOptions::default()
        };
        let power = measure_c(&tl, CMethod::Power, opts).unwrap();
        assert!(dense.value >= 1.0);
        assert!((dense.value - power.value).abs() < 1e-3 * dense.value, "{} {}", dense.value, power.value);
    }

    #[test]
    fn asymmetric_cycle_rejected() {
        let h = small(3, 1.0);
        let cfg = VCycleConfig {
            smoother: SmootherConfig::Cheb4 { k: 1 },
            pre_sweeps: 1,
            post_sweeps: 0,
        };
        assert!(measure_contraction(&h, &cfg, 0, 1e-8, 10).is_err());
    }
}
