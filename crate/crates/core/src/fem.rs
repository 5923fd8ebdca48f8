//! Bilinear (Q1) finite elements for `-Δu = f` with homogeneous Dirichlet
//! conditions on a tensor grid of `hx × hy` rectangles, plus bilinear
//! interpolation between nested grids.
//!
//! Unknowns are the interior nodes only, numbered lexicographically with `x`
//! fastest.

use crate::error::{Error, Result};
use crate::linalg::{dot, power_method, PowerOptions, SparseMatrix};
use crate::smoothers::DiagonalSmoother;

/// A grid with `(2^m - 1)²` interior nodes and element aspect ratio `hx / hy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    m: u32,
    aspect: f64,
    hx: f64,
    hy: f64,
}

impl GridSpec {
    /// Grid on `[0, aspect] × [0, 1]`, so `hy = 2^-m` and `hx = aspect · hy`.
    pub fn new(m: u32, aspect: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("level exponent m = {m} must be at least 2")));
        }
        if m > 24 {
            return Err(Error::InvalidArgument(format!("level exponent m = {m} is too large")));
        }
        if !(aspect >= 1.0 && aspect.is_finite()) {
            return Err(Error::InvalidArgument(format!("aspect ratio {aspect} must be >= 1")));
        }
        let hy = 1.0 / f64::from(1u32 << m);
        Ok(Self {
            m,
            aspect,
            hx: aspect * hy,
            hy,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn aspect(&self) -> f64 {
        self.aspect
    }

    pub fn hx(&self) -> f64 {
        self.hx
    }

    pub fn hy(&self) -> f64 {
        self.hy
    }

    /// Interior nodes per side, `2^m - 1`.
    pub fn side(&self) -> usize {
        (1usize << self.m) - 1
    }

    pub fn n_unknowns(&self) -> usize {
        self.side() * self.side()
    }

    /// Unknown index of interior node `(ix, iy)`, both 0-based.
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        ix + self.side() * iy
    }

    /// The next coarser grid (`m - 1`, element sizes doubled).
    pub fn coarsen(&self) -> Result<Self> {
        let mut c = Self::new(self.m - 1, self.aspect)?;
        c.hx = 2.0 * self.hx;
        c.hy = 2.0 * self.hy;
        Ok(c)
    }
}

/// Q1 element stiffness `∫ ∇φ_a · ∇φ_b` on an `hx × hy` rectangle.
///
/// Local nodes are ordered `(0,0), (1,0), (0,1), (1,1)`, i.e. `a = ax + 2 ay`.
/// Each basis function is a product `X(x) Y(y)` of 1D hat pieces, so the
/// integral splits into `(hy/hx) S ⊗ M + (hx/hy) M ⊗ S` with the unit 1D
/// stiffness `S = [[1,-1],[-1,1]]` and unit mass `M = [[1/3,1/6],[1/6,1/3]]`.
pub fn element_stiffness(hx: f64, hy: f64) -> [[f64; 4]; 4] {
    let s = [[1.0, -1.0], [-1.0, 1.0]];
    let mass = [[1.0 / 3.0, 1.0 / 6.0], [1.0 / 6.0, 1.0 / 3.0]];
    let mut k = [[0.0; 4]; 4];
    for a in 0..4 {
        let (ax, ay) = (a % 2, a / 2);
        for b in 0..4 {
            let (bx, by) = (b % 2, b / 2);
            k[a][b] = hy / hx * s[ax][bx] * mass[ay][by] + hx / hy * mass[ax][bx] * s[ay][by];
        }
    }
    k
}

/// Assembles the stiffness matrix over interior nodes.
pub fn assemble_poisson_q1(grid: &GridSpec) -> SparseMatrix {
    let side = grid.side();
    let ke = element_stiffness(grid.hx(), grid.hy());
    let mut trip = Vec::with_capacity(9 * grid.n_unknowns());
    // Element (ex, ey) spans grid positions ex..=ex+1; positions 0 and side+1
    // lie on the Dirichlet boundary.
    let interior = |p: usize| (1..=side).contains(&p);
    for ey in 0..=side {
        for ex in 0..=side {
            let nodes: [(usize, usize); 4] = [(ex, ey), (ex + 1, ey), (ex, ey + 1), (ex + 1, ey + 1)];
            for (a, &(pxa, pya)) in nodes.iter().enumerate() {
                if !(interior(pxa) && interior(pya)) {
                    continue;
                }
                let ia = grid.index(pxa - 1, pya - 1);
                for (b, &(pxb, pyb)) in nodes.iter().enumerate() {
                    if interior(pxb) && interior(pyb) {
                        trip.push((ia, grid.index(pxb - 1, pyb - 1), ke[a][b]));
                    }
                }
            }
        }
    }
    SparseMatrix::from_triplets(grid.n_unknowns(), grid.n_unknowns(), &trip).expect("indices in range")
}

/// Bilinear interpolation from a coarse grid to the next finer one.
#[derive(Debug, Clone)]
pub struct ProlongationOp {
    pub fine: GridSpec,
    pub coarse: GridSpec,
    /// `fine.n_unknowns() × coarse.n_unknowns()`.
    pub matrix: SparseMatrix,
}

/// 1D interpolation weights for fine interior index `f`: pairs of
/// `(coarse index, weight)`. Coarse node `c` sits at fine index `2c + 1`.
fn weights_1d(f: usize, coarse_side: usize) -> Vec<(usize, f64)> {
    if f % 2 == 1 {
        vec![((f - 1) / 2, 1.0)]
    } else {
        let right = f / 2;
        let mut w = Vec::with_capacity(2);
        if right >= 1 {
            w.push((right - 1, 0.5));
        }
        if right < coarse_side {
            w.push((right, 0.5));
        }
        w
    }
}

pub fn build_prolongation(fine: &GridSpec, coarse: &GridSpec) -> Result<ProlongationOp> {
    if coarse.m() + 1 != fine.m() {
        return Err(Error::LevelMismatch {
            fine: fine.m(),
            coarse: coarse.m(),
        });
    }
    if coarse.aspect() != fine.aspect() {
        return Err(Error::InvalidArgument(format!(
            "aspect ratios differ: {} vs {}",
            fine.aspect(),
            coarse.aspect()
        )));
    }
    let (fs, cs) = (fine.side(), coarse.side());
    let mut trip = Vec::with_capacity(4 * fine.n_unknowns());
    for fy in 0..fs {
        let wy = weights_1d(fy, cs);
        for fx in 0..fs {
            let wx = weights_1d(fx, cs);
            for &(cy, vy) in &wy {
                for &(cx, vx) in &wx {
                    trip.push((fine.index(fx, fy), coarse.index(cx, cy), vx * vy));
                }
            }
        }
    }
    let matrix = SparseMatrix::from_triplets(fine.n_unknowns(), coarse.n_unknowns(), &trip)?;
    Ok(ProlongationOp {
        fine: *fine,
        coarse: *coarse,
        matrix,
    })
}

/// The Jacobi smoother `B = D⁻¹` with `ρ(BA)` estimated by power iteration
/// in the `A` inner product.
pub fn jacobi_smoother(a: &SparseMatrix, opts: PowerOptions) -> Result<DiagonalSmoother> {
    let diag = a.diagonal();
    if let Some((row, &value)) = diag.iter().enumerate().find(|(_, d)| !(**d > 0.0)) {
        return Err(Error::NonPositiveDiagonal { row, value });
    }
    let inv: Vec<f64> = diag.iter().map(|d| 1.0 / d).collect();
    let rho = spectral_radius_ba(a, &inv, opts);
    DiagonalSmoother::new(inv, rho)
}

/// Power-iteration estimate of `ρ(BA)` for diagonal `B`, in the `A` inner product.
pub fn spectral_radius_ba(a: &SparseMatrix, inv_diag: &[f64], opts: PowerOptions) -> f64 {
    let n = a.n_rows();
    let mut tmp = vec![0.0; n];
    let mut tmp2 = vec![0.0; n];
    power_method(
        n,
        |x, y| {
            a.spmv_into(x, &mut tmp);
            for ((yi, ti), bi) in y.iter_mut().zip(&tmp).zip(inv_diag) {
                *yi = bi * ti;
            }
        },
        |u, v| {
            a.spmv_into(v, &mut tmp2);
            dot(u, &tmp2)
        },
        opts,
    )
    .value
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent check: 2x2 Gauss-Legendre quadrature of bilinear basis
    /// gradients (exact for these integrands).
    fn quadrature_stiffness(hx: f64, hy: f64) -> [[f64; 4]; 4] {
        let g = 0.5 / 3f64.sqrt();
        let pts = [0.5 - g, 0.5 + g];
        // Reference derivatives of the 1D hats on [0, 1].
        let hat = |i: usize, t: f64| if i == 0 { 1.0 - t } else { t };
        let dhat = |i: usize| if i == 0 { -1.0 } else { 1.0 };
        let mut k = [[0.0; 4]; 4];
        for &s in &pts {
            for &t in &pts {
                for a in 0..4 {
                    let (ax, ay) = (a % 2, a / 2);
                    let ga = [dhat(ax) / hx * hat(ay, t), hat(ax, s) * dhat(ay) / hy];
                    for b in 0..4 {
                        let (bx, by) = (b % 2, b / 2);
                        let gb = [dhat(bx) / hx * hat(by, t), hat(bx, s) * dhat(by) / hy];
                        k[a][b] += 0.25 * hx * hy * (ga[0] * gb[0] + ga[1] * gb[1]);
                    }
                }
            }
        }
        k
    }

    #[test]
    fn element_matrix_matches_quadrature() {
        for &(hx, hy) in &[(1.0, 1.0), (0.25, 0.125), (8.0, 1.0), (0.3, 0.7)] {
            let a = element_stiffness(hx, hy);
            let b = quadrature_stiffness(hx, hy);
            for i in 0..4 {
                for j in 0..4 {
                    assert!((a[i][j] - b[i][j]).abs() < 1e-13, "{hx} {hy} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn square_stencil() {
        let grid = GridSpec::new(3, 1.0).unwrap();
        let a = assemble_poisson_q1(&grid);
        let c = grid.index(3, 3);
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                let j = grid.index((3 + dx) as usize, (3 + dy) as usize);
                let expect = if dx == 0 && dy == 0 { 8.0 / 3.0 } else { -1.0 / 3.0 };
                assert!((a.get(c, j) - expect).abs() < 1e-14);
            }
        }
        assert_eq!(a.row(c).0.len(), 9);
    }

    #[test]
    fn constant_diagonal_and_symmetry() {
        for &aspect in &[1.0, 2.0, 4.0, 8.0, 3.3] {
            let grid = GridSpec::new(4, aspect).unwrap();
            let a = assemble_poisson_q1(&grid);
            let d = a.diagonal();
            assert!(d.iter().all(|v| *v == d[0]), "aspect {aspect}");
            assert!(a.is_symmetric(0.0));
        }
    }

    #[test]
    fn interior_rows_annihilate_constants() {
        let grid = GridSpec::new(4, 2.0).unwrap();
        let a = assemble_poisson_q1(&grid);
        let y = a.spmv(&vec![1.0; grid.n_unknowns()]).unwrap();
        for iy in 1..grid.side() - 1 {
            for ix in 1..grid.side() - 1 {
                assert!(y[grid.index(ix, iy)].abs() < 1e-13);
            }
        }
    }

    #[test]
    fn prolongation_of_unit_vector() {
        let fine = GridSpec::new(4, 1.0).unwrap();
        let coarse = fine.coarsen().unwrap();
        let p = build_prolongation(&fine, &coarse).unwrap();
        let mut e = vec![0.0; coarse.n_unknowns()];
        e[coarse.index(3, 2)] = 1.0;
        let v = p.matrix.spmv(&e).unwrap();
        let support: Vec<f64> = v.iter().copied().filter(|x| *x != 0.0).collect();
        assert_eq!(support.len(), 9);
        assert!(support.iter().all(|w| [1.0, 0.5, 0.25].contains(w)));
        assert_eq!(v[fine.index(7, 5)], 1.0);
        assert_eq!(v[fine.index(8, 5)], 0.5);
        assert_eq!(v[fine.index(8, 6)], 0.25);
    }

    #[test]
    fn prolongation_partition_of_unity() {
        let fine = GridSpec::new(5, 2.0).unwrap();
        let coarse = fine.coarsen().unwrap();
        let p = build_prolongation(&fine, &coarse).unwrap();
        let v = p.matrix.spmv(&vec![1.0; coarse.n_unknowns()]).unwrap();
        let s = fine.side();
        for iy in 0..s {
            for ix in 0..s {
                let edge = ix == 0 || iy == 0 || ix == s - 1 || iy == s - 1;
                let val = v[fine.index(ix, iy)];
                if edge {
                    assert!(val < 1.0);
                } else {
                    assert_eq!(val, 1.0);
                }
            }
        }
    }

    #[test]
    fn prolongation_level_mismatch() {
        let fine = GridSpec::new(5, 1.0).unwrap();
        let coarse = GridSpec::new(3, 1.0).unwrap();
        assert!(matches!(
            build_prolongation(&fine, &coarse),
            Err(Error::LevelMismatch { fine: 5, coarse: 3 })
        ));
    }

    #[test]
    fn galerkin_equals_rediscretization() {
        // Nested Q1 spaces: PᵀAP reproduces the coarse-grid stiffness matrix.
        for &aspect in &[1.0, 4.0] {
            let fine = GridSpec::new(4, aspect).unwrap();
            let coarse = fine.coarsen().unwrap();
            let p = build_prolongation(&fine, &coarse).unwrap();
            let ac = assemble_poisson_q1(&fine).galerkin(&p.matrix).unwrap();
            assert!(ac.is_symmetric(1e-14));
            let direct = assemble_poisson_q1(&coarse);
            assert!(ac.max_abs_diff(&direct).unwrap() < 1e-12 * aspect);
        }
    }

    #[test]
    fn jacobi_on_diagonal() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (1, 1, 4.0)]).unwrap();
        let b = jacobi_smoother(&a, PowerOptions::default()).unwrap();
        assert_eq!(b.inverse_diagonal(), &[0.5, 0.25]);
        assert!((b.rho() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_on_square_grid() {
        let grid = GridSpec::new(3, 1.0).unwrap();
        let a = assemble_poisson_q1(&grid);
        let b = jacobi_smoother(&a, PowerOptions { max_iter: 20000, ..Default::default() }).unwrap();
        assert!(b.inverse_diagonal().iter().all(|d| (d - 3.0 / 8.0).abs() < 1e-15));
        // ρ(D⁻¹A) < 3/2 (the stencil symbol maximum), approached as h → 0.
        assert!(b.rho() < 1.5 && b.rho() > 1.2);
    }

    #[test]
    fn jacobi_rejects_bad_diagonal() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, 0.0)]).unwrap();
        assert!(matches!(
            jacobi_smoother(&a, PowerOptions::default()),
            Err(Error::NonPositiveDiagonal { row: 1, .. })
        ));
    }
}
