use crate::error::{check_dim, Error, Result};

use super::SparseMatrix;

/// Cholesky factorization of a symmetric positive definite band matrix.
///
/// Lexicographically ordered tensor-grid operators have bandwidth equal to
/// one grid row plus one, which keeps the factor at `n * (bw + 1)` entries.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    bw: usize,
    // Row i holds L[i][i-bw..=i]; slot (bw + j - i) stores L[i][j].
    l: Vec<f64>,
}

impl BandCholesky {
    pub fn factor(a: &SparseMatrix) -> Result<Self> {
        check_dim("BandCholesky (square)", a.n_rows(), a.n_cols())?;
        let n = a.n_rows();
        let bw = a.bandwidth();
        let w = bw + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if j <= i {
                    l[i * w + bw + j - i] = v;
                }
            }
        }
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let mut s = l[i * w + bw + j - i];
                let klo = lo.max(j.saturating_sub(bw));
                for k in klo..j {
                    s -= l[i * w + bw + k - i] * l[j * w + bw + k - j];
                }
                if j == i {
                    if !(s > 0.0) {
                        return Err(Error::NotPositiveDefinite { index: i, pivot: s });
                    }
                    l[i * w + bw] = s.sqrt();
                } else {
                    l[i * w + bw + j - i] = s / l[j * w + bw];
                }
            }
        }
        Ok(Self { n, bw, l })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        check_dim("BandCholesky::solve", self.n, b.len())?;
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        Ok(x)
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        let l = &self.l;
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let mut s = x[i];
            for k in lo..i {
                s -= l[i * w + bw + k - i] * x[k];
            }
            x[i] = s / l[i * w + bw];
        }
        for i in (0..n).rev() {
            let hi = (i + bw).min(n - 1);
            let mut s = x[i];
            for k in i + 1..=hi {
                s -= l[k * w + bw + i - k] * x[k];
            }
            x[i] = s / l[i * w + bw];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_solve() {
        let n = 6;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        let a = SparseMatrix::from_triplets(n, n, &t).unwrap();
        let xs: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 0.5).collect();
        let b = a.spmv(&xs).unwrap();
        let x = BandCholesky::factor(&a).unwrap().solve(&b).unwrap();
        for (u, v) in x.iter().zip(&xs) {
            assert!((u - v).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_indefinite() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 1.0)])
            .unwrap();
        assert!(BandCholesky::factor(&a).is_err());
    }
}
