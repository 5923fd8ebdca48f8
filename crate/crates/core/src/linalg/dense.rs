use crate::error::{check_dim, Error, Result};

/// Square dense matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_dim("DenseMatrix::new", n * n, values.len())?;
        Ok(Self { n, values })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            values: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(i, j));
            }
        }
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.n + j] = v;
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim("DenseMatrix::matvec", self.n, x.len())?;
        Ok(self
            .values
            .chunks_exact(self.n)
            .map(|row| super::dot(row, x))
            .collect())
    }
}

/// Lower-triangular Cholesky factor `M = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: DenseMatrix,
}

impl Cholesky {
    pub fn factor(m: &DenseMatrix) -> Result<Self> {
        let n = m.n();
        let mut l = DenseMatrix::zeros(n);
        for j in 0..n {
            let mut d = m.get(j, j);
            for k in 0..j {
                d -= l.get(j, k) * l.get(j, k);
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite { index: j, pivot: d });
            }
            let d = d.sqrt();
            l.set(j, j, d);
            for i in j + 1..n {
                let mut s = m.get(i, j);
                for k in 0..j {
                    s -= l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, s / d);
            }
        }
        Ok(Self { l })
    }

    pub fn n(&self) -> usize {
        self.l.n()
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        check_dim("Cholesky::solve", self.n(), b.len())?;
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        Ok(x)
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.n();
        let l = &self.l;
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= l.get(i, k) * x[k];
            }
            x[i] = s / l.get(i, i);
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= l.get(k, i) * x[k];
            }
            x[i] = s / l.get(i, i);
        }
    }
}

/// Solves `M x = b` for SPD `M`.
pub fn dense_cholesky_solve(m: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    Cholesky::factor(m)?.solve(b)
}

/// Solves a general square system by LU with partial pivoting.
pub fn lu_solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.n();
    check_dim("lu_solve", n, b.len())?;
    let mut m = a.values.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let (piv, best) = (col..n)
            .map(|r| (r, m[r * n + col].abs()))
            .fold((col, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        if best == 0.0 || !best.is_finite() {
            return Err(Error::Singular(col));
        }
        if piv != col {
            for j in 0..n {
                m.swap(col * n + j, piv * n + j);
            }
            x.swap(col, piv);
        }
        let d = m[col * n + col];
        for r in col + 1..n {
            let f = m[r * n + col] / d;
            if f != 0.0 {
                for j in col..n {
                    m[r * n + j] -= f * m[col * n + j];
                }
                x[r] -= f * x[col];
            }
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in i + 1..n {
            s -= m[i * n + j] * x[j];
        }
        x[i] = s / m[i * n + i];
    }
    Ok(x)
}
