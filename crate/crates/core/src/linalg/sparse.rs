use crate::error::{check_dim, Error, Result};

use super::DenseMatrix;

/// Compressed sparse row matrix.
///
/// Column indices are strictly increasing within each row, so there are no
/// duplicate entries. Explicit zeros may be stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a CSR matrix from raw arrays, validating the structural invariants.
    pub fn from_csr(
        n_rows: usize,
        n_cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_offsets.len() != n_rows + 1 {
            return Err(Error::MalformedMatrix(format!(
                "row_offsets has length {}, expected {}",
                row_offsets.len(),
                n_rows + 1
            )));
        }
        if row_offsets[0] != 0 || *row_offsets.last().unwrap() != col_indices.len() {
            return Err(Error::MalformedMatrix("row_offsets endpoints".into()));
        }
        if col_indices.len() != values.len() {
            return Err(Error::MalformedMatrix(
                "col_indices and values differ in length".into(),
            ));
        }
        for i in 0..n_rows {
            let (lo, hi) = (row_offsets[i], row_offsets[i + 1]);
            if lo > hi {
                return Err(Error::MalformedMatrix(format!(
                    "row_offsets decreases at row {i}"
                )));
            }
            let cols = &col_indices[lo..hi];
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::MalformedMatrix(format!(
                    "columns not strictly increasing in row {i}"
                )));
            }
            if cols.last().is_some_and(|&c| c >= n_cols) {
                return Err(Error::MalformedMatrix(format!(
                    "column index out of range in row {i}"
                )));
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are summed.
    pub fn from_triplets(n_rows: usize, n_cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut sorted = triplets.to_vec();
        for &(i, j, _) in &sorted {
            if i >= n_rows || j >= n_cols {
                return Err(Error::MalformedMatrix(format!(
                    "triplet ({i}, {j}) outside {n_rows}x{n_cols}"
                )));
            }
        }
        sorted.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_offsets = vec![0usize; n_rows + 1];
        let mut col_indices = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_indices.push(j);
                values.push(v);
                row_offsets[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n_rows {
            row_offsets[i + 1] += row_offsets[i];
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            n_cols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            row_offsets: vec![0; n_rows + 1],
            col_indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Keeps every nonzero entry of a dense square matrix.
    pub fn from_dense(m: &DenseMatrix) -> Self {
        let n = m.n();
        let mut trip = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j);
                if v != 0.0 {
                    trip.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, n, &trip).expect("indices in range")
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.row_offsets[i], self.row_offsets[i + 1]);
        (&self.col_indices[lo..hi], &self.values[lo..hi])
    }

    /// Stored value at `(i, j)`, zero when absent.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(p) => vals[p],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n_rows.min(self.n_cols)).map(|i| self.get(i, i)).collect()
    }

    /// Largest `|i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        (0..self.n_rows)
            .flat_map(|i| self.row(i).0.iter().map(move |&j| i.abs_diff(j)))
            .max()
            .unwrap_or(0)
    }

    /// `y = A x`, summing each row in stored column order.
    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim("spmv", self.n_cols, x.len())?;
        let mut y = vec![0.0; self.n_rows];
        self.spmv_into(x, &mut y);
        Ok(y)
    }

    /// Unchecked variant of [`spmv`](Self::spmv) writing into `y`.
    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n_cols, "spmv_into: x length");
        assert_eq!(y.len(), self.n_rows, "spmv_into: y length");
        for (yi, bounds) in y.iter_mut().zip(self.row_offsets.windows(2)) {
            let cols = &self.col_indices[bounds[0]..bounds[1]];
            let vals = &self.values[bounds[0]..bounds[1]];
            let mut s = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                // SAFETY: every constructor guarantees j < n_cols == x.len().
                s += v * unsafe { *x.get_unchecked(j) };
            }
            *yi = s;
        }
    }

    /// `y += alpha · A x`, each row summed in stored order before scaling.
    pub fn spmv_acc_into(&self, alpha: f64, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n_cols, "spmv_acc_into: x length");
        assert_eq!(y.len(), self.n_rows, "spmv_acc_into: y length");
        for (yi, bounds) in y.iter_mut().zip(self.row_offsets.windows(2)) {
            let cols = &self.col_indices[bounds[0]..bounds[1]];
            let vals = &self.values[bounds[0]..bounds[1]];
            let mut s = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                // SAFETY: every constructor guarantees j < n_cols == x.len().
                s += v * unsafe { *x.get_unchecked(j) };
            }
            *yi += alpha * s;
        }
    }

    /// `y = Aᵀ x` without forming the transpose.
    pub fn spmv_transpose_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n_rows);
        debug_assert_eq!(y.len(), self.n_cols);
        y.fill(0.0);
        for (i, &xi) in x.iter().enumerate() {
            let (lo, hi) = (self.row_offsets[i], self.row_offsets[i + 1]);
            for p in lo..hi {
                y[self.col_indices[p]] += self.values[p] * xi;
            }
        }
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.n_cols + 1];
        for &j in &self.col_indices {
            counts[j + 1] += 1;
        }
        for j in 0..self.n_cols {
            counts[j + 1] += counts[j];
        }
        let mut next = counts.clone();
        let mut col_indices = vec![0; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let dst = next[j];
                col_indices[dst] = i;
                values[dst] = v;
                next[j] += 1;
            }
        }
        Self {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            row_offsets: counts,
            col_indices,
            values,
        }
    }

    /// Sparse product `self * other` (row-wise Gustavson accumulation).
    pub fn matmul(&self, other: &SparseMatrix) -> Result<Self> {
        check_dim("matmul", self.n_cols, other.n_rows)?;
        let mut row_offsets = Vec::with_capacity(self.n_rows + 1);
        row_offsets.push(0);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        let mut acc = vec![0.0; other.n_cols];
        let mut marker = vec![usize::MAX; other.n_cols];
        let mut pattern: Vec<usize> = Vec::new();
        for i in 0..self.n_rows {
            pattern.clear();
            let (cols, vals) = self.row(i);
            for (&k, &a) in cols.iter().zip(vals) {
                let (ocols, ovals) = other.row(k);
                for (&j, &b) in ocols.iter().zip(ovals) {
                    if marker[j] != i {
                        marker[j] = i;
                        acc[j] = 0.0;
                        pattern.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            pattern.sort_unstable();
            for &j in &pattern {
                col_indices.push(j);
                values.push(acc[j]);
            }
            row_offsets.push(col_indices.len());
        }
        Ok(Self {
            n_rows: self.n_rows,
            n_cols: other.n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Galerkin product `Pᵀ A P` with `self = A`.
    pub fn galerkin(&self, p: &SparseMatrix) -> Result<Self> {
        let ap = self.matmul(p)?;
        p.transpose().matmul(&ap)
    }

    /// True when the matrix is square and `|a_ij - a_ji| <= tol * max|a|`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.n_rows != self.n_cols {
            return false;
        }
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let t = self.transpose();
        (0..self.n_rows).all(|i| {
            let (c1, v1) = self.row(i);
            let (c2, v2) = t.row(i);
            // Compare as merged rows so that explicit zeros do not matter.
            let mut a = c1.iter().zip(v1).peekable();
            let mut b = c2.iter().zip(v2).peekable();
            loop {
                let diff = match (a.peek(), b.peek()) {
                    (None, None) => return true,
                    (Some(&(ja, &va)), Some(&(jb, &vb))) if ja == jb => {
                        a.next();
                        b.next();
                        va - vb
                    }
                    (Some(&(ja, &va)), Some(&(jb, _))) if ja < jb => {
                        a.next();
                        va
                    }
                    (Some(&(_, &va)), None) => {
                        a.next();
                        va
                    }
                    (_, Some(&(_, &vb))) => {
                        b.next();
                        vb
                    }
                };
                if diff.abs() > tol * scale {
                    return false;
                }
            }
        })
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        check_dim("to_dense (square)", self.n_rows, self.n_cols)?;
        let n = self.n_rows;
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Entrywise `max |a_ij - b_ij|` over the union of both patterns.
    pub fn max_abs_diff(&self, other: &SparseMatrix) -> Result<f64> {
        check_dim("max_abs_diff rows", self.n_rows, other.n_rows)?;
        check_dim("max_abs_diff cols", self.n_cols, other.n_cols)?;
        let mut worst = 0.0f64;
        for i in 0..self.n_rows {
            let (c, v) = self.row(i);
            for (&j, &a) in c.iter().zip(v) {
                worst = worst.max((a - other.get(i, j)).abs());
            }
            let (c, v) = other.row(i);
            for (&j, &b) in c.iter().zip(v) {
                worst = worst.max((b - self.get(i, j)).abs());
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lap1d(n: usize) -> SparseMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
            }
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
            }
        }
        SparseMatrix::from_triplets(n, n, &t).unwrap()
    }

    #[test]
    fn identity_spmv() {
        let y = SparseMatrix::identity(3).spmv(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(y, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn zero_spmv() {
        let y = SparseMatrix::zeros(3, 2).spmv(&[4.0, -1.0]).unwrap();
        assert_eq!(y, vec![0.0; 3]);
    }

    #[test]
    fn laplacian_stencil() {
        let y = lap1d(3).spmv(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(y, vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn spmv_dimension_mismatch() {
        assert!(matches!(
            lap1d(3).spmv(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn duplicates_are_summed() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 1, 1.0), (0, 1, 2.5), (1, 0, 1.0)]).unwrap();
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.get(0, 1), 3.5);
    }

    #[test]
    fn csr_validation() {
        assert!(SparseMatrix::from_csr(1, 3, vec![0, 2], vec![2, 1], vec![1.0, 1.0]).is_err());
        assert!(SparseMatrix::from_csr(1, 3, vec![0, 1], vec![3], vec![1.0]).is_err());
        assert!(SparseMatrix::from_csr(2, 2, vec![0, 1], vec![0], vec![1.0]).is_err());
        assert!(SparseMatrix::from_csr(1, 3, vec![0, 2], vec![0, 2], vec![1.0, 1.0]).is_ok());
    }

    #[test]
    fn transpose_and_galerkin() {
        let a = lap1d(3);
        assert!(a.is_symmetric(0.0));
        let p = SparseMatrix::from_triplets(3, 1, &[(0, 0, 0.5), (1, 0, 1.0), (2, 0, 0.5)]).unwrap();
        let pt = p.transpose();
        assert_eq!(pt.n_rows(), 1);
        assert_eq!(pt.get(0, 2), 0.5);
        // (0.5, 1, 0.5) A (0.5, 1, 0.5)ᵀ = 0.5*0 + 1*1 + 0.5*0 ... computed by hand: A p = (0, 1, 0).
        let ac = a.galerkin(&p).unwrap();
        assert_eq!(ac.get(0, 0), 1.0);
    }

    #[test]
    fn asymmetric_detected() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 1, 1.0)]).unwrap();
        assert!(!a.is_symmetric(1e-12));
        assert_eq!(a.bandwidth(), 1);
    }
}
