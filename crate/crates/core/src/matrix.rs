//! Dense row-major matrices with the few factorizations the rest of the
//! crate needs: LU determinants, (semi)definite Cholesky, submatrix
//! extraction. Dimensions stay small (n <= 20), so everything is written
//! for clarity over asymptotics.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Matrix {
            n_rows,
            n_cols,
            data: vec![0.0; n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(Error::InvalidInput("ragged rows".into()));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            n_rows,
            n_cols,
            data,
        })
    }

    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n_cols, rhs.n_rows, "inner dimension mismatch");
        let mut out = Matrix::zeros(self.n_rows, rhs.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.n_cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.n_cols, x.len());
        (0..self.n_rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Submatrix with the given row and column index sets (0-based, sorted).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.data.len(), other.data.len());
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Largest |a_ij - a_ji|.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n_rows {
            for j in (i + 1)..self.n_cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Exact symmetrization: both triangles replaced by the average.
    pub fn symmetrized(&self) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.n_rows {
            for j in (i + 1)..self.n_cols {
                let v = 0.5 * (self[(i, j)] + self[(j, i)]);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    pub fn scaled(&self, s: f64) -> Matrix {
        let mut m = self.clone();
        for v in &mut m.data {
            *v *= s;
        }
        m
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.data.len(), other.data.len());
        let mut m = self.clone();
        for (v, w) in m.data.iter_mut().zip(&other.data) {
            *v += w;
        }
        m
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.data.len(), other.data.len());
        let mut m = self.clone();
        for (v, w) in m.data.iter_mut().zip(&other.data) {
            *v -= w;
        }
        m
    }

    /// I + A.
    pub fn plus_identity(&self) -> Matrix {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.n_rows {
            m[(i, i)] += 1.0;
        }
        m
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n_cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n_cols + j]
    }
}

/// Determinant by LU with partial pivoting. Singular input yields 0
/// (within floating tolerance) rather than an error.
pub fn lu_det(a: &Matrix) -> f64 {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.n_rows();
    let mut m = a.clone();
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_val = m[(col, col)].abs();
        for r in (col + 1)..n {
            let v = m[(r, col)].abs();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = r;
            }
        }
        if pivot_val == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(pivot_row, j)];
                m[(pivot_row, j)] = tmp;
            }
            det = -det;
        }
        let p = m[(col, col)];
        det *= p;
        for r in (col + 1)..n {
            let factor = m[(r, col)] / p;
            if factor == 0.0 {
                continue;
            }
            for j in (col + 1)..n {
                m[(r, j)] -= factor * m[(col, j)];
            }
        }
    }
    det
}

/// Lower-triangular Cholesky factor of a symmetric matrix. A pivot is
/// accepted only if it exceeds `rel_pivot_tol` times the largest diagonal
/// entry; this is the crate-wide positive-definiteness certificate.
pub fn cholesky(a: &Matrix, rel_pivot_tol: f64) -> Result<Matrix> {
    assert!(a.is_square());
    let n = a.n_rows();
    let max_diag = (0..n).fold(0.0f64, |m, i| m.max(a[(i, i)].abs()));
    let threshold = rel_pivot_tol * max_diag.max(f64::MIN_POSITIVE);
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if s <= threshold {
                    return Err(Error::NotPositiveDefinite { row: i, pivot: s });
                }
                l[(i, i)] = s.sqrt();
            } else {
                l[(i, j)] = s / l[(j, j)];
            }
        }
    }
    Ok(l)
}

/// Cholesky for positive *semi*definite matrices: pivots within
/// `tol * max_diag` of zero zero out the whole column. Used for C - mu*I
/// decompositions where the smallest eigenvalue may be exactly zero.
pub fn cholesky_psd(a: &Matrix, rel_tol: f64) -> Result<Matrix> {
    assert!(a.is_square());
    let n = a.n_rows();
    let max_diag = (0..n).fold(0.0f64, |m, i| m.max(a[(i, i)].abs()));
    let threshold = rel_tol * max_diag.max(f64::MIN_POSITIVE);
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if s < -threshold {
                    return Err(Error::NotPositiveDefinite { row: i, pivot: s });
                }
                l[(i, i)] = if s <= threshold { 0.0 } else { s.sqrt() };
            } else {
                l[(i, j)] = if l[(j, j)] == 0.0 { 0.0 } else { s / l[(j, j)] };
            }
        }
    }
    Ok(l)
}

/// Solve L y = b for lower-triangular L with nonzero diagonal.
pub fn forward_solve(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.n_rows();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    y
}

/// Solve L^T x = y.
pub fn backward_solve_t(l: &Matrix, y: &[f64]) -> Vec<f64> {
    let n = l.n_rows();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[(k, i)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// Solve A x = b from the Cholesky factor of A.
pub fn cholesky_solve(l: &Matrix, b: &[f64]) -> Vec<f64> {
    backward_solve_t(l, &forward_solve(l, b))
}

/// Inverse of an SPD matrix from its Cholesky factor.
pub fn cholesky_inverse(l: &Matrix) -> Matrix {
    let n = l.n_rows();
    let mut inv = Matrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = cholesky_solve(l, &e);
        e[j] = 0.0;
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    // exact symmetry despite per-column roundoff
    inv.symmetrized()
}
