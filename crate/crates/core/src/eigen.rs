//! Cyclic Jacobi eigensolver for small symmetric matrices, plus the
//! symmetric inverse square root built on top of it.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order together with the matching
/// eigenvector columns. Converges when the off-diagonal Frobenius norm
/// drops below 1e-14 times the Frobenius norm of the input.
pub fn sym_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    assert!(a.is_square(), "eigensolver needs a square matrix");
    let n = a.n_rows();
    let mut m = a.symmetrized();
    let mut v = Matrix::identity(n);
    if n == 1 {
        return (vec![m[(0, 0)]], v);
    }

    let frob: f64 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)] * m[(i, j)])
        .sum::<f64>()
        .sqrt();
    let stop = 1e-14 * frob.max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| 2.0 * m[(i, j)] * m[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, &mut v, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, new_col)] = v[(r, old_col)];
        }
    }
    (eigenvalues, vectors)
}

fn rotate(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.n_rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Symmetric B with B A B = I for SPD input A.
pub fn inv_sqrt(a: &Matrix) -> Result<Matrix> {
    let (eigenvalues, u) = sym_eigen(a);
    if eigenvalues[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            row: 0,
            pivot: eigenvalues[0],
        });
    }
    let n = a.n_rows();
    let mut scaled = u.clone();
    for (j, lam) in eigenvalues.iter().enumerate() {
        let w = 1.0 / lam.sqrt();
        for i in 0..n {
            scaled[(i, j)] *= w;
        }
    }
    Ok(scaled.matmul(&u.transpose()).symmetrized())
}
