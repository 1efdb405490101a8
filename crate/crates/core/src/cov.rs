//! Symmetric positive definite covariance matrices and the determinant
//! identities on their principal minors.
//!
//! The two identities verified here drive everything else in the crate:
//!
//! * `|I + A| = 1 + sum over non-empty J of |A_J|`,
//! * `|A| = |A11| |A22| |I - A11^{-1/2} A12 A22^{-1} A21 A11^{-1/2}|`
//!   for a 2x2 block split, with the middle matrix having spectrum in
//!   [0, 1] whenever A is SPD.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::eigen::{inv_sqrt, sym_eigen};
use crate::error::{Error, Result};
use crate::matrix::{cholesky, cholesky_solve, lu_det, Matrix};
use crate::rng::NormalSource;

/// Subset-sum operations enumerate 2^n terms; refuse anything larger.
pub const MAX_SUBSET_DIM: usize = 20;

/// Cholesky pivot acceptance threshold, relative to the largest diagonal
/// entry. This is the crate's SPD certificate.
pub const SPD_PIVOT_TOL: f64 = 1e-12;

/// Asymmetry tolerated by constructors before exact symmetrization.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// A symmetric strictly positive definite matrix with its Cholesky factor
/// and (lazily computed) spectrum. Immutable after construction; the
/// spectrum cache is write-once, so values are safe to share across threads.
#[derive(Debug)]
pub struct CovMatrix {
    entries: Matrix,
    chol: Matrix,
    spectrum: OnceLock<Vec<f64>>,
}

impl Clone for CovMatrix {
    fn clone(&self) -> Self {
        CovMatrix {
            entries: self.entries.clone(),
            chol: self.chol.clone(),
            spectrum: self.spectrum.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl CovMatrix {
    /// Validates symmetry (within [`SYMMETRY_TOL`], then symmetrized
    /// exactly) and strict positive definiteness via the Cholesky pivot
    /// test. The factor is kept; it doubles as the SPD certificate.
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput("covariance matrix must be square".into()));
        }
        let n = m.n_rows();
        for i in 0..n {
            for j in 0..n {
                if !m[(i, j)].is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "non-finite entry at ({i},{j})"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let delta = (m[(i, j)] - m[(j, i)]).abs();
                if delta > SYMMETRY_TOL {
                    return Err(Error::NotSymmetric { i, j, delta });
                }
            }
        }
        let entries = m.symmetrized();
        let chol = cholesky(&entries, SPD_PIVOT_TOL)?;
        let rebuilt = chol.matmul(&chol.transpose());
        let rel = rebuilt.max_abs_diff(&entries) / entries.max_abs().max(f64::MIN_POSITIVE);
        if rel > 1e-12 {
            return Err(Error::Internal(format!(
                "Cholesky reconstruction off by relative {rel:e}"
            )));
        }
        Ok(CovMatrix {
            entries,
            chol,
            spectrum: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.entries.n_rows()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn chol(&self) -> &Matrix {
        &self.chol
    }

    /// Eigenvalues, ascending. Computed on first use.
    pub fn spectrum(&self) -> &[f64] {
        self.spectrum.get_or_init(|| sym_eigen(&self.entries).0)
    }

    pub fn lambda_min(&self) -> f64 {
        self.spectrum()[0]
    }

    /// Determinant from the Cholesky factor.
    pub fn det(&self) -> f64 {
        let prod: f64 = (0..self.n()).map(|i| self.chol[(i, i)]).product();
        prod * prod
    }

    /// Solve C x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        cholesky_solve(&self.chol, b)
    }

    /// Reads the exchange format {"n": int, "rows": [[...], ...]}.
    /// Full symmetric storage; asymmetry beyond 1e-12 is rejected.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let parsed: MatrixJson = serde_json::from_str(s)?;
        if parsed.rows.len() != parsed.n || parsed.rows.iter().any(|r| r.len() != parsed.n) {
            return Err(Error::InvalidInput(format!(
                "rows do not form an {0}x{0} matrix",
                parsed.n
            )));
        }
        CovMatrix::new(Matrix::from_rows(&parsed.rows)?)
    }

    pub fn to_json_string(&self) -> String {
        let n = self.n();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| self.entries.row(i).to_vec()).collect();
        serde_json::to_string(&MatrixJson { n, rows }).expect("matrix serializes")
    }
}

/// A sorted set of distinct coordinate indices (0-based) inside [0, n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    members: Vec<usize>,
}

impl IndexSet {
    pub fn new(mut members: Vec<usize>, n: usize) -> Result<Self> {
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidInput(format!("duplicate index {}", w[0])));
            }
        }
        if let Some(&last) = members.last() {
            if last >= n {
                return Err(Error::IndexOutOfRange { index: last, n });
            }
        }
        Ok(IndexSet { members })
    }

    pub fn empty() -> Self {
        IndexSet { members: vec![] }
    }

    pub fn full(n: usize) -> Self {
        IndexSet {
            members: (0..n).collect(),
        }
    }

    /// Bit `i` set means coordinate `i` is a member.
    pub fn from_bitmask(mask: u32) -> Self {
        IndexSet {
            members: (0..32).filter(|&i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn bitmask(&self) -> u32 {
        self.members.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn complement(&self, n: usize) -> IndexSet {
        IndexSet {
            members: (0..n).filter(|i| !self.contains(*i)).collect(),
        }
    }

    pub fn intersect_range(&self, lo: usize, hi: usize) -> IndexSet {
        IndexSet {
            members: self
                .members
                .iter()
                .copied()
                .filter(|&i| i >= lo && i < hi)
                .collect(),
        }
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.members.iter().all(|&i| !other.contains(i))
    }
}

/// All non-empty subsets of [0, n), enumerated by a binary counter over
/// bitmasks. The order is deterministic so subset sums reproduce bitwise.
pub fn non_empty_subsets(n: usize) -> impl Iterator<Item = IndexSet> {
    assert!(n <= MAX_SUBSET_DIM);
    (1u32..(1u32 << n)).map(IndexSet::from_bitmask)
}

/// Determinant of the principal submatrix A_J; |A_empty| is 1.
pub fn principal_minor(a: &Matrix, j: &IndexSet) -> Result<f64> {
    if let Some(&last) = j.members().last() {
        if last >= a.n_rows() {
            return Err(Error::IndexOutOfRange {
                index: last,
                n: a.n_rows(),
            });
        }
    }
    if j.is_empty() {
        return Ok(1.0);
    }
    Ok(lu_det(&a.submatrix(j.members(), j.members())))
}

/// Residual of `|I + A| = 1 + sum_J |A_J|` over all non-empty J, relative
/// to max(1, |I + A|).
pub fn det_expansion_check(a: &Matrix) -> Result<f64> {
    let n = a.n_rows();
    if n > MAX_SUBSET_DIM {
        return Err(Error::DimensionTooLarge {
            op: "det_expansion_check",
            n,
            limit: MAX_SUBSET_DIM,
        });
    }
    let lhs = lu_det(&a.plus_identity());
    let mut rhs = 1.0;
    for j in non_empty_subsets(n) {
        rhs += principal_minor(a, &j)?;
    }
    Ok((lhs - rhs).abs() / lhs.abs().max(1.0))
}

/// Eigenvalues of C_J1^{-1/2} C_{J1 J2} C_J2^{-1} C_{J2 J1} C_J1^{-1/2},
/// ascending. Values within 1e-10 of the [0, 1] boundary are clamped onto
/// it; values further outside are returned as-is for the caller to flag.
pub fn block_schur_eigs(c: &CovMatrix, j1: &IndexSet, j2: &IndexSet) -> Result<Vec<f64>> {
    if j1.is_empty() || j2.is_empty() {
        return Err(Error::InvalidInput("J1 and J2 must be non-empty".into()));
    }
    if !j1.is_disjoint(j2) {
        return Err(Error::InvalidInput("J1 and J2 overlap".into()));
    }
    if let Some(&last) = j1.members().iter().chain(j2.members()).max() {
        if last >= c.n() {
            return Err(Error::IndexOutOfRange {
                index: last,
                n: c.n(),
            });
        }
    }
    let c1 = c.entries().submatrix(j1.members(), j1.members());
    let c2 = c.entries().submatrix(j2.members(), j2.members());
    let c12 = c.entries().submatrix(j1.members(), j2.members());
    let c21 = c.entries().submatrix(j2.members(), j1.members());

    let s1 = inv_sqrt(&c1)?;
    let l2 = cholesky(&c2, SPD_PIVOT_TOL)?;
    // X = C_J2^{-1} C_{J2 J1}, column by column
    let mut x = Matrix::zeros(j2.len(), j1.len());
    for col in 0..j1.len() {
        let b: Vec<f64> = (0..j2.len()).map(|r| c21[(r, col)]).collect();
        let sol = cholesky_solve(&l2, &b);
        for r in 0..j2.len() {
            x[(r, col)] = sol[r];
        }
    }
    let m = s1.matmul(&c12).matmul(&x).matmul(&s1).symmetrized();
    let (mut eigenvalues, _) = sym_eigen(&m);
    for v in &mut eigenvalues {
        if *v < 0.0 && *v >= -1e-10 {
            *v = 0.0;
        } else if *v > 1.0 && *v <= 1.0 + 1e-10 {
            *v = 1.0;
        }
    }
    Ok(eigenvalues)
}

/// Relative residual of the block determinant factorization
/// `|A| = |A11| |A22| |I - A11^{-1/2} A12 A22^{-1} A21 A11^{-1/2}|`.
pub fn block_det_check(a: &CovMatrix, n1: usize) -> Result<f64> {
    let n = a.n();
    if n1 == 0 || n1 >= n {
        return Err(Error::InvalidInput(format!(
            "split n1={n1} must satisfy 1 <= n1 < n={n}"
        )));
    }
    let j1 = IndexSet::new((0..n1).collect(), n)?;
    let j2 = IndexSet::new((n1..n).collect(), n)?;
    let lhs = a.det();
    let d1 = lu_det(&a.entries().submatrix(j1.members(), j1.members()));
    let d2 = lu_det(&a.entries().submatrix(j2.members(), j2.members()));
    let mu = block_schur_eigs(a, &j1, &j2)?;
    let middle: f64 = mu.iter().map(|m| 1.0 - m).product();
    let rhs = d1 * d2 * middle;
    Ok((lhs - rhs).abs() / lhs.abs().max(f64::MIN_POSITIVE))
}

/// Deterministic random correlation matrix: G G^T + 0.1 I for standard
/// normal G, rescaled to unit diagonal.
pub fn random_spd(dim: usize, seed: u64) -> CovMatrix {
    assert!(dim >= 1);
    let mut src = NormalSource::from_seed(seed);
    let mut g = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = src.next_normal();
        }
    }
    let mut s = g.matmul(&g.transpose());
    for i in 0..dim {
        s[(i, i)] += 0.1;
    }
    let scale: Vec<f64> = (0..dim).map(|i| 1.0 / s[(i, i)].sqrt()).collect();
    let mut corr = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            corr[(i, j)] = s[(i, j)] * scale[i] * scale[j];
        }
    }
    for i in 0..dim {
        corr[(i, i)] = 1.0;
    }
    CovMatrix::new(corr).expect("G G^T + 0.1 I rescaled is SPD")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cov2(rho: f64) -> CovMatrix {
        CovMatrix::new(Matrix::from_rows(&[vec![1.0, rho], vec![rho, 1.0]]).unwrap()).unwrap()
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.4, 1.0]]).unwrap();
        assert!(matches!(CovMatrix::new(m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn rejects_indefinite_input() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(
            CovMatrix::new(m),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn det_matches_eigenvalue_product() {
        let c = random_spd(5, 11);
        let by_chol = c.det();
        let by_eigs: f64 = c.spectrum().iter().product();
        assert!(
            (by_chol - by_eigs).abs() / by_chol.abs() < 1e-10,
            "chol {by_chol} vs eig {by_eigs}"
        );
    }

    #[test]
    fn principal_minor_examples() {
        let a = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let full = IndexSet::new(vec![0, 1], 2).unwrap();
        assert!((principal_minor(&a, &full).unwrap() - 0.75).abs() < 1e-15);
        let single = IndexSet::new(vec![1], 2).unwrap();
        assert_eq!(principal_minor(&a, &single).unwrap(), 1.0);
        assert_eq!(principal_minor(&a, &IndexSet::empty()).unwrap(), 1.0);
    }

    #[test]
    fn principal_minor_rejects_out_of_range() {
        let a = Matrix::identity(2);
        let j = IndexSet::from_bitmask(0b100);
        assert!(matches!(
            principal_minor(&a, &j),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn det_expansion_trivial_cases() {
        // zero matrix: both sides 1
        assert_eq!(det_expansion_check(&Matrix::zeros(4, 4)).unwrap(), 0.0);
        // identity, n = 3: both sides 8 = 1 + 3 + 3 + 1
        let res = det_expansion_check(&Matrix::identity(3)).unwrap();
        assert!(res < 1e-15);
        let lhs = lu_det(&Matrix::identity(3).plus_identity());
        assert_eq!(lhs, 8.0);
    }

    #[test]
    fn det_expansion_random_4x4() {
        let c = random_spd(4, 3);
        assert!(det_expansion_check(c.entries()).unwrap() < 1e-12);
    }

    #[test]
    fn det_expansion_rejects_large_dims() {
        let a = Matrix::zeros(21, 21);
        assert!(matches!(
            det_expansion_check(&a),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn schur_eigs_single_pair_is_rho_squared() {
        let c = cov2(0.6);
        let j1 = IndexSet::new(vec![0], 2).unwrap();
        let j2 = IndexSet::new(vec![1], 2).unwrap();
        let eigenvalues = block_schur_eigs(&c, &j1, &j2).unwrap();
        assert_eq!(eigenvalues.len(), 1);
        assert!((eigenvalues[0] - 0.36).abs() < 1e-14);
    }

    #[test]
    fn schur_eigs_block_diagonal_is_zero() {
        let m = Matrix::from_rows(&[
            vec![1.0, 0.4, 0.0],
            vec![0.4, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let c = CovMatrix::new(m).unwrap();
        let j1 = IndexSet::new(vec![0, 1], 3).unwrap();
        let j2 = IndexSet::new(vec![2], 3).unwrap();
        for v in block_schur_eigs(&c, &j1, &j2).unwrap() {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn schur_eigs_random_in_unit_interval() {
        let c = random_spd(4, 17);
        let j1 = IndexSet::new(vec![0, 1], 4).unwrap();
        let j2 = IndexSet::new(vec![2, 3], 4).unwrap();
        for v in block_schur_eigs(&c, &j1, &j2).unwrap() {
            assert!((0.0..=1.0).contains(&v), "eig {v} outside [0,1]");
        }
    }

    #[test]
    fn schur_eigs_rejects_overlap() {
        let c = random_spd(3, 5);
        let j1 = IndexSet::new(vec![0, 1], 3).unwrap();
        let j2 = IndexSet::new(vec![1, 2], 3).unwrap();
        assert!(block_schur_eigs(&c, &j1, &j2).is_err());
    }

    #[test]
    fn block_det_examples() {
        // block diagonal: both sides |A11||A22|
        let m = Matrix::from_rows(&[
            vec![2.0, 0.3, 0.0],
            vec![0.3, 1.0, 0.0],
            vec![0.0, 0.0, 1.5],
        ])
        .unwrap();
        let c = CovMatrix::new(m).unwrap();
        assert!(block_det_check(&c, 2).unwrap() < 1e-14);

        // [[1, .6], [.6, 1]], n1 = 1: both sides 0.64
        let c = cov2(0.6);
        assert!(block_det_check(&c, 1).unwrap() < 1e-14);
        assert!((c.det() - 0.64).abs() < 1e-15);

        let c = random_spd(5, 23);
        assert!(block_det_check(&c, 2).unwrap() < 1e-10);
    }

    #[test]
    fn random_spd_is_deterministic_unit_diag() {
        let a = random_spd(6, 3);
        let b = random_spd(6, 3);
        assert_eq!(a.entries(), b.entries());
        for i in 0..6 {
            assert_eq!(a.entry(i, i), 1.0);
        }
        assert!(a.lambda_min() > 0.0);
        assert_eq!(random_spd(1, 9).entry(0, 0), 1.0);
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let c = random_spd(3, 8);
        let s = c.to_json_string();
        let back = CovMatrix::from_json_str(&s).unwrap();
        assert_eq!(back.entries(), c.entries());

        let bad = r#"{"n": 2, "rows": [[1.0, 0.5], [0.3, 1.0]]}"#;
        assert!(CovMatrix::from_json_str(bad).is_err());
        let ragged = r#"{"n": 2, "rows": [[1.0, 0.0, 0.0], [0.0, 1.0]]}"#;
        assert!(CovMatrix::from_json_str(ragged).is_err());
    }

    #[test]
    fn index_set_bitmask_round_trip() {
        let j = IndexSet::new(vec![4, 0, 2], 6).unwrap();
        assert_eq!(j.members(), &[0, 2, 4]);
        assert_eq!(j.bitmask(), 0b10101);
        assert_eq!(IndexSet::from_bitmask(0b10101), j);
        assert_eq!(j.complement(6).members(), &[1, 3, 5]);
        assert!(IndexSet::new(vec![1, 1], 3).is_err());
        assert!(IndexSet::new(vec![3], 3).is_err());
    }

    #[test]
    fn subsets_enumerate_in_counter_order() {
        let masks: Vec<u32> = non_empty_subsets(3).map(|j| j.bitmask()).collect();
        assert_eq!(masks, (1..8).collect::<Vec<u32>>());
    }
}
