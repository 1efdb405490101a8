//! Numerical verification of the Gaussian correlation inequality.
//!
//! The library implements every computable object in the interpolation
//! proof of the inequality and cross-checks each against an independent
//! oracle:
//!
//! * [`cov`] / [`matrix`] / [`eigen`] — dense SPD linear algebra, the
//!   principal-minor expansion of `|I + A|` and the block Schur
//!   determinant factorization;
//! * [`interpolation`] — the covariance family `C(tau)` with off-diagonal
//!   blocks scaled by `tau`, its principal minors along the path and their
//!   (nonnegative) negated tau-derivatives `a_J(tau)`;
//! * [`gamma_series`] — the series kernel `g_alpha(x, y)`, the gamma
//!   mixture density `h_{k,C}` with Laplace transform `|I + Lambda C|^{-k/2}`,
//!   and its partial derivatives;
//! * [`gaussian`] — sampling from `N(0, C)`, the density of `Z = X^2/2`
//!   and the closed form `E exp(-sum lambda_i X_i^2) = |I + 2 Lambda C|^{-1/2}`;
//! * [`estimators`] — Monte Carlo and quadrature box probabilities, the
//!   correlation-inequality check itself, tau-monotonicity sweeps, boundary
//!   integrals and the decomposition check for `df/dtau`.
//!
//! All Monte Carlo estimators consume an explicit seed, split work into
//! fixed chunks with per-chunk ChaCha streams, and reduce partials in chunk
//! order, so results are bit-identical regardless of thread count.

pub mod cov;
pub mod eigen;
pub mod error;
pub mod estimate;
pub mod matrix;
pub mod quadrature;
pub mod rng;
pub mod special;

pub use cov::{
    block_det_check, block_schur_eigs, det_expansion_check, non_empty_subsets, principal_minor,
    random_spd, CovMatrix, IndexSet,
};
pub use eigen::{inv_sqrt, sym_eigen};
pub use error::{Error, Result};
pub use estimate::{Estimate, MeanAccumulator};
pub use matrix::{lu_det, Matrix};
