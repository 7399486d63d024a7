//! Reconstruction of real symmetric tridiagonal (Jacobi) matrices from
//! spectral inverse data.
//!
//! A Jacobi matrix is determined by its eigenvalues together with the
//! positive first coordinates of its normalized eigenvectors (the norming
//! constants), or equivalently by its eigenvalues and the eigenvalues of
//! its trailing principal minor. This crate implements:
//!
//! - the forward problem (eigenvalues, minor eigenvalues, norming
//!   constants) by Sturm-sequence bisection,
//! - the classical orthogonal-polynomial reconstruction on node values,
//! - bidiagonal coordinates, tight-permutation selection, and the inverse
//!   bidiagonal reconstruction, with a QR-similarity oracle as an
//!   independent route,
//! - a benchmark harness with emulated d-significant-decimal-digit
//!   arithmetic and operation counting.
//!
//! Throughout, documentation uses the 1-based indices a_1..a_n, b_1..b_{n-1}
//! while storage is 0-based.

pub mod coords;
pub mod data;
pub mod error;
pub mod harness;
pub mod io;
pub mod matrix;
pub mod permutation;
pub mod reconstruct;
pub mod scalar;
pub mod spectral;
pub mod tighten;

pub use coords::{
    apply_transposition, beta_to_w, build_l, initial_permutation, reversal_data, w_to_beta,
    BidiagonalFactor, UnipotentFactor,
};
pub use data::{BidiagonalData, SpectralData};
pub use error::{Direction, Error, Result};
pub use harness::{
    benchmark, count_ops, perturbed_laplacian, permutation_sweep, random_jacobi, trial_rng,
    BenchConfig, ExperimentKind, ExperimentReport, PermutationSweepRow, TrialRecord,
    FAILURE_THRESHOLD,
};
pub use matrix::{error_metric, TridiagonalMatrix};
pub use permutation::Permutation;
pub use reconstruct::{
    compute_r1, de_boor_golub, de_boor_golub_detailed, inverse_bidiagonal, qr_oracle,
    reconstruct_from_w, reconstruct_with_sweeps, stieltjes, two_sided, Algo, Engine,
    PolynomialValues,
};
pub use scalar::{round_to_digits, Arith, OpCounter, ScalarMode};
pub use spectral::{
    eigenvalues, eigenvector_norming_constants, minor_eigenvalues, mu_to_w, norming_constants,
    MinorSpectrum,
};
pub use tighten::{
    default_max_sweeps, is_tight, q_values, tighten, tighten_traced, TightenReport, TightenStep,
    TIGHT_TOL,
};
