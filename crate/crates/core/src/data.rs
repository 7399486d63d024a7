//! Spectral inverse data: eigenvalues with norming constants, and the
//! permuted bidiagonal coordinate form.

use crate::error::{Error, Result};
use crate::permutation::Permutation;

/// Tolerance on |w|^2 - 1 below which the norming constants are silently
/// renormalized; the algorithms depend only on ratios of the w's, so
/// rescaling is harmless.
pub const W_NORM_TOL: f64 = 1e-8;

/// Eigenvalues (strictly ascending) plus positive unit-norm norming
/// constants. Construction validates and renormalizes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    lambda: Vec<f64>,
    w: Vec<f64>,
}

impl SpectralData {
    pub fn new(lambda: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::DimensionTooSmall { need: 1, got: 0 });
        }
        if w.len() != lambda.len() {
            return Err(Error::DimensionMismatch {
                expected: lambda.len(),
                got: w.len(),
            });
        }
        if lambda.iter().any(|x| !x.is_finite()) || w.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteData);
        }
        if lambda.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::DuplicateOrUnsortedSpectrum);
        }
        for (i, &wi) in w.iter().enumerate() {
            if wi <= 0.0 {
                return Err(Error::NonpositiveNormingConstant { index: i, value: wi });
            }
        }
        let norm_sq: f64 = w.iter().map(|x| x * x).sum();
        if (norm_sq - 1.0).abs() > W_NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        let norm = norm_sq.sqrt();
        let w = w.into_iter().map(|x| x / norm).collect();
        Ok(SpectralData { lambda, w })
    }

    /// Like `new` but accepts any positive scale of `w` and normalizes.
    pub fn new_unnormalized(lambda: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NonFiniteData);
        }
        SpectralData::new(lambda, w.into_iter().map(|x| x / norm).collect())
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }
}

/// A permutation, the correspondingly permuted eigenvalues, and bidiagonal
/// coordinates beta (length n-1, arbitrary reals).
#[derive(Debug, Clone, PartialEq)]
pub struct BidiagonalData {
    pi: Permutation,
    lambda_pi: Vec<f64>,
    beta: Vec<f64>,
}

impl BidiagonalData {
    pub fn new(pi: Permutation, lambda_pi: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let n = lambda_pi.len();
        if n == 0 {
            return Err(Error::DimensionTooSmall { need: 1, got: 0 });
        }
        if pi.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: pi.n(),
            });
        }
        if beta.len() != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                got: beta.len(),
            });
        }
        if lambda_pi.iter().any(|x| !x.is_finite()) || beta.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteData);
        }
        // pairwise distinct eigenvalues
        let mut sorted = lambda_pi.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if sorted.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::DuplicateOrUnsortedSpectrum);
        }
        Ok(BidiagonalData {
            pi,
            lambda_pi,
            beta,
        })
    }

    pub fn n(&self) -> usize {
        self.lambda_pi.len()
    }

    pub fn pi(&self) -> &Permutation {
        &self.pi
    }

    pub fn lambda_pi(&self) -> &[f64] {
        &self.lambda_pi
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn is_irreducible(&self) -> bool {
        self.beta.iter().all(|&x| x != 0.0)
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Permutation, &mut [f64], &mut [f64]) {
        (&mut self.pi, &mut self.lambda_pi, &mut self.beta)
    }
}
