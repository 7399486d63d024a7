//! Real symmetric tridiagonal matrices and the entrywise error metric.

use crate::error::{Error, Result};

/// A real symmetric tridiagonal matrix, stored as its diagonal `a` (length n)
/// and off-diagonal `b` (length n-1).
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::DimensionTooSmall { need: 1, got: 0 });
        }
        if b.len() != a.len() - 1 {
            return Err(Error::DimensionMismatch {
                expected: a.len() - 1,
                got: b.len(),
            });
        }
        if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteData);
        }
        Ok(TridiagonalMatrix { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.a
    }

    pub fn off_diag(&self) -> &[f64] {
        &self.b
    }

    /// True iff every off-diagonal entry is strictly positive.
    pub fn is_jacobi(&self) -> bool {
        self.b.iter().all(|&x| x > 0.0)
    }

    /// Dense symmetric embedding; used by tests and the QR oracle only.
    pub fn dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.a[i];
            if i + 1 < n {
                m[i][i + 1] = self.b[i];
                m[i + 1][i] = self.b[i];
            }
        }
        m
    }

    /// Index-reversed conjugate: entry (i, j) -> (n+1-i, n+1-j).
    pub fn reversed(&self) -> TridiagonalMatrix {
        let a = self.a.iter().rev().copied().collect();
        let b = self.b.iter().rev().copied().collect();
        TridiagonalMatrix { a, b }
    }
}

/// Sum of absolute entrywise differences over the diagonal and off-diagonal.
pub fn error_metric(t1: &TridiagonalMatrix, t2: &TridiagonalMatrix) -> Result<f64> {
    if t1.n() != t2.n() {
        return Err(Error::DimensionMismatch {
            expected: t1.n(),
            got: t2.n(),
        });
    }
    let da: f64 = t1
        .a
        .iter()
        .zip(&t2.a)
        .map(|(x, y)| (x - y).abs())
        .sum();
    let db: f64 = t1
        .b
        .iter()
        .zip(&t2.b)
        .map(|(x, y)| (x - y).abs())
        .sum();
    Ok(da + db)
}
