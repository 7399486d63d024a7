//! The forward problem: eigenvalues of a symmetric tridiagonal matrix by
//! Sturm-sequence bisection, trailing-minor eigenvalues, and norming
//! constants recovered from the two interlacing spectra.
//!
//! Always runs in native precision; reduced-precision emulation applies to
//! the reconstruction engines only.

use crate::data::SpectralData;
use crate::error::{Error, Result};
use crate::matrix::TridiagonalMatrix;

/// Eigenvalues of the bottom (n-1)x(n-1) principal minor. Strictly
/// interlaces the host spectrum when the host is Jacobi.
#[derive(Debug, Clone, PartialEq)]
pub struct MinorSpectrum {
    mu: Vec<f64>,
}

impl MinorSpectrum {
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }
}

/// Number of eigenvalues of (a, b) strictly below `x`, by counting negative
/// pivots of the shifted LDL^T factorization (the Sturm ratio sequence
/// d_k = p_k / p_{k-1}). Zero pivots are replaced by a guard proportional
/// to machine epsilon times the Gershgorin radius.
fn sturm_count(a: &[f64], b: &[f64], x: f64, pivot_guard: f64) -> usize {
    let mut count = 0;
    let mut d = a[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..a.len() {
        let d_safe = if d.abs() < pivot_guard {
            if d < 0.0 {
                -pivot_guard
            } else {
                pivot_guard
            }
        } else {
            d
        };
        d = (a[i] - x) - b[i - 1] * b[i - 1] / d_safe;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin_interval(a: &[f64], b: &[f64]) -> (f64, f64) {
    let n = a.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { b[i - 1].abs() } else { 0.0 }
            + if i + 1 < n { b[i].abs() } else { 0.0 };
        lo = lo.min(a[i] - r);
        hi = hi.max(a[i] + r);
    }
    (lo, hi)
}

fn bisect_eigenvalues(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    if n == 1 {
        return vec![a[0]];
    }
    let (glo, ghi) = gershgorin_interval(a, b);
    let radius = (ghi - glo).max(glo.abs()).max(ghi.abs()).max(1.0);
    let pivot_guard = f64::EPSILON * radius;
    let pad = 1e-12 * radius;
    let (glo, ghi) = (glo - pad, ghi + pad);

    let mut eigs = Vec::with_capacity(n);
    for k in 0..n {
        let mut lo = glo;
        let mut hi = ghi;
        loop {
            let width = hi - lo;
            let tol = 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) + 4.0 * f64::MIN_POSITIVE;
            if width <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break; // interval no longer splittable in f64
            }
            if sturm_count(a, b, mid, pivot_guard) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        eigs.push(0.5 * (lo + hi));
    }
    eigs
}

/// All eigenvalues in ascending order, each to near machine precision.
/// Reducible input (some b_i = 0) is handled transparently.
pub fn eigenvalues(t: &TridiagonalMatrix) -> Vec<f64> {
    bisect_eigenvalues(t.diag(), t.off_diag())
}

/// Ascending eigenvalues of the trailing (n-1)x(n-1) block.
pub fn minor_eigenvalues(t: &TridiagonalMatrix) -> Result<MinorSpectrum> {
    if t.n() < 2 {
        return Err(Error::DimensionTooSmall { need: 2, got: t.n() });
    }
    let mu = bisect_eigenvalues(&t.diag()[1..], &t.off_diag()[1..]);
    Ok(MinorSpectrum { mu })
}

fn check_interlacing(lambda: &[f64], mu: &[f64]) -> Result<()> {
    let n = lambda.len();
    if mu.len() != n - 1 {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            got: mu.len(),
        });
    }
    for i in 0..n - 1 {
        if !(lambda[i] < mu[i] && mu[i] < lambda[i + 1]) {
            return Err(Error::InterlacingViolation);
        }
    }
    Ok(())
}

/// Norming constants from the host spectrum and the trailing-minor spectrum:
///
///   w_i^2 = prod_j (lambda_i - mu_j) / prod_{j != i} (lambda_i - lambda_j)
///
/// Numerator and denominator factors are paired into bounded ratios so the
/// running product never over- or underflows. Strict interlacing makes
/// every w_i^2 positive; the result is normalized to unit norm.
pub fn mu_to_w(lambda: &[f64], mu: &MinorSpectrum) -> Result<Vec<f64>> {
    let n = lambda.len();
    if lambda.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::DuplicateOrUnsortedSpectrum);
    }
    check_interlacing(lambda, mu.mu())?;
    let mu = mu.mu();
    let mut w = Vec::with_capacity(n);
    for i in 0..n {
        let mut wsq = 1.0;
        for j in 0..n - 1 {
            // pair mu_j with lambda_j (j < i) or lambda_{j+1} (j >= i)
            let denom_node = if j < i { lambda[j] } else { lambda[j + 1] };
            wsq *= (lambda[i] - mu[j]) / (lambda[i] - denom_node);
        }
        if !(wsq > 0.0) || !wsq.is_finite() {
            return Err(Error::InterlacingViolation);
        }
        w.push(wsq.sqrt());
    }
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(w.into_iter().map(|x| x / norm).collect())
}

/// Full inverse data (eigenvalues and norming constants) of a Jacobi matrix.
pub fn norming_constants(t: &TridiagonalMatrix) -> Result<SpectralData> {
    if !t.is_jacobi() {
        return Err(Error::NotJacobi);
    }
    if t.n() == 1 {
        return SpectralData::new(vec![t.diag()[0]], vec![1.0]);
    }
    let lambda = eigenvalues(t);
    let mu = minor_eigenvalues(t)?;
    let w = mu_to_w(&lambda, &mu)?;
    SpectralData::new_unnormalized(lambda, w)
}

/// Norming constants through eigenvector components computed by twisted
/// factorization: shifted LDL^T pivots from both ends, an eigenvector
/// seeded at the twist index of smallest residual, and division-only
/// recurrences outward, then w = |x_1| / |x|.
///
/// Each component carries near-full relative accuracy, so norming
/// constants far below machine epsilon (strongly localized eigenvectors,
/// the typical case for large random matrices) survive; the interlacing
/// product formula loses them because the defining spectral gaps collapse
/// below eps. Used as the forward solver of the benchmark harness.
pub fn eigenvector_norming_constants(t: &TridiagonalMatrix) -> Result<SpectralData> {
    if !t.is_jacobi() {
        return Err(Error::NotJacobi);
    }
    let n = t.n();
    if n == 1 {
        return SpectralData::new(vec![t.diag()[0]], vec![1.0]);
    }
    let lambda = eigenvalues(t);
    let a = t.diag();
    let b = t.off_diag();
    let guard = |piv: f64| if piv == 0.0 { 1e-300 } else { piv };

    let mut w = vec![0.0; n];
    for (idx, &lam) in lambda.iter().enumerate() {
        let mut dp = vec![0.0; n];
        dp[0] = a[0] - lam;
        for i in 1..n {
            dp[i] = (a[i] - lam) - b[i - 1] * b[i - 1] / guard(dp[i - 1]);
        }
        let mut dm = vec![0.0; n];
        dm[n - 1] = a[n - 1] - lam;
        for i in (0..n - 1).rev() {
            dm[i] = (a[i] - lam) - b[i] * b[i] / guard(dm[i + 1]);
        }
        // twist where the two factorizations meet with smallest residual
        let mut twist = 0;
        let mut best = f64::INFINITY;
        for i in 0..n {
            let gamma = (dp[i] + dm[i] - (a[i] - lam)).abs();
            if gamma < best {
                best = gamma;
                twist = i;
            }
        }
        let mut x = vec![0.0; n];
        x[twist] = 1.0;
        for i in (0..twist).rev() {
            x[i] = -(b[i] / guard(dp[i])) * x[i + 1];
        }
        for i in twist..n - 1 {
            x[i + 1] = -(b[i] / guard(dm[i + 1])) * x[i];
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() {
            return Err(Error::NonFiniteData);
        }
        w[idx] = x[0].abs() / norm;
    }
    SpectralData::new_unnormalized(lambda, w)
}
