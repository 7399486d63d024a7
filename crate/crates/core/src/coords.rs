//! Conversions between norming constants and bidiagonal coordinates, the
//! structured unipotent and bidiagonal factors, reversal data, and the
//! initial permutation choice.
//!
//! Paper-style indices are 1-based in the comments; storage is 0-based.

use crate::data::{BidiagonalData, SpectralData};
use crate::error::{Error, Result};
use crate::permutation::Permutation;
use crate::scalar::Arith;

/// Magnitude beyond which running products switch to log-domain
/// accumulation (squares of guarded values must still be representable).
const PRODUCT_GUARD: f64 = 1e120;

/// Lower bidiagonal factor with diagonal `lambda_pi` and subdiagonal
/// `beta^k`; k = 1 is the bidiagonal coordinate matrix itself, k = 2 the
/// reconstruction workhorse.
#[derive(Debug, Clone)]
pub struct BidiagonalFactor {
    lambda_pi: Vec<f64>,
    beta: Vec<f64>,
    k: u32,
}

impl BidiagonalFactor {
    pub fn new(bd: &BidiagonalData, k: u32) -> Self {
        BidiagonalFactor {
            lambda_pi: bd.lambda_pi().to_vec(),
            beta: bd.beta().to_vec(),
            k,
        }
    }

    pub fn n(&self) -> usize {
        self.lambda_pi.len()
    }

    pub fn power(&self) -> u32 {
        self.k
    }

    pub fn dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.lambda_pi[i];
            if i + 1 < n {
                m[i + 1][i] = self.beta[i].powi(self.k as i32);
            }
        }
        m
    }
}

/// Dense lower-unipotent factor built from bidiagonal coordinates.
#[derive(Debug, Clone)]
pub struct UnipotentFactor {
    entries: Vec<Vec<f64>>,
}

impl UnipotentFactor {
    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn dense(&self) -> &Vec<Vec<f64>> {
        &self.entries
    }
}

fn beta_power(beta: f64, k: u32, arith: &Arith) -> f64 {
    match k {
        0 => 1.0,
        1 => beta,
        _ => {
            let mut p = beta;
            for _ in 1..k {
                p = arith.mul(p, beta);
            }
            p
        }
    }
}

/// The unipotent factor with unit diagonal and entry
///
///   (i, j) = (beta_j ... beta_{i-1})^k / ((lam_i - lam_j) ... (lam_i - lam_{i-1}))
///
/// below it. Each row is accumulated right to left, one multiply and one
/// divide per entry. Well-defined for any beta, including zeros.
pub fn build_l(bd: &BidiagonalData, k: u32, arith: &Arith) -> UnipotentFactor {
    let n = bd.n();
    let lam = bd.lambda_pi();
    let beta_pow: Vec<f64> = bd.beta().iter().map(|&b| beta_power(b, k, arith)).collect();
    let mut entries = vec![vec![0.0; n]; n];
    for i in 0..n {
        entries[i][i] = 1.0;
        let mut acc = 1.0;
        for j in (0..i).rev() {
            acc = arith.div(arith.mul(acc, beta_pow[j]), lam[i] - lam[j]);
            entries[i][j] = acc;
        }
    }
    UnipotentFactor { entries }
}

/// Bidiagonal coordinates of spectral data under a permutation:
///
///   beta_i = (w_{i+1}/w_i) (lam_{i+1} - lam_i) prod_{j<i} (lam_{i+1} - lam_j)/(lam_i - lam_j)
///
/// with lam, w permuted by pi. The gap products are accumulated as running
/// ratios rather than two full products, which keeps magnitudes balanced.
pub fn w_to_beta(d: &SpectralData, pi: &Permutation, arith: &Arith) -> Result<BidiagonalData> {
    let n = d.n();
    if pi.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: pi.n(),
        });
    }
    let lam = pi.permute(d.lambda());
    let w = pi.permute(d.w());
    let mut beta = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let mut acc = arith.div(w[i + 1], w[i]);
        acc = arith.mul(acc, arith.sub(lam[i + 1], lam[i]));
        for j in 0..i {
            let ratio = arith.div(arith.sub(lam[i + 1], lam[j]), arith.sub(lam[i], lam[j]));
            acc = arith.mul(acc, ratio);
        }
        beta.push(acc);
    }
    BidiagonalData::new(pi.clone(), lam, beta)
}

/// Inverse of `w_to_beta`: recovers base-ordered spectral data from
/// bidiagonal coordinates via
///
///   w_i = w_1 prod_{j<i} beta_j / (lam_i - lam_j)
///
/// with the free factor fixed by unit normalization. Falls back to
/// log-domain accumulation when the running products leave the guarded
/// range. Zero coordinates are boundary points with no norming constants.
pub fn beta_to_w(bd: &BidiagonalData, arith: &Arith) -> Result<SpectralData> {
    let n = bd.n();
    let lam = bd.lambda_pi();
    let beta = bd.beta();
    for (i, &b) in beta.iter().enumerate() {
        if b == 0.0 {
            return Err(Error::BoundaryPoint { index: i });
        }
    }

    let mut u = vec![1.0f64; n];
    let mut guarded = false;
    'plain: for i in 1..n {
        let mut acc = 1.0;
        for j in 0..i {
            acc = arith.mul(acc, arith.div(beta[j], lam[i] - lam[j]));
            if !acc.is_finite() || acc.abs() > PRODUCT_GUARD || acc.abs() < 1.0 / PRODUCT_GUARD {
                guarded = true;
                break 'plain;
            }
        }
        u[i] = acc;
    }
    if guarded {
        // log-domain pass, native precision
        let mut log_u = vec![0.0f64; n];
        let mut sign = vec![1.0f64; n];
        for i in 1..n {
            let mut l = 0.0;
            let mut s = 1.0;
            for j in 0..i {
                let term = beta[j] / (lam[i] - lam[j]);
                l += term.abs().ln();
                s *= term.signum();
            }
            log_u[i] = l;
            sign[i] = s;
        }
        let m = log_u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for i in 0..n {
            u[i] = sign[i] * (log_u[i] - m).exp();
        }
    }

    if u.iter().any(|&x| x <= 0.0 || !x.is_finite()) {
        return Err(Error::InconsistentSigns);
    }

    let mut lambda_base = vec![0.0; n];
    let mut w_base = vec![0.0; n];
    for i in 0..n {
        lambda_base[bd.pi().apply(i)] = lam[i];
        w_base[bd.pi().apply(i)] = u[i];
    }
    SpectralData::new_unnormalized(lambda_base, w_base)
}

/// Inverse data of the index-reversed matrix: w~_i proportional to
/// 1 / (w_i prod_{j != i} |lam_i - lam_j|), normalized to unit norm.
pub fn reversal_data(d: &SpectralData, arith: &Arith) -> Result<SpectralData> {
    let n = d.n();
    if n == 1 {
        return Ok(d.clone());
    }
    let lam = d.lambda();
    let w = d.w();
    let mut wt = vec![0.0f64; n];
    let mut guarded = false;
    'plain: for i in 0..n {
        let mut p = w[i];
        for j in 0..n {
            if j != i {
                p = arith.mul(p, (lam[i] - lam[j]).abs());
                if !p.is_finite() || p.abs() > PRODUCT_GUARD || p.abs() < 1.0 / PRODUCT_GUARD {
                    guarded = true;
                    break 'plain;
                }
            }
        }
        wt[i] = arith.div(1.0, p);
    }
    if guarded {
        let mut logs = vec![0.0f64; n];
        for i in 0..n {
            let mut l = -w[i].ln();
            for j in 0..n {
                if j != i {
                    l -= (lam[i] - lam[j]).abs().ln();
                }
            }
            logs[i] = l;
        }
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for i in 0..n {
            wt[i] = (logs[i] - m).exp();
        }
    }
    SpectralData::new_unnormalized(lam.to_vec(), wt)
}

/// Permutation ordering the norming constants decreasingly; ties broken by
/// ascending original index.
pub fn initial_permutation(d: &SpectralData) -> Permutation {
    let w = d.w();
    let mut idx: Vec<usize> = (0..d.n()).collect();
    idx.sort_by(|&i, &j| w[j].partial_cmp(&w[i]).unwrap());
    Permutation::new(idx).expect("sorted indices form a bijection")
}

/// Coordinate change across the adjacent transposition at position k
/// (0-based, pairing eigenvalue slots k and k+1):
///
///   beta_{k-1} <- q beta_{k-1},  beta_k <- -beta_k / q^2,  beta_{k+1} <- -q beta_{k+1}
///
/// with q = beta_k / (lam_{k+1} - lam_k); the eigenvalue slots swap and pi
/// is composed with the transposition. Undefined where beta_k vanishes.
pub fn apply_transposition(bd: &BidiagonalData, k: usize, arith: &Arith) -> Result<BidiagonalData> {
    let n = bd.n();
    assert!(k + 1 < n, "transposition index out of range");
    if bd.beta()[k] == 0.0 {
        return Err(Error::SingularTransposition { index: k });
    }
    let mut out = bd.clone();
    let (pi, lam, beta) = out.parts_mut();
    let q = arith.div(beta[k], arith.sub(lam[k + 1], lam[k]));
    if k >= 1 {
        beta[k - 1] = arith.mul(q, beta[k - 1]);
    }
    let qsq = arith.mul(q, q);
    beta[k] = -arith.div(beta[k], qsq);
    if k + 2 <= n - 1 {
        beta[k + 1] = -arith.mul(q, beta[k + 1]);
    }
    lam.swap(k, k + 1);
    pi.swap_adjacent(k);
    Ok(out)
}
