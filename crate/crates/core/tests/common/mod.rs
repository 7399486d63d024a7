//! Shared generators and independent oracles for the integration tests.
//! Nothing here calls into the code paths it is used to check: eigenvector
//! components come from dense inverse iteration, polynomial roots from
//! coefficient expansion plus Newton polishing.

#![allow(dead_code)]

use jacobi_recon::{
    norming_constants, trial_rng, BidiagonalData, Permutation, SpectralData, TridiagonalMatrix,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    trial_rng(seed, 0)
}

// --- dense helpers ---------------------------------------------------------

pub fn matvec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Gaussian elimination with partial pivoting; None if exactly singular.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = a.len();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())?;
        if a[piv][k] == 0.0 {
            return None;
        }
        a.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= a[k][j] * x[j];
        }
        x[k] = s / a[k][k];
    }
    Some(x)
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// First components of the normalized eigenvectors, by dense inverse
/// iteration at each given eigenvalue; signs fixed positive.
pub fn eigvec_first_components(t: &TridiagonalMatrix, lambda: &[f64]) -> Vec<f64> {
    let n = t.n();
    let dense = t.dense();
    let scale: f64 = lambda.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    lambda
        .iter()
        .map(|&lam| {
            let mut shifted = dense.clone();
            for i in 0..n {
                // tiny detuning keeps the system solvable
                shifted[i][i] -= lam + 1e-11 * scale;
            }
            let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * (i as f64 + 1.0)).collect();
            for _ in 0..3 {
                match solve_dense(shifted.clone(), v.clone()) {
                    Some(mut next) => {
                        normalize(&mut next);
                        v = next;
                    }
                    None => break,
                }
            }
            if v[0] < 0.0 {
                for x in v.iter_mut() {
                    *x = -*x;
                }
            }
            v[0]
        })
        .collect()
}

/// Largest eigenvector residual |T v - lambda v| over the given pairs,
/// with v from inverse iteration.
pub fn max_eig_residual(t: &TridiagonalMatrix, lambda: &[f64]) -> f64 {
    let n = t.n();
    let dense = t.dense();
    let scale: f64 = lambda.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut worst = 0.0f64;
    for &lam in lambda {
        let mut shifted = dense.clone();
        for i in 0..n {
            shifted[i][i] -= lam + 1e-11 * scale;
        }
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * (i as f64 + 1.0)).collect();
        for _ in 0..3 {
            match solve_dense(shifted.clone(), v.clone()) {
                Some(mut next) => {
                    normalize(&mut next);
                    v = next;
                }
                None => break,
            }
        }
        let tv = matvec(&dense, &v);
        let res = tv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - lam * b).abs())
            .fold(0.0f64, f64::max);
        worst = worst.max(res);
    }
    worst
}

// --- characteristic polynomial oracle --------------------------------------

/// Coefficients (ascending degree) of det(x I - T), by the minor-expansion
/// recurrence on coefficient vectors.
pub fn charpoly_coeffs(t: &TridiagonalMatrix) -> Vec<f64> {
    let n = t.n();
    let a = t.diag();
    let b = t.off_diag();
    let mut p_prev = vec![1.0]; // p_0
    let mut p = vec![-a[0], 1.0]; // p_1
    for k in 1..n {
        // p_{k+1} = (x - a_k) p_k - b_{k-1}^2 p_{k-1}
        let mut next = vec![0.0; k + 2];
        for (i, &c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= a[k] * c;
        }
        let bsq = b[k - 1] * b[k - 1];
        for (i, &c) in p_prev.iter().enumerate() {
            next[i] -= bsq * c;
        }
        p_prev = std::mem::replace(&mut p, next);
    }
    p
}

pub fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

pub fn horner_deriv(c: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for i in (1..c.len()).rev() {
        acc = acc * x + i as f64 * c[i];
    }
    acc
}

/// Newton-polish a root of the coefficient polynomial starting from x0.
pub fn newton_root(c: &[f64], x0: f64) -> f64 {
    let mut x = x0;
    for _ in 0..50 {
        let f = horner(c, x);
        let df = horner_deriv(c, x);
        if df == 0.0 {
            break;
        }
        let step = f / df;
        x -= step;
        if step.abs() <= 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

// --- random instances -------------------------------------------------------

/// Random Jacobi matrix bounded away from the reducible boundary, so the
/// forward problem stays resolvable in f64: b in [0.1, 1.25), a in
/// [-1.5, 1.5). Gaussian draws (`random_jacobi`) can carry couplings small
/// enough that interlacing gaps fall below machine resolution; those are
/// kept for the statistical experiments, this generator for roundtrip
/// assertions.
pub fn random_jacobi_bounded(n: usize, rng: &mut impl Rng) -> TridiagonalMatrix {
    let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
    let b: Vec<f64> = (0..n.saturating_sub(1))
        .map(|_| rng.gen_range(0.1..1.25))
        .collect();
    TridiagonalMatrix::new(a, b).unwrap()
}

/// Random Jacobi matrix whose forward data determines it to well below
/// 1e-8 in f64: rejection-sampled until every norming constant is at
/// least 1e-3. The inverse map amplifies the relative error of the
/// smallest w, whose defining interlacing gap scales like w^2, so
/// roundtrip assertions at fixed tolerance need this floor.
pub fn random_jacobi_resolvable(
    n: usize,
    rng: &mut impl Rng,
) -> (TridiagonalMatrix, SpectralData) {
    loop {
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..n.saturating_sub(1))
            .map(|_| rng.gen_range(0.4..1.25))
            .collect();
        let t = TridiagonalMatrix::new(a, b).unwrap();
        if let Ok(d) = norming_constants(&t) {
            if d.w().iter().all(|&w| w >= 1e-3) {
                return (t, d);
            }
        }
    }
}

pub fn random_spectral(n: usize, rng: &mut impl Rng) -> SpectralData {
    random_jacobi_resolvable(n, rng).1
}

pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Permutation {
    let mut map: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        map.swap(i, rng.gen_range(0..=i));
    }
    Permutation::new(map).unwrap()
}

/// Well-conditioned irreducible coordinates: eigenvalue gaps in
/// [0.3, 1.3) before permuting, and |beta| in [0.05, 1.25).
pub fn random_bidiagonal(n: usize, rng: &mut impl Rng) -> BidiagonalData {
    let mut lam = Vec::with_capacity(n);
    let mut acc = rng.gen_range(-1.0..1.0);
    for _ in 0..n {
        lam.push(acc);
        acc += rng.gen_range(0.3..1.3);
    }
    let pi = random_permutation(n, rng);
    let lam_pi = pi.permute(&lam);
    let beta: Vec<f64> = (0..n.saturating_sub(1))
        .map(|_| {
            let mag = rng.gen_range(0.05..1.25);
            if rng.gen_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    BidiagonalData::new(pi, lam_pi, beta).unwrap()
}

/// Irreducible coordinates with |beta| well beyond the eigenvalue gaps,
/// so tightening has real work to do.
pub fn random_bidiagonal_loose(n: usize, rng: &mut impl Rng) -> BidiagonalData {
    let mut lam = Vec::with_capacity(n);
    let mut acc = rng.gen_range(-1.0..1.0);
    for _ in 0..n {
        lam.push(acc);
        acc += rng.gen_range(0.1..1.0);
    }
    let pi = random_permutation(n, rng);
    let lam_pi = pi.permute(&lam);
    let beta: Vec<f64> = (0..n.saturating_sub(1))
        .map(|_| {
            let mag = 10f64.powf(rng.gen_range(-1.5..1.0));
            if rng.gen_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    BidiagonalData::new(pi, lam_pi, beta).unwrap()
}
