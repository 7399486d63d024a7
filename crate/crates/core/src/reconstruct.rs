//! The reconstruction engines: the classical orthogonal-polynomial
//! (Stieltjes) procedure on node values, the inverse bidiagonal algorithm,
//! a QR-factorization oracle, and the two-sided driver that splices a
//! forward and a reversed run.

use crate::coords::{
    build_l, initial_permutation, reversal_data, w_to_beta, BidiagonalFactor,
};
use crate::data::{BidiagonalData, SpectralData};
use crate::error::{Direction, Error, Result};
use crate::matrix::TridiagonalMatrix;
use crate::scalar::Arith;
use crate::tighten::{default_max_sweeps, tighten};

/// A polynomial of degree < n represented by its values at the n nodes;
/// evaluation at distinct nodes is a linear bijection, so nothing is lost.
#[derive(Debug, Clone)]
pub struct PolynomialValues {
    pub values: Vec<f64>,
}

/// Reconstruction engine selector for the two-sided driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Bg,
    Bi,
}

/// Algorithm choice for `reconstruct_from_w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Bg,
    Bi,
    Bg2,
    Bi2,
    Qr,
}

impl Algo {
    pub const ALL: [Algo; 5] = [Algo::Bg, Algo::Bi, Algo::Bg2, Algo::Bi2, Algo::Qr];
}

impl std::str::FromStr for Algo {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bg" => Ok(Algo::Bg),
            "bi" => Ok(Algo::Bi),
            "bg2" => Ok(Algo::Bg2),
            "bi2" => Ok(Algo::Bi2),
            "qr" => Ok(Algo::Qr),
            _ => Err(Error::Parse {
                line: 0,
                msg: format!("unknown algorithm '{s}' (expected bg|bi|bg2|bi2|qr)"),
            }),
        }
    }
}

impl std::fmt::Display for Algo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Algo::Bg => "bg",
            Algo::Bi => "bi",
            Algo::Bg2 => "bg2",
            Algo::Bi2 => "bi2",
            Algo::Qr => "qr",
        };
        write!(f, "{s}")
    }
}

fn breakdown(algorithm: &'static str, step: usize, detail: String) -> Error {
    Error::NumericalBreakdown {
        algorithm,
        step,
        detail,
    }
}

// ---------------------------------------------------------------------------
// Stieltjes procedure (de Boor-Golub path)
// ---------------------------------------------------------------------------

fn weighted_ip(wsq: &[f64], u: &[f64], v: &[f64], arith: &Arith) -> f64 {
    let mut s = 0.0;
    for j in 0..u.len() {
        s = arith.add(s, arith.mul(arith.mul(wsq[j], u[j]), v[j]));
    }
    s
}

/// Run `steps` rounds of the orthogonal-polynomial recursion, extracting
/// a_1..a_steps and b_1..b_{steps-1}. Stopping early yields exactly the
/// same prefix as a full run; the two-sided driver exploits this.
fn stieltjes_prefix(
    lambda: &[f64],
    w: &[f64],
    arith: &Arith,
    steps: usize,
    keep_rows: bool,
) -> Result<(Vec<f64>, Vec<f64>, Vec<PolynomialValues>)> {
    let n = lambda.len();
    debug_assert_eq!(w.len(), n);
    debug_assert!((1..=n).contains(&steps));
    let wsq: Vec<f64> = w.iter().map(|&x| arith.mul(x, x)).collect();

    let mut p_prev: Vec<f64> = Vec::new();
    let mut p: Vec<f64> = vec![1.0; n];
    let mut norm = weighted_ip(&wsq, &p, &p, arith);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(breakdown("de Boor-Golub", 0, format!("<<p0,p0>> = {norm}")));
    }

    let mut a = Vec::with_capacity(steps);
    let mut b = Vec::with_capacity(steps - 1);
    let mut bsq = 0.0;
    let mut rows = Vec::new();
    if keep_rows {
        rows.push(PolynomialValues { values: p.clone() });
    }

    for k in 0..steps {
        // a_{k+1} = <<Lam p_k, p_k>> / <<p_k, p_k>>, Lam acting pointwise
        let mut num = 0.0;
        for j in 0..n {
            num = arith.add(num, arith.mul(arith.mul(wsq[j], arith.mul(lambda[j], p[j])), p[j]));
        }
        let ak = arith.div(num, norm);
        if !ak.is_finite() {
            return Err(breakdown("de Boor-Golub", k + 1, format!("a = {ak}")));
        }
        a.push(ak);

        if k + 1 < steps {
            // p_{k+1} = t p_k - a_{k+1} p_k - b_k^2 p_{k-1}
            let mut next = vec![0.0; n];
            for j in 0..n {
                let mut v = arith.sub(arith.mul(lambda[j], p[j]), arith.mul(ak, p[j]));
                if k > 0 {
                    v = arith.sub(v, arith.mul(bsq, p_prev[j]));
                }
                next[j] = v;
            }
            let norm_next = weighted_ip(&wsq, &next, &next, arith);
            if !(norm_next > 0.0) || !norm_next.is_finite() {
                return Err(breakdown(
                    "de Boor-Golub",
                    k + 1,
                    format!("<<p,p>> = {norm_next}"),
                ));
            }
            let bsq_next = arith.div(norm_next, norm);
            b.push(arith.sqrt(bsq_next));

            p_prev = std::mem::replace(&mut p, next);
            bsq = bsq_next;
            norm = norm_next;
            if keep_rows {
                rows.push(PolynomialValues { values: p.clone() });
            }
        }
    }
    Ok((a, b, rows))
}

/// Stieltjes procedure on raw nodes and weights. The node order is
/// irrelevant in exact arithmetic; weights need not be normalized.
pub fn stieltjes(lambda: &[f64], w: &[f64], arith: &Arith) -> Result<TridiagonalMatrix> {
    let n = lambda.len();
    let (a, b, _) = stieltjes_prefix(lambda, w, arith, n, false)?;
    TridiagonalMatrix::new(a, b)
}

/// Reconstruct a Jacobi matrix from validated spectral data by the
/// orthogonal-polynomial recursion in the node-value representation.
pub fn de_boor_golub(d: &SpectralData, arith: &Arith) -> Result<TridiagonalMatrix> {
    stieltjes(d.lambda(), d.w(), arith)
}

/// Like `de_boor_golub`, also returning the node-value rows p_0..p_{n-1}
/// so orthogonality can be inspected.
pub fn de_boor_golub_detailed(
    d: &SpectralData,
    arith: &Arith,
) -> Result<(TridiagonalMatrix, Vec<PolynomialValues>)> {
    let n = d.n();
    let (a, b, rows) = stieltjes_prefix(d.lambda(), d.w(), arith, n, true)?;
    Ok((TridiagonalMatrix::new(a, b)?, rows))
}

// ---------------------------------------------------------------------------
// Inverse bidiagonal algorithm
// ---------------------------------------------------------------------------

fn squares(beta: &[f64], arith: &Arith) -> Vec<f64> {
    beta.iter().map(|&x| arith.mul(x, x)).collect()
}

fn compute_r1_with(lam: &[f64], betasq: &[f64], arith: &Arith) -> Vec<f64> {
    let n = lam.len();
    let mut r1 = vec![0.0; n];
    r1[0] = 1.0;
    for i in 1..n {
        // g_i = 1 / ((lam_i - lam_0) ... (lam_i - lam_{i-1}))
        let mut prod = arith.sub(lam[i], lam[0]);
        for m in 1..i {
            prod = arith.mul(prod, arith.sub(lam[i], lam[m]));
        }
        let g = arith.div(1.0, prod);
        r1[i] = arith.add(r1[i], g);
        // walk left along the row: multiply by beta_j^2, divide by the gap
        let mut term = g;
        for j in (0..i).rev() {
            term = arith.div(arith.mul(term, betasq[j]), arith.sub(lam[i], lam[j]));
            r1[j] = arith.add(r1[j], term);
        }
    }
    r1
}

/// First row of the triangular factor: entry j is
/// sum_{i >= j} (L_2)_{i,j} (L_0)_{i,1}, accumulated bottom to top with
/// running products of beta^2 and reciprocal gap products. About 3n^2/2
/// products and quotients.
pub fn compute_r1(bd: &BidiagonalData, arith: &Arith) -> Vec<f64> {
    if bd.n() == 1 {
        return vec![1.0];
    }
    let betasq = squares(bd.beta(), arith);
    compute_r1_with(bd.lambda_pi(), &betasq, arith)
}

/// Row recursion state: the two retained rows of the upper triangular
/// factor, entries below the working band structurally zero.
struct RowState {
    prev: Vec<f64>,
    curr: Vec<f64>,
}

#[cfg(debug_assertions)]
fn check_structural_zeros(
    state: &RowState,
    next: &[f64],
    lam: &[f64],
    betasq: &[f64],
    bsq: f64,
    ak: f64,
    kidx: usize,
) {
    // Positions <= kidx of the next row must vanish relative to the row.
    let scale = next
        .iter()
        .skip(kidx + 1)
        .fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return;
    }
    let res_k = lam[kidx] * state.curr[kidx]
        + if kidx + 1 < lam.len() {
            betasq[kidx] * state.curr[kidx + 1]
        } else {
            0.0
        }
        - ak * state.curr[kidx]
        - if kidx >= 1 { bsq * state.prev[kidx] } else { 0.0 };
    debug_assert!(
        res_k.abs() <= 1e-10 * scale,
        "row {} position {} residual {res_k:e} exceeds 1e-10 * {scale:e}",
        kidx + 2,
        kidx + 1,
    );
    if kidx >= 1 {
        let res_km1 = betasq[kidx - 1] * state.curr[kidx] - bsq * state.prev[kidx - 1];
        debug_assert!(
            res_km1.abs() <= 1e-10 * scale,
            "row {} position {} residual {res_km1:e} exceeds 1e-10 * {scale:e}",
            kidx + 2,
            kidx,
        );
    }
}

/// Run `steps` rounds of the row recursion, extracting a_1..a_steps and
/// b_1..b_{steps-1}; stopping early yields exactly the same prefix as a
/// full run.
fn inverse_bidiagonal_prefix(
    bd: &BidiagonalData,
    arith: &Arith,
    steps: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = bd.n();
    let lam = bd.lambda_pi();
    if n == 1 {
        return Ok((vec![lam[0]], vec![]));
    }
    debug_assert!((1..=n).contains(&steps));
    let beta = bd.beta();
    let betasq = squares(beta, arith);

    let mut state = RowState {
        prev: vec![0.0; n],
        curr: compute_r1_with(lam, &betasq, arith),
    };
    let mut a = Vec::with_capacity(steps);
    let mut b: Vec<f64> = Vec::with_capacity(steps - 1);
    let mut bsq = 0.0;

    for k in 0..steps {
        let rkk = state.curr[k];
        if !(rkk > 0.0) || !rkk.is_finite() {
            return Err(breakdown(
                "inverse bidiagonal",
                k + 1,
                format!("pivot r[{},{}] = {rkk}", k + 1, k + 1),
            ));
        }
        if k >= 1 {
            let ratio = arith.div(rkk, state.prev[k - 1]);
            b.push(arith.mul(beta[k - 1], arith.sqrt(ratio)));
            bsq = arith.mul(betasq[k - 1], ratio);
        }
        let t_beta = if k + 1 < n {
            arith.mul(betasq[k], state.curr[k + 1])
        } else {
            0.0
        };
        let t_b = if k >= 1 {
            arith.mul(bsq, state.prev[k])
        } else {
            0.0
        };
        let ak = arith.add(lam[k], arith.div(arith.sub(t_beta, t_b), rkk));
        if !ak.is_finite() {
            return Err(breakdown("inverse bidiagonal", k + 1, format!("a = {ak}")));
        }
        a.push(ak);

        if k + 1 < steps {
            let mut next = vec![0.0; n];
            for j in k + 1..n {
                // (r B_2)_j = lam_j r_j + beta_j^2 r_{j+1}
                let mut rb = arith.mul(lam[j], state.curr[j]);
                if j + 1 < n {
                    rb = arith.add(rb, arith.mul(betasq[j], state.curr[j + 1]));
                }
                let mut v = arith.sub(rb, arith.mul(ak, state.curr[j]));
                if k >= 1 {
                    v = arith.sub(v, arith.mul(bsq, state.prev[j]));
                }
                next[j] = v;
            }
            #[cfg(debug_assertions)]
            if arith.is_native() {
                check_structural_zeros(&state, &next, lam, &betasq, bsq, ak, k);
            }
            state.prev = std::mem::replace(&mut state.curr, next);
        }
    }

    Ok((a, b.into_iter().map(f64::abs).collect()))
}

/// Reconstruct the tridiagonal matrix with permuted spectrum `lambda_pi`
/// and bidiagonal coordinates `beta`, any beta in R^{n-1}.
///
/// Maintains two rows of the upper triangular factor. At step k it reads
/// the pivot r_{k,k} (strictly positive for genuine data), extracts
///
///   b_{k-1} = beta_{k-1} sqrt(r_{k,k} / r_{k-1,k-1})
///   a_k     = lam_k + (beta_k^2 r_{k,k+1} - b_{k-1}^2 r_{k-1,k}) / r_{k,k}
///
/// and advances the recursion r_{k+1} = r_k B_2 - a_k r_k - b_{k-1}^2 r_{k-1}
/// using the bidiagonal structure of B_2, O(n) per row. The returned matrix
/// is the canonical representative with b_i >= 0; the sign pattern of the
/// off-diagonal is exactly the sign pattern of `beta`, which the caller
/// already holds.
pub fn inverse_bidiagonal(bd: &BidiagonalData, arith: &Arith) -> Result<TridiagonalMatrix> {
    let (a, b) = inverse_bidiagonal_prefix(bd, arith, bd.n())?;
    TridiagonalMatrix::new(a, b)
}

// ---------------------------------------------------------------------------
// QR oracle
// ---------------------------------------------------------------------------

/// Householder QR keeping only R (in place); below-diagonal entries are
/// hard-zeroed after each reflection.
fn householder_r(a: &mut [Vec<f64>], arith: &Arith) {
    let n = a.len();
    for k in 0..n {
        let mut sq = 0.0;
        for row in a.iter().take(n).skip(k) {
            sq = arith.add(sq, arith.mul(row[k], row[k]));
        }
        let norm = arith.sqrt(sq);
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..n).map(|i| a[i][k]).collect();
        v[0] = arith.sub(v[0], alpha);
        let mut vtv = 0.0;
        for &x in &v {
            vtv = arith.add(vtv, arith.mul(x, x));
        }
        if vtv == 0.0 {
            continue;
        }
        for j in k..n {
            let mut dot = 0.0;
            for i in k..n {
                dot = arith.add(dot, arith.mul(v[i - k], a[i][j]));
            }
            let c = arith.div(arith.mul(2.0, dot), vtv);
            for i in k..n {
                a[i][j] = arith.sub(a[i][j], arith.mul(c, v[i - k]));
            }
        }
        for row in a.iter_mut().take(n).skip(k + 1) {
            row[k] = 0.0;
        }
    }
}

/// Independent reconstruction through the QR factorization of the
/// unipotent factor: T = R B R^{-1} with R the positive-diagonal
/// triangular factor of L. Used by tests and the `qr` CLI path.
pub fn qr_oracle(bd: &BidiagonalData, arith: &Arith) -> Result<TridiagonalMatrix> {
    let n = bd.n();
    let lam = bd.lambda_pi();
    if n == 1 {
        return TridiagonalMatrix::new(vec![lam[0]], vec![]);
    }
    let mut r = build_l(bd, 1, arith).dense().clone();
    householder_r(&mut r, arith);
    for i in 0..n {
        if r[i][i] < 0.0 {
            for j in i..n {
                r[i][j] = -r[i][j];
            }
        }
        if !(r[i][i] > 0.0) {
            return Err(Error::Internal(format!(
                "QR orientation: R[{i}][{i}] = {} not positive",
                r[i][i]
            )));
        }
    }

    // M = R * B, using the lower-bidiagonal structure of B
    let bfac = BidiagonalFactor::new(bd, 1);
    let bdense = bfac.dense();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = arith.mul(r[i][j], bdense[j][j]);
            if j + 1 < n {
                s = arith.add(s, arith.mul(r[i][j + 1], bdense[j + 1][j]));
            }
            m[i][j] = s;
        }
    }

    // X = M R^{-1}: one lower-triangular solve R^T y = m_i per row
    let mut x = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = m[i][j];
            for l in 0..j {
                s = arith.sub(s, arith.mul(r[l][j], x[i][l]));
            }
            x[i][j] = arith.div(s, r[j][j]);
        }
    }

    // numerically tridiagonal: average the off-diagonal pair, drop the rest
    let a: Vec<f64> = (0..n).map(|i| x[i][i]).collect();
    let b: Vec<f64> = (0..n - 1)
        .map(|i| {
            arith
                .mul(arith.add(x[i + 1][i], x[i][i + 1]), 0.5)
                .abs()
        })
        .collect();
    TridiagonalMatrix::new(a, b)
}

// ---------------------------------------------------------------------------
// Pipelines and the two-sided driver
// ---------------------------------------------------------------------------

/// Run one engine for `steps` recursion rounds, yielding the entry prefix
/// a_1..a_steps, b_1..b_{steps-1} and the tightening sweep count.
fn run_engine_prefix(
    d: &SpectralData,
    engine: Engine,
    arith: &Arith,
    steps: usize,
) -> Result<(Vec<f64>, Vec<f64>, u32)> {
    match engine {
        Engine::Bg => {
            let (a, b, _) = stieltjes_prefix(d.lambda(), d.w(), arith, steps, false)?;
            Ok((a, b, 0))
        }
        Engine::Bi => {
            let pi0 = initial_permutation(d);
            let bd = w_to_beta(d, &pi0, arith)?;
            let report = tighten(&bd, default_max_sweeps(d.n()), arith)?;
            let (a, b) = inverse_bidiagonal_prefix(&report.result, arith, steps)?;
            Ok((a, b, report.sweeps))
        }
    }
}

fn run_engine(
    d: &SpectralData,
    engine: Engine,
    arith: &Arith,
) -> Result<(TridiagonalMatrix, u32)> {
    let (a, b, sweeps) = run_engine_prefix(d, engine, arith, d.n())?;
    Ok((TridiagonalMatrix::new(a, b)?, sweeps))
}

fn tag(direction: Direction) -> impl Fn(Error) -> Error {
    move |e| Error::TwoSided {
        direction,
        source: Box::new(e),
    }
}

fn two_sided_impl(
    d: &SpectralData,
    engine: Engine,
    arith: &Arith,
) -> Result<(TridiagonalMatrix, u32)> {
    let n = d.n();
    if n == 1 {
        return run_engine(d, engine, arith).map_err(tag(Direction::Forward));
    }
    // the forward half owns a_1..a_ceil(n/2) and b_1..b_floor(n/2); each
    // direction runs its recursion only as far as its half requires,
    // which is the point of the strategy: late rounds are the inaccurate
    // ones
    let h = n.div_ceil(2);
    let g = n / 2;
    let steps_f = h.max(g + 1);
    let steps_r = (n - h).max(n - g);
    let (af, bf, sweeps_f) =
        run_engine_prefix(d, engine, arith, steps_f).map_err(tag(Direction::Forward))?;
    let dr = reversal_data(d, arith).map_err(tag(Direction::Reversed))?;
    let (ar, br, sweeps_r) =
        run_engine_prefix(&dr, engine, arith, steps_r).map_err(tag(Direction::Reversed))?;

    let mut a = Vec::with_capacity(n);
    a.extend_from_slice(&af[..h]);
    for j in h..n {
        a.push(ar[n - 1 - j]);
    }
    let mut b = Vec::with_capacity(n - 1);
    b.extend_from_slice(&bf[..g]);
    for j in g..n - 1 {
        b.push(br[n - 2 - j]);
    }
    Ok((TridiagonalMatrix::new(a, b)?, sweeps_f + sweeps_r))
}

/// Two-sided reconstruction: the top half of the matrix from the data as
/// given, the bottom half from the reversal data, spliced. Each direction
/// computes only its own half of the recursion; for the bidiagonal engine
/// each direction picks its own initial permutation and tightening.
pub fn two_sided(d: &SpectralData, engine: Engine, arith: &Arith) -> Result<TridiagonalMatrix> {
    two_sided_impl(d, engine, arith).map(|(t, _)| t)
}

/// Dispatch over the five reconstruction paths. `bi` runs
/// initial permutation, coordinate conversion, tightening, then the
/// inverse bidiagonal recursion; `qr` reconstructs through the QR oracle
/// at the tightened permutation; `bg2`/`bi2` are the two-sided drivers.
pub fn reconstruct_from_w(
    d: &SpectralData,
    algo: Algo,
    arith: &Arith,
) -> Result<TridiagonalMatrix> {
    reconstruct_with_sweeps(d, algo, arith).map(|(t, _)| t)
}

/// Like `reconstruct_from_w`, also reporting the total tightening sweep
/// count (zero for the pure de Boor-Golub paths).
pub fn reconstruct_with_sweeps(
    d: &SpectralData,
    algo: Algo,
    arith: &Arith,
) -> Result<(TridiagonalMatrix, u32)> {
    match algo {
        Algo::Bg => Ok((de_boor_golub(d, arith)?, 0)),
        Algo::Bi => run_engine(d, Engine::Bi, arith),
        Algo::Bg2 => two_sided_impl(d, Engine::Bg, arith),
        Algo::Bi2 => two_sided_impl(d, Engine::Bi, arith),
        Algo::Qr => {
            let pi0 = initial_permutation(d);
            let bd = w_to_beta(d, &pi0, arith)?;
            let report = tighten(&bd, default_max_sweeps(d.n()), arith)?;
            Ok((qr_oracle(&report.result, arith)?, report.sweeps))
        }
    }
}
