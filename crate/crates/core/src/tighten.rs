//! Tight-permutation search: q-values, tightness, and the sweep that
//! applies tightening transpositions until none remain.

use crate::coords::apply_transposition;
use crate::data::BidiagonalData;
use crate::error::{Error, Result};
use crate::scalar::Arith;

/// |q| <= 1 + TIGHT_TOL counts as tight, so an exact |q| = 1 cannot cause
/// infinite dithering.
pub const TIGHT_TOL: f64 = 1e-12;

/// Pathology guard; tightening empirically needs about n/2 sweeps.
pub fn default_max_sweeps(n: usize) -> u32 {
    (64 * n.max(1)) as u32
}

/// One applied tightening transposition: sweep number (1-based), position
/// (0-based), and the q-value that triggered it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightenStep {
    pub sweep: u32,
    pub k: usize,
    pub q: f64,
}

/// Result of a tightening run.
#[derive(Debug, Clone)]
pub struct TightenReport {
    pub result: BidiagonalData,
    pub sweeps: u32,
    pub transpositions: u32,
    pub trace: Option<Vec<TightenStep>>,
}

/// q_k = beta_k / (lam_{k+1} - lam_k) for k = 0..n-1.
pub fn q_values(bd: &BidiagonalData, arith: &Arith) -> Vec<f64> {
    let lam = bd.lambda_pi();
    bd.beta()
        .iter()
        .enumerate()
        .map(|(k, &b)| arith.div(b, arith.sub(lam[k + 1], lam[k])))
        .collect()
}

/// True iff every |q_k| <= 1 + TIGHT_TOL; vacuously true for n = 1.
pub fn is_tight(bd: &BidiagonalData, arith: &Arith) -> bool {
    q_values(bd, arith).iter().all(|q| q.abs() <= 1.0 + TIGHT_TOL)
}

/// Log-domain suffix products log p_k = sum_{i >= k} ln |beta_i|, the
/// monovariant of the termination argument.
fn log_suffix_products(beta: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; beta.len()];
    let mut acc = 0.0;
    for k in (0..beta.len()).rev() {
        acc += beta[k].abs().ln();
        out[k] = acc;
    }
    out
}

fn tighten_impl(
    bd: &BidiagonalData,
    max_sweeps: u32,
    arith: &Arith,
    record_trace: bool,
) -> Result<TightenReport> {
    let n = bd.n();
    let mut cur = bd.clone();
    let mut sweeps = 0u32;
    let mut transpositions = 0u32;
    let mut trace = if record_trace { Some(Vec::new()) } else { None };

    loop {
        if sweeps >= max_sweeps {
            return Err(Error::NonTermination { max_sweeps });
        }
        sweeps += 1;
        let mut applied = 0u32;
        for k in 0..n.saturating_sub(1) {
            let lam = cur.lambda_pi();
            let q = arith.div(cur.beta()[k], arith.sub(lam[k + 1], lam[k]));
            if q.abs() > 1.0 + TIGHT_TOL {
                #[cfg(debug_assertions)]
                let before = if arith.is_native() {
                    Some(log_suffix_products(cur.beta()))
                } else {
                    None
                };

                cur = apply_transposition(&cur, k, arith)?;
                applied += 1;
                if let Some(t) = trace.as_mut() {
                    t.push(TightenStep { sweep: sweeps, k, q });
                }

                #[cfg(debug_assertions)]
                if let Some(before) = before {
                    // lexicographic decrease of the suffix products: never
                    // larger below k (equal for interior transpositions,
                    // smaller when k is the last position), strictly
                    // smaller at k
                    let after = log_suffix_products(cur.beta());
                    for j in 0..k {
                        debug_assert!(
                            after[j] <= before[j] + 1e-9 * (1.0 + before[j].abs()),
                            "monovariant increased below the transposition: j={j}"
                        );
                    }
                    debug_assert!(
                        after[k] < before[k],
                        "monovariant did not decrease at k={k}: {} vs {}",
                        after[k],
                        before[k]
                    );
                }
            }
        }
        transpositions += applied;
        if applied == 0 {
            break;
        }
    }

    Ok(TightenReport {
        result: cur,
        sweeps,
        transpositions,
        trace,
    })
}

/// Sweep k = 0..n-2 left to right, applying a transposition wherever
/// |q_k| > 1 + TIGHT_TOL, until a full sweep applies none. Termination is
/// guaranteed by the strictly decreasing suffix-product monovariant; the
/// sweep cap only guards against numerical pathologies.
pub fn tighten(bd: &BidiagonalData, max_sweeps: u32, arith: &Arith) -> Result<TightenReport> {
    tighten_impl(bd, max_sweeps, arith, false)
}

/// Like `tighten`, recording every applied transposition.
pub fn tighten_traced(
    bd: &BidiagonalData,
    max_sweeps: u32,
    arith: &Arith,
) -> Result<TightenReport> {
    tighten_impl(bd, max_sweeps, arith, true)
}
