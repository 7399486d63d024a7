//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured quantities (visible with `--nocapture`).

mod common;

use std::time::Instant;

use common::*;
use jacobi_recon::{
    apply_transposition, benchmark, count_ops, de_boor_golub_detailed, default_max_sweeps,
    error_metric, inverse_bidiagonal, permutation_sweep, qr_oracle, reconstruct_from_w,
    reversal_data, tighten_traced, trial_rng, Algo, Arith, BenchConfig, BidiagonalData,
    ExperimentKind, Permutation, SpectralData, TridiagonalMatrix,
};
use itertools::Itertools;
use rand::Rng;

#[test]
fn criterion_01_roundtrip_accuracy() {
    let start = Instant::now();
    let ar = Arith::native();
    let mut worst = 0.0f64;
    for trial in 0..200u64 {
        let mut rng = trial_rng(0xACC1, trial);
        let n = 2 + (trial as usize % 11);
        let (t, d) = random_jacobi_resolvable(n, &mut rng);
        for algo in Algo::ALL {
            let rec = reconstruct_from_w(&d, algo, &ar).unwrap();
            let err = error_metric(&rec, &t).unwrap();
            assert!(err < 1e-8, "trial {trial} algo {algo}: error {err:e}");
            worst = worst.max(err);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "PASS criterion 1: 200 roundtrips, 5 algorithms, worst error {worst:.2e} (< 1e-8), {:.2}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_02_cross_oracle_agreement() {
    let start = Instant::now();
    let ar = Arith::native();
    let mut worst_bi_qr = 0.0f64;
    for trial in 0..100u64 {
        let mut rng = trial_rng(0xACC2, trial);
        let n = 2 + (trial as usize % 7);
        let bd = random_bidiagonal(n, &mut rng);
        let t_bi = inverse_bidiagonal(&bd, &ar).unwrap();
        let t_qr = qr_oracle(&bd, &ar).unwrap();
        let err = error_metric(&t_bi, &t_qr).unwrap();
        assert!(err < 1e-8, "trial {trial}: bi vs qr error {err:e}");
        worst_bi_qr = worst_bi_qr.max(err);
    }
    let mut worst_vs_bg = 0.0f64;
    for trial in 0..100u64 {
        let mut rng = trial_rng(0xACC2 + 1, trial);
        let n = 2 + (trial as usize % 7);
        let d = random_spectral(n, &mut rng);
        let t_bg = reconstruct_from_w(&d, Algo::Bg, &ar).unwrap();
        for algo in [Algo::Bi, Algo::Qr] {
            let t = reconstruct_from_w(&d, algo, &ar).unwrap();
            let err = error_metric(&t, &t_bg).unwrap();
            assert!(err < 1e-6, "trial {trial}: {algo} vs bg error {err:e}");
            worst_vs_bg = worst_vs_bg.max(err);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "PASS criterion 2: bi/qr agree to {worst_bi_qr:.2e} (< 1e-8), both vs bg to {worst_vs_bg:.2e} (< 1e-6), {:.2}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_03_worked_two_by_two() {
    let ar = Arith::native();
    let s = 0.5f64.sqrt();
    let d = SpectralData::new(vec![0.0, 2.0], vec![s, s]).unwrap();
    let expected = TridiagonalMatrix::new(vec![1.0, 1.0], vec![1.0]).unwrap();
    let mut worst = 0.0f64;
    for algo in Algo::ALL {
        let t = reconstruct_from_w(&d, algo, &ar).unwrap();
        let err = error_metric(&t, &expected).unwrap();
        assert!(err < 1e-12, "algo {algo}: error {err:e}");
        worst = worst.max(err);
    }
    println!("PASS criterion 3: all 5 algorithms hit the worked 2x2 case to {worst:.2e} (< 1e-12)");
}

#[test]
fn criterion_04_boundary_exactness() {
    let ar = Arith::native();
    let mut checked = 0u32;
    for n in 1..=5usize {
        for trial in 0..4u64 {
            let mut rng = trial_rng(0xACC4, (n as u64) * 16 + trial);
            let mut lam = Vec::with_capacity(n);
            let mut acc: f64 = rng.gen_range(-2.0..2.0);
            for _ in 0..n {
                lam.push(acc);
                acc += rng.gen_range(0.2..1.5);
            }
            for perm in (0..n).permutations(n) {
                let pi = Permutation::new(perm).unwrap();
                let lam_pi = pi.permute(&lam);
                let bd =
                    BidiagonalData::new(pi, lam_pi.clone(), vec![0.0; n - 1]).unwrap();
                let t = inverse_bidiagonal(&bd, &ar).unwrap();
                assert_eq!(t.diag(), &lam_pi[..], "diagonal must be bit-exact");
                assert!(t.off_diag().iter().all(|&b| b == 0.0));
                checked += 1;
            }
        }
    }
    println!("PASS criterion 4: beta = 0 reconstructs diag(lambda^pi) exactly in {checked} cases");
}

#[test]
fn criterion_05_tightening() {
    let start = Instant::now();
    let ar = Arith::native();
    let mut sweep_ratios = Vec::new();
    let mut total_steps = 0u64;
    for trial in 0..200u64 {
        let mut rng = trial_rng(0xACC5, trial);
        let n = 2 + (trial as usize % 39);
        let bd = if trial % 2 == 0 {
            random_bidiagonal(n, &mut rng)
        } else {
            random_bidiagonal_loose(n, &mut rng)
        };
        let report = tighten_traced(&bd, default_max_sweeps(n), &ar).unwrap();
        assert!(
            jacobi_recon::is_tight(&report.result, &ar),
            "trial {trial}: result not tight"
        );
        sweep_ratios.push(report.sweeps as f64 / n as f64);

        // replay the trace: strict lexicographic decrease of the suffix
        // products (log domain) and |q| inversion at every applied step
        let mut cur = bd;
        for step in report.trace.unwrap() {
            let log_before: Vec<f64> = cur.beta().iter().map(|b| b.abs().ln()).collect();
            let next = apply_transposition(&cur, step.k, &ar).unwrap();
            let q_new =
                next.beta()[step.k] / (next.lambda_pi()[step.k + 1] - next.lambda_pi()[step.k]);
            let inv = 1.0 / step.q.abs();
            assert!(
                (q_new.abs() - inv).abs() <= 1e-10 * inv,
                "trial {trial}: |q| inversion off"
            );
            let log_after: Vec<f64> = next.beta().iter().map(|b| b.abs().ln()).collect();
            let suffix = |v: &[f64], from: usize| -> f64 { v[from..].iter().sum() };
            for j in 0..step.k {
                assert!(
                    suffix(&log_after, j) <= suffix(&log_before, j) + 1e-9,
                    "trial {trial}: monovariant increased below k"
                );
            }
            assert!(
                suffix(&log_after, step.k) < suffix(&log_before, step.k),
                "trial {trial}: monovariant did not strictly decrease"
            );
            total_steps += 1;
            cur = next;
        }
    }
    sweep_ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median_ratio = sweep_ratios[sweep_ratios.len() / 2];
    assert!(median_ratio <= 1.0, "median sweeps/n = {median_ratio}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "PASS criterion 5: 200 tightenings terminated tight, {total_steps} steps all monotone, median sweeps/n = {median_ratio:.3} (<= 1), {:.2}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_06_permutation_spread() {
    let start = Instant::now();
    let mut ratios = Vec::new();
    for seed in 0..20u64 {
        let mut rng = trial_rng(0xACC6, seed);
        let (_, d) = random_jacobi_resolvable(8, &mut rng);
        let rows = permutation_sweep(&d, 8).unwrap();
        assert_eq!(rows.len(), 40320);
        let best = rows.iter().map(|r| r.error).fold(f64::MAX, f64::min);
        let worst = rows.iter().map(|r| r.error).fold(0.0f64, f64::max);
        let best_tight = rows
            .iter()
            .filter(|r| r.tight)
            .map(|r| r.error)
            .fold(f64::MAX, f64::min);
        assert!(
            best_tight <= 10.0 * best,
            "seed {seed}: best tight {best_tight:e} vs global best {best:e}"
        );
        ratios.push(worst / best);
    }
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = ratios[ratios.len() / 2];
    assert!(median >= 1e3, "median worst/best ratio {median:e}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 900.0, "took {elapsed:?}");
    println!(
        "PASS criterion 6: 20 seeds x 8! permutations at 8 digits, median worst/best = {median:.1e} (>= 1e3), best tight within 10x of best, {:.1}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_07_random_benchmark() {
    let start = Instant::now();
    let mut bg_failures = 0;
    let mut bi_failures = 0;
    for seed in [1u64, 2, 3] {
        let report = benchmark(&BenchConfig {
            experiment: ExperimentKind::Random,
            n: 40,
            trials: 40,
            digits: 12,
            sigma: 0.0,
            seed,
        })
        .unwrap();
        bg_failures += report.failures(Algo::Bg2);
        bi_failures += report.failures(Algo::Bi2);
    }
    assert!(
        bi_failures <= bg_failures,
        "bi2 failed {bi_failures} > bg2 {bg_failures}"
    );
    assert!(bg_failures >= 1, "expected at least one bg2 failure");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!(
        "PASS criterion 7: random n=40 at 12 digits over 3x40 trials: bg2 failures {bg_failures}, bi2 failures {bi_failures} (bi2 <= bg2, bg2 >= 1), {:.1}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_08_laplacian_benchmark() {
    let start = Instant::now();
    let report = benchmark(&BenchConfig {
        experiment: ExperimentKind::Laplacian,
        n: 40,
        trials: 40,
        digits: 12,
        sigma: 0.01,
        seed: 1,
    })
    .unwrap();
    let bg_failures = report.failures(Algo::Bg2);
    let bi_failures = report.failures(Algo::Bi2);
    assert_eq!(bg_failures, 0);
    assert_eq!(bi_failures, 0);
    let bg_median = report.median_error(Algo::Bg2);
    let bi_median = report.median_error(Algo::Bi2);
    assert!(
        bg_median <= bi_median,
        "bg2 median {bg_median:e} > bi2 median {bi_median:e}"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!(
        "PASS criterion 8: near-free-Laplacian n=40 at 12 digits: no failures, bg2 median {bg_median:.2e} <= bi2 median {bi_median:.2e}, {:.1}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_09_flop_budget() {
    let mut summary = Vec::new();
    for n in [16usize, 32, 64] {
        let mut rng = trial_rng(0xACC9, n as u64);
        let bd = random_bidiagonal(n, &mut rng);
        let counts = count_ops(&bd);
        let ratio = counts.products_and_quotients as f64 / (n * n) as f64;
        assert!(
            (2.5..=4.5).contains(&ratio),
            "n={n}: products/n^2 = {ratio}"
        );
        assert_eq!(counts.square_roots, (n - 1) as u64, "n={n}");
        summary.push(format!("n={n}: {ratio:.2}"));
    }
    println!(
        "PASS criterion 9: BI core products/n^2 in [2.5, 4.5] ({}), square roots exactly n-1",
        summary.join(", ")
    );
}

#[test]
fn criterion_10_orthogonality_of_the_polynomial_rows() {
    let ar = Arith::native();
    let mut worst = 0.0f64;
    for trial in 0..50u64 {
        let mut rng = trial_rng(0xACCA, trial);
        let n = 2 + (trial as usize % 11);
        let d = random_spectral(n, &mut rng);
        let (_, rows) = de_boor_golub_detailed(&d, &ar).unwrap();
        let wsq: Vec<f64> = d.w().iter().map(|x| x * x).collect();
        let ip = |u: &[f64], v: &[f64]| -> f64 {
            u.iter()
                .zip(v)
                .zip(&wsq)
                .map(|((a, b), w)| w * a * b)
                .sum()
        };
        let norms: Vec<f64> = rows.iter().map(|r| ip(&r.values, &r.values).sqrt()).collect();
        for k in 1..rows.len() {
            let cross = ip(&rows[k].values, &rows[k - 1].values).abs();
            let bound = 1e-10 * norms[k] * norms[k - 1];
            assert!(cross <= bound, "trial {trial}: <<p{k},p{}>> = {cross:e}", k - 1);
            worst = worst.max(cross / (norms[k] * norms[k - 1]));
            if k >= 2 {
                let cross2 = ip(&rows[k].values, &rows[k - 2].values).abs();
                let bound2 = 1e-10 * norms[k] * norms[k - 2];
                assert!(cross2 <= bound2, "trial {trial}: <<p{k},p{}>>", k - 2);
                worst = worst.max(cross2 / (norms[k] * norms[k - 2]));
            }
        }
    }
    println!(
        "PASS criterion 10: successive and next-successive rows orthogonal to {worst:.2e} relative (< 1e-10)"
    );
}

#[test]
fn criterion_11_reversal_identity() {
    let ar = Arith::native();
    let mut worst = 0.0f64;
    for trial in 0..100u64 {
        let mut rng = trial_rng(0xACCB, trial);
        let n = 2 + (trial as usize % 11);
        let (t, d) = random_jacobi_resolvable(n, &mut rng);
        let rd = reversal_data(&d, &ar).unwrap();
        let rec = reconstruct_from_w(&rd, Algo::Bi, &ar).unwrap();
        let err = error_metric(&rec, &t.reversed()).unwrap();
        assert!(err < 1e-8, "trial {trial}: error {err:e}");
        worst = worst.max(err);
    }
    println!(
        "PASS criterion 11: 100 reversal reconstructions match the index-reversed matrix to {worst:.2e} (< 1e-8)"
    );
}
