//! Command-line front end: forward solves, reconstruction, tightening,
//! and the benchmark experiments.
//!
//! Exit status: 0 on success, 1 on validation or usage errors, 2 on
//! numerical breakdown inside an engine.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jacobi_recon::{
    benchmark, default_max_sweeps, eigenvector_norming_constants, initial_permutation, io,
    permutation_sweep, random_jacobi, reconstruct_from_w, tighten, trial_rng, w_to_beta, Algo,
    Arith, BenchConfig, ExperimentKind, Result, ScalarMode,
};

#[derive(Parser)]
#[command(
    name = "jacobi-recon",
    version,
    about = "Reconstruct real symmetric tridiagonal (Jacobi) matrices from spectral inverse data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Bg,
    Bi,
    Bg2,
    Bi2,
    Qr,
}

impl From<AlgoArg> for Algo {
    fn from(a: AlgoArg) -> Algo {
        match a {
            AlgoArg::Bg => Algo::Bg,
            AlgoArg::Bi => Algo::Bi,
            AlgoArg::Bg2 => Algo::Bg2,
            AlgoArg::Bi2 => Algo::Bi2,
            AlgoArg::Qr => Algo::Qr,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    Random,
    Laplacian,
    Permutations,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the spectral inverse data (eigenvalues, norming constants) of a Jacobi matrix file
    Forward { matrix_file: PathBuf },
    /// Reconstruct a matrix from a spectral data file and print it
    Reconstruct {
        /// Reconstruction path
        #[arg(long, value_enum)]
        algo: AlgoArg,
        /// Emulate d-significant-decimal-digit arithmetic (0 = native)
        #[arg(long, default_value_t = 0)]
        digits: u32,
        spectral_file: PathBuf,
    },
    /// Print the tight permutation, its bidiagonal coordinates, and the sweep count
    Tighten { spectral_file: PathBuf },
    /// Run a benchmark experiment and print the per-trial report
    Bench {
        #[arg(long, value_enum)]
        experiment: ExperimentArg,
        /// Matrix dimension
        #[arg(long, default_value_t = 40)]
        n: usize,
        /// Number of trials (seeds for the permutations experiment)
        #[arg(long, default_value_t = 40)]
        trials: u32,
        /// Significant decimal digits for the engines (0 = native)
        #[arg(long, default_value_t = 12)]
        digits: u32,
        /// Off-diagonal perturbation scale (laplacian experiment)
        #[arg(long, default_value_t = 0.01)]
        sigma: f64,
        /// Master seed; trial k draws from stream (seed, k)
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Forward { matrix_file } => {
            let t = io::parse_matrix(&std::fs::read_to_string(matrix_file)?)?;
            let d = eigenvector_norming_constants(&t)?;
            print!("{}", io::write_spectral(&d));
        }
        Command::Reconstruct {
            algo,
            digits,
            spectral_file,
        } => {
            let d = io::parse_spectral(&std::fs::read_to_string(spectral_file)?)?;
            let arith = Arith::new(ScalarMode::from_digits(digits)?);
            let t = reconstruct_from_w(&d, algo.into(), &arith)?;
            print!("{}", io::write_matrix(&t));
        }
        Command::Tighten { spectral_file } => {
            let d = io::parse_spectral(&std::fs::read_to_string(spectral_file)?)?;
            let arith = Arith::native();
            let bd = w_to_beta(&d, &initial_permutation(&d), &arith)?;
            let report = tighten(&bd, default_max_sweeps(d.n()), &arith)?;
            println!("pi: {}", report.result.pi());
            let beta = report
                .result
                .beta()
                .iter()
                .map(|x| format!("{x:.16e}"))
                .collect::<Vec<_>>()
                .join(" ");
            println!("beta: {beta}");
            println!("sweeps: {}", report.sweeps);
            println!("transpositions: {}", report.transpositions);
        }
        Command::Bench {
            experiment,
            n,
            trials,
            digits,
            sigma,
            seed,
            format,
        } => match experiment {
            ExperimentArg::Random | ExperimentArg::Laplacian => {
                let kind = match experiment {
                    ExperimentArg::Random => ExperimentKind::Random,
                    _ => ExperimentKind::Laplacian,
                };
                let report = benchmark(&BenchConfig {
                    experiment: kind,
                    n,
                    trials,
                    digits,
                    sigma,
                    seed,
                })?;
                match format {
                    FormatArg::Table => print!("{}", report.to_table()),
                    FormatArg::Csv => print!("{}", report.to_csv()),
                }
            }
            ExperimentArg::Permutations => {
                print_permutation_experiment(n, trials, digits, seed, format)?;
            }
        },
    }
    Ok(())
}

/// Per seed: sweep all n! permutations at the given precision and print
/// the error spread and how the tight permutations fared.
fn print_permutation_experiment(
    n: usize,
    trials: u32,
    digits: u32,
    seed: u64,
    format: FormatArg,
) -> Result<()> {
    let header = ["trial", "best", "worst", "ratio", "tight", "best_tight"];
    match format {
        FormatArg::Table => println!(
            "{:>5} {:>12} {:>12} {:>12} {:>6} {:>12}",
            header[0], header[1], header[2], header[3], header[4], header[5]
        ),
        FormatArg::Csv => println!("{}", header.join(",")),
    }
    for trial in 0..trials {
        let mut rng = trial_rng(seed, u64::from(trial));
        let d = loop {
            let t = random_jacobi(n, &mut rng);
            if let Ok(d) = eigenvector_norming_constants(&t) {
                break d;
            }
        };
        let rows = permutation_sweep(&d, digits)?;
        let best = rows.iter().map(|r| r.error).fold(f64::MAX, f64::min);
        let worst = rows.iter().map(|r| r.error).fold(0.0f64, f64::max);
        let n_tight = rows.iter().filter(|r| r.tight).count();
        let best_tight = rows
            .iter()
            .filter(|r| r.tight)
            .map(|r| r.error)
            .fold(f64::MAX, f64::min);
        match format {
            FormatArg::Table => println!(
                "{trial:>5} {best:>12.3e} {worst:>12.3e} {:>12.3e} {n_tight:>6} {best_tight:>12.3e}",
                worst / best
            ),
            FormatArg::Csv => println!(
                "{trial},{best:.16e},{worst:.16e},{:.16e},{n_tight},{best_tight:.16e}",
                worst / best
            ),
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's default exit code for usage errors is 2; this tool
            // reserves 2 for numerical breakdown
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
