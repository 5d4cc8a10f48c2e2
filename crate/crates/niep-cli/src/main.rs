use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use niep_cli::{
    batch_verify, run, CheckKind, CliError, Construction, InputKind, JobSpec, Params, Report,
    ALL_CHECKS,
};

/// Decide whether complex multisets are nonzero spectra of nonnegative
/// matrices, and construct verified realizers.
#[derive(Parser)]
#[command(name = "niep", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    /// Every implemented suite.
    All,
    /// Power sums nonnegative up to the horizon.
    Traces,
    /// Peripheral structure under the maximal-multiplicity rotation.
    Structure,
    /// Binomial trace inequalities.
    LoewyLondon,
    /// Conjugate closure, attained simple radius, rotation invariance.
    Frobenius,
    /// Primitive realizability.
    BoyleHandelman,
    /// Irreducible realizability.
    Irreducible,
    /// Integer irreducible realizability.
    Kor,
}

fn resolve_checks(args: &[CheckArg]) -> Vec<CheckKind> {
    let mut out = Vec::new();
    for a in args {
        match a {
            CheckArg::All => out.extend(ALL_CHECKS),
            CheckArg::Traces => out.push(CheckKind::Traces),
            CheckArg::Structure => out.push(CheckKind::Structure),
            CheckArg::LoewyLondon => out.push(CheckKind::LoewyLondon),
            CheckArg::Frobenius => out.push(CheckKind::Frobenius),
            CheckArg::BoyleHandelman => out.push(CheckKind::BoyleHandelman),
            CheckArg::Irreducible => out.push(CheckKind::Irreducible),
            CheckArg::Kor => out.push(CheckKind::Kor),
        }
    }
    out.dedup();
    out
}

#[derive(Args)]
struct CommonFlags {
    /// Horizon for trace scans.
    #[arg(long, default_value_t = 50)]
    kmax: u32,
    /// Relative tolerance for numeric comparisons.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Write the structured report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run decision suites on a spectrum or a monic polynomial.
    Check {
        /// Spectrum as complex literals, e.g. "[2, -1, -1]" or "1+2i, 1-2i".
        #[arg(long, conflicts_with = "polynomial")]
        spectrum: Option<String>,
        /// Monic polynomial coefficients, highest degree first, e.g. "1 0 -2".
        #[arg(long)]
        polynomial: Option<String>,
        /// Suites to run.
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [CheckArg::All])]
        checks: Vec<CheckArg>,
        /// Seed echoed into the report for reproducibility bookkeeping.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Analyze a matrix file: structure facts plus the necessity suites
    /// matching its class.
    Analyze {
        /// Matrix file: first line the order, then one row per line.
        matrix: PathBuf,
        /// Modulus below which computed eigenvalues count as zero.
        #[arg(long)]
        zero_cut: Option<f64>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Lift a matrix to a block-cyclic irreducible matrix and verify the
    /// construction.
    Lift {
        /// Matrix file for the block to lift.
        #[arg(long)]
        matrix: PathBuf,
        /// Requested period of the lift.
        #[arg(long, conflicts_with = "spectrum")]
        p: Option<usize>,
        /// Target spectrum the lift must carry.
        #[arg(long)]
        spectrum: Option<String>,
        /// Modulus below which computed eigenvalues count as zero.
        #[arg(long)]
        zero_cut: Option<f64>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Search for a primitive realizer of a spectrum at small orders.
    Search {
        /// Target spectrum as complex literals.
        #[arg(long)]
        spectrum: String,
        /// Largest matrix order to try (at most 8; default: spectrum size).
        #[arg(long)]
        nmax: Option<usize>,
        /// Objective evaluation budget.
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        /// Seed for the deterministic restarts.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Analyze every matrix file in a directory and aggregate the
    /// verdicts.
    Batch {
        /// Directory of matrix files.
        dir: PathBuf,
        /// Modulus below which computed eigenvalues count as zero.
        #[arg(long)]
        zero_cut: Option<f64>,
        #[command(flatten)]
        common: CommonFlags,
    },
}

fn params(common: &CommonFlags, zero_cut: Option<f64>, seed: u64, budget: u64) -> Params {
    Params {
        k_max: common.kmax,
        tol: common.tol,
        zero_cut,
        seed,
        budget,
    }
}

fn dispatch(cli: Cli) -> Result<(Report, String, Option<PathBuf>), CliError> {
    match cli.command {
        Command::Check {
            spectrum,
            polynomial,
            checks,
            seed,
            common,
        } => {
            let input = match (spectrum, polynomial) {
                (Some(s), None) => InputKind::SpectrumList(s),
                (None, Some(p)) => InputKind::Polynomial(p),
                _ => {
                    return Err(CliError::Usage(
                        "check needs exactly one of --spectrum or --polynomial".into(),
                    ))
                }
            };
            let job = JobSpec {
                command: "check".into(),
                input,
                checks: resolve_checks(&checks),
                construction: None,
                params: params(&common, None, seed, 100_000),
            };
            let (report, text) = run(&job)?;
            Ok((report, text, common.out))
        }
        Command::Analyze {
            matrix,
            zero_cut,
            common,
        } => {
            let job = JobSpec {
                command: "analyze".into(),
                input: InputKind::MatrixFile(matrix),
                checks: Vec::new(),
                construction: None,
                params: params(&common, zero_cut, 0, 100_000),
            };
            let (report, text) = run(&job)?;
            Ok((report, text, common.out))
        }
        Command::Lift {
            matrix,
            p,
            spectrum,
            zero_cut,
            common,
        } => {
            let job = JobSpec {
                command: "lift".into(),
                input: InputKind::MatrixFile(matrix.clone()),
                checks: Vec::new(),
                construction: Some(Construction::Lift {
                    matrix,
                    p,
                    target: spectrum,
                }),
                params: params(&common, zero_cut, 0, 100_000),
            };
            let (report, text) = run(&job)?;
            Ok((report, text, common.out))
        }
        Command::Search {
            spectrum,
            nmax,
            budget,
            seed,
            common,
        } => {
            let job = JobSpec {
                command: "search".into(),
                input: InputKind::SpectrumList(spectrum),
                checks: Vec::new(),
                construction: Some(Construction::Search { n_max: nmax }),
                params: params(&common, None, seed, budget),
            };
            let (report, text) = run(&job)?;
            Ok((report, text, common.out))
        }
        Command::Batch {
            dir,
            zero_cut,
            common,
        } => {
            let p = params(&common, zero_cut, 0, 100_000);
            let (report, text) = batch_verify(&dir, &p)?;
            Ok((report, text, common.out))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok((report, text, out)) => {
            print!("{text}");
            if let Some(path) = out {
                let body = match serde_json::to_string_pretty(&report) {
                    Ok(b) => b,
                    Err(e) => {
                        eprintln!("error: cannot serialize report: {e}");
                        return ExitCode::from(3);
                    }
                };
                if let Err(e) = std::fs::write(&path, body + "\n") {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(3)
        }
    }
}
