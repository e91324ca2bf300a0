//! `posmap`: command-line front end for the positive-map toolkit.
//!
//! Exit codes: 0 success, 1 criterion failure (or a negative answer where the
//! command asks a yes/no question), 2 bad parameters, 3 I/O or parse error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use posmap::cpdecomp::{decompose, DecomposeOptions, DecompositionOutcome};
use posmap::extremal::canonicalize;
use posmap::report::{classify, ClassifyOptions};
use posmap::rng::DEFAULT_SEED;
use posmap::suite::{default_fixtures, run_suite, write_fixtures, SuiteOptions};
use posmap::tang::{build_pipeline, TangParams};
use posmap::{choi::extract_blocks, io, Error, Execution};

#[derive(Parser)]
#[command(name = "posmap", version, about = "Positivity, decomposability and canonical forms of maps M_2 -> M_{n+1}")]
struct Cli {
    /// Seed for every randomized search.
    #[arg(long, global = true, env = "POSMAP_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Run searches on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Stage {
    /// The Choi matrix of the Tang map itself.
    Raw,
    /// The unital face-form normalization.
    Normalized,
}

#[derive(Subcommand)]
enum Command {
    /// Write the Choi matrix of a Tang map and print its normalization constants.
    Tang {
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, allow_hyphen_values = true)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Stage::Normalized)]
        stage: Stage,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a Choi matrix: positivity, (co)positivity, decomposability, structure.
    Classify {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Random restarts for the positivity searches.
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        /// Iteration cap for the decomposition search.
        #[arg(long, default_value_t = 20_000)]
        max_iters: usize,
        /// Random restarts for the PPT witness search.
        #[arg(long, default_value_t = 16)]
        witness_restarts: usize,
    },
    /// Search for a decomposition into CP and coCP parts (exit 1 if none found).
    Decompose {
        input: PathBuf,
        #[arg(long, default_value_t = 20_000)]
        max_iters: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonical form of an equality-case map (exit 1 if the input is not one).
    Canonical {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the reproduction battery (exit 1 if any criterion fails).
    VerifyPaper {
        /// Side of the (mu, eps) grid.
        #[arg(long, default_value_t = 3)]
        grid: usize,
        /// Directory of fixture files to classify as well.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Write the full JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the default fixture set.
    Fixtures {
        #[arg(long)]
        out: PathBuf,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BadParams { .. } => 2,
        Error::Io(_) | Error::Parse(_) | Error::NotSquare { .. } | Error::NotHermitian { .. } | Error::DimensionMismatch(_) => 3,
        _ => 1,
    }
}

fn emit<T: serde::Serialize>(value: &T, out: Option<&Path>) -> posmap::Result<()> {
    match out {
        Some(path) => io::write_json(path, value),
        None => {
            println!("{}", io::to_json(value)?);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> posmap::Result<u8> {
    let execution = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let mut classify_options = ClassifyOptions::with_seed(cli.seed);
    classify_options.budget.execution = execution;
    classify_options.witness.execution = execution;
    match cli.command {
        Command::Tang { mu, eps, stage, out } => {
            let params = TangParams::new(mu, eps)?;
            let pl = build_pipeline(&params)?;
            eprintln!(
                "rho = {:.16e}\ndelta = {:.16e}\nalpha = {:.16e}\nbeta = {:.16e}\ngamma = {:.16e}",
                pl.rho, pl.delta, pl.alpha, pl.beta, pl.gamma
            );
            let m = match stage {
                Stage::Raw => pl.h0.matrix(),
                Stage::Normalized => pl.hfinal.matrix(),
            };
            emit(m, out.as_deref())?;
            Ok(0)
        }
        Command::Classify { input, out, restarts, max_iters, witness_restarts } => {
            let h = io::read_choi(&input)?;
            classify_options.budget.restarts = restarts;
            classify_options.decompose.max_iters = max_iters;
            classify_options.witness.restarts = witness_restarts;
            let report = classify(&h, &classify_options)?;
            emit(&report, out.as_deref())?;
            Ok(0)
        }
        Command::Decompose { input, max_iters, out } => {
            let h = io::read_choi(&input)?;
            let outcome = decompose(&h, &DecomposeOptions { max_iters, ..DecomposeOptions::default() })?;
            emit(&outcome, out.as_deref())?;
            Ok(match outcome {
                DecompositionOutcome::Decomposed(_) => 0,
                DecompositionOutcome::NotDecomposed { .. } => 1,
            })
        }
        Command::Canonical { input, out } => {
            let h = io::read_choi(&input)?;
            let report = classify(&h, &classify_options)?;
            if !report.equality_case {
                eprintln!("input is not an equality-case unital face-form map");
                return Ok(1);
            }
            match canonicalize(&extract_blocks(&h)?) {
                Ok(canon) => {
                    emit(&canon, out.as_deref())?;
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("{e}");
                    Ok(1)
                }
            }
        }
        Command::VerifyPaper { grid, fixtures, out } => {
            let options = SuiteOptions { grid, seed: cli.seed, execution, fixtures };
            let report = run_suite(&options);
            for c in &report.criteria {
                println!("{}", c.line());
            }
            for f in &report.fixtures {
                let status = if f.passed { "PASS" } else { "FAIL" };
                println!("[{status}] fixture {}{}", f.name, if f.passed { String::new() } else { format!(": {}", f.failures.join("; ")) });
            }
            if let Some(path) = out {
                io::write_json(&path, &report)?;
            }
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::Fixtures { out } => {
            for path in write_fixtures(&out, &default_fixtures(cli.seed)?)? {
                println!("{}", path.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
