//! Thin CLI over the scenario module: `run`, `validate`, `version`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fas_rsma::scenario::{load_scenario, run, validate_report};
use fas_rsma::Error;

const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_PARTIAL: u8 = 4;

/// Environment variable overriding the default worker-thread count.
const THREADS_ENV: &str = "FAS_RSMA_THREADS";

#[derive(Parser)]
#[command(name = "fas-rsma", disable_version_flag = true)]
#[command(about = "Outage analysis for fluid-antenna RSMA receivers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario sweep and write results.csv + manifest.json.
    Run {
        scenario: PathBuf,
        /// Output directory (defaults to the scenario's [output] section).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed override (re-seeds both QMC and Monte-Carlo streams).
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: FAS_RSMA_THREADS or all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Dry-run checks: threshold feasibility, matrix conditioning, runtime.
    Validate { scenario: PathBuf },
    /// Print the version.
    Version,
}

fn thread_count(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Version => {
            println!("fas-rsma {}", env!("CARGO_PKG_VERSION"));
            ExitCode::SUCCESS
        }
        Command::Validate { scenario } => match load_scenario(&scenario) {
            Ok(s) => match validate_report(&s) {
                Ok(report) => {
                    print!("{report}");
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            },
            Err(e) => fail(e),
        },
        Command::Run { scenario, out, seed, threads } => {
            if let Some(n) = thread_count(threads) {
                // ignore the error if a pool already exists (e.g. in tests)
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            let loaded = match load_scenario(&scenario) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let loaded = match seed {
                Some(seed) => loaded.with_seed(seed),
                None => loaded,
            };
            match run(&loaded, out.as_deref()) {
                Ok(outcome) => {
                    println!(
                        "wrote {} ({} rows) and {}",
                        outcome.data_path.display(),
                        outcome.rows,
                        outcome.manifest_path.display()
                    );
                    if outcome.partial {
                        eprintln!("some points failed; see the flags column");
                        ExitCode::from(EXIT_PARTIAL)
                    } else {
                        ExitCode::SUCCESS
                    }
                }
                Err(e) => fail(e),
            }
        }
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Parse(_) | Error::Io(_) => ExitCode::from(EXIT_PARSE),
        Error::Validation(_) | Error::Domain(_) | Error::Dimension(_) => {
            ExitCode::from(EXIT_VALIDATION)
        }
        _ => ExitCode::FAILURE,
    }
}
