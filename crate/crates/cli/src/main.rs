use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyon_bell::gates::SearchMode;
use anyon_bell::report::{self, FIG4_DEFAULT_SAMPLES};
use anyon_bell::Error;
use clap::{Parser, Subcommand, ValueEnum};

const SEED_ENV: &str = "ANYON_BELL_SEED";

#[derive(Parser)]
#[command(name = "anyon-bell", version, about = "Bell witnesses for six non-Abelian anyons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one named case, or `all`, and print a JSON report.
    Reproduce {
        case: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Zero all runtimes so reports with equal seeds are byte-identical.
        #[arg(long)]
        deterministic: bool,
        /// List case ids and exit.
        #[arg(long)]
        list: bool,
    },
    /// Write the r(a) curves for SU(2), SO(3)_3 and SU(2)_2 as CSV.
    Fig4 {
        #[arg(long, default_value_t = FIG4_DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an invariant suite.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        deterministic: bool,
    },
    /// Search braid words on phi0 for the largest witness violation.
    Search {
        model: String,
        /// `w` or `i3`.
        witness: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Random)]
        mode: ModeArg,
        #[arg(long, default_value_t = 25)]
        length: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also try the known Fibonacci violating word.
        #[arg(long, alias = "include-paper-word")]
        include_reference_word: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Algebra,
    Braids,
    Lhv,
    All,
}

impl SuiteArg {
    fn name(self) -> &'static str {
        match self {
            SuiteArg::Algebra => "algebra",
            SuiteArg::Braids => "braids",
            SuiteArg::Lhv => "lhv",
            SuiteArg::All => "all",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Random,
    Permutations,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownCase(_)
            | Error::UnknownModel(_)
            | Error::InvalidArgument(_)
            | Error::Unsupported { .. }
            | Error::Parse { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn seed_or_env(flag: u64) -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV}=`{s}` is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Reproduce {
            case,
            seed,
            out,
            deterministic,
            list,
        } => {
            if list {
                emit(&report::case_ids().join("\n"), out.as_deref())?;
                return Ok(true);
            }
            let mut r = report::reproduce(&case, seed_or_env(seed)?)?;
            if deterministic {
                r = r.without_runtimes();
            }
            emit(&r.to_json(), out.as_deref())?;
            Ok(r.passed)
        }
        Command::Fig4 { samples, out } => {
            if samples < 3 {
                return Err(Failure::Usage(format!("--samples must be at least 3, got {samples}")));
            }
            emit(&report::fig4_csv(samples)?, out.as_deref())?;
            Ok(true)
        }
        Command::Verify {
            suite,
            out,
            deterministic,
        } => {
            let mut r = report::verify(suite.name())?;
            if deterministic {
                r = r.without_runtimes();
            }
            emit(&r.to_json(), out.as_deref())?;
            Ok(r.passed)
        }
        Command::Search {
            model,
            witness,
            mode,
            length,
            budget,
            seed,
            include_reference_word,
            out,
        } => {
            let mode = match mode {
                ModeArg::Random => SearchMode::Random,
                ModeArg::Permutations => SearchMode::Permutations,
            };
            let r = report::search(
                &model,
                &witness,
                mode,
                length,
                budget,
                seed_or_env(seed)?,
                include_reference_word,
            )?;
            emit(&r.to_json(), out.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
