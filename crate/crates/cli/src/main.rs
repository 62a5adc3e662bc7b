//! Command-line front end for the `circle-groups` library.

mod commands;
mod spec;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use circle_groups::Error;
use clap::{Parser, Subcommand};

use commands::{CocycleKind, Common};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
}

impl CliError {
    /// 2: bad operands or neighbourhood, 3: geometry or configuration,
    /// 4: aliasing, 1: anything else.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e {
                Error::Neighbourhood { .. }
                | Error::Parse(_)
                | Error::InvalidArgument(_)
                | Error::InvalidGrid(_)
                | Error::NotDiffeomorphism { .. }
                | Error::Branch { .. }
                | Error::Truncation { .. } => 2,
                Error::Geometry(_) | Error::Mass { .. } => 3,
                Error::Aliasing { .. } => 4,
                _ => 1,
            },
            CliError::Io(..) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "circle-groups",
    version,
    about = "Fragmentation and cocycles on Diff(S¹) and loop groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Cover configuration as JSON
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Seed for random trials
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Number of random trials
    #[arg(long, global = true, value_name = "N")]
    trials: Option<usize>,
    /// Grid size, a power of two at least 16
    #[arg(long, global = true, value_name = "N")]
    grid: Option<usize>,
    /// Directory for CSV and report files
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Print JSON instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split a diffeomorphism into factors supported in the cover intervals
    FragmentDiff {
        /// id, rot:S or fourier:[(k,a,b),...] with optional bump(a,b,c,d)* window
        spec: String,
    },
    /// Split a loop in SU(2) into factors supported in the cover intervals
    FragmentLoop {
        /// id or exp:C1;C2;C3 with each C a windowed mode list
        spec: String,
    },
    /// Evaluate a cocycle on two operands
    Cocycle {
        #[arg(value_enum)]
        kind: CocycleKind,
        first: String,
        second: String,
    },
    /// Gram matrix of a lowest-weight Virasoro module
    Verma {
        /// Central charge, e.g. 1/2
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Lowest weight, e.g. 1/16
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[arg(long, default_value_t = circle_groups::verma::DEFAULT_LEVEL)]
        max_level: u32,
    },
    /// Run the seeded property suites
    Verify {
        /// all, diff, loop, cocycle or verma
        #[arg(default_value = "all")]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = Common {
        config: cli.config,
        seed: cli.seed,
        trials: cli.trials,
        grid: cli.grid,
        out: cli.out,
        json: cli.json,
    };
    let result = match &cli.command {
        Command::FragmentDiff { spec } => commands::fragment_diff(spec, &common),
        Command::FragmentLoop { spec } => commands::fragment_loop_cmd(spec, &common),
        Command::Cocycle {
            kind,
            first,
            second,
        } => commands::cocycle_cmd(*kind, first, second, &common),
        Command::Verma {
            c,
            h,
            level,
            max_level,
        } => commands::verma_cmd(c, h, *level, *max_level, &common),
        Command::Verify { suite } => commands::verify_cmd(suite, &common),
    };
    match result {
        Ok(output) => {
            let mut stdout = io::stdout().lock();
            if let Err(e) = writeln!(stdout, "{}", output.text.trim_end()) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            }
            if output.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
