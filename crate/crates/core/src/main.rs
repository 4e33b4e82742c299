use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use toric_completion::cli;
use toric_completion::Error;

/// Invariants of the proalgebraic completion of a toric variety.
#[derive(Parser)]
#[command(name = "toric", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full JSON report for a fan file.
    Analyze { fan: PathBuf },
    /// Delzant face lattice with fiber ranks.
    Delzant {
        fan: PathBuf,
        /// Write an SVG sketch (rank-2 fans only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Hilbert basis of the dual semigroup of a cone.
    Hilbert {
        fan: PathBuf,
        /// 1-based ray labels, e.g. `1,2`; empty for the zero cone.
        #[arg(long)]
        cone: String,
    },
    /// Finite-level arithmetic on the solenoid.
    #[command(subcommand)]
    Solenoid(SolenoidCommand),
    /// Normal forms in K(CP¹_Q).
    #[command(subcommand)]
    Kring(KringCommand),
}

#[derive(Subcommand)]
enum SolenoidCommand {
    /// exp(a, t) = φ(a)·ν(t), t in full turns.
    Exp {
        /// Residue `r/M` or `r` together with --level.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        turns: String,
        #[arg(long)]
        level: Option<String>,
    },
    /// Covering map z ↦ z^(m/n).
    Cover {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        rho: String,
        #[arg(long, allow_hyphen_values = true)]
        turns: String,
    },
    /// Lift a level-M point to a multiple of M.
    Refine {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        rho: String,
        #[arg(long, allow_hyphen_values = true)]
        turns: String,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value_t = 0)]
        branch: u64,
    },
}

#[derive(Subcommand)]
enum KringCommand {
    /// Normal form (a, r) of an expression such as `3*x^(1/2) - x^(2/3) + 1`.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Product of two expressions.
    Mul {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Whether the class comes from level n.
    Level {
        n: u64,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

enum Failure {
    Domain(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Domain(e)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn run(args: Args) -> Result<String, Failure> {
    Ok(match args.command {
        Command::Analyze { fan } => cli::cmd_analyze(&read(&fan)?, &stem(&fan))?,
        Command::Delzant { fan, svg } => {
            let (report, picture) = cli::cmd_delzant(&read(&fan)?, svg.is_some())?;
            if let (Some(path), Some(picture)) = (svg, picture) {
                std::fs::write(&path, picture)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            report
        }
        Command::Hilbert { fan, cone } => cli::cmd_hilbert(&read(&fan)?, &cone)?,
        Command::Solenoid(cmd) => match cmd {
            SolenoidCommand::Exp { a, turns, level } => {
                cli::cmd_solenoid_exp(&a, &turns, level.as_deref())?
            }
            SolenoidCommand::Cover { n, m, rho, turns } => {
                cli::cmd_solenoid_cover(n, m, &rho, &turns)?
            }
            SolenoidCommand::Refine {
                level,
                rho,
                turns,
                to,
                branch,
            } => cli::cmd_solenoid_refine(level, &rho, &turns, to, branch)?,
        },
        Command::Kring(cmd) => match cmd {
            KringCommand::Reduce { expr } => cli::cmd_kring_reduce(&expr)?,
            KringCommand::Mul { left, right } => cli::cmd_kring_mul(&left, &right)?,
            KringCommand::Level { n, expr } => cli::cmd_kring_level(n, &expr)?,
        },
    })
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
