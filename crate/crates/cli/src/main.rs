//! `grushin`: batch verification runs over the registered frames and
//! complexes.
//!
//! Exit status: 0 when every check passes, 1 when a mathematical check
//! fails, 2 for usage or input errors.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "grushin",
    version,
    about = "Exact verification of Grushin-type differential complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Output format; csv is only meaningful for `cohomology`.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bracket tables, complex property and homogeneity checks.
    Verify {
        #[arg(long, conflicts_with_all = ["frame", "all"])]
        complex: Option<String>,
        #[arg(long, conflicts_with = "all")]
        frame: Option<String>,
        /// Every registered frame and complex.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Graded polynomial cohomology, degree by degree.
    Cohomology {
        #[arg(long)]
        complex: String,
        #[arg(long, default_value_t = 12)]
        max_degree: u64,
        /// Order the monomial bases backwards (dimensions must not change).
        #[arg(long)]
        reversed: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Integrate (a, b) to a potential, or run the seeded round-trip suite.
    Solve {
        #[arg(long)]
        complex: String,
        /// Slot of the input; level 2 takes `--c` and `--d`.
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long)]
        a: Option<PathBuf>,
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long)]
        c: Option<PathBuf>,
        #[arg(long)]
        d: Option<PathBuf>,
        /// Random (Xf, Yf) inputs that must integrate back to f.
        #[arg(long)]
        roundtrip: bool,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Derive a complex from de Rham by cancellation and compare it with the
    /// registry.
    Derive {
        #[arg(long)]
        target: String,
        #[command(flatten)]
        out: Output,
    },
    /// Symmetry reduction by killed coordinates.
    Reduce {
        #[arg(long)]
        from: String,
        /// Comma-separated coordinates, e.g. `z,t`.
        #[arg(long, value_delimiter = ',', required = true)]
        kill: Vec<String>,
        /// Registered complex to compare the result with.
        #[arg(long)]
        compare: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// List the frames, or describe one.
    Frames {
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        out: Output,
    },
}

/// A finished report and whether every check it contains passed.
pub struct Report {
    pub body: String,
    pub ok: bool,
}

fn run(cli: Cli) -> anyhow::Result<(Report, Output)> {
    Ok(match cli.command {
        Command::Verify {
            complex,
            frame,
            all,
            out,
        } => (
            commands::verify(complex.as_deref(), frame.as_deref(), all, out.format)?,
            out,
        ),
        Command::Cohomology {
            complex,
            max_degree,
            reversed,
            out,
        } => (
            commands::cohomology(&complex, max_degree, reversed, out.format)?,
            out,
        ),
        Command::Solve {
            complex,
            level,
            a,
            b,
            c,
            d,
            roundtrip,
            cases,
            seed,
            out,
        } => {
            let r = if roundtrip {
                commands::roundtrip(&complex, cases, seed, out.format)?
            } else {
                let (first, second) = match level {
                    1 => (a, b),
                    2 => (c, d),
                    _ => anyhow::bail!(commands::UsageError(format!("unsupported level {level}"))),
                };
                commands::solve(&complex, level, first, second, out.format)?
            };
            (r, out)
        }
        Command::Derive { target, out } => (commands::derive(&target, out.format)?, out),
        Command::Reduce {
            from,
            kill,
            compare,
            out,
        } => (
            commands::reduce(&from, &kill, compare.as_deref(), out.format)?,
            out,
        ),
        Command::Frames { name, out } => (commands::frames(name.as_deref(), out.format)?, out),
    })
}

/// 1 for mathematical failures, 2 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    use grushin_core::Error as E;
    match err.downcast_ref::<E>() {
        Some(
            E::NotACocycle { .. }
            | E::Integrability { .. }
            | E::Reduction(_)
            | E::CompositionFailure { .. }
            | E::NotInvertible(_)
            | E::OrderCap { .. }
            | E::Inhomogeneous(_),
        ) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, out)) => {
            if let Some(path) = &out.output {
                if let Err(e) = std::fs::write(path, &report.body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", report.body);
            }
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
