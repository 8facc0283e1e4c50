use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use liesym_cli::commands::{self, AlgebraInput};
use liesym_cli::{CliError, CliResult, Report};

#[derive(Parser)]
#[command(name = "liesym", version, about = "Lie point symmetries of polynomial PDE systems in exact arithmetic")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Determining system and symmetry basis.
    Symmetries {
        file: PathBuf,
        /// Polynomial ansatz degree (default: the file's ansatz_degree, else 2).
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Checks named or inline vector fields against the system.
    Verify {
        file: PathBuf,
        /// Field name or expression such as `T * d/dT`; repeatable. Default: all declared fields.
        #[arg(long = "vfield")]
        vfields: Vec<String>,
        /// Also evaluate the invariance condition at N random points.
        #[arg(long)]
        oracle: Option<usize>,
    },
    /// Commutators, adjoint matrices and structure of the symmetry algebra.
    Algebra {
        #[arg(required_unless_present = "from_table", conflicts_with = "from_table")]
        file: Option<PathBuf>,
        /// Read structure constants from a `.lie` table instead.
        #[arg(long)]
        from_table: Option<PathBuf>,
    },
    /// Optimal system of subalgebras of the given dimension.
    Optimal {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
        dim: u32,
    },
    /// Flow, invariants and transformed solutions of one field.
    Reduce {
        file: PathBuf,
        #[arg(long = "vfield")]
        vfield: String,
    },
}

fn run(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Symmetries { file, degree } => commands::symmetries(file, *degree),
        Command::Verify { file, vfields, oracle } => commands::verify(file, vfields, *oracle),
        Command::Algebra { file, from_table } => {
            let input = match (file, from_table) {
                (_, Some(t)) => AlgebraInput::Table(t.clone()),
                (Some(f), None) => AlgebraInput::Problem(f.clone()),
                (None, None) => return Err(CliError::input("a .pde file or --from-table is required")),
            };
            commands::algebra(&input)
        }
        Command::Optimal { file, dim } => commands::optimal(file, *dim),
        Command::Reduce { file, vfield } => commands::reduce(file, vfield),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let out = if cli.json { report.json_text() } else { report.text() };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(liesym_cli::EXIT_INPUT as u8);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("liesym: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
