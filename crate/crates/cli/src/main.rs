use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vbalg_cli::battery;
use vbalg_cli::commands::{self, Caps, CmdError};
use vbalg_cli::report::{Format, Report};

/// Exact symbolic checks for Lie algebroids, deformation complexes and
/// VB-algebroids.
#[derive(Parser)]
#[command(name = "vbalg", version)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Highest cochain degree the differential may produce.
    #[arg(long, global = true, default_value_t = 4)]
    degree_cap: usize,
    /// Highest total polynomial degree accepted in inputs and outputs.
    #[arg(long, global = true, default_value_t = 16)]
    poly_cap: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the structural checks of every block in a file.
    Validate { file: PathBuf },
    /// Print the differential of a cochain block.
    Diff {
        file: PathBuf,
        cochain: String,
        /// Also check that the differential squares to zero.
        #[arg(long)]
        check_d2: bool,
    },
    /// Check the IM conditions on a triple, imsection or 1-cochain block.
    CheckIm { file: PathBuf, target: String },
    /// Run the property battery over the built-in fixtures.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to one fixture.
        #[arg(long)]
        fixture: Option<String>,
    },
    /// List the built-in fixtures.
    Fixtures,
}

fn run(cli: &Cli) -> Result<Report, CmdError> {
    let caps = Caps {
        degree: cli.degree_cap,
        poly: cli.poly_cap,
    };
    match &cli.command {
        Command::Validate { file } => Ok(commands::validate(&commands::load(file, caps)?)),
        Command::Diff {
            file,
            cochain,
            check_d2,
        } => commands::diff(&commands::load(file, caps)?, cochain, *check_d2, caps),
        Command::CheckIm { file, target } => commands::check_im(&commands::load(file, caps)?, target),
        Command::Suite { seed, fixture } => battery::run(*seed, fixture.as_deref(), caps),
        Command::Fixtures => Ok(Report {
            text: battery::fixture_names()
                .into_iter()
                .map(|(n, k)| format!("{n} {}", k.label()))
                .collect(),
            records: Vec::new(),
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
