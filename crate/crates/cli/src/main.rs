//! `egs`: key elements, basis certificates and flow-up bases for splines on
//! edge-labeled graphs.

mod commands;
mod corpus;
mod error;
mod files;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use egs_algebra::graph::{TrailMode, TrailOptions, DEFAULT_MAX_TRAILS};

use commands::OracleArgs;

#[derive(Parser)]
#[command(
    name = "egs",
    version,
    about = "Extending generalized splines on edge-labeled graphs"
)]
struct Cli {
    /// Give up after exploring this many trails between one pair of vertices.
    #[arg(long, global = true, env = "EGS_MAX_TRAILS", default_value_t = DEFAULT_MAX_TRAILS)]
    max_trails: usize,
    /// Which trails enter the trail constraints.
    #[arg(long, global = true, value_enum, default_value_t = Trails::All)]
    trails: Trails,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Trails {
    /// Every trail between the two vertices.
    All,
    /// Only trails whose edge set is maximal under inclusion.
    Maximal,
}

#[derive(Subcommand)]
enum Command {
    /// Print the components Q^(i) and the key element Qhat.
    Qhat {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Also print the classical Q_G and the factor H with Qhat = H * Q_G.
        #[arg(long)]
        classical: bool,
    },
    /// Decide whether a set of n splines is a basis.
    Certify {
        file: PathBuf,
        #[arg(long)]
        splines: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compute a flow-up basis (integers or univariate polynomials over QQ).
    Flowup {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write a spline in terms of a set of n splines by Cramer's rule.
    Express {
        file: PathBuf,
        #[arg(long)]
        splines: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Cross-check an integer instance against brute-force search.
    Oracle {
        file: PathBuf,
        /// Search bound for leading entries (default: four times the formula value).
        #[arg(long)]
        bound: Option<u64>,
        /// Seed for the random splines that are expressed in the flow-up basis.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the checks on the bundled example corpus.
    Examples {
        /// Also write the corpus files into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

/// Run a parsed command line; errors go to `err` and become exit codes.
fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let opts = TrailOptions {
        max_trails: cli.max_trails,
        mode: match cli.trails {
            Trails::All => TrailMode::All,
            Trails::Maximal => TrailMode::Maximal,
        },
    };
    let result = match &cli.command {
        Command::Qhat {
            file,
            json,
            classical,
        } => commands::qhat_cmd(file, *classical, *json, &opts, out),
        Command::Certify {
            file,
            splines,
            json,
        } => commands::certify_cmd(file, splines, *json, &opts, out),
        Command::Flowup { file, json } => commands::flowup_cmd(file, *json, &opts, out),
        Command::Express {
            file,
            splines,
            target,
            json,
        } => commands::express_cmd(file, splines, target, *json, out),
        Command::Oracle {
            file,
            bound,
            seed,
            samples,
            json,
        } => {
            let args = OracleArgs {
                bound: *bound,
                seed: *seed,
                samples: *samples,
                json: *json,
            };
            commands::oracle_cmd(file, &args, &opts, out)
        }
        Command::Examples { export } => corpus::examples_cmd(export.as_deref(), &opts, out),
    };
    let _ = out.flush();
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(&cli, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code)
}
