//! `tdp`: validate, decompose and classify tridiagonal pairs from JSON files.

mod commands;
mod io;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "tdp", version, about = "Exact certification of tridiagonal and Leonard pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the tridiagonal-pair axioms for a candidate {"A", "Astar"}
    Verify { path: String },
    /// Split decomposition and its identities
    Decompose { path: String },
    /// Decide whether a validated pair is a Leonard pair
    Detect { path: String },
    /// Switching element by solving, optionally checked against split sequences
    Switch {
        path: String,
        #[arg(long)]
        sequences: Option<String>,
    },
    /// Affine relation between two pairs sharing their eigenspaces
    Affine { path_p: String, path_q: String },
    /// Emit a Leonard pair in split form
    Generate {
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        params: Option<String>,
        #[arg(long, num_args = 3, value_names = ["FIELD", "D", "SEED"])]
        random: Option<Vec<String>>,
    },
    /// Search GF(p) for pairs of a given shape (JSON lines)
    Search {
        #[arg(long)]
        field: String,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        shape: String,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "randomized")]
        mode: String,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Verify { path } => commands::verify(&path),
        Command::Decompose { path } => commands::decompose(&path),
        Command::Detect { path } => commands::detect(&path),
        Command::Switch { path, sequences } => commands::switch(&path, sequences.as_deref()),
        Command::Affine { path_p, path_q } => commands::affine(&path_p, &path_q),
        Command::Generate { params, random } => commands::generate(params.as_deref(), random.as_deref()),
        Command::Search {
            field,
            dim,
            shape,
            budget,
            seed,
            mode,
            workers,
        } => commands::search(&commands::SearchArgs {
            field,
            dim,
            shape,
            budget,
            seed,
            mode,
            workers,
        }),
    };
    ExitCode::from(code)
}
