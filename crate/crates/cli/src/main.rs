use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use commands::{Outcome, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "orbifold", version, about = "Fusion quadratic spaces of lattice orbifolds")]
pub struct Cli {
    /// Output format; json is canonical (sorted keys, no timings).
    #[arg(long, value_enum, global = true, default_value = "text")]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print timings and extra detail in text output.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank, determinant, discriminant group and short vectors of a lattice.
    Lattice {
        /// Lattice file, or a name such as leech, E8, sqrt2E8.
        input: String,
        /// Count vectors up to this norm.
        #[arg(long, default_value = "4")]
        max_norm: String,
    },
    /// Order, frame shape, rho, lift order, discriminant action and
    /// quantum dimension of an isometry.
    Isometry {
        /// Isometry file, or one of the class labels.
        input: String,
    },
    /// Fusion quadratic space of the coinvariant restriction.
    Fusion {
        /// Isometry file, or one of the class labels.
        input: String,
        /// Which admissible u to use when the lift doubles.
        #[arg(long, default_value_t = 0)]
        u: usize,
    },
    /// Random search for a monomial representative of a class.
    Search {
        label: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        budget: u64,
        /// Directory to save the representative into.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Checks that the fusion space is anti-isometric to D(L_g).
    Verify {
        /// Class labels, or "all".
        #[arg(required = true)]
        labels: Vec<String>,
        /// Seed for the fallback search when no representative is shipped.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        budget: u64,
        /// Classes verified in parallel.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Isomorphism test for two finite quadratic spaces.
    #[command(name = "fqs-isom")]
    FqsIsom {
        /// Space files; `file.json#/json/pointer` selects a sub-object.
        first: String,
        second: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli);
    let code = match outcome {
        Ok(Outcome { status, json, text }) => {
            let rendered = match cli.format {
                Format::Json => serde_json::to_string_pretty(&json).expect("json") + "\n",
                Format::Text => text,
            };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &rendered) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(3);
                    }
                    println!("wrote {}", path.display());
                }
                None => print!("{rendered}"),
            }
            status
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.status
        }
    };
    ExitCode::from(match code {
        Status::Pass => 0,
        Status::Negative => 1,
        Status::Usage => 2,
        Status::Internal => 3,
    })
}
