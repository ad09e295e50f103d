//! `sheets`: nilpotent orbits, Slodowy slices and K-sheets for the type A
//! symmetric pairs, from the command line.
//!
//! Exit codes: 0 on success, 1 for invalid input, 2 when an internal
//! consistency check fails.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "sheets", version, about = "Sheets and nilpotent K-orbits for gl_N with involutions of type AI, AII, AIII")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the standard triple (e, h, f) of the partition.
    Triple(Common),
    /// Evaluate ε(e + t) and check slice, conjugacy and p-membership.
    Epsilon(Common),
    /// List the admissible ab-diagrams (nilpotent K-orbits) of the partition.
    Orbits(Common),
    /// Split S_G ∩ p into K-sheets.
    Components(Common),
    /// Orbit, slice and intersection dimensions.
    Dims(Common),
    /// Run the randomized property suite on every partition up to a size.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Weakly decreasing parts, e.g. 4,3,1.
    #[arg(long)]
    pub partition: String,
    /// Symmetric pair type.
    #[arg(long, value_parser = ["AI", "AII", "AIII", "ai", "aii", "aiii"])]
    pub pair: Option<String>,
    /// AIII labelling of the rows, one of a/b per part, e.g. aab.
    #[arg(long)]
    pub phi: Option<String>,
    /// AIII signature N_a,N_b.
    #[arg(long)]
    pub signature: Option<String>,
    /// Torus coordinates x_1,...,x_{λ_1}; rationals like -1/2 are accepted.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest N swept.
    #[arg(long, default_value_t = 6)]
    pub max_size: usize,
    /// Random points per partition and property.
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    pub output: Output,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Triple(a) => commands::triple(&a),
        Command::Epsilon(a) => commands::epsilon(&a),
        Command::Orbits(a) => commands::orbits(&a),
        Command::Components(a) => commands::components(&a),
        Command::Dims(a) => commands::dims(&a),
        Command::Verify(a) => commands::verify(&a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(commands::Failure::Check(out)) => {
            print!("{out}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 2 } else { 1 })
        }
    }
}
