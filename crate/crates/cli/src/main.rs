use std::process::ExitCode;

use clap::{Parser, Subcommand};
use riesz_cli::commands::{
    self, GenerateArgs, LedgerArgs, PotentialArgs, ReplayArgs, StudyArgs, VerifyArgs,
};
use riesz_cli::io::to_json;
use riesz_cli::Result;

/// Low-energy point configurations near compact sets and their
/// equidistribution diagnostics.
#[derive(Parser)]
#[command(name = "riesz", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Fekete, Leja or random configuration
    Generate(GenerateArgs),
    /// Convergence table over a schedule of sizes
    Study(StudyArgs),
    /// Run the acceptance criteria
    Verify(VerifyArgs),
    /// Equilibrium and discrete potentials at one point
    Potential(PotentialArgs),
    /// Regenerate the oracle ledger
    Ledger(LedgerArgs),
    /// Rerun a recorded generate or study command
    Replay(ReplayArgs),
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(a) => {
            let energy = commands::generate(&a)?;
            println!("energy = {energy}");
        }
        Command::Study(a) => {
            let report = commands::study(&a)?;
            println!("wrote {} rows to {}", report.records.len(), a.out.display());
        }
        Command::Verify(a) => {
            commands::verify(&a)?;
        }
        Command::Potential(a) => print!("{}", to_json(&commands::potential(&a)?)),
        Command::Ledger(a) => {
            let rows = commands::ledger(&a)?;
            println!("wrote {rows} records to {}", a.out.display());
        }
        Command::Replay(a) => commands::replay(&a)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.into()
        }
    }
}
