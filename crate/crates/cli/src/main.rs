mod batch;
mod cert;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kxcore::Field;

use crate::cert::error_line;
use crate::commands::{CliResult, Outcome, Status};

/// Exact core-nilpotent and Drazin analysis with JSON certificates.
#[derive(Parser)]
#[command(name = "kxcert", version)]
struct Cli {
    /// Base field, `Q` or `Fp:<p>`; must agree with file headers.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Index of a square matrix.
    Index { file: PathBuf },
    /// Core-nilpotent decomposition and Drazin inverse.
    Cn { file: PathBuf },
    /// Drazin inverse only.
    Drazin { file: PathBuf },
    /// Check a candidate Drazin inverse; exits 3 if any identity fails.
    Verify {
        file: PathBuf,
        candidate: PathBuf,
        /// Index to test against; computed from the matrix when omitted.
        #[arg(long)]
        index: Option<usize>,
    },
    #[command(subcommand)]
    Module(ModuleCommand),
    #[command(subcommand)]
    Op(OpCommand),
    /// Run every `.mat`, `.mod` and `.op` file in a directory.
    Batch {
        dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum ModuleCommand {
    /// Localization at the powers of x.
    Analyze { file: PathBuf },
}

#[derive(Subcommand)]
enum OpCommand {
    /// Bounded witness searches on a sample of vectors.
    Check {
        operator: PathBuf,
        vectors: PathBuf,
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
}

fn parse_field(s: &str) -> Result<Field, String> {
    Field::parse_tokens(&[s]).map_err(|e| e.to_string())
}

fn emit(result: CliResult<Outcome>) -> i32 {
    match result {
        Ok(outcome) => {
            print!("{}", outcome.cert.render());
            if let Status::BudgetExhausted(reason) = &outcome.status {
                eprintln!("{}", error_line("budget-exhausted", reason));
            }
            outcome.status.exit_code()
        }
        Err(e) => {
            eprintln!("{}", error_line(e.kind(), &e.to_string()));
            e.exit_code()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let field = cli.field;
    let code = match cli.command {
        Command::Index { file } => emit(commands::cmd_index(&file, field)),
        Command::Cn { file } => emit(commands::cmd_cn(&file, field)),
        Command::Drazin { file } => emit(commands::cmd_drazin(&file, field)),
        Command::Verify {
            file,
            candidate,
            index,
        } => emit(commands::cmd_verify(&file, &candidate, index, field)),
        Command::Module(ModuleCommand::Analyze { file }) => {
            emit(commands::cmd_module_analyze(&file, field))
        }
        Command::Op(OpCommand::Check {
            operator,
            vectors,
            budget,
        }) => emit(commands::cmd_op_check(&operator, &vectors, budget, field)),
        Command::Batch { dir, jobs, budget } => match batch::run(&dir, jobs, budget, field) {
            Ok(report) => {
                let mut out =
                    serde_json::to_string_pretty(&report.json).expect("batch report is JSON");
                out.push('\n');
                print!("{out}");
                report.exit_code
            }
            Err(e) => {
                eprintln!("{}", error_line(e.kind(), &e.to_string()));
                e.exit_code()
            }
        },
    };
    ExitCode::from(code as u8)
}
