use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kdecomp::batch::{run_batch, run_file, BatchInput};
use kdecomp::{Engine, Options};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    Json,
    Markdown,
}

/// Exact verification of equivariant K-theory decompositions.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    emit: Emit,
    /// Invert this N instead of the computed one; must be a multiple of it.
    #[arg(long, global = true, value_name = "N")]
    lambda_override: Option<u64>,
    /// Largest group order to enumerate.
    #[arg(long, global = true, default_value_t = 512)]
    max_order: u64,
    /// Instances to run in parallel.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one instance file.
    Run { file: PathBuf },
    /// Run every instance in the given files and directories.
    Batch { paths: Vec<PathBuf> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let engine = Engine::new(Options { max_order: cli.max_order, lambda_override: cli.lambda_override });
    let code = match cli.command {
        Command::Run { file } => {
            let entry = run_file(&engine, &file);
            match (&entry.report, &entry.error) {
                (Some(r), _) => match cli.emit {
                    Emit::Json => println!("{}", r.to_json()),
                    Emit::Markdown => print!("{}", r.to_markdown()),
                },
                (None, Some(e)) => eprintln!("error: {e}"),
                (None, None) => {}
            }
            entry.exit_code
        }
        Command::Batch { paths } => match BatchInput::collect(&paths) {
            Ok(input) => {
                let agg = run_batch(&engine, &input, cli.jobs);
                match cli.emit {
                    Emit::Json => println!("{}", agg.to_json()),
                    Emit::Markdown => print!("{}", agg.to_markdown()),
                }
                agg.exit_code
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
    };
    ExitCode::from(code as u8)
}
