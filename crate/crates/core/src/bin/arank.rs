use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use arank::generate::Mode;
use arank::instance::load_instance;
use arank::run::{run, Command, RunOptions};

/// Check conditions, build representations and evaluate layered conditionals
/// over a JSON instance file.
#[derive(Parser)]
#[command(name = "arank", version)]
struct Cli {
    /// check, represent, entail, ctd, extend or fuzz
    command: Command,
    /// Instance file; optional for `fuzz`.
    instance: Option<PathBuf>,
    /// Comma-separated condition ids, or `all`.
    #[arg(long, value_delimiter = ',')]
    conditions: Option<Vec<String>>,
    /// general, transitive, smooth or smooth-transitive
    #[arg(long, default_value = "general")]
    mode: Mode,
    /// Tree depth for the transitive construction; defaults to the point count plus one.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fuzz cases.
    #[arg(long, default_value_t = 100)]
    budget: u64,
    /// Print the report as one JSON document.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let instance = match cli.instance.as_deref().map(load_instance).transpose() {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        conditions: cli.conditions,
        mode: cli.mode,
        depth: cli.depth,
        seed: cli.seed,
        budget: cli.budget,
    };
    match run(cli.command, instance.as_ref(), &opts) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
            } else {
                println!("{report}");
                eprintln!("elapsed {:.3?}", report.elapsed);
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
