use std::process::ExitCode;

use clap::Parser;
use gbseed::{run, RunConfig};

/// Desk-scale experiments around the circle method for Goldbach numbers
/// with restricted digits.
#[derive(Parser)]
#[command(name = "gbseed", version)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let doc = serde_json::json!({
                "error": { "kind": "usage", "message": e.to_string().trim_end() },
                "exit_code": 1,
            });
            eprintln!("{doc}");
            return ExitCode::from(1);
        }
    };
    ExitCode::from(run(&cli.config) as u8)
}
