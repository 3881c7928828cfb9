mod args;
mod commands;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    let start = Instant::now();
    match commands::run(&cli) {
        Ok(mut report) => {
            report.wall_ms = if cli.no_wall_time {
                0
            } else {
                start.elapsed().as_millis() as u64
            };
            let text = match cli.output {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
            };
            // A closed pipe (e.g. `| head`) is not an error of ours.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if report.all_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("polysieve: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
