use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use contlogic::cli::{is_failure, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(cli);
    eprintln!("contlogic: {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(records) => {
            let mut out = std::io::stdout().lock();
            for r in &records {
                // a closed pipe is not an error of the computation
                if writeln!(out, "{r}").is_err() {
                    break;
                }
            }
            if records.iter().any(is_failure) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
