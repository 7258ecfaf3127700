use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use coe_cli::{render, run, RunConfig};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let start = Instant::now();
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = match render(&cfg, &outcome, start.elapsed().as_millis()) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
            if cfg.format == coe_cli::Format::Json {
                for line in &outcome.summary {
                    println!("{line}");
                }
            }
        }
        None => print!("{text}"),
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
