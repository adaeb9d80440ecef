use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use lbfe::{parse_config, run_command, Command};

/// Low-bandwidth evaluation of linear functions on Reed-Solomon data.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    /// Run configuration (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    command: Command,
    /// Output directory; defaults to the config's `out` key, then `.`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's `seed` key.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.config) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    let config = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    let out = args.out.or_else(|| config.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    match run_command(args.command, &config, &out, args.seed) {
        Ok(report) => {
            println!("{}", report.summary);
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
