use std::process::ExitCode;

use affectframe_cli::{execute, Cli, Status};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    match execute(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            println!("outputs: {}", outcome.out_dir.display());
            ExitCode::from(outcome.status() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Status::InvalidInput as u8)
        }
    }
}
