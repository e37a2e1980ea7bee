mod args;
mod cache;
mod commands;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use error::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.global.threads {
        builder = builder.num_threads(n);
    }
    let result = match builder.build() {
        Ok(pool) => pool.install(|| commands::run(&cli.global, &cli.command)),
        Err(e) => Err(CliError::Usage(format!("thread pool: {e}"))),
    };
    let mut stdout = std::io::stdout().lock();
    match result {
        Ok(out) => {
            if stdout.write_all(out.stdout.as_bytes()).is_err() {
                return ExitCode::from(5);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            let _ = stdout.write_all(e.to_json().as_bytes());
            eprintln!("fgcount: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
