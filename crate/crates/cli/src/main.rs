use std::process::ExitCode;

use clap::Parser;
use ultragas_cli::args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap reports usage errors with status 2 and help/version with 0.
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
    }
    let outcome = ultragas_cli::run_with(&cli, |c| eprintln!("{}", c.line()));
    if let Some(err) = &outcome.report.error {
        eprintln!("error: {}", err.message);
    }
    let json = outcome.report.to_json();
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{json}"),
    }
    ExitCode::from(outcome.code as u8)
}
