use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use junctions_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::config(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code);
        }
    };
    let result = run(cli).and_then(|(cfg, bytes)| match &cfg.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| CliError::config(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(&bytes).map_err(|e| CliError::config(format!("stdout: {e}"))),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code)
        }
    }
}
