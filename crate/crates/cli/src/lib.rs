//! Batch frontend for the junction library: the per-partner table, λ curves, junction scans
//! and two-well feasibility, written as CSV or JSON.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

pub use args::{Cli, Command, CommonArgs, Curve, Format, RunConfig};
pub use error::CliError;

/// Run a parsed command line and return the bytes to write.
pub fn run(cli: Cli) -> Result<(RunConfig, Vec<u8>), CliError> {
    let (cfg, out) = match cli.command {
        Command::Table1 { common } => {
            let cfg = common.into_config(&[1.0331], Format::Csv)?;
            let out = with_pool(&cfg, || commands::table1::run(&cfg))?;
            (cfg, out)
        }
        Command::Curves { which, common } => {
            let cfg = common.into_config(&args::default_curve_grid(), Format::Csv)?;
            let out = with_pool(&cfg, || commands::curves::run(&cfg, which))?;
            (cfg, out)
        }
        Command::Scan { common } => {
            let cfg = common.into_config(&[1.2], Format::Json)?;
            let out = with_pool(&cfg, || commands::scan::run(&cfg))?;
            (cfg, out)
        }
        Command::Twowell { input, complement, common } => {
            let cfg = common.into_config(&[1.2], Format::Json)?;
            let out = commands::twowell::run(&cfg, &input, complement)?;
            (cfg, out)
        }
    };
    Ok((cfg, out))
}

fn with_pool<T: Send>(cfg: &RunConfig, f: impl FnOnce() -> Result<T, CliError> + Send) -> Result<T, CliError> {
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::config(format!("thread pool: {e}")))?
            .install(f),
        None => f(),
    }
}
