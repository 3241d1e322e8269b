//! Command-line front end for `slant-core`: builds truncations, runs the
//! spectral and algebraic diagnostics, and writes CSV/JSON artifacts with a
//! checksummed manifest.

pub mod bench;
pub mod commands;
pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

use crate::config::{Cli, RunConfig, Task, THREADS_ENV};
use crate::error::{CliError, CliResult};
use crate::report::{emit_figure_data, Panel};

/// Executes a validated configuration.
pub fn run(config: &RunConfig) -> CliResult<()> {
    match &config.task {
        Task::Reproduce => {
            experiments::reproduce(&config.out)?;
        }
        Task::Bench { kinds, dims, reps } => {
            let symbol = config.symbol.as_ref().map(|s| &s.symbol);
            let records = bench::bench(kinds, symbol, config.params, config.convention, dims, *reps, config.tol)?;
            let panel = match config.format {
                config::Format::Csv => Panel::new("bench.csv", bench::bench_csv(&records)),
                config::Format::Json => {
                    Panel::new("bench.json", serde_json::to_string_pretty(&records).expect("finite records") + "\n")
                }
            };
            let mut inputs = commands::inputs(config);
            if config.symbol.is_none() {
                inputs["symbol"] = "anti-exp:15 for slant-little-hankel, analytic-exp:15 otherwise".into();
            }
            emit_figure_data(&config.out, "bench", inputs, &[panel], Some(bench::environment()))?;
        }
        _ => {
            let panels = commands::execute(config)?;
            emit_figure_data(&config.out, config.subcommand(), commands::inputs(config), &panels, None)?;
        }
    }
    Ok(())
}

/// Sizes the global worker pool from `SLANT_THREADS`, if set.
pub fn configure_threads(value: Option<&str>) -> CliResult<()> {
    let Some(value) = value else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size worker pool: {e}")))
}

/// Parses `args`, runs, and returns the process exit code. Errors are
/// reported on stderr as one JSON record.
pub fn main_with_args<I, T>(args: I, threads: Option<&str>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let err = CliError::Usage(e.render().to_string().trim_end().to_owned());
            eprintln!("{}", err.record());
            return err.class().exit_code();
        }
    };
    let result = configure_threads(threads).and_then(|()| RunConfig::try_from(cli)).and_then(|c| run(&c));
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("{}", err.record());
            err.class().exit_code()
        }
    }
}
