//! The `repeval` command line: synthesize data, estimate loss-data curves,
//! compute measures and render reports. Each run writes a manifest next to
//! its outputs.

pub mod args;
mod commands;
pub mod config;
mod manifest;
pub mod spec;

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::Context as _;
use clap::Parser;
use repeval_core::data::DataError;
use repeval_core::measures::MeasureError;

use args::{Cli, Command};
pub use commands::{ColumnResult, MeasuresFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
        }
    };
    let recorded = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match execute(cli, recorded) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

/// Exit code for an error: budget refusals and I/O failures get their own.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.is::<std::io::Error>() || matches!(cause.downcast_ref(), Some(DataError::Io(_))) {
            return EXIT_IO;
        }
        if matches!(
            cause.downcast_ref(),
            Some(MeasureError::BudgetExceeded { .. })
        ) {
            return EXIT_BUDGET;
        }
    }
    EXIT_VALIDATION
}

pub fn execute(cli: Cli, argv: Vec<String>) -> anyhow::Result<()> {
    let cfg = config::load(cli.common.config.as_deref())?;
    let workers = cli.common.workers.or(cfg.run.workers).unwrap_or(0);
    let ctx = commands::RunContext {
        out: cli
            .common
            .out
            .clone()
            .or_else(|| cfg.run.out.clone())
            .unwrap_or_else(|| PathBuf::from(".")),
        seed: cli.common.seed.or(cfg.run.seed).unwrap_or(0),
        cfg,
        argv,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("starting worker pool")?;
    pool.install(|| match cli.command {
        Command::Synth(a) => commands::synth(&ctx, a),
        Command::Curve(a) => commands::curve(&ctx, a),
        Command::Measure(a) => commands::measure(&ctx, a),
        Command::EscRefine(a) => commands::esc_refine(&ctx, a),
        Command::Report(a) => commands::report(&ctx, a),
    })
}
