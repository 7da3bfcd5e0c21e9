//! `csmnn`: segmentation, synthetic benchmarks and evaluation from the command line.
//!
//! Exit status is 0 on success, 1 when arguments or input contents are
//! invalid and 2 when a file cannot be read or written. Outputs are written
//! to a temporary file and renamed into place, so a failed run leaves no
//! partial files behind.

mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::{
    BenchmarkArgs, EvaluateArgs, GenerateArgs, GridArgs, SegmentArgs, ServeArgs, SweepArgs,
};

#[derive(Parser, Debug)]
#[command(
    name = "csmnn",
    version,
    about = "Coincidence-similarity multiset neuron image segmentation"
)]
struct Cli {
    /// Worker threads for data-parallel work (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train on prototype points and write the segmentation mask.
    Segment(SegmentArgs),
    /// Generate a synthetic image, gold standard and prototype set.
    Generate(GenerateArgs),
    /// Balanced accuracy of predicted masks against gold standards.
    Evaluate(EvaluateArgs),
    /// Vary one parameter around a base configuration.
    Sweep(SweepArgs),
    /// Exhaustive search for the configuration with the best balanced accuracy.
    Gridsearch(GridArgs),
    /// Generate, segment and score a batch of synthetic samples.
    Benchmark(BenchmarkArgs),
    /// Run the HTTP service for the interactive UI.
    Serve(ServeArgs),
}

/// A failure and the exit status it maps to.
#[derive(Debug)]
pub enum Failure {
    Invalid(anyhow::Error),
    Io(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Io(_) => 2,
        }
    }
}

impl From<csmnn::Error> for Failure {
    fn from(e: csmnn::Error) -> Self {
        if e.is_io() {
            Failure::Io(e.into())
        } else {
            Failure::Invalid(e.into())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Segment(a) => commands::segment(a),
        Command::Generate(a) => commands::generate(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Gridsearch(a) => commands::gridsearch(a),
        Command::Benchmark(a) => commands::benchmark(a),
        Command::Serve(a) => commands::serve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Invalid(e) | Failure::Io(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
