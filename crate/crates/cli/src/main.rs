//! `hopscan`: detect, summarize and fit multihop cross-chain arbitrage
//! paths, and generate synthetic datasets to test against.

mod config;
mod detect;
mod fit;
mod manifest;
mod oracle;
mod synth;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "hopscan", version, about = "Detect sequence-dependent multihop arbitrage paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find paths in one or more datasets and write reports.
    Detect(detect::DetectArgs),
    /// Fit power-law and exponential models to path counts per hop level.
    Fit(fit::FitArgs),
    /// Write a synthetic dataset and its ground truth.
    Synth(synth::SynthArgs),
    /// Compare the indexed search with the brute-force reference.
    OracleCheck(oracle::OracleArgs),
}

/// A failed run: exit code plus message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub const MISMATCH: u8 = 1;
    pub const CONFIG: u8 = 2;
    pub const INPUT: u8 = 3;

    pub fn config(message: impl Into<String>) -> Self {
        Failure { code: Self::CONFIG, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: Self::INPUT, message: message.into() }
    }

    /// Output could not be written.
    pub fn output(err: impl fmt::Display) -> Self {
        Failure { code: 1, message: format!("writing output: {err}") }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Detect(args) => detect::run(args),
        Command::Fit(args) => fit::run(args),
        Command::Synth(args) => synth::run(args),
        Command::OracleCheck(args) => oracle::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hopscan: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
