//! `rimetric`: rearrangements, s-gradients and measure diagnostics from the
//! command line. Exit code 0 when every asserted check passes, 1 when a
//! check fails, 2 on usage or I/O errors.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod io;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use commands::{
    ConverseArgs, EmbeddingArgs, GalleryCommand, GenSpaceCommand, GradientCommand, OscillationArgs,
    Outcome, RearrangeArgs, SpaceCheckArgs,
};

#[derive(Debug, Parser)]
#[command(name = "rimetric", version, about = "Rearrangements and Hajlasz gradients on metric measure spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Measure lower growth, almost continuity and doubling of a space.
    SpaceCheck(SpaceCheckArgs),
    /// Tabulate f*, f** and f** - f* of a function.
    Rearrange(RearrangeArgs),
    /// Check, build or minimise s-gradients.
    #[command(subcommand)]
    Gradient(GradientCommand),
    /// Test the oscillation inequality on a log grid of t.
    VerifyOscillation(OscillationArgs),
    /// Probe the lower-growth bound forced by the oscillation inequality.
    VerifyConverse(ConverseArgs),
    /// Evaluate the embedding implied by the oscillation inequality.
    VerifyEmbedding(EmbeddingArgs),
    /// Worked examples.
    #[command(subcommand)]
    Gallery(GalleryCommand),
    /// Write a generated space file.
    #[command(subcommand)]
    GenSpace(GenSpaceCommand),
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("RL_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("RL_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome> {
    configure_threads()?;
    match &cli.command {
        Command::SpaceCheck(args) => commands::space_check(args),
        Command::Rearrange(args) => commands::rearrange(args),
        Command::Gradient(cmd) => commands::gradient(cmd),
        Command::VerifyOscillation(args) => commands::verify_oscillation(args),
        Command::VerifyConverse(args) => commands::verify_converse(args),
        Command::VerifyEmbedding(args) => commands::verify_embedding(args),
        Command::Gallery(cmd) => commands::gallery(cmd),
        Command::GenSpace(cmd) => commands::gen_space(cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(Outcome { passed, summary }) => {
            println!("{}: {summary}", if passed { "PASS" } else { "FAIL" });
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
