//! `friendrec`: generate data, suggest friends, benchmark and sweep.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "friendrec", version, about = "Friend suggestion engine and benchmark harness")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Override one configuration key (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for cohort sampling and data generation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Split timestamp: edges at or before it form the snapshot.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub boundary: Option<i64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic dataset.
    Generate {
        /// Output directory.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Print ranked suggestions for one or more users.
    Suggest {
        /// Dataset directory.
        #[arg(long, value_name = "DIR")]
        data: PathBuf,
        /// Target user id; repeat or separate with commas.
        #[arg(long = "user", required = true, value_delimiter = ',')]
        users: Vec<u32>,
        /// proposed, current, adamic_adar, common_neighbors or plain_rwr.
        #[arg(long, default_value = "proposed")]
        approach: String,
        /// Suggestions printed per user.
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Evaluate approaches on degree cohorts and write a CSV report.
    Benchmark {
        /// Dataset directory.
        #[arg(long, value_name = "DIR")]
        data: PathBuf,
        /// Output CSV file.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Comma-separated approaches (default: all).
        #[arg(long, value_delimiter = ',')]
        approaches: Vec<String>,
    },
    /// Grid-search the friends/schools/groups weights by mean P@10.
    Sweep {
        /// Dataset directory.
        #[arg(long, value_name = "DIR")]
        data: PathBuf,
        /// Output CSV file.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Grid step (default: the `sweep_step` setting).
        #[arg(long)]
        step: Option<f64>,
    },
    /// Check dataset files and report problems.
    Validate {
        /// Dataset directory.
        #[arg(long, value_name = "DIR")]
        data: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status())
        }
    }
}
