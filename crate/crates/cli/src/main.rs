//! `ringconv` — encode, corrupt, decode and evaluate convolutional codes
//! over Z/p^r given by state-space representations.

mod commands;
mod files;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use commands::CorruptModel;

#[derive(Parser)]
#[command(
    name = "ringconv",
    version,
    about = "Convolutional codes over Z/p^r: state-space encoding, windowed decoding, channel simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the decoder hypotheses for a system and report its window
    /// parameters (distances, weight budget, inner capabilities)
    Params {
        /// System file (p, r, dimensions, matrices A B C D)
        #[arg(long)]
        system: PathBuf,
        /// Window length T
        #[arg(long)]
        window: usize,
        /// Commit depth Theta
        #[arg(long)]
        theta: usize,
    },
    /// Encode a message file into a (y, u) symbol sequence
    Encode {
        #[arg(long)]
        system: PathBuf,
        /// Message file with k integers per line
        #[arg(long)]
        message: PathBuf,
        /// Append steering steps so the final state is zero
        #[arg(long)]
        terminate: bool,
        /// Output sequence file
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Corrupt a sequence with a deterministic channel model
    #[command(group(
        ArgGroup::new("model")
            .required(true)
            .args(["epsilon", "per_window_weight", "pattern_file"]),
    ))]
    Corrupt {
        #[arg(long)]
        system: PathBuf,
        /// Clean input sequence
        #[arg(long)]
        input: PathBuf,
        /// Corrupted output sequence
        #[arg(long, short)]
        output: PathBuf,
        /// Ground-truth pattern file written for scoring
        #[arg(long)]
        pattern_out: PathBuf,
        /// Independent per-component corruption probability
        #[arg(long)]
        epsilon: Option<f64>,
        /// Exactly this many component errors per disjoint window
        #[arg(long, requires = "window")]
        per_window_weight: Option<usize>,
        /// Window length for --per-window-weight
        #[arg(long)]
        window: Option<usize>,
        /// Explicit pattern file (lines of `t component delta`)
        #[arg(long)]
        pattern_file: Option<PathBuf>,
        /// Channel seed (falls back to RINGCONV_SEED, then 0)
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decode a received sequence with the sliding-window decoder
    Decode {
        #[arg(long)]
        system: PathBuf,
        /// Received sequence file
        #[arg(long)]
        input: PathBuf,
        /// Window length T
        #[arg(long)]
        window: usize,
        /// Commit depth Theta
        #[arg(long)]
        theta: usize,
        /// Corrected output sequence
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Run a seeded Monte-Carlo campaign and write CSV reports
    Simulate {
        #[arg(long)]
        system: PathBuf,
        /// Window length T
        #[arg(long)]
        window: usize,
        /// Commit depth Theta
        #[arg(long)]
        theta: usize,
        /// Per-component corruption probability
        #[arg(long)]
        epsilon: f64,
        /// Number of trials
        #[arg(long)]
        trials: u64,
        /// Channel seed (falls back to RINGCONV_SEED, then 0)
        #[arg(long)]
        seed: Option<u64>,
        /// Message length per trial (default 3 T)
        #[arg(long)]
        msg_len: Option<usize>,
        /// Detail CSV path; the summary lands next to it as *.summary.csv
        #[arg(long)]
        csv: PathBuf,
    },
    /// Run the bundled verification suite
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Params {
            system,
            window,
            theta,
        } => commands::cmd_params(&system, window, theta),
        Command::Encode {
            system,
            message,
            terminate,
            output,
        } => commands::cmd_encode(&system, &message, terminate, &output),
        Command::Corrupt {
            system,
            input,
            output,
            pattern_out,
            epsilon,
            per_window_weight,
            window,
            pattern_file,
            seed,
        } => commands::cmd_corrupt(
            &system,
            &input,
            &output,
            &pattern_out,
            CorruptModel {
                epsilon,
                per_window_weight,
                window,
                pattern_file,
            },
            seed,
        ),
        Command::Decode {
            system,
            input,
            window,
            theta,
            output,
        } => commands::cmd_decode(&system, &input, window, theta, &output),
        Command::Simulate {
            system,
            window,
            theta,
            epsilon,
            trials,
            seed,
            msg_len,
            csv,
        } => commands::cmd_simulate(
            &system, window, theta, epsilon, trials, seed, msg_len, &csv,
        ),
        Command::Selftest => commands::cmd_selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
