mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Discrete Wigner functions on GF(2^n) phase space.
#[derive(Parser, Debug)]
#[command(name = "gfwigner", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the incidence structure of the phase space.
    Geometry(GeometryArgs),
    /// Wigner table of a state under a seeded or pinned quantum net.
    Wigner(WignerArgs),
    /// Exhaustive search for nets keeping interference off the interfering lines.
    OverlapSearch(OverlapArgs),
    /// Random-net averages of interference maxima and entropies.
    InterferenceStats(StatsArgs),
    /// Five-qubit code analysis in the code-adapted frame.
    Code5(Code5Args),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Cap the number of worker threads (results do not depend on it).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Run the module's invariant suite instead of the command.
    #[arg(long)]
    pub selftest: bool,
    /// Directory for output files; primary output goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct GeometryArgs {
    #[arg(long)]
    pub n: Option<u32>,
    /// Seed for the sampled checks used above n = 6.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct WignerArgs {
    #[arg(long)]
    pub n: Option<u32>,
    /// Seed of a random net; the all-plus net is used when neither this nor --net-file is given.
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON file with a serialized net.
    #[arg(long)]
    pub net_file: Option<PathBuf>,
    /// `comp:<bits>`, `bell`, or `file:<path>`.
    #[arg(long)]
    pub state: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct OverlapArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    /// Inclusive range `A..B`.
    #[arg(long)]
    pub n_range: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 50)]
    pub nets: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct Code5Args {
    /// The interference line p_I as five binary digits.
    #[arg(long, default_value = "10000")]
    pub p_index: String,
    #[command(flatten)]
    pub common: Common,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Geometry(a) => &a.common,
        Command::Wigner(a) => &a.common,
        Command::OverlapSearch(a) => &a.common,
        Command::InterferenceStats(a) => &a.common,
        Command::Code5(a) => &a.common,
    };
    if let Some(t) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure {t} threads: {e}");
            return ExitCode::from(commands::EXIT_USAGE);
        }
    }
    let result = match &cli.command {
        Command::Geometry(a) => commands::geometry(a),
        Command::Wigner(a) => commands::wigner(a),
        Command::OverlapSearch(a) => commands::overlap(a),
        Command::InterferenceStats(a) => commands::interference_stats(a),
        Command::Code5(a) => commands::code5(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
