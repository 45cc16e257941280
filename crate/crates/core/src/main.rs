use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use quasirep::harness::{run, CommandKind, RunConfig};

#[derive(Parser)]
#[command(name = "quasirep", version, about = "Build and verify embeddability representations of quasiorder pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the spaces for an input pair and emit them as a document
    Construct {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Apply the transitive closure to both input relations
        #[arg(long)]
        autoclose: bool,
    },
    /// Construct and check the three representation conditions
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        autoclose: bool,
    },
    /// Generate seeded random pairs, construct and verify each
    Random {
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        density1: f64,
        #[arg(long, default_value_t = 0.3)]
        density2: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the embeddability calculus against the brute-force oracle on
    /// random spaces
    OracleCheck {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        oracle_bound: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the diagram of the derived orders and component partitions
    Export {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        autoclose: bool,
    },
}

fn to_config(command: Command) -> RunConfig {
    match command {
        Command::Construct { input, out, dot, autoclose } => {
            let mut config = RunConfig::new(CommandKind::Construct);
            config.input = Some(input);
            config.out = out;
            config.dot = dot;
            config.autoclose = autoclose;
            config
        }
        Command::Verify { input, out, dot, autoclose } => {
            let mut config = RunConfig::new(CommandKind::Verify);
            config.input = Some(input);
            config.out = out;
            config.dot = dot;
            config.autoclose = autoclose;
            config
        }
        Command::Random { size, samples, seed, density1, density2, out } => {
            let mut config = RunConfig::new(CommandKind::Random);
            config.size = size;
            config.samples = samples;
            config.seed = seed;
            config.density1 = density1;
            config.density2 = density2;
            config.out = out;
            config
        }
        Command::OracleCheck { samples, seed, oracle_bound, out } => {
            let mut config = RunConfig::new(CommandKind::OracleCheck);
            config.samples = samples;
            config.seed = seed;
            config.oracle_bound = oracle_bound;
            config.out = out;
            config
        }
        Command::Export { input, dot, autoclose } => {
            let mut config = RunConfig::new(CommandKind::Export);
            config.input = Some(input);
            config.dot = dot;
            config.autoclose = autoclose;
            config
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(&to_config(cli.command)) as u8)
}
