//! `chroma`: monochromatic subgraph statistics from the command line.

mod commands;
mod error;
mod output;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

/// Seed used when neither `--seed` nor `CHROMA_SEED` is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "chroma", version, about = "Monochromatic copies of a pattern under random vertex colorings")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Leave out run metadata (version, timing) so reports are reproducible
    /// byte for byte.
    #[arg(long, global = true)]
    pub no_meta: bool,
    /// Worker threads; defaults to the available cores. Results do not
    /// depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Random seed for generators and simulations.
    #[arg(long, env = "CHROMA_SEED", default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
    /// Treat edge-list tokens as arbitrary labels and report the mapping.
    #[arg(long, global = true)]
    pub labels: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct PatternHost {
    /// Pattern name (k3, k_5, k1_3, c4, path_4, diamond, tadpole, bowtie,
    /// k4-pendant, wheel_5, ...) or an edge-list file.
    #[arg(long)]
    pub pattern: String,
    /// Host edge-list file or generator spec (wheel:100, er:500:0.1:7,
    /// counterexample:c4:100:1, ...).
    #[arg(long)]
    pub graph: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Copies, induced copies, injective homomorphisms and automorphisms.
    Count(PatternHost),
    /// Join catalog and supergraph classes of a pattern.
    Joins {
        #[arg(long)]
        pattern: String,
    },
    /// Exact mean and variance decomposition of T.
    Moments {
        #[command(flatten)]
        io: PatternHost,
        #[arg(long, short = 'c')]
        colors: u64,
    },
    /// Exact law of T by enumerating every coloring.
    ExactDist {
        #[command(flatten)]
        io: PatternHost,
        #[arg(long, short = 'c')]
        colors: u64,
    },
    /// Density exponents and the Erdős–Rényi regime for p = kappa n^-alpha.
    Classify {
        #[arg(long)]
        pattern: String,
        /// Exponent as "a/b".
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
    },
    /// Poisson-mixture limit: dense G(n, p) or a finite host plug-in.
    Limit {
        #[arg(long)]
        pattern: String,
        /// Fixed edge probability (dense mixture).
        #[arg(long, conflicts_with = "graph")]
        p: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Host for the finite plug-in mixture.
        #[arg(long, requires = "colors")]
        graph: Option<String>,
        #[arg(long, short = 'c')]
        colors: Option<u64>,
        /// Largest value tabulated in the pmf.
        #[arg(long, default_value_t = 30)]
        upto: u64,
    },
    /// Monte Carlo histogram of T, optionally compared with a limit law.
    Simulate(SimulateArgs),
    /// Second-moment diagnostics: mean versus variance and join ratios.
    Check {
        #[command(flatten)]
        io: PatternHost,
        #[arg(long, short = 'c')]
        colors: u64,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
    },
    /// Generalized birthday problem.
    Birthday(BirthdayArgs),
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub pattern: String,
    /// Fixed host; omit and give --n for fresh G(n, p) hosts.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long, short = 'c')]
    pub colors: Option<u32>,
    /// Vertex count of the random hosts.
    #[arg(long, conflicts_with = "graph")]
    pub n: Option<u64>,
    #[arg(long, default_value = "0")]
    pub alpha: String,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 10_000)]
    pub replicates: u64,
    /// Reference law: poisson:<rate>, mixture:<k>=<rate>,..., realized
    /// (Poisson at the realized random-host rate) or exact.
    #[arg(long)]
    pub compare: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Complete,
    Multipartite,
    Graph,
}

#[derive(Args, Debug)]
pub struct BirthdayArgs {
    #[arg(long, value_enum, default_value_t = ShapeArg::Complete)]
    pub shape: ShapeArg,
    /// Clique size.
    #[arg(long, short = 's')]
    pub s: usize,
    /// Number of days.
    #[arg(long, short = 'c')]
    pub c: u64,
    /// Group size (total for complete, per type for multipartite).
    #[arg(long, conflicts_with = "target")]
    pub n: Option<u64>,
    /// Find the smallest group reaching this match probability.
    #[arg(long)]
    pub target: Option<f64>,
    /// Number of types for multipartite shapes; defaults to --s.
    #[arg(long)]
    pub types: Option<u64>,
    /// Friendship network for --shape graph.
    #[arg(long)]
    pub graph: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli.global, cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}


impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
