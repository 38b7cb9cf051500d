mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Parser)]
#[command(name = "colpack", version, about = "Randomized rounding for column-sparse packing integer programs")]
struct Cli {
    /// Emit versioned JSON instead of text tables.
    #[arg(long, global = true)]
    json: bool,
    /// Base seed for every randomized step. Required when CI_DETERMINISTIC=1.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for Monte Carlo trials (default: logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance as JSON.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        /// Output file (default: stdout).
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Solve the natural or strengthened LP relaxation.
    SolveLp {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "natural")]
        relaxation: RelaxationArg,
    },
    /// Solve the integer program exactly.
    SolveExact {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
    },
    /// Sample-and-alter rounding with per-item retention statistics.
    Round(RoundArgs),
    /// Continuous greedy and rounding for a monotone submodular objective.
    Submod(SubmodArgs),
    /// LP values, exact optimum and integrality gaps for a fixture family.
    Gap {
        #[command(subcommand)]
        family: GapFamily,
    },
    /// Run the invariant suites.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
pub enum GenFamily {
    /// Cyclic instance with strengthened-LP gap close to 2k - 1.
    Gap2k {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Dense instance whose columns have small l1 norm but only one item fits.
    L1bad {
        #[arg(long)]
        n: usize,
    },
    /// All (floor(B)+1)-subsets as constraints of capacity B.
    #[command(name = "gapB", alias = "gapb")]
    GapB {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: f64,
    },
    /// Single constraint on which deleting every item of a violated row fails.
    Strawman {
        #[arg(long)]
        m: usize,
    },
    /// Random k-column-sparse instance.
    Random(RandomArgs),
}

#[derive(Args)]
pub struct RandomArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub k: usize,
    /// Fraction of big sizes (above one half); uniform sizes when omitted.
    #[arg(long)]
    pub big_fraction: Option<f64>,
    /// Probability of keeping each of an item's k rows.
    #[arg(long, default_value_t = 1.0)]
    pub density: f64,
    /// Weights drawn uniformly from LO,HI; unit weights when omitted.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    pub weights: Option<Vec<f64>>,
    /// Rescale to unit maximum size per row with every capacity set to B.
    #[arg(long)]
    pub slack: Option<f64>,
}

#[derive(Subcommand)]
pub enum GapFamily {
    Gap2k {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6")]
        k: Vec<usize>,
        #[arg(long)]
        eps: Option<f64>,
    },
    L1bad {
        #[arg(long, value_delimiter = ',', default_value = "10")]
        n: Vec<usize>,
    },
    #[command(name = "gapB", alias = "gapb")]
    GapB {
        #[arg(long, value_delimiter = ',', default_value = "8")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 2.0)]
        b: f64,
    },
    Strawman {
        #[arg(long, value_delimiter = ',', default_value = "10,20")]
        m: Vec<usize>,
    },
}

#[derive(Args)]
pub struct RoundArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value = "strong")]
    pub algo: AlgoArg,
    /// Sampling parameter alpha (simple and strong only).
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Fractional point as JSON (an array, or an object with an `x` array);
    /// defaults to the LP optimum of the matching relaxation.
    #[arg(long)]
    pub x: Option<PathBuf>,
}

#[derive(Args)]
pub struct SubmodArgs {
    pub instance: PathBuf,
    pub oracle: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Continuous greedy steps (default: max(100, 10n)).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Gradient samples per step; exact gradient when omitted and n <= 20.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, value_enum, default_value = "strengthened")]
    pub relaxation: RelaxationArg,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Suites to run (default: all).
    #[arg(long = "suite", value_name = "NAME")]
    pub suites: Vec<String>,
    #[arg(long, default_value_t = 20_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 10)]
    pub instances: usize,
    #[arg(long, default_value_t = 200)]
    pub systems: usize,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum RelaxationArg {
    Natural,
    Strengthened,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Auto,
    Exhaustive,
    BranchAndBound,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Simple,
    Strong,
    LargeB,
    Strawman,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let ctx = commands::Context {
        json: cli.json,
        seed: cli.seed,
        deterministic: std::env::var("CI_DETERMINISTIC").is_ok_and(|v| v == "1"),
    };
    let result = match cli.command {
        Command::Gen { family, output } => commands::gen(&ctx, family, output),
        Command::SolveLp { instance, relaxation } => commands::solve_lp(&ctx, &instance, relaxation),
        Command::SolveExact { instance, mode } => commands::solve_exact(&ctx, &instance, mode),
        Command::Round(args) => commands::round(&ctx, &args),
        Command::Submod(args) => commands::submod(&ctx, &args),
        Command::Gap { family } => commands::gap(&ctx, family),
        Command::Verify(args) => commands::verify(&ctx, &args),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(CliError::Failed(text)) => {
            print!("{text}");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
