mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flab_core::budget::Budget;

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "flab", version, about = "Exact computation in finite affine geometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Cap on enumerated objects.
    #[arg(long, global = true, env = "FLAB_BUDGET", default_value_t = Budget::DEFAULT.0)]
    budget: u64,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

impl Global {
    pub fn budget(&self) -> Budget {
        Budget(self.budget)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check whether a point set is (k, m)-Furstenberg and list witnesses.
    Verify(VerifyArgs),
    /// Smallest (k, m)-Furstenberg set size, exactly or as bounds.
    Search(SearchArgs),
    /// Every known bound for an instance.
    Bounds(BoundsArgs),
    /// Min-entropy computations and checks.
    #[command(subcommand)]
    Entropy(EntropyCommand),
    /// Polynomial-method certificates.
    #[command(subcommand)]
    Polycert(PolyCommand),
    /// Incidence counts and lemma audits.
    #[command(subcommand)]
    Incidence(IncidenceCommand),
    /// Run the built-in invariant suite.
    Selftest,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    m: u64,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct InstanceArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    m: u64,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Largest q^n searched exhaustively (at most 128).
    #[arg(long, default_value_t = 16)]
    exact_limit: u64,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Rational in (0, 1) for the large-m row.
    #[arg(long)]
    epsilon: Option<String>,
}

#[derive(Subcommand, Debug)]
enum EntropyCommand {
    /// Min-entropy of a weighted point file.
    Min {
        #[arg(long)]
        dist: PathBuf,
    },
    /// Best rank-k kernel projection.
    Project {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Exact check of the entropic projection inequality.
    Bound {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Greedy one-step-at-a-time projection against the direct best.
    Recursion {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Line-sum hypothesis and n-norm bound for an integer function.
    Norm {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        r: u64,
    },
    /// Convert between the set-size constant C and the entropy-loss constant D.
    Ab {
        #[arg(long, value_enum)]
        direction: AbArg,
        /// C = base^(-exponent) or D = exponent * log_q(base).
        #[arg(long)]
        base: u64,
        #[arg(long)]
        exponent: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Also express D in units of log_q(q) when possible.
        #[arg(long)]
        q: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum AbArg {
    Atob,
    Btoa,
}

#[derive(Subcommand, Debug)]
enum PolyCommand {
    /// Sum of multiplicities over a grid against deg * |U|^(n-1).
    Audit {
        #[arg(long)]
        poly: PathBuf,
        /// Grid coordinates as element indices, e.g. "0,1,2" (default: the whole field).
        #[arg(long)]
        subset: Option<String>,
    },
    /// Multiplicity of a polynomial at a point.
    Mult {
        #[arg(long)]
        poly: PathBuf,
        /// Point in file syntax, e.g. "1 | 0".
        #[arg(long)]
        point: String,
    },
    /// Interpolate a polynomial vanishing to the listed orders.
    Vanish {
        #[arg(long)]
        targets: PathBuf,
        #[arg(long)]
        degree: u32,
    },
    /// Counting inequality behind the n-norm bound.
    Keybound {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        r: u64,
        /// Evaluate at this m (a multiple of r).
        #[arg(long, conflicts_with = "max_m")]
        m: Option<u64>,
        /// Report the first multiple of r up to this value where it holds.
        #[arg(long)]
        max_m: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum IncidenceCommand {
    /// Incidence count against the eigenvalue bound.
    Haemers {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        flats: PathBuf,
    },
    /// Poor l-flat census.
    Poor {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        delta: String,
    },
    /// l-flats contained in a direction family of k-flats.
    Subflats {
        #[arg(long)]
        flats: PathBuf,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 16)]
        exact_limit: u64,
    },
    /// Rich (k-1)-flat census of a Furstenberg set.
    Becks {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        delta: String,
    },
    /// Lower bound on points covered by heavy flats.
    Heavy {
        #[arg(long)]
        delta: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
    },
    /// Heavy-flat bound on a concrete point set and flat family.
    HeavyAudit {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        flats: PathBuf,
        #[arg(long)]
        delta: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = std::panic::catch_unwind(|| commands::run(&cli.command, &cli.global));
    let result = match outcome {
        Ok(r) => r,
        Err(_) => Err(commands::CliError::Internal("unexpected internal failure".into())),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
