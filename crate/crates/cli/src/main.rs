mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable overriding the default search node budget.
pub const BUDGET_ENV: &str = "STS_NODE_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "sts", version, about = "Steiner triple system constructions and checks")]
pub struct Cli {
    /// Node budget for automorphism and isomorphism searches (overrides STS_NODE_BUDGET).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a system and write it with a name sidecar and a manifest.
    Construct {
        #[command(subcommand)]
        kind: Construct,
        /// Output path; the sidecar and manifest are written next to it.
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
    },
    /// Check a file; exits 1 when any check fails.
    Verify(VerifyArgs),
    /// Print the automorphism group of a system.
    Aut { path: PathBuf },
    /// Decide isomorphism of two systems; exits 1 when they are not isomorphic.
    Iso { first: PathBuf, second: PathBuf },
    /// Classify every Fano subsystem of a product built from the given sizes.
    ClassifyFano(MooreArgs),
    /// Find parameters realizing an order, or check a certificate.
    SolveParams(SolveArgs),
    /// Embed a partial system into a Steiner system.
    EmbedPstss(EmbedArgs),
    /// Search for an STS with trivial automorphism group.
    RigidSearch {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        attempts: usize,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Re-run the command recorded in a manifest and compare output digests.
    Replay { manifest: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// Points and lines of PG(dim, 2).
    Pg {
        #[arg(long)]
        dim: u32,
    },
    Bose {
        #[arg(long)]
        n: usize,
    },
    Skolem {
        #[arg(long)]
        n: usize,
    },
    /// Bose or Skolem, whichever applies.
    Standard {
        #[arg(long)]
        n: usize,
    },
    /// The affine plane AG(2, 3).
    Ag,
    /// `2Y + 1` from the system in `--input`.
    Double {
        #[arg(long)]
        input: PathBuf,
    },
    /// Direct product of two systems.
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// The product of `Y ⊇ X` with `V` over a cyclic labeling of `Y - X`.
    Moore {
        #[command(flatten)]
        sizes: MooreArgs,
        /// Images of the residues `0..m` under a permutation σ, comma separated.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// A system in which every pair lies in a Fano subsystem, from a Fano
    /// plane `--input` and a design given by the blocks of `--design`.
    Paired {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        design: PathBuf,
    },
    /// A random STS by hill climbing (uses `--seed`).
    Random {
        #[arg(long)]
        n: usize,
    },
    /// The rigid gadget with parameter n, as a partial system.
    Gadget {
        #[arg(long)]
        n: usize,
    },
    /// The cyclic partial system with t triples.
    Cyclic {
        #[arg(long)]
        t: usize,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Check a complete Steiner system.
    #[arg(long, conflicts_with = "pstss", required_unless_present = "pstss")]
    pub sts: Option<PathBuf>,
    /// Check a partial system.
    #[arg(long)]
    pub pstss: Option<PathBuf>,
    /// Every pair of triples through this point spans a Fano plane.
    #[arg(long)]
    pub pointed: Option<u32>,
    /// Every pair of Fano planes through these two points spans a PG(3, 2).
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    pub two_pointed: Option<Vec<u32>>,
    /// Every pair of points lies in at least two Fano planes.
    #[arg(long)]
    pub paired: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Labeling {
    /// Anchor triples as required, generator condition recorded but not enforced.
    Anchored,
    /// Every labeling condition, including the generator condition.
    Strict,
    /// Residues in increasing point order.
    Ascending,
}

#[derive(Args, Debug)]
pub struct MooreArgs {
    #[arg(long)]
    pub x: usize,
    #[arg(long)]
    pub y: usize,
    #[arg(long)]
    pub v: usize,
    #[arg(long, value_enum, default_value_t = Labeling::Anchored)]
    pub labeling: Labeling,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KStrategyArg {
    SmallestPrime,
    OrderOfTwo,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Target order.
    #[arg(long, required_unless_present_any = ["check", "threshold"])]
    pub u: Option<String>,
    #[arg(long, required_unless_present = "check")]
    pub v1: Option<String>,
    #[arg(long, required_unless_present = "check")]
    pub v2: Option<String>,
    #[arg(long, value_enum, default_value_t = KStrategyArg::SmallestPrime)]
    pub k_strategy: KStrategyArg,
    /// Print the order from which every admissible order is solved.
    #[arg(long, conflicts_with = "u")]
    pub threshold: bool,
    /// Re-verify a certificate file instead of solving.
    #[arg(long, conflicts_with_all = ["u", "v1", "v2", "threshold"])]
    pub check: Option<PathBuf>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EmbedMode {
    /// Attach gadgets, then swap triples inside the Boolean space.
    #[value(name = "theorem13")]
    Boolean,
    /// Rigid enlargement of `--w` beside the input.
    #[value(name = "cor46")]
    Enlarge,
    /// A partial system whose group is the stabilizer of `--subset`.
    #[value(name = "cor47")]
    Stabilizer,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub mode: EmbedMode,
    /// Largest n' allowed for the Boolean space on 2^n' - 1 points.
    #[arg(long, default_value_t = sts_core::pstss::DEFAULT_NP_CAP)]
    pub np_cap: u32,
    /// Swap triples for the input directly, without attaching gadgets.
    #[arg(long)]
    pub skip_gadgets: bool,
    /// Second system for `cor46`.
    #[arg(long)]
    pub w: Option<PathBuf>,
    /// Closed point set for `cor47`, comma separated.
    #[arg(long)]
    pub subset: Option<String>,
    #[arg(long, short)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli, argv[1..].to_vec()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if commands::is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
