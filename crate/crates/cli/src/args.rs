use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Default for enumeration and search budgets when neither flag nor
/// environment variable is given.
pub const DEFAULT_BUDGET: u128 = 2_000_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "stepup",
    about = "Stepping-up colorings: generation, proof checks, searches and certificates"
)]
pub struct Cli {
    /// Worker threads for parallel scans; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,

    /// Cap on enumerated sets or search nodes (engineering default, not derived).
    #[arg(long, global = true, env = "STEPUP_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rejection-sample a base pair coloring and write it in PHI1 format.
    GenPhi(GenPhi),
    /// Re-run both avoidance searches on a stored pair coloring.
    CheckPhi(CheckPhi),
    /// Exhaustive symbolic check of the red-edge bound on six vertices.
    Proofcheck(Proofcheck),
    /// Most red edges among 6-subsets of a concrete vertex set.
    Verify(Verify),
    /// Largest blue clique in a concrete vertex set (at most 64 vertices).
    Clique(Verify),
    /// Build, plant or replay blue-clique refutation certificates.
    Witness(Witness),
    /// Greedy partial Steiner packing with blocks of size 4.
    Steiner(Steiner),
    /// The two union-bound expectations used to size the base ground set.
    Bounds(Bounds),
    /// Color of five sorted vertices, or of every 5-subset of six.
    ChiEval(ChiEval),
}

#[derive(Debug, Args)]
pub struct GenPhi {
    #[arg(long)]
    pub n: usize,
    /// Ground-set size of the base coloring.
    #[arg(long)]
    pub m: u32,
    /// Generator seed; a random one is drawn and printed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Samples to draw before giving up (engineering default).
    #[arg(long, default_value_t = 100_000)]
    pub attempts: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckPhi {
    #[arg(long)]
    pub phi: PathBuf,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct Proofcheck {
    /// Check the variant coloring's bound of 4 instead of 3.
    #[arg(long)]
    pub variant: bool,
    /// Keep base assignments with four or more red quads on five ranks.
    /// Violations are then expected.
    #[arg(long, requires = "variant")]
    pub no_hypothesis_filter: bool,
    /// Replay a case report (JSON) on concrete integers instead.
    #[arg(long, conflicts_with_all = ["variant", "no_hypothesis_filter"])]
    pub replay: Option<PathBuf>,
}

/// Base coloring plus vertex set, shared by the search commands.
#[derive(Debug, Args)]
pub struct Verify {
    /// Pair coloring for the main rules.
    #[arg(long, conflicts_with = "psi", required_unless_present = "psi")]
    pub phi: Option<PathBuf>,
    /// Quad coloring for the variant rules.
    #[arg(long)]
    pub psi: Option<PathBuf>,
    /// Bit width; vertices default to all of 0..2^bits.
    #[arg(long)]
    pub bits: u32,
    /// JSON array of vertices (numbers or hex strings) instead of the full range.
    #[arg(long)]
    pub vertices: Option<PathBuf>,
    /// Also compare every 6-subset with the symbolic table (main rules, full range).
    #[arg(long)]
    pub cross_check: bool,
    /// Wall-clock cap in seconds; hitting it makes results worker-dependent.
    #[arg(long)]
    pub max_seconds: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlantedKind {
    Monotone,
    EqualMaxima,
    AbcLeft,
    AbcRight,
}

#[derive(Debug, Args)]
pub struct Witness {
    /// Certificate to replay.
    #[arg(long, conflicts_with = "planted", requires_all = ["phi", "vertices"])]
    pub replay: Option<PathBuf>,
    /// Generate a synthetic input of this kind and run the pipeline on it.
    #[arg(long, value_enum)]
    pub planted: Option<PlantedKind>,
    #[arg(long)]
    pub phi: Option<PathBuf>,
    /// JSON array of vertices (numbers or hex strings).
    #[arg(long)]
    pub vertices: Option<PathBuf>,
    /// Bit width of the stepped-up coloring; defaults to the base ground size.
    #[arg(long)]
    pub bits: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Length of monotone runs that end the pipeline early; defaults to max(n, 4).
    #[arg(long)]
    pub run_len: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory receiving phi.bin, vertices.json and cert.json.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Steiner {
    #[arg(long)]
    pub n: u32,
    /// Print only the block count, not the blocks.
    #[arg(long)]
    pub count_only: bool,
}

#[derive(Debug, Args)]
pub struct Bounds {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub m: u64,
}

#[derive(Debug, Args)]
pub struct ChiEval {
    #[arg(long, conflicts_with = "psi", required_unless_present = "psi")]
    pub phi: Option<PathBuf>,
    #[arg(long)]
    pub psi: Option<PathBuf>,
    /// Defaults to the base ground size.
    #[arg(long)]
    pub bits: Option<u32>,
    /// Five or six sorted vertices, decimal or 0x-prefixed hex.
    #[arg(num_args = 5..=6, required = true)]
    pub vertices: Vec<String>,
}
