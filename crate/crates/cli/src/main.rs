use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Generate, glue and verify censuses of triangle-free Ramsey graphs.
///
/// All graph files are graph6, one graph per line. Outputs are canonical,
/// deduplicated and sorted by (order, edges, bytes); each output file gets a
/// `<file>.manifest` with the run parameters and per-(n,e) counts.
#[derive(Parser, Debug)]
#[command(name = "rglue", version)]
pub struct Cli {
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: Option<u16>,

    /// Megabytes of canonical forms held in memory before spilling sorted
    /// runs to disk during deduplication.
    #[arg(long, global = true)]
    pub memory_cap: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Add one vertex to every input graph in all valid ways.
    Extend(ExtendArgs),
    /// Glue every input core with apex degrees in a range.
    Glue(GlueArgs),
    /// Run a pair-gluing plan over the input cores.
    Pairglue(PairglueArgs),
    /// Check every input graph against a spec.
    Verify(VerifyArgs),
    /// Print per-(n,e) counts of a graph6 file.
    CensusStats(IoArgs),
    /// Canonicalize, deduplicate and sort a graph6 file.
    Canon(IoArgs),
}

#[derive(Args, Debug, Clone)]
pub struct IoArgs {
    /// Input graph6 file (`-` for stdin).
    #[arg(long = "in", default_value = "-")]
    pub input: PathBuf,
    /// Output graph6 file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Process only shard I of K (contiguous ranges of the input).
    #[arg(long, value_parser = commands::parse_shard)]
    pub shard: Option<(usize, usize)>,
}

#[derive(Args, Debug)]
pub struct ExtendArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Independence bound: outputs have no independent set of this size.
    #[arg(long)]
    pub t: usize,
    /// Clique bound (only 3 is supported).
    #[arg(long, default_value_t = 3)]
    pub s: usize,
    /// Expected output order; inputs must have order n - 1.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub max_edges: Option<usize>,
    /// Keep only extensions whose new vertex has maximum degree (for seeds
    /// closed under maximum-degree deletion).
    #[arg(long)]
    pub max_degree_deletion: bool,
}

#[derive(Args, Debug)]
pub struct GlueArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Independence bound of the outputs; cores must be in R(3, t-1).
    #[arg(long)]
    pub t: usize,
    #[arg(long, default_value_t = 3)]
    pub s: usize,
    /// Output order; fixes the apex degree per core to n - 1 - |core|.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub max_edges: Option<usize>,
    #[arg(long)]
    pub d_min: Option<usize>,
    #[arg(long)]
    pub d_max: Option<usize>,
    /// Degree floor for every vertex of the output.
    #[arg(long, conflicts_with = "apex_min_degree")]
    pub min_degree: Option<usize>,
    /// Use the apex degree as the degree floor (gluing at a minimum-degree
    /// vertex).
    #[arg(long)]
    pub apex_min_degree: bool,
}

#[derive(Args, Debug)]
pub struct PairglueArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Plan file: `target <spec> degree <d>` then `core <spec> [ext <spec>]
    /// [exclude <spec,...>]` lines.
    #[arg(long)]
    pub plan: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Input graph6 file (`-` for stdin).
    #[arg(long = "in", default_value = "-")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub s: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub max_edges: Option<usize>,
    #[arg(long)]
    pub min_edges: Option<usize>,
    /// Also require that no graph has a one-point extension in R(3, t).
    #[arg(long)]
    pub extend_check: bool,
    /// Edge bound for the extension check.
    #[arg(long, requires = "extend_check")]
    pub extend_max_edges: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
