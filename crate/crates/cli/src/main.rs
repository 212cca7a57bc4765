//! `citnet`: build, analyze and lay out citation networks from the shell.

mod commands;
mod error;
mod script;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use citnet_core::analytics::{PathKind, SmallClusterPolicy, DEFAULT_MAX_PATHS};

#[derive(Debug, Parser)]
#[command(name = "citnet", version, about = "Build, analyze and lay out publication citation networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse input, match citations and write pair files plus a load report
    Load(LoadArgs),
    /// Write the citations of the transitive reduction
    Reduce(ReduceArgs),
    /// Cluster publications and write an id to cluster table
    Cluster(ClusterArgs),
    /// Write the publications of the k-core
    Cores(CoresArgs),
    /// Write an id to weakly connected component table
    Components(CommonArgs),
    /// Find the shortest or longest citation paths between two publications
    Path(PathArgs),
    /// Lay out the most cited publications as a frame (JSON, optional SVG)
    Layout(LayoutArgs),
    /// Run a drill-down and expansion script and write the resulting network
    Drill(ScriptArgs),
    /// Same pipeline runner as `drill`; scripts may mix both kinds of step
    Expand(ScriptArgs),
    /// Serve exploration sessions over HTTP
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["publications", "wos"])))]
pub struct InputArgs {
    /// Publications file of a pair-file network (needs --citations)
    #[arg(short = 'p', long, requires = "citations", conflicts_with = "wos", value_name = "PATH")]
    pub publications: Option<PathBuf>,
    /// Citations file of a pair-file network (needs --publications)
    #[arg(short = 'c', long, requires = "publications", value_name = "PATH")]
    pub citations: Option<PathBuf>,
    /// Tagged record export; may be repeated to combine several files
    #[arg(long, value_name = "PATH", conflicts_with = "citations")]
    pub wos: Vec<PathBuf>,
    /// Distinct citing records needed before an unmatched reference becomes a publication
    #[arg(long, default_value_t = 10, value_name = "N")]
    pub incomplete_min_citations: usize,
}

#[derive(Debug, Args)]
pub struct OutputArg {
    /// Write to this file instead of standard output
    #[arg(short = 'o', long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub out: OutputArg,
}

#[derive(Debug, Args)]
pub struct LoadArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Directory for publications.tsv, citations.tsv and report.json
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Write the removed (non-essential) citations instead
    #[arg(long)]
    pub non_essential: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Policy {
    Discard,
    Merge,
}

impl From<Policy> for SmallClusterPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Discard => SmallClusterPolicy::Discard,
            Policy::Merge => SmallClusterPolicy::Merge,
        }
    }
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Random seed
    #[arg(long, env = "CITNET_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Resolution; higher values give more, smaller clusters
    #[arg(long, default_value_t = 1.0)]
    pub resolution: f64,
    /// Clusters smaller than this are handled by --policy
    #[arg(long, default_value_t = 1)]
    pub min_cluster_size: usize,
    /// What happens to publications of undersized clusters
    #[arg(long, value_enum, default_value = "discard")]
    pub policy: Policy,
    /// Independent optimization runs
    #[arg(long, default_value_t = 10)]
    pub random_starts: usize,
    /// Refinement iterations per run
    #[arg(long, default_value_t = 10)]
    pub iterations: usize,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(Debug, Args)]
pub struct CoresArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Minimum number of citation links to other core publications
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Shortest,
    Longest,
}

impl From<Kind> for PathKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Shortest => PathKind::Shortest,
            Kind::Longest => PathKind::Longest,
        }
    }
}

#[derive(Debug, Args)]
pub struct PathArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Citing end of the path
    #[arg(long, value_name = "ID")]
    pub from: String,
    /// Cited end of the path
    #[arg(long, value_name = "ID")]
    pub to: String,
    #[arg(long, value_enum, default_value = "shortest")]
    pub kind: Kind,
    /// Report at most this many paths
    #[arg(long, default_value_t = DEFAULT_MAX_PATHS)]
    pub max_paths: usize,
}

#[derive(Debug, Args)]
pub struct LayoutArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Also write the frame as SVG
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    /// Script to run first; the layout shows the network it ends on
    #[arg(long, value_name = "PATH")]
    pub script: Option<PathBuf>,
    /// Number of most cited publications to display
    #[arg(long)]
    pub display_count: Option<usize>,
    /// Most publications drawn in one year layer
    #[arg(long)]
    pub max_per_layer: Option<usize>,
    /// Horizontal grid points
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Minimum grid distance between publications in one layer
    #[arg(long)]
    pub min_separation: Option<usize>,
    /// Attraction weight of the layout energy
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Repulsion exponent of the layout energy
    #[arg(long)]
    pub beta: Option<f64>,
    /// Optimizer restarts
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Draw only edges of the transitive reduction
    #[arg(long)]
    pub transitive_reduction: bool,
    /// Rank publications by citations from inside the shown network
    #[arg(long)]
    pub score_within_view: bool,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(Debug, Args)]
pub struct ScriptArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// TOML pipeline of exploration steps
    #[arg(long, value_name = "PATH")]
    pub script: PathBuf,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Address to listen on
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: std::net::IpAddr,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.kind());
            ExitCode::from(e.exit_code())
        }
    }
}
