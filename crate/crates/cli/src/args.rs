//! Command-line surface.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperavoid::{Limits, Permutation, Probability};

#[derive(Debug, Parser)]
#[command(name = "hyperavoid", version, about = "Pattern avoidance over hypergraph-restricted index sets")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for the parallel passes (default: all cores).
    #[arg(long, global = true, env = "HYPERAVOID_THREADS")]
    pub threads: Option<usize>,
    /// Write a run manifest to this path after a successful run.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(flatten)]
    pub caps: CapArgs,
}

#[derive(Debug, Args)]
pub struct CapArgs {
    /// Largest n for which S_n is enumerated.
    #[arg(long, global = true, env = "HYPERAVOID_ENUM_CAP")]
    pub enum_cap: Option<usize>,
    /// Largest side for exhaustive matrix searches.
    #[arg(long, global = true, env = "HYPERAVOID_MATRIX_CAP")]
    pub matrix_cap: Option<usize>,
    /// Largest edge count for the grid hypergraph.
    #[arg(long, global = true, env = "HYPERAVOID_EDGE_CEILING")]
    pub edge_ceiling: Option<u64>,
    /// Largest candidate count for independent-set counting.
    #[arg(long, global = true, env = "HYPERAVOID_INDEPENDENT_CEILING")]
    pub independent_ceiling: Option<u64>,
    /// Largest samples·n!·C(n,k) for hypergraph sampling.
    #[arg(long, global = true, env = "HYPERAVOID_LAMBDA_COST_CEILING")]
    pub lambda_cost_ceiling: Option<u64>,
}

impl CapArgs {
    pub fn limits(&self) -> Limits {
        let d = Limits::default();
        Limits {
            enumeration_cap: self.enum_cap.unwrap_or(d.enumeration_cap),
            matrix_cap: self.matrix_cap.unwrap_or(d.matrix_cap),
            edge_ceiling: self.edge_ceiling.unwrap_or(d.edge_ceiling),
            independent_ceiling: self.independent_ceiling.unwrap_or(d.independent_ceiling),
            lambda_cost_ceiling: self.lambda_cost_ceiling.unwrap_or(d.lambda_cost_ceiling),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Comma-separated list; integer entries also accept `lo..=hi`. The empty
/// string is the empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr + Clone> List<T>
where
    T::Err: std::fmt::Display,
{
    fn parse_items(text: &str, expand: impl Fn(&str) -> Option<Result<Vec<T>, String>>) -> Result<Self, String> {
        let mut out = Vec::new();
        if text.trim().is_empty() {
            return Ok(List(out));
        }
        for (i, item) in text.split(',').enumerate() {
            let item = item.trim();
            if let Some(range) = expand(item) {
                out.extend(range?);
                continue;
            }
            out.push(item.parse::<T>().map_err(|e| format!("entry {}: {e}", i + 1))?);
        }
        Ok(List(out))
    }
}

fn parse_range<T: TryFrom<u64>>(item: &str) -> Option<Result<Vec<T>, String>> {
    let (lo, hi) = item.split_once("..=")?;
    let parsed = lo.trim().parse::<u64>().and_then(|lo| hi.trim().parse::<u64>().map(|hi| (lo, hi)));
    Some(match parsed {
        Ok((lo, hi)) => (lo..=hi).map(|v| T::try_from(v).map_err(|_| format!("{v} is out of range"))).collect(),
        Err(e) => Err(format!("range {item:?}: {e}")),
    })
}

pub fn int_list<T: FromStr + Clone + TryFrom<u64>>(text: &str) -> Result<List<T>, String>
where
    T::Err: std::fmt::Display,
{
    List::parse_items(text, parse_range::<T>)
}

pub fn alpha_list(text: &str) -> Result<List<ProbArg>, String> {
    List::parse_items(text, |_| None)
}

#[derive(Debug, Clone)]
pub struct PermArg(pub Permutation);

impl FromStr for PermArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<Permutation>().map(PermArg).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct ProbArg(pub Probability);

impl FromStr for ProbArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Probability::parse(s).map(ProbArg).map_err(|e| e.to_string())
    }
}

fn perm_arg(s: &str) -> Result<PermArg, String> {
    s.parse()
}

fn prob_arg(s: &str) -> Result<ProbArg, String> {
    s.parse()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LambdaKind {
    /// Every k-subset of [n].
    Complete,
    /// No edges.
    Empty,
    /// The balanced bipartite construction (n even).
    Star,
    /// Each k-subset kept independently with probability --lambda-alpha.
    Random,
    /// Read from --lambda-file.
    File,
}

/// Selects the restricting hypergraph Λ; its uniformity is the pattern length.
#[derive(Debug, Args)]
pub struct LambdaArgs {
    #[arg(long = "lambda", value_enum, default_value_t = LambdaKind::Complete)]
    pub kind: LambdaKind,
    #[arg(long, value_parser = prob_arg, default_value = "1/2")]
    pub lambda_alpha: ProbArg,
    #[arg(long, default_value_t = 0)]
    pub lambda_seed: u64,
    /// Edge-list text (one 1-based edge per line) or JSON {"n","k","edges"}.
    #[arg(long)]
    pub lambda_file: Option<PathBuf>,
}

/// A 0-1 matrix given inline, from a file, or as a permutation matrix.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct MatrixArgs {
    /// Rows separated by '/', e.g. "10/01".
    #[arg(long)]
    pub matrix: Option<String>,
    /// Text form ("rows cols" then one row per line) or JSON {"rows","cols","data"}.
    #[arg(long)]
    pub from_file: Option<PathBuf>,
    /// Permutation matrix of this permutation.
    #[arg(long, value_parser = perm_arg)]
    pub perm_matrix: Option<PermArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Sigma,
    Lambda,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of occurrences of π in σ.
    Count {
        #[arg(long, value_parser = perm_arg)]
        sigma: PermArg,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
    },
    /// Every occurrence of π in σ as 1-based index sets.
    Occurrences {
        #[arg(long, value_parser = perm_arg)]
        sigma: PermArg,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
    },
    /// Histogram of copy counts of π over S_n.
    Distribution {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
    },
    /// Permutations of length n avoiding π on the edges of Λ.
    Avoiders {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
        #[command(flatten)]
        lambda: LambdaArgs,
        /// Include the avoiders themselves in the report.
        #[arg(long)]
        list: bool,
    },
    /// Exact expected number of avoiders over a random k-uniform Λ.
    Expect {
        #[arg(long, value_parser = int_list::<usize>)]
        n: List<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
        #[arg(long, value_parser = alpha_list)]
        alpha: List<ProbArg>,
    },
    /// Monte-Carlo estimate of the expected number of avoiders.
    ExpectMc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
        #[arg(long, value_parser = alpha_list)]
        alpha: List<ProbArg>,
        #[arg(long, value_enum, default_value_t = MethodArg::Sigma)]
        method: MethodArg,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random k-uniform hypergraph on [n].
    Hypergraph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = prob_arg)]
        alpha: ProbArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Balanced bipartite hypergraph on [n] avoiding edges inside a part.
    LambdaStar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Also report a maximum clique.
        #[arg(long)]
        clique: bool,
    },
    /// Checks a clique cover of Λ and reports (L, δ, Δ).
    CliqueCover {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        lambda: LambdaArgs,
        /// 1-based cliques separated by ';', e.g. "1,2,3;2,3,4".
        #[arg(long, conflicts_with = "window")]
        cliques: Option<String>,
        /// Use the n cyclic windows {i, …, i+L−1} (mod n) of this size.
        #[arg(long)]
        window: Option<usize>,
    },
    /// Block contraction of a 0-1 matrix.
    Contract {
        #[command(flatten)]
        input: MatrixArgs,
        /// Contraction factor p/q ≥ 1.
        #[arg(long, default_value = "2")]
        b: String,
        /// Also report copies of this pattern before and after.
        #[arg(long, value_parser = perm_arg)]
        pi: Option<PermArg>,
    },
    /// Number of matrices whose 2-contraction is the given matrix.
    Preimage {
        #[command(flatten)]
        input: MatrixArgs,
    },
    /// Block-diagonal matrix with a ones and few copies of π.
    Extremal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: u64,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
    },
    /// Minimum copies of π over n×n matrices with a ones.
    MinCopies {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = int_list::<u64>)]
        a: List<u64>,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
    },
    /// Maximum ones in an n×n matrix avoiding π.
    MaxOnes {
        #[arg(long, value_parser = int_list::<usize>)]
        n: List<usize>,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
        #[arg(long, default_value_t = hyperavoid::supersat::DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Streams the block-diagonal family and checks its copy budget.
    Sna {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = int_list::<usize>)]
        a: List<usize>,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
    },
    /// Permutations of length n with at most m copies of π.
    Snm {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = int_list::<u64>)]
        m: List<u64>,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
    },
    /// Grid hypergraph whose independent canonical sets are the avoiders.
    BuildH {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
        #[command(flatten)]
        lambda: LambdaArgs,
    },
    /// Maximum co-degree Δ_ℓ of the grid hypergraph.
    Delta {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, value_parser = int_list::<usize>)]
        ell: List<usize>,
    },
    /// Number of independent sets of a given size in the grid hypergraph.
    Independents {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, value_parser = int_list::<usize>)]
        size: List<usize>,
    },
    /// Densities of π and of ones in random r×r submatrices.
    SampleDensity {
        #[command(flatten)]
        input: MatrixArgs,
        #[arg(long, value_parser = perm_arg)]
        pi: PermArg,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-runs a manifest and checks the output digest.
    Replay {
        /// Manifest written by --manifest.
        path: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Count { .. } => "count",
            Command::Occurrences { .. } => "occurrences",
            Command::Distribution { .. } => "distribution",
            Command::Avoiders { .. } => "avoiders",
            Command::Expect { .. } => "expect",
            Command::ExpectMc { .. } => "expect-mc",
            Command::Hypergraph { .. } => "hypergraph",
            Command::LambdaStar { .. } => "lambda-star",
            Command::CliqueCover { .. } => "clique-cover",
            Command::Contract { .. } => "contract",
            Command::Preimage { .. } => "preimage",
            Command::Extremal { .. } => "extremal",
            Command::MinCopies { .. } => "min-copies",
            Command::MaxOnes { .. } => "max-ones",
            Command::Sna { .. } => "sna",
            Command::Snm { .. } => "snm",
            Command::BuildH { .. } => "build-h",
            Command::Delta { .. } => "delta",
            Command::Independents { .. } => "independents",
            Command::SampleDensity { .. } => "sample-density",
            Command::Replay { .. } => "replay",
        }
    }

    /// Seed that drives the run's randomness, if any.
    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::ExpectMc { seed, .. } | Command::Hypergraph { seed, .. } | Command::SampleDensity { seed, .. } => Some(*seed),
            Command::Avoiders { lambda, .. }
            | Command::CliqueCover { lambda, .. }
            | Command::BuildH { lambda, .. }
            | Command::Delta { lambda, .. }
            | Command::Independents { lambda, .. }
                if lambda.kind == LambdaKind::Random =>
            {
                Some(lambda.lambda_seed)
            }
            _ => None,
        }
    }
}
