use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sqgraph_core::formulas::DEFAULT_DIGITS;
use sqgraph_core::search::DEFAULT_NODE_BUDGET;

#[derive(Debug, Parser)]
#[command(name = "sqgraph", version, about = "Exact extremal computations for (s,q)-multigraphs")]
pub struct Cli {
    #[command(flatten)]
    pub shared: Shared,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Shared {
    /// Search worker threads; 1 gives reproducible witnesses.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
    /// Node budget for searches and counts.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Decimal digits for real-valued quantities (at least 30).
    #[arg(long, global = true, default_value_t = DEFAULT_DIGITS)]
    pub precision: u32,
    /// JSON-lines result cache for exsum, expi and count.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Output path: the witness file for searches, the witness directory
    /// for construct, the report file for verify and formulas.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Record format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON object per line.
    Jsonl,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Largest total weight of an (s,q)-graph on n vertices.
    Exsum(Instance),
    /// Largest weight product of an (s,q)-graph on n vertices.
    Expi(Instance),
    /// Number of (s,q)-graphs on n labelled vertices.
    Count(Instance),
    /// Sum- and product-optimal members of T_{r,d}(a,n).
    Construct {
        a: u32,
        r: u32,
        d: u32,
        n: usize,
    },
    /// Nested construction with V_0 of each level replaced by the next.
    Iterate {
        #[arg(long)]
        a: u32,
        /// `r:d` of one level, outermost first.
        #[arg(long = "level", required = true, value_parser = parse_level)]
        levels: Vec<(u32, u32)>,
        /// Comma-separated part sizes of one level, V_0 first.
        #[arg(long = "sizes", required = true, value_parser = parse_sizes)]
        sizes: Vec<Vec<usize>>,
        /// Also report the largest s-set sum for these s.
        #[arg(long = "s", value_delimiter = ',')]
        s: Vec<usize>,
    },
    /// Run a check suite and write its report.
    Verify(VerifyArgs),
    /// Evaluate the closed forms over a parameter grid.
    Formulas {
        #[arg(long, default_value = "2..4", value_parser = parse_list)]
        a: List,
        #[arg(long, default_value = "2..4", value_parser = parse_list)]
        r: List,
        #[arg(long, default_value = "1", value_parser = parse_list)]
        d: List,
    },
}

#[derive(Debug, Args)]
pub struct Instance {
    pub n: usize,
    pub s: usize,
    pub q: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// conjecture, identities, conditions, counting, transformations,
    /// closed_forms or all.
    pub suite: String,
    /// Values of a, as `2..4` or `2,3`.
    #[arg(long, value_parser = parse_list)]
    pub a: Option<List>,
    #[arg(long, value_parser = parse_list)]
    pub r: Option<List>,
    #[arg(long, value_parser = parse_list)]
    pub d: Option<List>,
    /// Vertex range `lo..hi` for search-backed suites.
    #[arg(long, value_parser = parse_range)]
    pub n: Option<(usize, usize)>,
    /// Fixed s for the conjecture suite instead of (r-1)(d+1)+2.
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Extend search-backed rows to n = 7.
    #[arg(long)]
    pub extended: bool,
    /// Keep going after a hard failure instead of aborting the suite.
    #[arg(long)]
    pub keep_going: bool,
}

/// Parameter values given as `lo..hi` (inclusive), a comma list, or a
/// single value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct List(pub Vec<u32>);

pub fn parse_list(text: &str) -> Result<List, String> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
        let hi: u32 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
        return Ok(List((lo..=hi).collect()));
    }
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(List)
}

pub fn parse_range(text: &str) -> Result<(usize, usize), String> {
    match text.split_once("..") {
        Some((lo, hi)) => Ok((
            lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?,
            hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?,
        )),
        None => {
            let n = text.trim().parse().map_err(|e| format!("{text:?}: {e}"))?;
            Ok((n, n))
        }
    }
}

fn parse_level(text: &str) -> Result<(u32, u32), String> {
    let (r, d) = text.split_once(':').ok_or_else(|| format!("expected r:d, got {text:?}"))?;
    Ok((
        r.trim().parse().map_err(|e| format!("{r:?}: {e}"))?,
        d.trim().parse().map_err(|e| format!("{d:?}: {e}"))?,
    ))
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, String> {
    text.split(',').map(|t| t.trim().parse().map_err(|e| format!("{t:?}: {e}"))).collect()
}
