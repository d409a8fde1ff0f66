//! The `vantage` command line: landscape sampling, scoring of logged
//! selections, weight fitting, analysis, viewpoint optimization and sphere
//! heatmap export.
//!
//! Exit codes: 0 on success, 1 on data errors, 2 on usage errors.

pub mod commands;
pub mod config;
pub mod error;
pub mod sphere;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use vantage::fitting::FitMethod;
use vantage::MeasureId;

pub use config::{load_config, Overrides, RunConfig};
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "vantage", version, about = "Viewpoint quality evaluation for 3D graph drawings")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// JSON run configuration; flags below override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Fibonacci viewpoints per graph.
    #[arg(long = "samples", global = true, value_name = "N")]
    pub sample_count: Option<usize>,

    /// Raster resolution of tube/disc overlap areas.
    #[arg(long, global = true, value_name = "N")]
    pub resolution: Option<usize>,

    /// Comma-separated active-set sizes for `fit` and `analyze`.
    #[arg(long, global = true, value_delimiter = ',', value_name = "K,..")]
    pub subset_sizes: Option<Vec<usize>>,

    /// L2 penalty of the logistic fit.
    #[arg(long, global = true, value_name = "X")]
    pub l2: Option<f64>,

    /// Worker threads.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
}

impl ConfigArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            sample_count: self.sample_count,
            raster_resolution: self.resolution,
            subset_sizes: self.subset_sizes.clone(),
            l2: self.l2,
            threads: self.threads,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample every graph's viewpoint landscape and write its range table.
    Sample {
        #[arg(long, value_name = "FILE")]
        dataset: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Also write every sampled raw vector to landscape.csv.
        #[arg(long)]
        landscape: bool,
    },
    /// Score every logged selection against a range table.
    Score {
        #[arg(long, value_name = "FILE")]
        dataset: PathBuf,
        /// Range table file or the directory holding ranges.csv.
        #[arg(long, value_name = "PATH")]
        ranges: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Fit measure weights from scored selections.
    Fit {
        /// Score table file or the directory holding scores.csv.
        #[arg(long, value_name = "PATH")]
        scores: PathBuf,
        #[arg(long, value_parser = parse_method)]
        method: FitMethod,
        /// Active-set size; defaults to every configured subset size.
        #[arg(long)]
        k: Option<usize>,
        /// Restrict to one stratum: layout=S|L|E, size=S|M|L|XL or graph=ID.
        #[arg(long, value_parser = parse_filter)]
        filter: Option<Filter>,
        /// Search all k-subsets instead of backward elimination.
        #[arg(long)]
        exhaustive: bool,
        /// Rescale scores to [0, 1] within the filtered samples.
        #[arg(long)]
        renormalize: bool,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// PCA, correlations, stratified means and per-stratum fits.
    Analyze {
        #[arg(long, value_name = "PATH")]
        scores: PathBuf,
        /// Weights for the C-LR column; defaults to the full logistic fit.
        #[arg(long, value_name = "FILE")]
        lr_weights: Option<PathBuf>,
        /// Weights for the C-SQP column; defaults to the full separation fit.
        #[arg(long, value_name = "FILE")]
        sqp_weights: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// List the sampled viewpoints with the highest combined score.
    Optimize {
        #[arg(long, value_name = "FILE")]
        dataset: PathBuf,
        #[arg(long, value_name = "FILE")]
        weights: PathBuf,
        #[arg(long, value_name = "ID")]
        graph: String,
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Range table; defaults to the ranges of the sampled landscape.
        #[arg(long, value_name = "PATH")]
        ranges: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Per-viewpoint values of one measure plus an equirectangular heatmap.
    ExportSphere {
        #[arg(long, value_name = "FILE")]
        dataset: PathBuf,
        #[arg(long, value_name = "ID")]
        graph: String,
        #[arg(long, value_parser = parse_measure)]
        measure: MeasureId,
        #[arg(long, value_name = "PATH")]
        ranges: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

/// A single-stratum restriction of the samples.
#[derive(Debug, Clone, PartialEq)]
pub enum Filter {
    Layout(vantage::model::LayoutClass),
    Size(vantage::model::SizeClass),
    Graph(String),
}

fn parse_method(s: &str) -> Result<FitMethod, String> {
    s.parse().map_err(|_| format!("expected lr or sqp, got `{s}`"))
}

fn parse_measure(s: &str) -> Result<MeasureId, String> {
    s.parse().map_err(|e: vantage::Error| e.to_string())
}

fn parse_filter(s: &str) -> Result<Filter, String> {
    let (key, value) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    match key {
        "layout" => value.parse().map(Filter::Layout).map_err(|e: vantage::Error| e.to_string()),
        "size" => value.parse().map(Filter::Size).map_err(|e: vantage::Error| e.to_string()),
        "graph" if !value.is_empty() => Ok(Filter::Graph(value.to_string())),
        _ => Err(format!("unknown filter `{s}`; use layout=, size= or graph=")),
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code. Errors are reported on stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("vantage: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    let config = load_config(cli.config.config.as_deref(), &cli.config.overrides())?;
    eprintln!("vantage: resolved configuration (hash {})", config.hash());
    eprintln!("{}", serde_json::to_string_pretty(&config).expect("config serializes"));
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))?
            .install(|| commands::dispatch(&cli.command, &config)),
        None => commands::dispatch(&cli.command, &config),
    }
}
