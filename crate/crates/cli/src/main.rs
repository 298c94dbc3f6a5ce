use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use facpca::config::{InputKind, OutputFormat, Rotate, RunConfig};
use facpca::{run, Command, DEFAULT_DRAWS};

/// Principal component and factor analysis on the correlation matrix.
#[derive(Parser)]
#[command(name = "facpca", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Descriptive statistics of each variable
    Summary(Common),
    /// Correlation and determination matrices
    Corr(Common),
    /// Eigenvalues, eigenvectors and explained variance
    Eigen(Common),
    /// PCA with the component count from the minimum-variance rule
    Pca(Common),
    /// Factor loadings, optionally Varimax-rotated
    Fa(Common),
    /// Compare factor-count criteria
    Select(Common),
    /// Every table plus a text report and scree plot
    Report(Common),
    /// Scree plot as text and SVG
    Scree(Common),
    /// Draw observations from the fitted factor model
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Number of observations to draw
        #[arg(long, default_value_t = DEFAULT_DRAWS)]
        draws: usize,
    },
}

#[derive(Args)]
struct Common {
    /// CSV of observations with a header row of variable names
    #[arg(long, required_unless_present = "corr", conflicts_with = "corr")]
    input: Option<PathBuf>,
    /// CSV correlation matrix with labelled header and rows
    #[arg(long)]
    corr: Option<PathBuf>,
    /// Minimum share of each variable's variance to reproduce, in (0.5, 1]
    #[arg(long, default_value_t = 0.51)]
    epsilon: f64,
    /// Use this many factors instead of the minimum-variance count
    #[arg(long)]
    factors: Option<usize>,
    #[arg(long, value_enum, default_value_t = Rotate::Varimax)]
    rotate: Rotate,
    /// Rotate raw loadings instead of unit-length rows
    #[arg(long)]
    no_kaiser_normalize: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Output directory
    #[arg(long, env = "FACPCA_OUT")]
    out: Option<PathBuf>,
    /// Seed for simulation
    #[arg(long)]
    seed: Option<u64>,
    /// Cumulative variance percentage for the percentage criterion
    #[arg(long, default_value_t = 80.0)]
    percent: f64,
}

impl Common {
    fn config(self) -> RunConfig {
        let (path, kind) = match (self.input, self.corr) {
            (Some(p), _) => (p, InputKind::RawCsv),
            (None, Some(p)) => (p, InputKind::CorrelationCsv),
            (None, None) => unreachable!("clap requires one input"),
        };
        RunConfig {
            epsilon: self.epsilon,
            factor_count_override: self.factors,
            rotate: self.rotate,
            kaiser_normalize: !self.no_kaiser_normalize,
            output_dir: self.out,
            output_format: self.format,
            seed: self.seed,
            percent_threshold: self.percent,
            ..RunConfig::new(path, kind)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Summary(c) => (Command::Summary, c),
        Cmd::Corr(c) => (Command::Corr, c),
        Cmd::Eigen(c) => (Command::Eigen, c),
        Cmd::Pca(c) => (Command::Pca, c),
        Cmd::Fa(c) => (Command::Fa, c),
        Cmd::Select(c) => (Command::Select, c),
        Cmd::Report(c) => (Command::Report, c),
        Cmd::Scree(c) => (Command::Scree, c),
        Cmd::Simulate { common, draws } => (Command::Simulate { draws }, common),
    };
    let config = common.config();
    let mut stdout = std::io::stdout().lock();
    match run(command, &config, &mut stdout) {
        Ok(written) => {
            for path in written {
                eprintln!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
