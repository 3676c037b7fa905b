//! `magicdist`: stabilizer entropies of pure states and their Haar densities.

mod commands;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "magicdist", version, about = "Non-stabilizerness measures and their Haar-random densities")]
struct Cli {
    /// Worker threads for sampling and tabulation.
    #[arg(long, global = true, env = "MAGICDIST_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Measures of a single state, as JSON.
    Measure(MeasureArgs),
    /// Exact single-qubit density on a grid.
    ExactPdf(ExactPdfArgs),
    /// Histogram of a measure over Haar-random states.
    Sample(SampleArgs),
    /// Fit of the logarithmic divergence of the order-2 purity density.
    FitDivergence(FitArgs),
    /// Critical points of the purity on the Bloch sphere.
    CriticalPoints(CriticalArgs),
    /// Haar average of the order-2 entropy of one qubit.
    MeanSre(MeanSreArgs),
    /// Regenerates every figure dataset with a checksum manifest.
    ReproduceFigures(FiguresArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Base {
    Nats,
    Bits,
}

impl From<Base> for magicdist::LogBase {
    fn from(b: Base) -> Self {
        match b {
            Base::Nats => magicdist::LogBase::Nats,
            Base::Bits => magicdist::LogBase::Bits,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExactVariable {
    N,
    Xi,
    M,
    Coherence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampledMeasure {
    N,
    Xi,
    M,
    Coherence,
    /// Pauli X on the first site.
    X,
    /// Pauli Y on the first site.
    Y,
    /// Pauli Z on the first site.
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitSide {
    Left,
    Right,
    Both,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "state")]
pub struct StateSource {
    /// Single-qubit Bloch vector `x,y,z`.
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub bloch: Option<String>,
    /// Amplitudes as `re,im` pairs.
    #[arg(long, value_name = "RE,IM,...", allow_hyphen_values = true)]
    pub amplitudes: Option<String>,
    /// Draw a Haar-random state.
    #[arg(long)]
    pub haar: bool,
}

#[derive(Debug, Args)]
pub struct RegisterArgs {
    /// Local dimension.
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    /// Number of sites.
    #[arg(long = "sites", default_value_t = 1)]
    pub n_sites: usize,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Logarithmic density axis in SVG output.
    #[arg(long)]
    pub log_density: bool,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub state: StateSource,
    #[command(flatten)]
    pub register: RegisterArgs,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Base::Nats)]
    pub base: Base,
}

#[derive(Debug, Args)]
pub struct ExactPdfArgs {
    #[arg(long, value_enum, default_value_t = ExactVariable::N)]
    pub variable: ExactVariable,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Evenly spaced grid points, refined toward edges and singular points.
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    /// Explicit abscissas instead of the default grid.
    #[arg(long, value_name = "X1,X2,...", allow_hyphen_values = true)]
    pub at: Option<String>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value_t = SampledMeasure::N)]
    pub measure: SampledMeasure,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[command(flatten)]
    pub register: RegisterArgs,
    /// Defaults to 10^7 for one qubit, 2x10^5 for several qubits and 4x10^5
    /// for a qudit.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub bins: usize,
    /// Histogram range; the exact support when known, otherwise the range
    /// of a pilot run.
    #[arg(long, value_name = "LO,HI", allow_hyphen_values = true)]
    pub range: Option<String>,
    /// Skip the exact-curve overlay in SVG output.
    #[arg(long)]
    pub no_overlay: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Fit the tabulated exact density instead of a sampled histogram.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Distance window `eps_min,eps_max` from the center; defaults to
    /// 1e-5,1e-3 for the exact curve and 2e-4,2e-2 for histograms.
    #[arg(long, value_name = "EPS_MIN,EPS_MAX")]
    pub window: Option<String>,
    /// Divergence center; `2^(1-alpha)` by default.
    #[arg(long)]
    pub center: Option<f64>,
    #[arg(long, value_enum, default_value_t = FitSide::Both)]
    pub side: FitSide,
    /// Geometric bins on each side of the center.
    #[arg(long, default_value_t = 30)]
    pub per_side: usize,
    /// Locate the center by scanning uniform-bin edges for the best fit.
    #[arg(long)]
    pub scan: bool,
    /// Uniform bins over the support, for `--scan`.
    #[arg(long, default_value_t = 400)]
    pub bins: usize,
    /// Bins on each side of every candidate, for `--scan`.
    #[arg(long, default_value_t = 20)]
    pub bins_per_side: usize,
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct MeanSreArgs {
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Base::Bits)]
    pub base: Base,
    /// Also estimate the mean from this many Haar samples.
    #[arg(long, value_name = "SAMPLES")]
    pub mc: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    #[arg(long, default_value = "figures")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Divide every sample count by this factor.
    #[arg(long, default_value_t = 1)]
    pub scale_down: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] magicdist::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use magicdist::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                E::InvalidOrder(_) | E::NotImplemented(_) | E::UseWeylPath(_) => 3,
                E::ResourceLimit(_) => 4,
                E::InsufficientData(_) => 5,
                E::QuadratureFailure { .. } | E::SupportViolation { .. } => 1,
                _ => 2,
            },
            CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    let result = match &cli.command {
        Command::Measure(a) => commands::measure(a),
        Command::ExactPdf(a) => commands::exact_pdf(a),
        Command::Sample(a) => commands::sample(a),
        Command::FitDivergence(a) => commands::fit_divergence(a),
        Command::CriticalPoints(a) => commands::critical_points(a),
        Command::MeanSre(a) => commands::mean_sre(a),
        Command::ReproduceFigures(a) => commands::reproduce_figures(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("magicdist: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
