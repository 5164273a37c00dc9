use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "spinlet", version, about = "Directional spin wavelets on the sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Round-trip accuracy and timing on random coefficients.
    Roundtrip(RoundtripArgs),
    /// The round-trip harness over several band-limits.
    Bench(BenchArgs),
    /// Squared kernel values per degree as CSV.
    Tiling(TilingArgs),
    /// Writes a harmonic coefficient file.
    Generate(GenerateArgs),
    /// Wavelet analysis of a harmonic file into a directory of maps.
    Analyze(AnalyzeArgs),
    /// Synthesis from a directory written by `analyze`.
    Synth(SynthArgs),
    /// Hard-threshold denoising of a harmonic file.
    Denoise(DenoiseArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Dilation factor α > 1.
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Azimuthal band-limit N.
    #[arg(short = 'N', long = "nband", default_value_t = 1)]
    pub nband: usize,
    /// Lowest wavelet scale J0.
    #[arg(long, default_value_t = 0)]
    pub jmin: usize,
}

#[derive(Debug, Clone, Args)]
pub struct HarnessArgs {
    #[arg(short = 's', long, default_value_t = 0, allow_hyphen_values = true)]
    pub spin: i32,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Trial `k` draws its signal from seed `seed + k`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Store each scale at its own resolution.
    #[arg(long)]
    pub multires: bool,
    /// JSON report path; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    #[arg(short = 'L', long = "bandlimit")]
    pub bandlimit: usize,
    #[command(flatten)]
    pub harness: HarnessArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(short = 'L', long = "bandlimit", num_args = 1.., required = true)]
    pub bandlimits: Vec<usize>,
    #[command(flatten)]
    pub harness: HarnessArgs,
}

#[derive(Debug, Args)]
pub struct TilingArgs {
    #[arg(short = 'L', long = "bandlimit")]
    pub bandlimit: usize,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub jmin: usize,
    /// CSV path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Signal {
    /// Real and imaginary parts uniform in [−1, 1].
    Random,
    /// Oriented Gaussian filaments in Q + iU (spin 2).
    Filaments,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = Signal::Random)]
    pub signal: Signal,
    #[arg(short = 'L', long = "bandlimit")]
    pub bandlimit: usize,
    #[arg(short = 's', long, default_value_t = 0, allow_hyphen_values = true)]
    pub spin: i32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Filament count.
    #[arg(long, default_value_t = 60)]
    pub count: usize,
    /// Filament width in radians.
    #[arg(long, default_value_t = 0.05)]
    pub width: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Harmonic coefficient file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub multires: bool,
    /// Must match the input file when given.
    #[arg(short = 'L', long = "bandlimit")]
    pub bandlimit: Option<usize>,
    /// Must match the input file when given.
    #[arg(short = 's', long, allow_hyphen_values = true)]
    pub spin: Option<i32>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Directory written by `analyze`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Harmonic coefficient file.
    #[arg(long)]
    pub out: PathBuf,
    /// Must match the stored family when given.
    #[arg(short = 'L', long = "bandlimit")]
    pub bandlimit: Option<usize>,
    #[arg(short = 'N', long = "nband")]
    pub nband: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub jmin: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    /// Noise standard deviation per harmonic coefficient.
    #[arg(long)]
    pub sigma: f64,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// JSON report path; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Clean signal used for the SNR figures.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Treat the input as clean and add noise drawn from `--seed` first.
    #[arg(long)]
    pub add_noise: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Threshold on full-resolution grids instead of per-scale grids.
    #[arg(long)]
    pub full_resolution: bool,
}
