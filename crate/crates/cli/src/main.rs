use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

#[derive(Debug, Parser)]
#[command(
    name = "cropforge",
    version,
    about = "Crop-detection dataset engine and lens aberration simulator"
)]
pub struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true, env = "CROPFORGE_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (0 = all cores). Never changes the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a manifest (with split and crop assignment) from an image directory.
    Scan(ScanArgs),
    /// Render a dataset from a directory or manifest.
    Generate(GenerateArgs),
    /// Apply an aberration profile to one image.
    Simulate(SimulateArgs),
    /// Render one dataset per strength along a single aberration axis.
    Sweep(SweepArgs),
    /// Summarize a generated dataset.
    Stats(StatsArgs),
    /// Write a pretext batch index with cyclically shifted patch slots.
    Batches(BatchesArgs),
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Directory searched recursively for PNG and JPEG files.
    #[arg(long)]
    pub input: PathBuf,
    /// Manifest destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Generation config JSON (admission rules, split fractions, encoding).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Image directory to scan and split before rendering.
    #[arg(
        long,
        required_unless_present = "manifest",
        conflicts_with = "manifest"
    )]
    pub input: Option<PathBuf>,
    /// Manifest written by `scan`; its seeds take precedence over --seed.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Generation config JSON, used with --input.
    #[arg(long, conflicts_with = "manifest")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// PNG sample depth of written records.
    #[arg(long, value_parser = ["8", "16"])]
    pub bit_depth: Option<String>,
    /// Continue an interrupted run in the same output directory.
    #[arg(long)]
    pub resume: bool,
    /// Record source path and resolution in every meta.json.
    #[arg(long)]
    pub debug_provenance: bool,
    /// Fraction of failed samples that aborts the run.
    #[arg(long)]
    pub failure_budget: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct ProfileArgs {
    /// Aberration profile JSON; the flags below override its fields.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Red channel magnification about the optical center.
    #[arg(long, allow_negative_numbers = true)]
    pub tca_r: Option<f64>,
    /// Green channel magnification.
    #[arg(long, allow_negative_numbers = true)]
    pub tca_g: Option<f64>,
    /// Blue channel magnification.
    #[arg(long, allow_negative_numbers = true)]
    pub tca_b: Option<f64>,
    /// Vignetting strength (0 = off, 1 = full falloff).
    #[arg(long, allow_negative_numbers = true)]
    pub vignette: Option<f64>,
    /// Radial distortion coefficient k1 (positive = pincushion).
    #[arg(long, allow_negative_numbers = true)]
    pub distortion: Option<f64>,
    /// Saturation factor (0 = grayscale, 1 = unchanged).
    #[arg(long, allow_negative_numbers = true)]
    pub saturation: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Output dataset directory.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub render: RenderArgs,
    #[command(flatten)]
    pub profile: ProfileArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub profile: ProfileArgs,
    /// PNG sample depth of the output.
    #[arg(long, value_parser = ["8", "16"], default_value = "8")]
    pub bit_depth: String,
    /// Input image (PNG or JPEG).
    pub input: PathBuf,
    /// Output PNG.
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Parent directory of the per-strength datasets.
    #[arg(long)]
    pub out: PathBuf,
    /// One of tca_r, tca_g, tca_b, vignette, saturation, distortion.
    #[arg(long)]
    pub axis: String,
    /// Comma-separated strengths. TCA strengths are offsets from unit
    /// scale, saturation strengths are factors, the rest are raw values.
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        required = true
    )]
    pub strengths: Vec<f64>,
    #[command(flatten)]
    pub render: RenderArgs,
    /// Base profile; the swept axis overrides it.
    #[command(flatten)]
    pub profile: ProfileArgs,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Generated dataset directory.
    pub dataset: PathBuf,
    /// Destination of the stats document; `<dataset>/stats.json` by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BatchesArgs {
    /// Generated dataset directory.
    pub dataset: PathBuf,
    /// Batch size; a positive multiple of 16.
    #[arg(long, default_value_t = 64)]
    pub batch_size: usize,
    /// Only use records of this split.
    #[arg(long, value_parser = ["train", "val", "test"])]
    pub split: Option<String>,
    /// Destination of the batch index.
    #[arg(long)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            if matches!(e, cropforge::Error::Argument(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
