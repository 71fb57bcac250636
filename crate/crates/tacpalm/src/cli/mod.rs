//! The `tacpalm` command line.
//!
//! Lengths are millimetres and forces newtons at this boundary; everything
//! is converted to SI before it reaches the core. Failures print one line
//! `error:<category>: <message>` to stderr and exit with 1 (usage),
//! 2 (input, format or I/O) or 3 (numerical).

mod commands;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub const SEED_VAR: &str = "TACPALM_SEED";
/// Seed used for noisy scenes that carry none and when `TACPALM_SEED` is unset.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Usage,
    Io,
    Format,
    Input,
    Stream,
    Numerical,
}

impl Category {
    pub fn exit_code(self) -> i32 {
        match self {
            Category::Usage => 1,
            Category::Io | Category::Format | Category::Input | Category::Stream => 2,
            Category::Numerical => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Usage => "usage",
            Category::Io => "io",
            Category::Format => "format",
            Category::Input => "input",
            Category::Stream => "stream",
            Category::Numerical => "numerical",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub category: Category,
    pub message: String,
}

impl CliError {
    pub fn new(category: Category, message: impl fmt::Display) -> Self {
        Self { category, message: message.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Keep the message on one line so the prefix stays parseable.
        let msg = self.message.replace(['\n', '\r'], " ");
        write!(f, "error:{}: {msg}", self.category.name())
    }
}

#[derive(Debug, Parser)]
#[command(name = "tacpalm", version, about = "Tactile palm toolkit: render, reconstruct, measure contact, size beams, simulate presses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a synthetic tactile frame and its reference from a scene file.
    Render(RenderArgs),
    /// Fit a photometric calibration from a directory of scene files.
    Calibrate(CalibrateArgs),
    /// Reconstruct a depth map from a reference/frame pair.
    Reconstruct(ReconstructArgs),
    /// Segment contact and report its pixel area.
    ContactArea(ContactAreaArgs),
    /// Size a cantilever beam.
    DesignBeam(DesignBeamArgs),
    /// Press an object into one palm.
    Press(PressArgs),
    /// Press an object into all four palm variants and compare contact.
    Sweep(SweepArgs),
    /// Reconstruct every frame of a live MJPEG stream.
    Stream(StreamArgs),
    /// Save frames from a stream or directory as PNGs with a manifest.
    Record(RecordArgs),
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Scene JSON.
    #[arg(long)]
    pub scene: PathBuf,
    /// Output tactile frame (PNG).
    #[arg(long)]
    pub out: PathBuf,
    /// Output reference frame (PNG).
    #[arg(long = "ref")]
    pub reference: PathBuf,
    /// Also write the true depth map (PFM).
    #[arg(long)]
    pub depth: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Directory of scene JSON files with known indenters.
    #[arg(long)]
    pub scenes: PathBuf,
    /// Output calibration JSON.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Reference (no-contact) frame.
    #[arg(long = "ref")]
    pub reference: PathBuf,
    /// Tactile frame.
    #[arg(long)]
    pub frame: PathBuf,
    /// Calibration JSON.
    #[arg(long)]
    pub calib: PathBuf,
    /// Output depth map (PFM).
    #[arg(long)]
    pub out: PathBuf,
    /// Color channels to use; defaults to the calibration's.
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    pub channels: Option<u8>,
    /// Pixels with max |difference| below this get zero slope.
    #[arg(long, default_value_t = tacpalm_core::defaults::NOISE_FLOOR)]
    pub noise_floor: f64,
    /// Also write the depth map normalized to a grayscale PNG.
    #[arg(long)]
    pub depth_png: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ContactAreaArgs {
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long)]
    pub frame: PathBuf,
    /// Contact threshold on max |difference|.
    #[arg(long, default_value_t = tacpalm_core::defaults::CONTACT_TAU)]
    pub tau: f64,
    /// Output mask (PNG, contact white).
    #[arg(long)]
    pub mask: PathBuf,
    /// Output report JSON.
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct DesignBeamArgs {
    /// Materials JSON (one entry or a list).
    #[arg(long)]
    pub material: PathBuf,
    /// Entry to use when the file lists several.
    #[arg(long)]
    pub material_name: Option<String>,
    #[arg(long)]
    pub length_mm: f64,
    #[arg(long)]
    pub thickness_mm: f64,
    #[arg(long)]
    pub width_mm: f64,
    /// Tip force.
    #[arg(long)]
    pub force_n: f64,
    /// Allowable stress; defaults to half the tensile strength.
    #[arg(long)]
    pub sigma_max_mpa: Option<f64>,
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct PalmArgs {
    /// Palm JSON; the shipped configuration when omitted.
    #[arg(long)]
    pub palm: Option<PathBuf>,
    /// Object: cylinder, cube, plus or star.
    #[arg(long)]
    pub shape: String,
    /// Press depth; the palm file's value for the shape when omitted.
    #[arg(long)]
    pub depth_mm: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PressArgs {
    #[command(flatten)]
    pub palm: PalmArgs,
    /// Override the palm's compliance: none, structure, gel or both.
    #[arg(long)]
    pub variant: Option<String>,
    #[arg(long)]
    pub report: PathBuf,
    /// Also draw the equilibrium (SVG).
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub palm: PalmArgs,
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct StreamArgs {
    /// MJPEG stream URL (http only).
    #[arg(long)]
    pub url: String,
    #[arg(long)]
    pub calib: PathBuf,
    /// Directory for per-frame depth maps and the manifest.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Reference frame; the first streamed frame when omitted.
    #[arg(long = "ref")]
    pub reference: Option<PathBuf>,
    /// Stop after this many reconstructed frames.
    #[arg(long)]
    pub frames: Option<usize>,
    #[arg(long, default_value_t = tacpalm_core::defaults::NOISE_FLOOR)]
    pub noise_floor: f64,
    /// Frames buffered before the oldest is dropped.
    #[arg(long, default_value_t = crate::ingest::DEFAULT_QUEUE_DEPTH)]
    pub queue_depth: usize,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "input")]
pub struct RecordSource {
    /// MJPEG stream URL.
    #[arg(long)]
    pub url: Option<String>,
    /// Directory of PNG or JPEG files.
    #[arg(long)]
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecordArgs {
    #[command(flatten)]
    pub source: RecordSource,
    /// File-name glob for `--dir`.
    #[arg(long, default_value = "*.png")]
    pub pattern: String,
    /// Frame rate used to timestamp `--dir` frames.
    #[arg(long, default_value_t = 30.0)]
    pub fps: f64,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Stop after this many frames.
    #[arg(long)]
    pub frames: Option<usize>,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    0
                }
                _ => {
                    let first = e.to_string();
                    let line = first.lines().next().unwrap_or("").trim_start_matches("error: ");
                    eprintln!("{}", CliError::new(Category::Usage, line));
                    Category::Usage.exit_code()
                }
            };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.category.exit_code()
        }
    }
}
