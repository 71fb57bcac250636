use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tacpalm_core::beam::{self, BeamError, BeamSpec, DeflectionReport};
use tacpalm_core::contact::{self, Component, ContactError};
use tacpalm_core::photometric::{self, EstimateOptions, PhotometricCalibration, PhotometricError};
use tacpalm_core::poisson::{self, PoissonError};
use tacpalm_core::press2d::profile::{ObjectProfile, Shape};
use tacpalm_core::press2d::{self, svg, ContactReport2D, PalmVariant, PressError};
use tacpalm_core::renderer::{self, RenderError, SceneSpec};
use tacpalm_core::{DepthMap, DifferenceFrame, GradientField, GridError, TactileFrame};

use super::{Category, CliError, Command, DEFAULT_SEED, SEED_VAR};
use crate::formats::{self, FormatError, MaterialsFile, PalmFile};
use crate::ingest::{self, FrameSource, IngestError};
use crate::io::{pfm, png, IoError};

type Result<T> = std::result::Result<T, CliError>;

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        let cat = match e {
            IoError::File { .. } => Category::Io,
            _ => Category::Format,
        };
        CliError::new(cat, e)
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        let cat = match e {
            FormatError::Io { .. } => Category::Io,
            _ => Category::Format,
        };
        CliError::new(cat, e)
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Write(e) => e.into(),
            IngestError::Manifest(e) => e.into(),
            e => CliError::new(Category::Stream, e),
        }
    }
}

impl From<PressError> for CliError {
    fn from(e: PressError) -> Self {
        let cat = match e {
            PressError::NonConvergence(_) | PressError::Infeasible => Category::Numerical,
            _ => Category::Input,
        };
        CliError::new(cat, e)
    }
}

impl From<PoissonError> for CliError {
    fn from(e: PoissonError) -> Self {
        let cat = match e {
            PoissonError::NonFinite(_) => Category::Numerical,
            PoissonError::TooSmall(..) => Category::Input,
        };
        CliError::new(cat, e)
    }
}

macro_rules! input_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::new(Category::Input, e)
            }
        }
    )*};
}
input_errors!(GridError, RenderError, PhotometricError, ContactError, BeamError);

pub(super) fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Render(a) => render(a),
        Command::Calibrate(a) => calibrate(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::ContactArea(a) => contact_area(a),
        Command::DesignBeam(a) => design_beam(a),
        Command::Press(a) => press(a),
        Command::Sweep(a) => sweep(a),
        Command::Stream(a) => stream(a),
        Command::Record(a) => record(a),
    }
}

fn env_seed() -> Result<u64> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::new(Category::Usage, format!("{SEED_VAR}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Reads a scene and gives noisy scenes without a seed the run's seed.
fn load_scene(path: &Path) -> Result<SceneSpec> {
    let mut scene: SceneSpec = formats::read_json(path)?;
    if scene.noise_sigma > 0.0 && scene.seed.is_none() {
        scene.seed = Some(env_seed()?);
    }
    Ok(scene)
}

fn render(a: super::RenderArgs) -> Result<()> {
    let scene = load_scene(&a.scene)?;
    let (frame, reference) = renderer::render_scene(&scene)?;
    png::write_frame_png(&frame, &a.out)?;
    png::write_frame_png(&reference, &a.reference)?;
    if let Some(path) = a.depth {
        pfm::write_pfm(&renderer::depth_of_scene(&scene)?, path)?;
    }
    Ok(())
}

fn scene_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |e: std::io::Error| CliError::new(Category::Io, format!("{}: {e}", dir.display()));
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn calibrate(a: super::CalibrateArgs) -> Result<()> {
    let files = scene_files(&a.scenes)?;
    if files.is_empty() {
        return Err(CliError::new(Category::Input, format!("{}: no scene files (*.json)", a.scenes.display())));
    }
    let mut pairs = Vec::with_capacity(files.len());
    let mut channels = None;
    for path in &files {
        let scene = load_scene(path)?;
        let c = scene.rig.channels();
        if *channels.get_or_insert(c) != c {
            return Err(CliError::new(Category::Input, format!("{}: {c}-channel rig mixed with {}-channel scenes", path.display(), channels.unwrap_or(c))));
        }
        let (frame, reference) = renderer::render_scene(&scene)?;
        let known = GradientField::central_differences(&renderer::depth_of_scene(&scene)?);
        pairs.push((DifferenceFrame::between(&frame, &reference)?, known));
    }
    let calib = photometric::fit_calibration(&pairs, channels.unwrap_or(3))?;
    formats::write_json(&a.out, &calib)?;
    Ok(())
}

fn load_calibration(path: &Path) -> Result<PhotometricCalibration> {
    let calib: PhotometricCalibration = formats::read_json(path)?;
    calib.validate().map_err(|e| CliError::new(Category::Format, format!("{}: {e}", path.display())))?;
    Ok(calib)
}

fn check_floor(floor: f64) -> Result<EstimateOptions> {
    if !(floor.is_finite() && floor >= 0.0) {
        return Err(CliError::new(Category::Usage, format!("--noise-floor must be finite and >= 0, got {floor}")));
    }
    Ok(EstimateOptions { noise_floor: floor })
}

fn with_channels(frame: TactileFrame, n: usize) -> Result<TactileFrame> {
    if frame.channels() == n {
        return Ok(frame);
    }
    if frame.channels() < n {
        return Err(CliError::new(Category::Input, format!("frame has {} channels, {n} requested", frame.channels())));
    }
    Ok(frame.select_channels(n)?)
}

/// Difference frame to depth through the calibrated model.
fn reconstruct_pair(reference: &TactileFrame, frame: &TactileFrame, calib: &PhotometricCalibration, opts: EstimateOptions) -> Result<DepthMap> {
    let n = calib.channels;
    let diff = DifferenceFrame::between(&with_channels(frame.clone(), n)?, &with_channels(reference.clone(), n)?)?;
    let est = photometric::estimate_gradients(&diff, calib, opts)?;
    if est.singular_pixels > 0 {
        log::warn!("{} pixels had a singular system and were set flat", est.singular_pixels);
    }
    Ok(poisson::integrate(&est.field.to_forward_staggered())?)
}

fn reconstruct(a: super::ReconstructArgs) -> Result<()> {
    let opts = check_floor(a.noise_floor)?;
    let mut calib = load_calibration(&a.calib)?;
    if let Some(n) = a.channels.map(usize::from) {
        if n > calib.channels {
            return Err(CliError::new(Category::Input, format!("calibration has {} channels, {n} requested", calib.channels)));
        }
        calib = calib.select_channels(n)?;
    }
    let reference = png::read_png(&a.reference)?;
    let frame = png::read_png(&a.frame)?;
    let depth = reconstruct_pair(&reference, &frame, &calib, opts)?;
    pfm::write_pfm(&depth, &a.out)?;
    if let Some(path) = a.depth_png {
        png::write_gray_png(depth.width(), depth.height(), &depth.normalized(), path)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ContactAreaReport {
    width: usize,
    height: usize,
    tau: f64,
    area_px: usize,
    components: Vec<Component>,
}

fn contact_area(a: super::ContactAreaArgs) -> Result<()> {
    let reference = png::read_png(&a.reference)?;
    let frame = png::read_png(&a.frame)?;
    let diff = DifferenceFrame::between(&frame, &reference)?;
    let mask = contact::segment(&diff, a.tau)?;
    png::write_mask_png(&mask, &a.mask)?;
    let report = ContactAreaReport {
        width: mask.width(),
        height: mask.height(),
        tau: a.tau,
        area_px: mask.area_px(),
        components: contact::components(&mask),
    };
    formats::write_json(&a.report, &report)?;
    Ok(())
}

fn millimetres(flag: &str, mm: f64) -> Result<f64> {
    if !(mm.is_finite() && mm >= 0.0) {
        return Err(CliError::new(Category::Usage, format!("--{flag} must be finite and >= 0, got {mm}")));
    }
    Ok(mm * 1e-3)
}

#[derive(Serialize)]
struct BeamReport {
    material: String,
    length_mm: f64,
    thickness_mm: f64,
    width_mm: f64,
    sigma_max_pa: f64,
    #[serde(flatten)]
    result: DeflectionReport,
    delta_mm: f64,
    delta_max_mm: f64,
    hard_stop_angle_rad: f64,
}

fn design_beam(a: super::DesignBeamArgs) -> Result<()> {
    let file: MaterialsFile = formats::read_json(&a.material)?;
    let entry = file.pick(a.material_name.as_deref()).map_err(|e| CliError::new(Category::Input, e))?;
    let material = entry.to_material()?;
    let (l, t, b) = (millimetres("length-mm", a.length_mm)?, millimetres("thickness-mm", a.thickness_mm)?, millimetres("width-mm", a.width_mm)?);
    let spec = match a.sigma_max_mpa {
        Some(mpa) => BeamSpec::with_sigma_max(l, t, b, material, mpa * 1e6)?,
        None => BeamSpec::new(l, t, b, material)?,
    };
    let result = beam::design_report(&spec, a.force_n)?;
    let report = BeamReport {
        material: spec.material.name.clone(),
        length_mm: a.length_mm,
        thickness_mm: a.thickness_mm,
        width_mm: a.width_mm,
        sigma_max_pa: spec.sigma_max,
        delta_mm: result.delta * 1e3,
        delta_max_mm: result.delta_max * 1e3,
        hard_stop_angle_rad: beam::hard_stop_angle(&spec),
        result,
    };
    formats::write_json(&a.report, &report)?;
    Ok(())
}

fn load_palm(args: &super::PalmArgs) -> Result<(PalmFile, ObjectProfile, f64)> {
    let file = match &args.palm {
        Some(path) => formats::read_json(path)?,
        None => PalmFile::shipped(),
    };
    file.palm.validate()?;
    let shape = Shape::by_name(&args.shape)
        .ok_or_else(|| CliError::new(Category::Usage, format!("unknown shape {:?}; expected cylinder, cube, plus or star", args.shape)))?;
    let depth = match args.depth_mm {
        Some(mm) => millimetres("depth-mm", mm)?,
        None => file.depth_for(&shape),
    };
    Ok((file, ObjectProfile::new(shape), depth))
}

#[derive(Serialize)]
struct PressReport<'a> {
    shape: &'a str,
    depth_mm: f64,
    #[serde(flatten)]
    report: &'a ContactReport2D,
}

fn press(a: super::PressArgs) -> Result<()> {
    let (file, obj, depth) = load_palm(&a.palm)?;
    let mut palm = file.palm;
    if let Some(name) = &a.variant {
        let v = PalmVariant::from_name(name)
            .ok_or_else(|| CliError::new(Category::Usage, format!("unknown variant {name:?}; expected none, structure, gel or both")))?;
        palm = palm.variant(v);
    }
    let report = press2d::equilibrium(&palm, &obj, depth)?;
    formats::write_json(&a.report, &PressReport { shape: obj.shape.name(), depth_mm: depth * 1e3, report: &report })?;
    if let Some(path) = a.svg {
        let doc = svg::render_svg(&report, &palm, &obj)?;
        fs::write(&path, doc).map_err(|e| CliError::new(Category::Io, format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn sweep(a: super::SweepArgs) -> Result<()> {
    let (file, obj, depth) = load_palm(&a.palm)?;
    let report = press2d::compliance_sweep(&file.palm, &obj, depth)?;
    formats::write_json(&a.report, &report)?;
    Ok(())
}

#[derive(Serialize)]
struct StreamEntry {
    index: u64,
    timestamp_s: f64,
    file: String,
}

#[derive(Serialize)]
struct StreamManifest {
    frames: Vec<StreamEntry>,
    /// Truncated or undecodable parts.
    dropped_invalid: u64,
    /// Frames evicted because reconstruction fell behind.
    dropped_lagging: u64,
}

fn stream(a: super::StreamArgs) -> Result<()> {
    let opts = check_floor(a.noise_floor)?;
    if a.queue_depth == 0 {
        return Err(CliError::new(Category::Usage, "--queue-depth must be at least 1"));
    }
    let calib = load_calibration(&a.calib)?;
    let mut reference = a.reference.as_deref().map(png::read_png).transpose()?;
    fs::create_dir_all(&a.out_dir).map_err(|e| CliError::new(Category::Io, format!("{}: {e}", a.out_dir.display())))?;

    let source = ingest::HttpSource::open(ingest::HttpConfig::new(&a.url))?;
    let (rx, handle) = ingest::spawn_reader(source, a.queue_depth);
    let mut frames = Vec::new();
    let mut failure = None;
    while a.frames.is_none_or(|n| frames.len() < n) {
        let frame = match rx.recv() {
            Some(Ok(f)) => f,
            Some(Err(e)) => {
                failure = Some(e);
                break;
            }
            None => break,
        };
        let Some(reference) = reference.as_ref() else {
            reference = Some(frame.image);
            continue;
        };
        let depth = reconstruct_pair(reference, &frame.image, &calib, opts)?;
        let file = format!("depth_{:06}.pfm", frame.index);
        pfm::write_pfm(&depth, a.out_dir.join(&file))?;
        frames.push(StreamEntry { index: frame.index, timestamp_s: frame.timestamp.as_secs_f64(), file });
    }
    let dropped_lagging = rx.dropped();
    // The reader may be blocked on the socket when we stop early; only join
    // once it has finished on its own.
    let dropped_invalid = if handle.is_finished() { handle.join().map(|s| s.dropped).unwrap_or(0) } else { 0 };
    let manifest = StreamManifest { frames, dropped_invalid, dropped_lagging };
    formats::write_json(a.out_dir.join("manifest.json"), &manifest)?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn record(a: super::RecordArgs) -> Result<()> {
    let manifest = match (&a.source.url, &a.source.dir) {
        (Some(url), _) => {
            let mut src = ingest::HttpSource::open(ingest::HttpConfig::new(url))?;
            ingest::record(&mut src, &a.out_dir, a.frames)?
        }
        (None, Some(dir)) => {
            let mut src = ingest::DirectorySource::open(dir, &a.pattern, a.fps)?;
            ingest::record(&mut src as &mut dyn FrameSource, &a.out_dir, a.frames)?
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    log::info!("recorded {} frames, {} dropped", manifest.frames.len(), manifest.dropped);
    Ok(())
}
