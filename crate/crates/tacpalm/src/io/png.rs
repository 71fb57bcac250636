//! PNG reading and writing.
//!
//! RGB images map to 3-channel frames. A 2-channel frame is stored as RGB
//! with a zero blue channel, which is how a two-color rig lights the gel;
//! read it back with [`TactileFrame::select_channels`]. Grayscale images are
//! rejected unless [`ReadOptions::gray_channels`] asks for duplication.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use png::{BitDepth, ColorType, Compression, Decoder, Encoder, Filter};
use tacpalm_core::{ContactMask, TactileFrame};

use super::IoError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReadOptions {
    /// Replicate a grayscale image into this many channels (2 or 3).
    pub gray_channels: Option<usize>,
}

pub fn read_png(path: impl AsRef<Path>) -> Result<TactileFrame, IoError> {
    read_png_with(path, ReadOptions::default())
}

pub fn read_png_with(path: impl AsRef<Path>, opts: ReadOptions) -> Result<TactileFrame, IoError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(IoError::file(path))?;
    let decode = |source| IoError::PngDecode { path: path.to_path_buf(), source };
    let mut reader = Decoder::new(BufReader::new(file)).read_info().map_err(decode)?;
    let mut buf = vec![0; reader.output_buffer_size().expect("image fits in memory")];
    let info = reader.next_frame(&mut buf).map_err(decode)?;
    let layout = |detail: String| IoError::PngLayout { path: path.to_path_buf(), detail };

    let (width, height) = (info.width as usize, info.height as usize);
    let samples: Vec<f64> = match info.bit_depth {
        BitDepth::Eight => buf[..info.buffer_size()].iter().map(|&b| f64::from(b) / 255.0).collect(),
        BitDepth::Sixteen => buf[..info.buffer_size()]
            .chunks_exact(2)
            .map(|b| f64::from(u16::from_be_bytes([b[0], b[1]])) / 65535.0)
            .collect(),
        other => return Err(layout(format!("bit depth {other:?}"))),
    };
    let (channels, data) = match info.color_type {
        ColorType::Rgb => (3, samples),
        ColorType::Grayscale => match opts.gray_channels {
            Some(n @ (2 | 3)) => (n, samples.iter().flat_map(|&v| std::iter::repeat_n(v, n)).collect()),
            Some(n) => return Err(layout(format!("cannot replicate gray into {n} channels"))),
            None => return Err(layout("grayscale image has 1 channel".into())),
        },
        other => return Err(layout(format!("color type {other:?}"))),
    };
    Ok(TactileFrame::new(width, height, channels, data)?)
}

fn quantize(index: usize, value: f64) -> Result<u8, IoError> {
    if !(0.0..=1.0).contains(&value) {
        return Err(IoError::OutOfRange { index, value });
    }
    Ok((value * 255.0).round() as u8)
}

/// Encodes 8-bit pixels with fixed settings so equal input gives equal bytes.
fn encode(width: usize, height: usize, color: ColorType, pixels: &[u8], out: impl Write) -> Result<(), IoError> {
    let mut enc = Encoder::new(out, width as u32, height as u32);
    enc.set_color(color);
    enc.set_depth(BitDepth::Eight);
    enc.set_compression(Compression::Balanced);
    enc.set_filter(Filter::Adaptive);
    let mut w = enc.write_header()?;
    w.write_image_data(pixels)?;
    w.finish()?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, IoError> {
    Ok(BufWriter::new(File::create(path).map_err(IoError::file(path))?))
}

/// 8-bit RGB bytes of a frame (blue is zero for 2-channel frames).
pub fn frame_to_rgb8(frame: &TactileFrame) -> Result<Vec<u8>, IoError> {
    let c = frame.channels();
    let mut out = Vec::with_capacity(frame.width() * frame.height() * 3);
    for (i, px) in frame.data().chunks_exact(c).enumerate() {
        for (k, &v) in px.iter().enumerate() {
            out.push(quantize(i * c + k, v)?);
        }
        if c == 2 {
            out.push(0);
        }
    }
    Ok(out)
}

pub fn write_frame_png(frame: &TactileFrame, path: impl AsRef<Path>) -> Result<(), IoError> {
    let rgb = frame_to_rgb8(frame)?;
    encode(frame.width(), frame.height(), ColorType::Rgb, &rgb, create(path.as_ref())?)
}

/// Contact pixels white, the rest black.
pub fn write_mask_png(mask: &ContactMask, path: impl AsRef<Path>) -> Result<(), IoError> {
    let px: Vec<u8> = mask.mask().iter().map(|&m| if m { 255 } else { 0 }).collect();
    encode(mask.width(), mask.height(), ColorType::Grayscale, &px, create(path.as_ref())?)
}

/// Single-channel values in `[0, 1]`, e.g. a normalized depth map.
pub fn write_gray_png(width: usize, height: usize, values: &[f64], path: impl AsRef<Path>) -> Result<(), IoError> {
    let px = values.iter().enumerate().map(|(i, &v)| quantize(i, v)).collect::<Result<Vec<_>, _>>()?;
    encode(width, height, ColorType::Grayscale, &px, create(path.as_ref())?)
}
