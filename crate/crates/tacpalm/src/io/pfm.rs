//! Portable Float Map depth files.
//!
//! Header grammar (ASCII, whitespace separated, one whitespace byte after
//! the scale): `Pf <width> <height> <scale>`. A negative scale means
//! little-endian samples, a positive one big-endian. Rows are stored
//! bottom-up and flipped on read so `(0, 0)` is the top-left pixel in
//! memory. Samples are 32-bit floats; writing narrows from `f64`.

use std::fs;
use std::path::Path;

use tacpalm_core::DepthMap;

use super::IoError;

pub fn encode_pfm(depth: &DepthMap) -> Vec<u8> {
    let (w, h) = (depth.width(), depth.height());
    let mut out = format!("Pf\n{w} {h}\n-1.0\n").into_bytes();
    out.reserve(w * h * 4);
    for y in (0..h).rev() {
        for x in 0..w {
            out.extend_from_slice(&(depth.at(x, y) as f32).to_le_bytes());
        }
    }
    out
}

fn token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a str, IoError> {
    while bytes.get(*pos).is_some_and(u8::is_ascii_whitespace) {
        *pos += 1;
    }
    let start = *pos;
    while bytes.get(*pos).is_some_and(|b| !b.is_ascii_whitespace()) {
        *pos += 1;
    }
    if start == *pos {
        return Err(IoError::PfmHeader("header ends early".into()));
    }
    std::str::from_utf8(&bytes[start..*pos]).map_err(|_| IoError::PfmHeader("non-ASCII header".into()))
}

pub fn decode_pfm(bytes: &[u8]) -> Result<DepthMap, IoError> {
    let mut pos = 0;
    match token(bytes, &mut pos)? {
        "Pf" => {}
        "PF" => return Err(IoError::PfmChannels(3)),
        other => return Err(IoError::PfmHeader(format!("bad magic {other:?}"))),
    }
    let dim = |s: &str| s.parse::<usize>().ok().filter(|&v| v > 0);
    let w = token(bytes, &mut pos)?;
    let w = dim(w).ok_or_else(|| IoError::PfmHeader(format!("bad width {w:?}")))?;
    let h = token(bytes, &mut pos)?;
    let h = dim(h).ok_or_else(|| IoError::PfmHeader(format!("bad height {h:?}")))?;
    let s = token(bytes, &mut pos)?;
    let scale: f64 = s.parse().ok().filter(|v: &f64| *v != 0.0 && v.is_finite())
        .ok_or_else(|| IoError::PfmHeader(format!("bad scale {s:?}")))?;
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(IoError::PfmHeader("missing separator after scale".into()));
    }
    let body = &bytes[pos + 1..];
    let expected = w * h * 4;
    if body.len() != expected {
        return Err(IoError::PfmHeader(format!("expected {expected} data bytes, found {}", body.len())));
    }
    let little = scale < 0.0;
    let mut z = vec![0.0; w * h];
    for (i, b) in body.chunks_exact(4).enumerate() {
        let b = [b[0], b[1], b[2], b[3]];
        let v = if little { f32::from_le_bytes(b) } else { f32::from_be_bytes(b) };
        let (x, row) = (i % w, i / w);
        z[(h - 1 - row) * w + x] = f64::from(v);
    }
    Ok(DepthMap::new(w, h, z)?)
}

pub fn write_pfm(depth: &DepthMap, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    fs::write(path, encode_pfm(depth)).map_err(IoError::file(path))
}

pub fn read_pfm(path: impl AsRef<Path>) -> Result<DepthMap, IoError> {
    let path = path.as_ref();
    decode_pfm(&fs::read(path).map_err(IoError::file(path))?)
}
