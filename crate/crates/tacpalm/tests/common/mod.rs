#![allow(dead_code)]

use std::io::{Read, Write};
use std::net::{Shutdown, TcpListener};
use std::thread::JoinHandle;

use image::codecs::jpeg::JpegEncoder;
use image::ExtendedColorType;
use tacpalm::io::png::frame_to_rgb8;
use tacpalm_core::renderer::{render_scene, Indenter, SceneSpec};

pub const BOUNDARY: &str = "fixtureboundary";

/// Distinct small JPEGs: a bump moving across a 40x32 gel.
pub fn jpeg_frames(n: usize) -> Vec<Vec<u8>> {
    (0..n)
        .map(|i| {
            let cx = 12.0 + (i % 17) as f64;
            let scene = SceneSpec::new(40, 32, Indenter::Gaussian { sigma: 2.5, amplitude: 1.0, center: [cx, 15.5] });
            let (frame, _) = render_scene(&scene).unwrap();
            let mut out = Vec::new();
            JpegEncoder::new_with_quality(&mut out, 85)
                .encode(&frame_to_rgb8(&frame).unwrap(), 40, 32, ExtendedColorType::Rgb8)
                .unwrap();
            out
        })
        .collect()
}

/// Inserts a comment segment holding a full delimiter line right after SOI.
pub fn with_boundary_inside(jpeg: &[u8], boundary: &str) -> Vec<u8> {
    let text = format!("\r\n--{boundary}\r\nContent-Type: image/jpeg\r\n\r\n");
    let len = (text.len() + 2) as u16;
    let mut out = jpeg[..2].to_vec();
    out.extend_from_slice(&[0xFF, 0xFE]);
    out.extend_from_slice(&len.to_be_bytes());
    out.extend_from_slice(text.as_bytes());
    out.extend_from_slice(&jpeg[2..]);
    out
}

pub fn truncated(jpeg: &[u8]) -> Vec<u8> {
    jpeg[..jpeg.len() / 2].to_vec()
}

/// Multipart body in the mjpg-streamer layout.
pub fn multipart(parts: &[Vec<u8>], with_length: bool, close: bool) -> Vec<u8> {
    let mut out = Vec::new();
    for p in parts {
        out.extend_from_slice(format!("--{BOUNDARY}\r\nContent-Type: image/jpeg\r\n").as_bytes());
        if with_length {
            out.extend_from_slice(format!("Content-Length: {}\r\n", p.len()).as_bytes());
        }
        out.extend_from_slice(b"\r\n");
        out.extend_from_slice(p);
        out.extend_from_slice(b"\r\n");
    }
    if close {
        out.extend_from_slice(format!("--{BOUNDARY}--\r\n").as_bytes());
    }
    out
}

pub fn http_response(content_type: &str, body: &[u8]) -> Vec<u8> {
    let mut out = format!("HTTP/1.0 200 OK\r\nServer: fixture\r\nCache-Control: no-cache\r\nContent-Type: {content_type}\r\n\r\n").into_bytes();
    out.extend_from_slice(body);
    out
}

pub fn mjpeg_response(body: &[u8]) -> Vec<u8> {
    http_response(&format!("multipart/x-mixed-replace;boundary={BOUNDARY}"), body)
}

/// Serves each canned response to one connection, in order, then stops
/// listening. Returns the URL and a handle yielding the request heads.
pub fn serve(responses: Vec<Vec<u8>>) -> (String, JoinHandle<Vec<String>>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/?action=stream", listener.local_addr().unwrap());
    let handle = std::thread::spawn(move || {
        let mut requests = Vec::new();
        for resp in responses {
            let (mut sock, _) = listener.accept().unwrap();
            let mut head = Vec::new();
            let mut byte = [0u8; 1];
            while !head.ends_with(b"\r\n\r\n") && sock.read(&mut byte).unwrap() == 1 {
                head.push(byte[0]);
            }
            requests.push(String::from_utf8_lossy(&head).into_owned());
            // The client may hang up early; that is fine.
            let _ = sock.write_all(&resp);
            let _ = sock.shutdown(Shutdown::Both);
        }
        requests
    });
    (url, handle)
}
