mod common;

use std::fs;
use std::io::Cursor;
use std::time::Duration;

use common::*;
use tacpalm::ingest::multipart::MultipartReader;
use tacpalm::ingest::{
    bounded, is_complete_jpeg, parse_content_type, record, spawn_reader, DirectorySource, FrameSource, HttpConfig,
    HttpSource, IngestError, RetryPolicy,
};
use tacpalm::io::png::write_frame_png;
use tacpalm_core::TactileFrame;

fn fast(url: &str) -> HttpConfig {
    let mut cfg = HttpConfig::new(url);
    cfg.retry = RetryPolicy { base: Duration::from_millis(2), ..RetryPolicy::default() };
    cfg
}

fn drain(src: &mut dyn FrameSource) -> Vec<tacpalm::ingest::Frame> {
    let mut out = Vec::new();
    while let Some(f) = src.next_frame().unwrap() {
        out.push(f);
    }
    out
}

#[test]
fn hundred_part_stream_with_one_truncation_and_one_collision() {
    let jpegs = jpeg_frames(100);
    let mut parts = jpegs.clone();
    parts[40] = with_boundary_inside(&jpegs[40], BOUNDARY);
    parts[70] = truncated(&jpegs[70]);
    let (url, server) = serve(vec![mjpeg_response(&multipart(&parts, true, true))]);

    let mut src = HttpSource::open(fast(&url)).unwrap();
    let frames = drain(&mut src);
    let expected: Vec<&Vec<u8>> = parts.iter().enumerate().filter(|(i, _)| *i != 70).map(|(_, p)| p).collect();
    assert_eq!(frames.len(), 99);
    assert!(frames.iter().zip(&expected).all(|(f, e)| &f.encoded == *e));
    assert!(frames.windows(2).all(|w| w[1].timestamp > w[0].timestamp));
    assert_eq!(src.stats().dropped, 1);
    assert_eq!(src.stats().delivered, 99);
    assert!(server.join().unwrap()[0].starts_with("GET /?action=stream HTTP/1.1\r\n"));
}

#[test]
fn parts_without_length_are_split_on_the_boundary() {
    let jpegs = jpeg_frames(3);
    let (url, _server) = serve(vec![mjpeg_response(&multipart(&jpegs, false, true))]);
    let frames = drain(&mut HttpSource::open(fast(&url)).unwrap());
    assert_eq!(frames.len(), 3);
    for (f, j) in frames.iter().zip(&jpegs) {
        assert_eq!(&f.encoded, j);
        assert_eq!(f.image.shape(), (40, 32, 3));
    }
}

#[test]
fn length_takes_precedence_over_an_embedded_boundary() {
    let jpeg = with_boundary_inside(&jpeg_frames(1)[0], BOUNDARY);
    let body = multipart(std::slice::from_ref(&jpeg), true, true);
    let mut r = MultipartReader::new(Cursor::new(body), BOUNDARY);
    let part = r.next_part().unwrap().unwrap();
    assert_eq!(part.body, jpeg);
    assert_eq!(part.header("content-length"), Some(jpeg.len().to_string().as_str()));
    assert!(r.next_part().unwrap().is_none());
}

#[test]
fn decoded_frames_are_unit_intensities() {
    let (url, _server) = serve(vec![mjpeg_response(&multipart(&jpeg_frames(1), true, true))]);
    let f = HttpSource::open(fast(&url)).unwrap().next_frame().unwrap().unwrap();
    assert!(f.image.data().iter().all(|v| (0.0..=1.0).contains(v)));
    assert!(f.image.data().iter().any(|&v| v > 0.1));
}

#[test]
fn content_type_is_checked() {
    assert_eq!(parse_content_type("multipart/x-mixed-replace; boundary=abc").unwrap(), "abc");
    assert_eq!(parse_content_type("Multipart/X-Mixed-Replace;boundary=\"a b\"").unwrap(), "a b");
    assert!(matches!(parse_content_type("multipart/x-mixed-replace"), Err(IngestError::MissingBoundary)));
    assert!(matches!(parse_content_type("image/jpeg"), Err(IngestError::WrongContentType(_))));
    assert!(matches!(parse_content_type("multipart/x-mixed-replace; boundary="), Err(IngestError::BadBoundary(_))));
    assert!(matches!(parse_content_type("multipart/x-mixed-replace; boundary=bad{token}"), Err(IngestError::BadBoundary(_))));
}

#[test]
fn open_rejects_a_stream_without_boundary() {
    let (url, _server) = serve(vec![http_response("multipart/x-mixed-replace", b"")]);
    assert!(matches!(HttpSource::open(fast(&url)), Err(IngestError::MissingBoundary)));
}

#[test]
fn open_rejects_http_errors() {
    let (url, _server) = serve(vec![b"HTTP/1.0 404 Not Found\r\n\r\n".to_vec()]);
    assert!(matches!(HttpSource::open(fast(&url)), Err(IngestError::Status(404))));
}

#[test]
fn open_reports_refused_connections() {
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let err = HttpSource::open(fast(&format!("http://127.0.0.1:{port}/"))).err().unwrap();
    assert!(matches!(err, IngestError::Connect { .. }));
    assert!(matches!(HttpSource::open(fast("ftp://example/")), Err(IngestError::Url(_))));
}

#[test]
fn leading_dashes_in_the_parameter_are_tolerated() {
    let jpeg = jpeg_frames(1).remove(0);
    let mut body = format!("--{BOUNDARY}\r\nContent-Length: {}\r\n\r\n", jpeg.len()).into_bytes();
    body.extend_from_slice(&jpeg);
    body.extend_from_slice(format!("\r\n--{BOUNDARY}--\r\n").as_bytes());
    let (url, _server) = serve(vec![http_response(&format!("multipart/x-mixed-replace; boundary=--{BOUNDARY}"), &body)]);
    assert_eq!(drain(&mut HttpSource::open(fast(&url)).unwrap()).len(), 1);
}

#[test]
fn dropped_connection_resumes_without_duplicates() {
    let jpegs = jpeg_frames(5);
    let first = mjpeg_response(&multipart(&jpegs[..3], true, false));
    let second = mjpeg_response(&multipart(&jpegs[3..], true, true));
    let (url, server) = serve(vec![first, second]);
    let mut src = HttpSource::open(fast(&url)).unwrap();
    let frames = drain(&mut src);
    assert_eq!(frames.len(), 5);
    assert_eq!(src.stats().reconnects, 1);
    assert!(frames.iter().zip(&jpegs).all(|(f, j)| &f.encoded == j));
    assert!(frames.windows(2).all(|w| w[1].timestamp > w[0].timestamp && w[1].index == w[0].index + 1));
    assert_eq!(server.join().unwrap().len(), 2);
}

#[test]
fn reconnect_gives_up_after_five_tries() {
    let jpegs = jpeg_frames(2);
    let (url, server) = serve(vec![mjpeg_response(&multipart(&jpegs, true, false))]);
    let mut src = HttpSource::open(fast(&url)).unwrap();
    server.join().unwrap();
    assert!(src.next_frame().unwrap().is_some());
    assert!(src.next_frame().unwrap().is_some());
    match src.next_frame() {
        Err(IngestError::ReconnectFailed { tries, .. }) => assert_eq!(tries, 5),
        other => panic!("expected reconnect failure, got {other:?}"),
    }
    assert!(src.next_frame().unwrap().is_none());
}

#[test]
fn default_backoff_doubles_from_100_ms() {
    let p = RetryPolicy::default();
    let delays: Vec<u128> = (0..p.max_tries).map(|k| p.delay(k).as_millis()).collect();
    assert_eq!(delays, [100, 200, 400, 800, 1600]);
}

#[test]
fn close_is_idempotent() {
    let (url, _server) = serve(vec![mjpeg_response(&multipart(&jpeg_frames(3), true, true))]);
    let mut src = HttpSource::open(fast(&url)).unwrap();
    src.close();
    src.close();
    assert!(src.next_frame().unwrap().is_none());
}

#[test]
fn jpeg_completeness_check() {
    let j = &jpeg_frames(1)[0];
    assert!(is_complete_jpeg(j));
    let mut with_crlf = j.clone();
    with_crlf.extend_from_slice(b"\r\n");
    assert!(is_complete_jpeg(&with_crlf));
    assert!(!is_complete_jpeg(&truncated(j)));
    assert!(!is_complete_jpeg(&j[2..]));
    assert!(!is_complete_jpeg(&[]));
}

fn write_pngs(dir: &std::path::Path, names: &[&str]) -> Vec<TactileFrame> {
    names
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let f = TactileFrame::filled(4, 3, 3, i as f64 / 10.0).unwrap();
            write_frame_png(&f, dir.join(n)).unwrap();
            f
        })
        .collect()
}

#[test]
fn directory_frames_come_in_name_order() {
    let dir = tempfile::tempdir().unwrap();
    let written = write_pngs(dir.path(), &["b.png", "a.png", "c.png"]);
    fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let mut src = DirectorySource::open(dir.path(), "*.png", 10.0).unwrap();
    assert_eq!(src.len(), 3);
    let frames = drain(&mut src);
    assert_eq!(frames.len(), 3);
    // a, b, c were written with values 0.1, 0.0, 0.2.
    let q = |f: &TactileFrame| (f.get(0, 0, 0) * 255.0).round() / 255.0;
    let order: Vec<f64> = frames.iter().map(|f| f.image.get(0, 0, 0)).collect();
    assert_eq!(order, [q(&written[1]), q(&written[0]), q(&written[2])]);
    let ts: Vec<f64> = frames.iter().map(|f| f.timestamp.as_secs_f64()).collect();
    assert_eq!(ts, [0.0, 0.1, 0.2]);
}

#[test]
fn directory_source_reports_missing_directories() {
    assert!(matches!(DirectorySource::open("/definitely/not/here", "*.png", 1.0), Err(IngestError::Directory { .. })));
    assert!(matches!(DirectorySource::open(".", "*.png", 0.0), Err(IngestError::FrameRate(_))));
}

#[test]
fn queue_evicts_the_oldest() {
    let (tx, rx) = bounded(4);
    for i in 0..10 {
        tx.push(i);
    }
    drop(tx);
    let got: Vec<i32> = std::iter::from_fn(|| rx.recv()).collect();
    assert_eq!(got, [6, 7, 8, 9]);
    assert_eq!(rx.dropped(), 6);
}

#[test]
fn reader_thread_delivers_everything_to_a_keen_consumer() {
    let jpegs = jpeg_frames(12);
    let (url, _server) = serve(vec![mjpeg_response(&multipart(&jpegs, true, true))]);
    let (rx, handle) = spawn_reader(HttpSource::open(fast(&url)).unwrap(), 64);
    let frames: Vec<_> = std::iter::from_fn(|| rx.recv()).map(Result::unwrap).collect();
    assert_eq!(frames.len(), 12);
    assert_eq!(handle.join().unwrap().delivered, 12);
}

#[test]
fn recording_an_empty_directory_gives_an_empty_manifest() {
    let src_dir = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let mut src = DirectorySource::open(src_dir.path(), "*.png", 1.0).unwrap();
    let m = record(&mut src, out.path(), None).unwrap();
    assert!(m.frames.is_empty());
    assert_eq!((m.parts, m.dropped), (0, 0));
    assert!(out.path().join("manifest.json").exists());
}

#[test]
fn recording_one_frame_writes_one_file() {
    let src_dir = tempfile::tempdir().unwrap();
    write_pngs(src_dir.path(), &["a.png", "b.png"]);
    let out = tempfile::tempdir().unwrap();
    let mut src = DirectorySource::open(src_dir.path(), "*.png", 1.0).unwrap();
    let m = record(&mut src, out.path(), Some(1)).unwrap();
    assert_eq!(m.frames.len(), 1);
    let pngs = fs::read_dir(out.path()).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "png")).count();
    assert_eq!(pngs, 1);
}

#[test]
fn manifest_counts_parts_minus_drops() {
    let mut parts = jpeg_frames(6);
    parts[2] = truncated(&parts[2]);
    let (url, _server) = serve(vec![mjpeg_response(&multipart(&parts, true, true))]);
    let out = tempfile::tempdir().unwrap();
    let m = record(&mut HttpSource::open(fast(&url)).unwrap(), out.path(), None).unwrap();
    assert_eq!(m.parts, 6);
    assert_eq!(m.dropped, 1);
    assert_eq!(m.frames.len() as u64, m.parts - m.dropped);
    let on_disk: tacpalm::ingest::Manifest = tacpalm::formats::read_json(out.path().join("manifest.json")).unwrap();
    assert_eq!(on_disk, m);
}
