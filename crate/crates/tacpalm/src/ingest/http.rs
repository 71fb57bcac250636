use std::io::{Read, Write};
use std::net::{TcpStream, ToSocketAddrs};
use std::time::{Duration, Instant};

use log::warn;

use super::multipart::{check_boundary, MultipartReader};
use super::{decode_jpeg, is_complete_jpeg, Frame, FrameSource, IngestError, Monotone, SourceStats};

/// Reconnect schedule: wait `base * factor^k` before attempt `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub base: Duration,
    pub factor: u32,
    pub max_tries: u32,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self { base: Duration::from_millis(100), factor: 2, max_tries: 5 }
    }
}

impl RetryPolicy {
    pub fn delay(&self, attempt: u32) -> Duration {
        self.base * self.factor.saturating_pow(attempt)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpConfig {
    pub url: String,
    pub connect_timeout: Duration,
    pub read_timeout: Duration,
    pub retry: RetryPolicy,
}

impl HttpConfig {
    pub fn new(url: impl Into<String>) -> Self {
        Self {
            url: url.into(),
            connect_timeout: Duration::from_secs(5),
            read_timeout: Duration::from_secs(10),
            retry: RetryPolicy::default(),
        }
    }
}

/// Extracts the boundary token from a `multipart/x-mixed-replace` media type.
pub fn parse_content_type(value: &str) -> Result<String, IngestError> {
    let mut parts = value.split(';');
    let media = parts.next().unwrap_or("").trim();
    if !media.eq_ignore_ascii_case("multipart/x-mixed-replace") {
        return Err(IngestError::WrongContentType(value.to_string()));
    }
    let boundary = parts
        .filter_map(|p| p.split_once('='))
        .find(|(k, _)| k.trim().eq_ignore_ascii_case("boundary"))
        .map(|(_, v)| v.trim().trim_matches('"').to_string())
        .ok_or(IngestError::MissingBoundary)?;
    check_boundary(&boundary)?;
    Ok(boundary)
}

type Reader = MultipartReader<TcpStream>;

fn connect(cfg: &HttpConfig) -> Result<Reader, IngestError> {
    let url = url::Url::parse(&cfg.url).map_err(|_| IngestError::Url(cfg.url.clone()))?;
    if url.scheme() != "http" {
        return Err(IngestError::Url(cfg.url.clone()));
    }
    let host = url.host_str().ok_or_else(|| IngestError::Url(cfg.url.clone()))?;
    let port = url.port_or_known_default().unwrap_or(80);
    let addr = format!("{host}:{port}");
    let conn_err = |source| IngestError::Connect { addr: addr.clone(), source };
    let sock = addr.to_socket_addrs().map_err(conn_err)?.next().ok_or_else(|| IngestError::Url(cfg.url.clone()))?;
    let mut stream = TcpStream::connect_timeout(&sock, cfg.connect_timeout).map_err(conn_err)?;
    stream.set_read_timeout(Some(cfg.read_timeout))?;

    let target = match url.query() {
        Some(q) => format!("{}?{q}", url.path()),
        None => url.path().to_string(),
    };
    write!(stream, "GET {target} HTTP/1.1\r\nHost: {addr}\r\nAccept: multipart/x-mixed-replace\r\nConnection: close\r\n\r\n")?;

    let mut head = Vec::new();
    let mut chunk = [0u8; 4096];
    loop {
        let n = stream.read(&mut chunk)?;
        if n == 0 {
            return Err(IngestError::Protocol("connection closed before response headers".into()));
        }
        head.extend_from_slice(&chunk[..n]);
        let mut raw = [httparse::EMPTY_HEADER; 32];
        let mut resp = httparse::Response::new(&mut raw);
        match resp.parse(&head) {
            Ok(httparse::Status::Complete(used)) => {
                let code = resp.code.unwrap_or(0);
                if code != 200 {
                    return Err(IngestError::Status(code));
                }
                let header = |name: &str| {
                    resp.headers.iter().find(|h| h.name.eq_ignore_ascii_case(name)).map(|h| String::from_utf8_lossy(h.value).into_owned())
                };
                if header("transfer-encoding").is_some_and(|v| v.to_ascii_lowercase().contains("chunked")) {
                    return Err(IngestError::Protocol("chunked transfer encoding is not supported".into()));
                }
                let ctype = header("content-type").ok_or_else(|| IngestError::WrongContentType(String::new()))?;
                let boundary = parse_content_type(&ctype)?;
                let rest = head[used..].to_vec();
                return Ok(MultipartReader::with_prefix(stream, &boundary, rest));
            }
            Ok(httparse::Status::Partial) if head.len() < 64 * 1024 => continue,
            Ok(httparse::Status::Partial) => return Err(IngestError::Protocol("response head too long".into())),
            Err(e) => return Err(IngestError::Protocol(format!("response head: {e}"))),
        }
    }
}

/// Pull-based MJPEG client. Truncated or undecodable parts are skipped and
/// counted; a dropped connection is retried per [`RetryPolicy`].
pub struct HttpSource {
    cfg: HttpConfig,
    reader: Option<Reader>,
    opened: Instant,
    clock: Monotone,
    stats: SourceStats,
}

impl HttpSource {
    pub fn open(cfg: HttpConfig) -> Result<Self, IngestError> {
        let reader = connect(&cfg)?;
        Ok(Self { cfg, reader: Some(reader), opened: Instant::now(), clock: Monotone::default(), stats: SourceStats::default() })
    }

    fn reconnect(&mut self) -> Result<(), IngestError> {
        let policy = self.cfg.retry;
        let mut last = String::from("connection closed mid-stream");
        for attempt in 0..policy.max_tries {
            std::thread::sleep(policy.delay(attempt));
            match connect(&self.cfg) {
                Ok(r) => {
                    self.reader = Some(r);
                    self.stats.reconnects += 1;
                    return Ok(());
                }
                Err(e) => {
                    warn!("reconnect attempt {} failed: {e}", attempt + 1);
                    last = e.to_string();
                }
            }
        }
        self.reader = None;
        Err(IngestError::ReconnectFailed { tries: policy.max_tries, last })
    }
}

impl FrameSource for HttpSource {
    fn next_frame(&mut self) -> Result<Option<Frame>, IngestError> {
        loop {
            let Some(reader) = self.reader.as_mut() else { return Ok(None) };
            let part = match reader.next_part() {
                Ok(Some(p)) => p,
                Ok(None) => {
                    self.reader = None;
                    return Ok(None);
                }
                Err(IngestError::Disconnected | IngestError::Io(_)) => {
                    warn!("stream dropped after {} frames; reconnecting", self.stats.delivered);
                    self.reconnect()?;
                    continue;
                }
                Err(e) => return Err(e),
            };
            if !is_complete_jpeg(&part.body) {
                self.stats.dropped += 1;
                warn!("skipping truncated JPEG part ({} bytes); {} dropped so far", part.body.len(), self.stats.dropped);
                continue;
            }
            let image = match decode_jpeg(&part.body) {
                Ok(img) => img,
                Err(e) => {
                    self.stats.dropped += 1;
                    warn!("skipping undecodable part: {e}");
                    continue;
                }
            };
            let frame = Frame {
                timestamp: self.clock.stamp(self.opened.elapsed()),
                index: self.stats.delivered,
                encoded: part.body,
                image,
            };
            self.stats.delivered += 1;
            return Ok(Some(frame));
        }
    }

    fn stats(&self) -> SourceStats {
        self.stats
    }

    fn close(&mut self) {
        self.reader = None;
    }
}
