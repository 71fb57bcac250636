//! Incremental `multipart/x-mixed-replace` part reader.
//!
//! A part's `Content-Length` is trusted when present, so a payload may
//! contain the delimiter bytes. Without it the body runs to the next
//! `CRLF--boundary`.

use std::io::Read;

use super::IngestError;

const CHUNK: usize = 64 * 1024;
const MAX_HEADER_BYTES: usize = 16 * 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub headers: Vec<(String, String)>,
    pub body: Vec<u8>,
}

impl Part {
    pub fn header(&self, name: &str) -> Option<&str> {
        self.headers.iter().find(|(k, _)| k.eq_ignore_ascii_case(name)).map(|(_, v)| v.as_str())
    }
}

/// Validates a boundary token (1 to 70 characters from the RFC 2046 set,
/// not ending in a space).
pub fn check_boundary(token: &str) -> Result<(), IngestError> {
    let ok_char = |c: char| c.is_ascii_alphanumeric() || "'()+_,-./:=? ".contains(c);
    if token.is_empty() || token.len() > 70 || token.ends_with(' ') || !token.chars().all(ok_char) {
        return Err(IngestError::BadBoundary(token.to_string()));
    }
    Ok(())
}

fn find(haystack: &[u8], needle: &[u8]) -> Option<usize> {
    haystack.windows(needle.len()).position(|w| w == needle)
}

pub struct MultipartReader<R> {
    inner: R,
    delimiter: Vec<u8>,
    buf: Vec<u8>,
    pos: usize,
    eof: bool,
    finished: bool,
}

impl<R: Read> MultipartReader<R> {
    pub fn new(inner: R, boundary: &str) -> Self {
        Self::with_prefix(inner, boundary, Vec::new())
    }

    /// `prefix` holds bytes already read past the HTTP response head.
    pub fn with_prefix(inner: R, boundary: &str, prefix: Vec<u8>) -> Self {
        // Some servers put the leading dashes into the parameter itself.
        let delimiter = if boundary.starts_with("--") { boundary.into() } else { format!("--{boundary}") };
        Self { inner, delimiter: delimiter.into_bytes(), buf: prefix, pos: 0, eof: false, finished: false }
    }

    fn fill(&mut self) -> Result<bool, IngestError> {
        if self.eof {
            return Ok(false);
        }
        if self.pos > CHUNK && self.pos * 2 > self.buf.len() {
            self.buf.drain(..self.pos);
            self.pos = 0;
        }
        let start = self.buf.len();
        self.buf.resize(start + CHUNK, 0);
        let n = loop {
            match self.inner.read(&mut self.buf[start..]) {
                Ok(n) => break n,
                Err(e) if e.kind() == std::io::ErrorKind::Interrupted => continue,
                Err(e) => {
                    self.buf.truncate(start);
                    return Err(e.into());
                }
            }
        };
        self.buf.truncate(start + n);
        self.eof = n == 0;
        Ok(n > 0)
    }

    fn pending(&self) -> &[u8] {
        &self.buf[self.pos..]
    }

    /// Finds `needle` at or after the cursor, reading more as needed.
    fn seek(&mut self, needle: &[u8]) -> Result<usize, IngestError> {
        let mut from = 0;
        loop {
            if let Some(i) = find(&self.pending()[from..], needle) {
                return Ok(from + i);
            }
            from = self.pending().len().saturating_sub(needle.len() - 1);
            if !self.fill()? {
                return Err(IngestError::Disconnected);
            }
        }
    }

    fn need(&mut self, n: usize) -> Result<(), IngestError> {
        while self.pending().len() < n {
            if !self.fill()? {
                return Err(IngestError::Disconnected);
            }
        }
        Ok(())
    }

    /// The next part, `None` after the closing delimiter, or
    /// [`IngestError::Disconnected`] when the stream stops early.
    pub fn next_part(&mut self) -> Result<Option<Part>, IngestError> {
        if self.finished {
            return Ok(None);
        }
        let delim = self.delimiter.clone();
        let at = self.seek(&delim)?;
        self.pos += at + delim.len();
        self.need(2)?;
        if self.pending().starts_with(b"--") {
            self.finished = true;
            return Ok(None);
        }
        let eol = self.seek(b"\n")?;
        self.pos += eol + 1;

        let headers = self.headers()?;
        let length = headers
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case("content-length"))
            .map(|(_, v)| v.trim().parse::<usize>().map_err(|_| IngestError::Protocol(format!("bad Content-Length {v:?}"))))
            .transpose()?;
        let body = match length {
            Some(n) => {
                self.need(n)?;
                let body = self.pending()[..n].to_vec();
                self.pos += n;
                body
            }
            None => {
                let mut close = b"\r\n".to_vec();
                close.extend_from_slice(&delim);
                let end = self.seek(&close)?;
                let body = self.pending()[..end].to_vec();
                self.pos += end + 2;
                body
            }
        };
        Ok(Some(Part { headers, body }))
    }

    fn headers(&mut self) -> Result<Vec<(String, String)>, IngestError> {
        loop {
            let mut raw = [httparse::EMPTY_HEADER; 32];
            match httparse::parse_headers(self.pending(), &mut raw) {
                Ok(httparse::Status::Complete((used, parsed))) => {
                    let headers = parsed
                        .iter()
                        .map(|h| (h.name.to_string(), String::from_utf8_lossy(h.value).into_owned()))
                        .collect();
                    self.pos += used;
                    return Ok(headers);
                }
                Ok(httparse::Status::Partial) => {
                    if self.pending().len() > MAX_HEADER_BYTES {
                        return Err(IngestError::Protocol("part headers too long".into()));
                    }
                    if !self.fill()? {
                        return Err(IngestError::Disconnected);
                    }
                }
                Err(e) => return Err(IngestError::Protocol(format!("part headers: {e}"))),
            }
        }
    }
}
