//! Netpbm grayscale and color maps: plain (P2, P3) and raw (P5, P6).
//!
//! Header tokens are separated by whitespace and may be interleaved with `#`
//! comments running to the end of the line. Raw rasters start after exactly one
//! whitespace byte following maxval; samples wider than 8 bits are big-endian.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::frame::Frame;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PnmError {
    #[error("not a supported PNM file (magic {0:?})")]
    BadMagic(Vec<u8>),
    #[error("bad header: {0}")]
    BadHeader(String),
    #[error("raster truncated: expected {expected} samples, found {found}")]
    TruncatedData { expected: usize, found: usize },
    #[error("sample {value} exceeds maxval {maxval}")]
    SampleOutOfRange { value: u32, maxval: u16 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnmFormat {
    /// Plain graymap.
    P2,
    /// Plain pixmap.
    P3,
    /// Raw graymap.
    P5,
    /// Raw pixmap.
    P6,
}

impl PnmFormat {
    pub const ALL: [PnmFormat; 4] = [PnmFormat::P2, PnmFormat::P3, PnmFormat::P5, PnmFormat::P6];

    pub fn channels(self) -> usize {
        match self {
            PnmFormat::P2 | PnmFormat::P5 => 1,
            PnmFormat::P3 | PnmFormat::P6 => 3,
        }
    }

    pub fn is_plain(self) -> bool {
        matches!(self, PnmFormat::P2 | PnmFormat::P3)
    }

    fn magic(self) -> &'static str {
        match self {
            PnmFormat::P2 => "P2",
            PnmFormat::P3 => "P3",
            PnmFormat::P5 => "P5",
            PnmFormat::P6 => "P6",
        }
    }

    /// Raw format for a channel count.
    pub fn raw_for(channels: usize) -> PnmFormat {
        if channels == 3 {
            PnmFormat::P6
        } else {
            PnmFormat::P5
        }
    }

    pub fn extension(self) -> &'static str {
        if self.channels() == 1 {
            "pgm"
        } else {
            "ppm"
        }
    }
}

impl fmt::Display for PnmFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.magic())
    }
}

impl FromStr for PnmFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "P2" => Ok(PnmFormat::P2),
            "P3" => Ok(PnmFormat::P3),
            "P5" => Ok(PnmFormat::P5),
            "P6" => Ok(PnmFormat::P6),
            other => Err(format!("unknown PNM format '{other}'")),
        }
    }
}

/// Decoded integer samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PnmImage {
    pub format: PnmFormat,
    pub maxval: u16,
    pub width: usize,
    pub height: usize,
    pub samples: Vec<u16>,
}

impl PnmImage {
    pub fn to_frame(&self) -> Result<Frame> {
        let scale = f64::from(self.maxval);
        Frame::new(
            self.width,
            self.height,
            self.format.channels(),
            self.samples.iter().map(|&s| f64::from(s) / scale).collect(),
        )
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Next decimal token, or `None` at end of input.
    fn number(&mut self) -> std::result::Result<Option<u32>, String> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.bytes.get(self.pos) {
                None => Ok(None),
                Some(&b) => Err(format!("unexpected byte 0x{b:02x} at offset {}", self.pos)),
            };
        }
        if let Some(&b) = self.bytes.get(self.pos) {
            if !(b.is_ascii_whitespace() || b == b'#') {
                return Err(format!("unexpected byte 0x{b:02x} at offset {}", self.pos));
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        text.parse::<u32>()
            .map(Some)
            .map_err(|_| format!("number {text} too large"))
    }

    fn header_field(&mut self, name: &str) -> std::result::Result<u32, PnmError> {
        match self.number() {
            Ok(Some(v)) => Ok(v),
            Ok(None) => Err(PnmError::BadHeader(format!("missing {name}"))),
            Err(e) => Err(PnmError::BadHeader(format!("{name}: {e}"))),
        }
    }
}

pub fn decode_pnm(bytes: &[u8]) -> std::result::Result<PnmImage, PnmError> {
    let format = match bytes.get(..2) {
        Some(b"P2") => PnmFormat::P2,
        Some(b"P3") => PnmFormat::P3,
        Some(b"P5") => PnmFormat::P5,
        Some(b"P6") => PnmFormat::P6,
        _ => return Err(PnmError::BadMagic(bytes.iter().take(2).copied().collect())),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    match bytes.get(2) {
        Some(b) if b.is_ascii_whitespace() || *b == b'#' => {}
        _ => return Err(PnmError::BadHeader("missing whitespace after magic".into())),
    }
    let width = cur.header_field("width")? as usize;
    let height = cur.header_field("height")? as usize;
    let maxval = cur.header_field("maxval")?;
    if width == 0 || height == 0 {
        return Err(PnmError::BadHeader(format!(
            "zero dimension {width}x{height}"
        )));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(PnmError::BadHeader(format!(
            "maxval {maxval} outside 1..=65535"
        )));
    }
    let maxval = maxval as u16;
    let count = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(format.channels()))
        .ok_or_else(|| PnmError::BadHeader("dimensions overflow".into()))?;

    let samples = if format.is_plain() {
        // Every plain sample needs at least a digit and a separator.
        let remaining = bytes.len() - cur.pos;
        if count > remaining / 2 + 1 {
            return Err(PnmError::TruncatedData {
                expected: count,
                found: remaining / 2 + 1,
            });
        }
        let mut samples = Vec::with_capacity(count);
        while samples.len() < count {
            match cur.number() {
                Ok(Some(v)) => samples.push(check_sample(v, maxval)?),
                Ok(None) => {
                    return Err(PnmError::TruncatedData {
                        expected: count,
                        found: samples.len(),
                    })
                }
                Err(e) => return Err(PnmError::BadHeader(format!("raster: {e}"))),
            }
        }
        samples
    } else {
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            Some(_) => {
                return Err(PnmError::BadHeader(
                    "missing whitespace after maxval".into(),
                ))
            }
            None => {
                return Err(PnmError::TruncatedData {
                    expected: count,
                    found: 0,
                })
            }
        }
        let width_bytes = if maxval > 255 { 2 } else { 1 };
        let raster = &bytes[cur.pos..];
        let found = raster.len() / width_bytes;
        if found < count {
            return Err(PnmError::TruncatedData {
                expected: count,
                found,
            });
        }
        let mut samples = Vec::with_capacity(count);
        for i in 0..count {
            let v = if width_bytes == 2 {
                u32::from(u16::from_be_bytes([raster[2 * i], raster[2 * i + 1]]))
            } else {
                u32::from(raster[i])
            };
            samples.push(check_sample(v, maxval)?);
        }
        samples
    };
    Ok(PnmImage {
        format,
        maxval,
        width,
        height,
        samples,
    })
}

fn check_sample(value: u32, maxval: u16) -> std::result::Result<u16, PnmError> {
    if value > u32::from(maxval) {
        Err(PnmError::SampleOutOfRange { value, maxval })
    } else {
        Ok(value as u16)
    }
}

/// Decodes to a frame with pixels `sample / maxval`.
pub fn read_pnm(bytes: &[u8]) -> Result<Frame> {
    decode_pnm(bytes)?.to_frame()
}

/// Quantizes `[0, 1]` pixels to `round(pixel · maxval)` (half away from zero),
/// clamping out-of-range values.
pub fn write_pnm(frame: &Frame, format: PnmFormat, maxval: u16) -> Result<Vec<u8>> {
    if frame.channels() != format.channels() {
        return Err(Error::ChannelMismatch {
            channels: frame.channels(),
            format: format.magic(),
        });
    }
    if maxval == 0 {
        return Err(Error::InvalidParameter {
            name: "maxval",
            reason: "must be at least 1".into(),
        });
    }
    let scale = f64::from(maxval);
    let samples = frame
        .pixels()
        .iter()
        .map(|&p| (p * scale).round().clamp(0.0, scale) as u16);
    let mut out = format!(
        "{}\n{} {}\n{}\n",
        format.magic(),
        frame.width(),
        frame.height(),
        maxval
    )
    .into_bytes();
    if format.is_plain() {
        let per_row = frame.width() * frame.channels();
        let all: Vec<u16> = samples.collect();
        for row in all.chunks(per_row) {
            let line: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            out.extend_from_slice(line.join(" ").as_bytes());
            out.push(b'\n');
        }
    } else if maxval > 255 {
        for s in samples {
            out.extend_from_slice(&s.to_be_bytes());
        }
    } else {
        out.extend(samples.map(|s| s as u8));
    }
    Ok(out)
}
