//! Netpbm graymap (PGM) reader and writer, plain (`P2`) and raw (`P5`).

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Grayscale image, row-major, samples in `0..=maxval`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub pixels: Vec<u16>,
}

impl Raster {
    pub fn new(width: usize, height: usize, maxval: u16, pixels: Vec<u16>) -> Result<Self> {
        if maxval == 0 {
            return Err(Error::config("maxval must be positive"));
        }
        if pixels.len() != width * height {
            return Err(Error::dimension(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        if let Some(v) = pixels.iter().find(|&&v| v > maxval) {
            return Err(Error::config(format!("sample {v} exceeds maxval {maxval}")));
        }
        Ok(Self {
            width,
            height,
            maxval,
            pixels,
        })
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> u16 {
        self.pixels[y * self.width + x]
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(start, format!("{what} out of range")))
    }
}

pub fn parse_pgm(bytes: &[u8]) -> Result<Raster> {
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(Error::parse(0, "missing P2/P5 magic number")),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(Error::parse(maxval_at, format!("maxval {maxval} outside 1..=65535")));
    }
    let maxval = maxval as u16;
    if width == 0 || height == 0 {
        return Err(Error::parse(2, format!("empty image {width}x{height}")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::parse(2, "image dimensions overflow"))?;

    let mut pixels = Vec::with_capacity(count);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(Error::parse(cur.pos, "expected whitespace after maxval")),
        }
        let wide = maxval > 255;
        let needed = count * if wide { 2 } else { 1 };
        let payload = &bytes[cur.pos..];
        if payload.len() < needed {
            return Err(Error::parse(
                bytes.len(),
                format!("truncated raster: {} of {needed} bytes", payload.len()),
            ));
        }
        if wide {
            pixels.extend(
                payload[..needed]
                    .chunks_exact(2)
                    .map(|b| u16::from_be_bytes([b[0], b[1]])),
            );
        } else {
            pixels.extend(payload[..needed].iter().map(|&b| b as u16));
        }
    } else {
        for _ in 0..count {
            cur.skip_whitespace_and_comments();
            if cur.pos >= bytes.len() {
                return Err(Error::parse(bytes.len(), "truncated raster"));
            }
            let at = cur.pos;
            let v = cur.number("sample")?;
            if v > maxval as u32 {
                return Err(Error::parse(at, format!("sample {v} exceeds maxval {maxval}")));
            }
            pixels.push(v as u16);
        }
    }
    if let Some((i, v)) = pixels.iter().enumerate().find(|(_, &v)| v > maxval) {
        return Err(Error::parse(
            cur.pos + i,
            format!("sample {v} exceeds maxval {maxval}"),
        ));
    }
    Ok(Raster {
        width,
        height,
        maxval,
        pixels,
    })
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<Raster> {
    parse_pgm(&fs::read(path)?)
}

/// Raw (`P5`) encoding.
pub fn encode_pgm(raster: &Raster) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", raster.width, raster.height, raster.maxval).into_bytes();
    if raster.maxval > 255 {
        for &v in &raster.pixels {
            out.extend_from_slice(&v.to_be_bytes());
        }
    } else {
        out.extend(raster.pixels.iter().map(|&v| v as u8));
    }
    out
}

pub fn save_pgm(raster: &Raster, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pgm(raster))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_header_and_payload() {
        let mut bytes = b"P5 4 4 255\n".to_vec();
        bytes.extend(0u8..16);
        let r = parse_pgm(&bytes).unwrap();
        assert_eq!((r.width, r.height, r.maxval), (4, 4, 255));
        assert_eq!(r.pixel(1, 2), 9);
    }

    #[test]
    fn sixteen_bit_samples_are_big_endian() {
        let mut bytes = b"P5\n2 1\n65535\n".to_vec();
        bytes.extend_from_slice(&[0x01, 0x02, 0xff, 0xfe]);
        let r = parse_pgm(&bytes).unwrap();
        assert_eq!(r.pixels, vec![0x0102, 0xfffe]);
    }

    #[test]
    fn plain_format_with_comments() {
        let r = parse_pgm(b"P2\n# a comment\n3 1\n# another\n10\n0 5\n10\n").unwrap();
        assert_eq!(r.pixels, vec![0, 5, 10]);
    }

    #[test]
    fn truncated_and_malformed_report_offsets() {
        match parse_pgm(b"P5 2 2 255\n\x01\x02") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 13),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_pgm(b"P6 1 1 255\n\0"), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(parse_pgm(b"P2 2 x"), Err(Error::Parse { offset: 5, .. })));
        assert!(matches!(parse_pgm(b"P2 1 1 3 7"), Err(Error::Parse { offset: 9, .. })));
        assert!(parse_pgm(b"P5 1 1 0\n\0").is_err());
    }
}
