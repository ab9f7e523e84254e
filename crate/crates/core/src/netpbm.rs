//! Minimal netpbm reader/writer: PBM (P1 ascii, P4 packed) for binary input
//! and stage output, PGM (P2 ascii, P5 raw) for grayscale input.
//!
//! PBM's convention of 1 = black matches the stroke = 1 convention of
//! [`BinaryRaster`], so bitmaps map across without inversion.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::raster::{BinaryRaster, GrayRaster};

/// A parsed netpbm file: either already-binary or grayscale to be thresholded.
#[derive(Debug, Clone)]
pub enum NetpbmImage {
    Bitmap(BinaryRaster),
    Graymap(GrayRaster),
}

/// Output encoding for PBM writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbmFormat {
    /// `P1`, one ascii digit per pixel. Human-inspectable.
    Ascii,
    /// `P4`, eight pixels per byte, rows padded to byte boundaries.
    Packed,
}

pub fn read_netpbm(path: &Path) -> Result<NetpbmImage> {
    let bytes =
        fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    parse_netpbm(&bytes).map_err(|e| match e {
        Error::InvalidImageFile { reason, .. } => Error::InvalidImageFile {
            path: path.to_path_buf(),
            reason,
        },
        other => other,
    })
}

pub fn write_pbm(path: &Path, img: &BinaryRaster, format: PbmFormat) -> Result<()> {
    fs::write(path, encode_pbm(img, format))
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

pub fn encode_pbm(img: &BinaryRaster, format: PbmFormat) -> Vec<u8> {
    let (w, h) = (img.width(), img.height());
    match format {
        PbmFormat::Ascii => {
            let mut out = format!("P1\n{w} {h}\n").into_bytes();
            for r in 0..h {
                for c in 0..w {
                    out.push(b'0' + img.get(r, c));
                }
                out.push(b'\n');
            }
            out
        }
        PbmFormat::Packed => {
            let mut out = format!("P4\n{w} {h}\n").into_bytes();
            for r in 0..h {
                let mut byte = 0u8;
                let mut nbits = 0;
                for c in 0..w {
                    byte = (byte << 1) | img.get(r, c);
                    nbits += 1;
                    if nbits == 8 {
                        out.push(byte);
                        byte = 0;
                        nbits = 0;
                    }
                }
                if nbits > 0 {
                    out.push(byte << (8 - nbits));
                }
            }
            out
        }
    }
}

pub fn parse_netpbm(bytes: &[u8]) -> Result<NetpbmImage> {
    let mut cursor = Cursor { bytes, pos: 0 };
    let magic = cursor.magic()?;
    match magic {
        b"P1" => {
            let (w, h) = cursor.dimensions()?;
            let mut pixels = Vec::with_capacity(w * h);
            while pixels.len() < w * h {
                match cursor.next_meaningful_byte() {
                    Some(b'0') => pixels.push(0),
                    Some(b'1') => pixels.push(1),
                    Some(other) => {
                        return Err(invalid(format!("unexpected byte {other:#04x} in P1 data")))
                    }
                    None => return Err(invalid("truncated P1 pixel data")),
                }
            }
            Ok(NetpbmImage::Bitmap(BinaryRaster::from_pixels(w, h, pixels)?))
        }
        b"P4" => {
            let (w, h) = cursor.dimensions()?;
            cursor.single_whitespace()?;
            let row_bytes = w.div_ceil(8);
            let mut pixels = Vec::with_capacity(w * h);
            for _ in 0..h {
                let row = cursor.take(row_bytes)?;
                for c in 0..w {
                    let bit = (row[c / 8] >> (7 - c % 8)) & 1;
                    pixels.push(bit);
                }
            }
            Ok(NetpbmImage::Bitmap(BinaryRaster::from_pixels(w, h, pixels)?))
        }
        b"P2" => {
            let (w, h) = cursor.dimensions()?;
            let maxval = cursor.ascii_number()?;
            if maxval == 0 || maxval > 255 {
                return Err(invalid(format!("unsupported maxval {maxval}")));
            }
            let mut pixels = Vec::with_capacity(w * h);
            for _ in 0..w * h {
                let v = cursor.ascii_number()?;
                if v > maxval {
                    return Err(invalid(format!("sample {v} exceeds maxval {maxval}")));
                }
                pixels.push(rescale(v, maxval));
            }
            Ok(NetpbmImage::Graymap(GrayRaster::new(w, h, pixels)?))
        }
        b"P5" => {
            let (w, h) = cursor.dimensions()?;
            let maxval = cursor.ascii_number()?;
            if maxval == 0 || maxval > 255 {
                return Err(invalid(format!("unsupported maxval {maxval}")));
            }
            cursor.single_whitespace()?;
            let raw = cursor.take(w * h)?;
            let pixels = raw.iter().map(|&v| rescale(v as usize, maxval)).collect();
            Ok(NetpbmImage::Graymap(GrayRaster::new(w, h, pixels)?))
        }
        other => Err(invalid(format!(
            "unsupported magic {:?}",
            String::from_utf8_lossy(other)
        ))),
    }
}

fn rescale(value: usize, maxval: usize) -> u8 {
    (value * 255 / maxval) as u8
}

fn invalid(reason: impl Into<String>) -> Error {
    Error::InvalidImageFile {
        path: "<bytes>".into(),
        reason: reason.into(),
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn magic(&mut self) -> Result<&'a [u8]> {
        if self.bytes.len() < 2 {
            return Err(invalid("file too short for magic"));
        }
        self.pos = 2;
        Ok(&self.bytes[..2])
    }

    fn dimensions(&mut self) -> Result<(usize, usize)> {
        let w = self.ascii_number()?;
        let h = self.ascii_number()?;
        if w == 0 || h == 0 {
            return Err(invalid("zero dimension"));
        }
        Ok((w, h))
    }

    /// Next byte that is not whitespace or part of a `#` comment.
    fn next_meaningful_byte(&mut self) -> Option<u8> {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            self.pos += 1;
            match b {
                b' ' | b'\t' | b'\r' | b'\n' => continue,
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                other => return Some(other),
            }
        }
        None
    }

    fn ascii_number(&mut self) -> Result<usize> {
        let first = self
            .next_meaningful_byte()
            .ok_or_else(|| invalid("truncated header"))?;
        if !first.is_ascii_digit() {
            return Err(invalid(format!("expected digit, found {first:#04x}")));
        }
        let mut value = (first - b'0') as usize;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            value = value * 10 + (self.bytes[self.pos] - b'0') as usize;
            self.pos += 1;
            if value > 1 << 24 {
                return Err(invalid("header number unreasonably large"));
            }
        }
        Ok(value)
    }

    /// Consumes exactly one whitespace byte separating header from raw data.
    fn single_whitespace(&mut self) -> Result<()> {
        match self.bytes.get(self.pos) {
            Some(b' ' | b'\t' | b'\r' | b'\n') => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(invalid("missing whitespace before raw data")),
        }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(invalid("truncated raw pixel data"));
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }
}
