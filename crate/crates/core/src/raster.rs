//! Binary raster representation and the canonical-frame preprocessing steps:
//! binarization, content cropping and scaling to the fixed recognition frame.
//!
//! Stroke pixels are `1` (dark ink), background pixels are `0`. Rasters are
//! immutable values once constructed; every operation returns a new raster.

use crate::error::{Error, Result};

/// Side length of the canonical square frame every character is scaled to.
pub const CANONICAL_SIZE: usize = 140;

/// Grayscale raster with intensities 0..=255 (0 = black ink, 255 = paper).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayRaster {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayRaster {
    /// Builds a grayscale raster from row-major intensities.
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: pixels.len(),
            });
        }
        Ok(GrayRaster {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }
}

/// Rectangular bitmap of stroke (1) / background (0) pixels, row-major.
///
/// Invariants: `width >= 1`, `height >= 1`, every pixel is exactly 0 or 1,
/// and `width * height == pixels.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryRaster {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl BinaryRaster {
    /// Builds a raster from row-major 0/1 pixel values.
    pub fn from_pixels(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.is_empty() {
            return Err(Error::EmptyImage);
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: pixels.len(),
            });
        }
        if pixels.iter().any(|&p| p > 1) {
            return Err(Error::InvalidImageFile {
                path: "<memory>".into(),
                reason: "pixel value outside {0,1}".into(),
            });
        }
        Ok(BinaryRaster {
            width,
            height,
            pixels,
        })
    }

    /// All-background raster of the given size.
    pub fn blank(width: usize, height: usize) -> Result<Self> {
        Self::from_pixels(width, height, vec![0; width * height])
    }

    /// Parses ASCII art: one text row per raster row, `1`/`#` for stroke and
    /// `0`/`.` for background. Blank lines and leading/trailing spaces are
    /// ignored. Handy for tests and documentation.
    pub fn from_ascii(art: &str) -> Result<Self> {
        let rows: Vec<&str> = art
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        if rows.is_empty() {
            return Err(Error::EmptyImage);
        }
        let width = rows[0].chars().count();
        let mut pixels = Vec::with_capacity(rows.len() * width);
        for row in &rows {
            if row.chars().count() != width {
                return Err(Error::InvalidImageFile {
                    path: "<ascii>".into(),
                    reason: "ragged rows".into(),
                });
            }
            for ch in row.chars() {
                match ch {
                    '1' | '#' => pixels.push(1),
                    '0' | '.' => pixels.push(0),
                    other => {
                        return Err(Error::InvalidImageFile {
                            path: "<ascii>".into(),
                            reason: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
        }
        Self::from_pixels(width, rows.len(), pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Pixel at (row, col); panics if out of bounds.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        assert!(row < self.height && col < self.width);
        self.pixels[row * self.width + col]
    }

    /// Pixel at a possibly out-of-bounds position; off-raster positions read
    /// as background. This is the border rule used by all neighborhood logic.
    #[inline]
    pub fn get_or_zero(&self, row: isize, col: isize) -> u8 {
        if row < 0 || col < 0 || row as usize >= self.height || col as usize >= self.width {
            0
        } else {
            self.pixels[row as usize * self.width + col as usize]
        }
    }

    #[inline]
    pub fn is_stroke(&self, row: usize, col: usize) -> bool {
        self.get(row, col) == 1
    }

    pub fn stroke_count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p == 1).count()
    }

    pub fn is_blank(&self) -> bool {
        self.pixels.iter().all(|&p| p == 0)
    }

    /// Coordinates of all stroke pixels in row-major order.
    pub fn stroke_coords(&self) -> Vec<(usize, usize)> {
        let mut coords = Vec::new();
        for r in 0..self.height {
            for c in 0..self.width {
                if self.pixels[r * self.width + c] == 1 {
                    coords.push((r, c));
                }
            }
        }
        coords
    }

    pub(crate) fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub(crate) fn from_raw(width: usize, height: usize, pixels: Vec<u8>) -> Self {
        debug_assert_eq!(width * height, pixels.len());
        debug_assert!(pixels.iter().all(|&p| p <= 1));
        BinaryRaster {
            width,
            height,
            pixels,
        }
    }
}

/// The 3x3 window around a pixel, labeled
///
/// ```text
/// P3 P2 P9
/// P4 P1 P8
/// P5 P6 P7
/// ```
///
/// with `p1` at the center. The cyclic order used for transition counting is
/// exactly P2,P3,P4,P5,P6,P7,P8,P9,P2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Neighborhood {
    pub p1: u8,
    pub p2: u8,
    pub p3: u8,
    pub p4: u8,
    pub p5: u8,
    pub p6: u8,
    pub p7: u8,
    pub p8: u8,
    pub p9: u8,
}

impl Neighborhood {
    /// All-background window; the neighborhood of a position entirely off the
    /// raster.
    pub const EMPTY: Neighborhood = Neighborhood {
        p1: 0,
        p2: 0,
        p3: 0,
        p4: 0,
        p5: 0,
        p6: 0,
        p7: 0,
        p8: 0,
        p9: 0,
    };

    /// Neighbors in the cyclic transition order P2..P9.
    #[inline]
    pub fn ring(&self) -> [u8; 8] {
        [
            self.p2, self.p3, self.p4, self.p5, self.p6, self.p7, self.p8, self.p9,
        ]
    }
}

/// Thresholds a grayscale raster: a pixel becomes stroke iff its intensity is
/// strictly below `threshold` (dark ink on light paper). Dimensions are
/// preserved.
pub fn binarize(gray: &GrayRaster, threshold: u8) -> Result<BinaryRaster> {
    if gray.is_empty() {
        return Err(Error::EmptyImage);
    }
    let pixels = gray
        .pixels()
        .iter()
        .map(|&v| u8::from(v < threshold))
        .collect();
    BinaryRaster::from_pixels(gray.width(), gray.height(), pixels)
}

/// Crops to the minimal axis-aligned rectangle containing every stroke pixel.
/// Every boundary row and column of the result contains at least one stroke
/// pixel; cropping an already-tight raster is the identity.
pub fn crop_to_content(img: &BinaryRaster) -> Result<BinaryRaster> {
    let mut min_r = usize::MAX;
    let mut max_r = 0usize;
    let mut min_c = usize::MAX;
    let mut max_c = 0usize;
    for r in 0..img.height() {
        for c in 0..img.width() {
            if img.get(r, c) == 1 {
                min_r = min_r.min(r);
                max_r = max_r.max(r);
                min_c = min_c.min(c);
                max_c = max_c.max(c);
            }
        }
    }
    if min_r == usize::MAX {
        return Err(Error::BlankImage);
    }
    let width = max_c - min_c + 1;
    let height = max_r - min_r + 1;
    let mut pixels = Vec::with_capacity(width * height);
    for r in min_r..=max_r {
        for c in min_c..=max_c {
            pixels.push(img.get(r, c));
        }
    }
    Ok(BinaryRaster::from_raw(width, height, pixels))
}

/// Scales a raster to the canonical frame with nearest-neighbor sampling:
/// output pixel (r, c) reads source pixel (r*h/S, c*w/S) with S the canonical
/// side length. The output stays binary by construction.
pub fn scale_to_canonical(img: &BinaryRaster) -> BinaryRaster {
    let (w, h) = (img.width(), img.height());
    let s = CANONICAL_SIZE;
    let mut pixels = Vec::with_capacity(s * s);
    for r in 0..s {
        let sr = r * h / s;
        for c in 0..s {
            let sc = c * w / s;
            pixels.push(img.get(sr, sc));
        }
    }
    BinaryRaster::from_raw(s, s, pixels)
}

/// Reads the 3x3 window centered at (row, col). Off-raster neighbors read as
/// background so border pixels need no special casing.
pub fn neighborhood_at(img: &BinaryRaster, row: usize, col: usize) -> Result<Neighborhood> {
    if row >= img.height() || col >= img.width() {
        return Err(Error::IndexOutOfBounds {
            row,
            col,
            width: img.width(),
            height: img.height(),
        });
    }
    let r = row as isize;
    let c = col as isize;
    Ok(Neighborhood {
        p1: img.get(row, col),
        p2: img.get_or_zero(r - 1, c),
        p3: img.get_or_zero(r - 1, c - 1),
        p4: img.get_or_zero(r, c - 1),
        p5: img.get_or_zero(r + 1, c - 1),
        p6: img.get_or_zero(r + 1, c),
        p7: img.get_or_zero(r + 1, c + 1),
        p8: img.get_or_zero(r, c + 1),
        p9: img.get_or_zero(r - 1, c + 1),
    })
}
