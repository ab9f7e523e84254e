//! Structural feature extraction.
//!
//! The feature vector concatenates, in documented order: per-segment
//! accumulated direction change (`gc`, row-major segments), the normalized
//! intersection count, the headline (shirorekha) category one-hot
//! Full/Partial/None, and the vertical-spine category one-hot End/Mid/None.
//! `gc` and intersections are measured on the pruned skeleton; the headline
//! and spine detectors run on the canonical pre-thinning raster, since
//! thinning can fragment long bars.

use crate::error::{Error, Result};
use crate::raster::{neighborhood_at, BinaryRaster};
use crate::thinning::zo_count;

/// Fraction of the canonical height forming the headline search band.
pub const TOP_BAND_FRACTION: f64 = 0.20;

/// Headline category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShirorekhaType {
    Full,
    Partial,
    None,
}

/// Vertical-spine category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpineType {
    End,
    Mid,
    None,
}

/// Thresholds and normalization constants for feature extraction.
#[derive(Debug, Clone)]
pub struct FeatureConfig {
    /// Divisor applied to each segment's raw gc value before clamping to [0, 1].
    pub norm_factor: f64,
    /// Divisor applied to the intersection count before clamping to [0, 1].
    pub intersection_divisor: f64,
    /// Headline run fraction at or above which the headline counts as Full.
    pub shirorekha_full: f64,
    /// Headline run fraction at or above which the headline counts as Partial.
    pub shirorekha_partial: f64,
    /// Minimum vertical run fraction for a spine to be present.
    pub spine_min_run: f64,
    /// Column fraction at or beyond which a spine counts as End rather than Mid.
    pub spine_end_zone: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            norm_factor: 40.0,
            intersection_divisor: 10.0,
            shirorekha_full: 0.80,
            shirorekha_partial: 0.35,
            spine_min_run: 0.60,
            spine_end_zone: 0.75,
        }
    }
}

/// Extracted features of one character image.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    /// Normalized per-segment gc values, row-major segment order, each in [0, 1].
    pub gc: Vec<f64>,
    /// Normalized intersection count in [0, 1].
    pub intersections: f64,
    pub shirorekha: ShirorekhaType,
    pub spine: SpineType,
}

impl FeatureVector {
    /// Total component count: n^2 gc values plus intersections plus two
    /// one-hot triples.
    pub fn len(&self) -> usize {
        self.gc.len() + 7
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flattens to the documented component order: gc (row-major),
    /// intersections, shirorekha one-hot (Full, Partial, None), spine one-hot
    /// (End, Mid, None).
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.len());
        v.extend_from_slice(&self.gc);
        v.push(self.intersections);
        let sh = match self.shirorekha {
            ShirorekhaType::Full => [1.0, 0.0, 0.0],
            ShirorekhaType::Partial => [0.0, 1.0, 0.0],
            ShirorekhaType::None => [0.0, 0.0, 1.0],
        };
        v.extend_from_slice(&sh);
        let sp = match self.spine {
            SpineType::End => [1.0, 0.0, 0.0],
            SpineType::Mid => [0.0, 1.0, 0.0],
            SpineType::None => [0.0, 0.0, 1.0],
        };
        v.extend_from_slice(&sp);
        v
    }
}

/// Splits the image into an n x n grid of cells, row-major. Cell k spans
/// columns floor(k*w/n) ..= floor((k+1)*w/n) - 1, and likewise for rows, so
/// the cells tile the image exactly even when the side is not divisible.
pub fn segment_grid(img: &BinaryRaster, n: usize) -> Result<Vec<BinaryRaster>> {
    if !(2..=5).contains(&n) {
        return Err(Error::UnsupportedGrid(n));
    }
    let (w, h) = (img.width(), img.height());
    let mut cells = Vec::with_capacity(n * n);
    for gr in 0..n {
        let r0 = gr * h / n;
        let r1 = (gr + 1) * h / n;
        for gc in 0..n {
            let c0 = gc * w / n;
            let c1 = (gc + 1) * w / n;
            let mut pixels = Vec::with_capacity((r1 - r0) * (c1 - c0));
            for r in r0..r1 {
                for c in c0..c1 {
                    pixels.push(img.get(r, c));
                }
            }
            cells.push(BinaryRaster::from_raw(c1 - c0, r1 - r0, pixels));
        }
    }
    Ok(cells)
}

/// Walk preference order: clockwise from East, with the Freeman code of each
/// step (0 = E, 1 = NE, 2 = N, 3 = NW, 4 = W, 5 = SW, 6 = S, 7 = SE).
const WALK_ORDER: [(isize, isize, u8); 8] = [
    (0, 1, 0),   // E
    (1, 1, 7),   // SE
    (1, 0, 6),   // S
    (1, -1, 5),  // SW
    (0, -1, 4),  // W
    (-1, -1, 3), // NW
    (-1, 0, 2),  // N
    (-1, 1, 1),  // NE
];

/// Angular difference between two Freeman codes in 45-degree units, 0..=4.
#[inline]
fn code_change(a: u8, b: u8) -> u32 {
    let d = (i32::from(a) - i32::from(b)).unsigned_abs();
    d.min(8 - d)
}

/// Accumulated directional change of the segment's strokes.
///
/// Scans row-major for the first unvisited stroke pixel, then walks to
/// unvisited 8-neighbors (preference order [`WALK_ORDER`]), emitting one
/// Freeman code per step and accumulating the angular change between
/// consecutive codes. When a walk dead-ends, scanning resumes; no change is
/// accumulated across walk boundaries. Every stroke pixel is visited exactly
/// once, so the result is deterministic.
pub fn gc_of_segment(seg: &BinaryRaster) -> u32 {
    traverse(seg).0
}

fn traverse(seg: &BinaryRaster) -> (u32, usize) {
    let (w, h) = (seg.width(), seg.height());
    let mut visited = vec![false; w * h];
    let mut total = 0u32;
    let mut visit_count = 0usize;
    for start_r in 0..h {
        for start_c in 0..w {
            if !seg.is_stroke(start_r, start_c) || visited[start_r * w + start_c] {
                continue;
            }
            visited[start_r * w + start_c] = true;
            visit_count += 1;
            let (mut r, mut c) = (start_r, start_c);
            let mut prev_code: Option<u8> = None;
            'walk: loop {
                for &(dr, dc, code) in &WALK_ORDER {
                    let nr = r as isize + dr;
                    let nc = c as isize + dc;
                    if nr < 0 || nc < 0 || nr as usize >= h || nc as usize >= w {
                        continue;
                    }
                    let (nr, nc) = (nr as usize, nc as usize);
                    if seg.is_stroke(nr, nc) && !visited[nr * w + nc] {
                        if let Some(prev) = prev_code {
                            total += code_change(prev, code);
                        }
                        prev_code = Some(code);
                        visited[nr * w + nc] = true;
                        visit_count += 1;
                        r = nr;
                        c = nc;
                        continue 'walk;
                    }
                }
                break;
            }
        }
    }
    (total, visit_count)
}

/// Number of stroke intersections: branch pixels (stroke pixels whose
/// neighborhood has three or more 0 -> 1 transitions) grouped into
/// 8-connected clusters, each cluster counting once.
pub fn count_intersections(img: &BinaryRaster) -> u32 {
    let (w, h) = (img.width(), img.height());
    let mut branch = vec![false; w * h];
    for r in 0..h {
        for c in 0..w {
            if img.is_stroke(r, c) {
                let n = neighborhood_at(img, r, c).expect("in bounds");
                if zo_count(&n) >= 3 {
                    branch[r * w + c] = true;
                }
            }
        }
    }
    // 8-connected cluster count over the branch mask
    let mut seen = vec![false; w * h];
    let mut clusters = 0u32;
    let mut stack = Vec::new();
    for idx in 0..w * h {
        if !branch[idx] || seen[idx] {
            continue;
        }
        clusters += 1;
        seen[idx] = true;
        stack.push(idx);
        while let Some(i) = stack.pop() {
            let (r, c) = (i / w, i % w);
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let nr = r as isize + dr;
                    let nc = c as isize + dc;
                    if nr < 0 || nc < 0 || nr as usize >= h || nc as usize >= w {
                        continue;
                    }
                    let ni = nr as usize * w + nc as usize;
                    if branch[ni] && !seen[ni] {
                        seen[ni] = true;
                        stack.push(ni);
                    }
                }
            }
        }
    }
    clusters
}

/// Classifies the headline from the longest horizontal stroke run found in
/// any single row of the top band of the canonical raster.
pub fn detect_shirorekha(img: &BinaryRaster, cfg: &FeatureConfig) -> ShirorekhaType {
    let (w, h) = (img.width(), img.height());
    let band_rows = ((h as f64) * TOP_BAND_FRACTION) as usize;
    let mut best_run = 0usize;
    for r in 0..band_rows.min(h) {
        let mut run = 0usize;
        for c in 0..w {
            if img.is_stroke(r, c) {
                run += 1;
                best_run = best_run.max(run);
            } else {
                run = 0;
            }
        }
    }
    let fraction = best_run as f64 / w as f64;
    if fraction >= cfg.shirorekha_full {
        ShirorekhaType::Full
    } else if fraction >= cfg.shirorekha_partial {
        ShirorekhaType::Partial
    } else {
        ShirorekhaType::None
    }
}

/// Classifies the vertical spine: the column with the longest vertical run
/// (leftmost on ties) is the spine candidate; the spine must span at least
/// `spine_min_run` of the height, and sits at the End when the column lies
/// in the rightmost `1 - spine_end_zone` of the width.
pub fn detect_spine(img: &BinaryRaster, cfg: &FeatureConfig) -> SpineType {
    let (w, h) = (img.width(), img.height());
    let mut best_run = 0usize;
    let mut best_col = 0usize;
    for c in 0..w {
        let mut run = 0usize;
        let mut col_best = 0usize;
        for r in 0..h {
            if img.is_stroke(r, c) {
                run += 1;
                col_best = col_best.max(run);
            } else {
                run = 0;
            }
        }
        if col_best > best_run {
            best_run = col_best;
            best_col = c;
        }
    }
    let fraction = best_run as f64 / h as f64;
    if fraction < cfg.spine_min_run {
        SpineType::None
    } else if best_col as f64 >= cfg.spine_end_zone * w as f64 {
        SpineType::End
    } else {
        SpineType::Mid
    }
}

/// Computes the full feature vector. `skeleton` is the post-prune raster used
/// for gc and intersections; `canonical` is the post-scaling, pre-thinning
/// raster used for the headline and spine detectors.
pub fn extract_features(
    skeleton: &BinaryRaster,
    canonical: &BinaryRaster,
    grid_n: usize,
    cfg: &FeatureConfig,
) -> Result<FeatureVector> {
    let segments = segment_grid(skeleton, grid_n)?;
    let gc = segments
        .iter()
        .map(|seg| (gc_of_segment(seg) as f64 / cfg.norm_factor).clamp(0.0, 1.0))
        .collect();
    let intersections =
        (count_intersections(skeleton) as f64 / cfg.intersection_divisor).clamp(0.0, 1.0);
    Ok(FeatureVector {
        gc,
        intersections,
        shirorekha: detect_shirorekha(canonical, cfg),
        spine: detect_spine(canonical, cfg),
    })
}
