//! Iterative skeletonization and mask-based pruning.
//!
//! Thinning deletes boundary stroke pixels pass by pass until no pixel
//! satisfies all four deletion conditions. Within a pass every decision is
//! made against the raster state at the start of the pass, so the deletion
//! set is order-independent and the result deterministic. Pruning then runs
//! one sweep of 3x3 hit-or-miss masks to drop redundant corner pixels the
//! thinning step leaves behind.

use crate::error::{Error, Result};
use crate::raster::{neighborhood_at, BinaryRaster, Neighborhood};

/// Number of 0 -> 1 transitions in the cyclic neighbor sequence
/// P2,P3,P4,P5,P6,P7,P8,P9,P2. Always in 0..=4; zero exactly when the
/// neighbors are all background or all stroke.
pub fn zo_count(n: &Neighborhood) -> u32 {
    let ring = n.ring();
    let mut count = 0;
    for i in 0..8 {
        if ring[i] == 0 && ring[(i + 1) % 8] == 1 {
            count += 1;
        }
    }
    count
}

/// Number of stroke pixels among the eight neighbors P2..P9.
pub fn nz_count(n: &Neighborhood) -> u32 {
    n.ring().iter().map(|&p| p as u32).sum()
}

/// Evaluates the four deletion conditions for a stroke pixel.
///
/// `at_p2` and `at_p4` are the neighborhoods centered on the pixels in the
/// P2 (north) and P4 (west) positions; when those positions lie off the
/// raster the caller passes [`Neighborhood::EMPTY`], which is only consulted
/// when the corresponding product term is zero anyway.
pub fn deletable(center: &Neighborhood, at_p2: &Neighborhood, at_p4: &Neighborhood) -> Result<bool> {
    if center.p1 != 1 {
        return Err(Error::NotStrokePixel);
    }
    // Step 1: 2 <= Nzcount <= 6
    let nz = nz_count(center);
    if !(2..=6).contains(&nz) {
        return Ok(false);
    }
    // Step 2: ZO(P1) = 1
    if zo_count(center) != 1 {
        return Ok(false);
    }
    // Step 3: P2.P4.P8 = 0 or ZO(P2) != 1
    if center.p2 & center.p4 & center.p8 == 1 && zo_count(at_p2) == 1 {
        return Ok(false);
    }
    // Step 4: P2.P4.P6 = 0 or ZO(P4) != 1
    if center.p2 & center.p4 & center.p6 == 1 && zo_count(at_p4) == 1 {
        return Ok(false);
    }
    Ok(true)
}

/// Skeletonizes by repeated simultaneous-deletion passes until a fixpoint:
/// no remaining stroke pixel satisfies all four conditions.
pub fn thin(img: &BinaryRaster) -> BinaryRaster {
    thin_observed(img, |_, _| {})
}

/// Like [`thin`] but invokes `on_pass` with the pass number (1-based) and the
/// raster state after each pass that deleted something. Used for stage
/// inspection.
pub fn thin_observed(
    img: &BinaryRaster,
    mut on_pass: impl FnMut(usize, &BinaryRaster),
) -> BinaryRaster {
    let (w, h) = (img.width(), img.height());
    let mut current = img.clone();
    let mut pass = 0;
    loop {
        let mut deletions = Vec::new();
        for r in 0..h {
            for c in 0..w {
                if !current.is_stroke(r, c) {
                    continue;
                }
                let center = neighborhood_at(&current, r, c).expect("center in bounds");
                let at_p2 = if r > 0 {
                    neighborhood_at(&current, r - 1, c).expect("north in bounds")
                } else {
                    Neighborhood::EMPTY
                };
                let at_p4 = if c > 0 {
                    neighborhood_at(&current, r, c - 1).expect("west in bounds")
                } else {
                    Neighborhood::EMPTY
                };
                if deletable(&center, &at_p2, &at_p4).expect("stroke pixel") {
                    deletions.push((r, c));
                }
            }
        }
        if deletions.is_empty() {
            return current;
        }
        let mut pixels = current.into_pixels();
        for (r, c) in deletions {
            pixels[r * w + c] = 0;
        }
        current = BinaryRaster::from_raw(w, h, pixels);
        pass += 1;
        on_pass(pass, &current);
    }
}

/// One cell of a pruning mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskCell {
    Stroke,
    Background,
    Wildcard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskAction {
    Keep,
    Remove,
}

/// A 3x3 hit-or-miss mask. The center cell is always `Stroke`: masks only
/// ever test stroke pixels.
#[derive(Debug, Clone)]
pub struct PruneMask {
    /// Rows top to bottom, columns west to east; `cells[1][1]` is the center.
    pub cells: [[MaskCell; 3]; 3],
    pub action: MaskAction,
}

/// The pruning mask set, one pattern per line-of-three: `1` stroke, `0`
/// background, `-` either; rows separated by `|`, top row first. The first
/// (and only) Keep mask protects plus-shaped junction centers; the Remove
/// masks drop redundant corner and T-junction pixels whose orthogonal
/// neighbors stay 8-connected through the adjacent diagonal.
pub const PRUNE_MASK_TABLE: [(&str, MaskAction); 7] = [
    ("-1-|111|-1-", MaskAction::Keep),
    ("-1-|11-|--0", MaskAction::Remove),
    ("-1-|-11|0--", MaskAction::Remove),
    ("--0|11-|-1-", MaskAction::Remove),
    ("0--|-11|-1-", MaskAction::Remove),
    ("-1-|111|0-0", MaskAction::Remove),
    ("0-0|111|-1-", MaskAction::Remove),
];

impl PruneMask {
    /// Parses a `PRUNE_MASK_TABLE` pattern.
    pub fn from_pattern(pattern: &str, action: MaskAction) -> Self {
        let rows: Vec<&str> = pattern.split('|').collect();
        assert_eq!(rows.len(), 3, "mask needs three rows: {pattern}");
        let mut cells = [[MaskCell::Wildcard; 3]; 3];
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), 3, "mask row needs three cells: {pattern}");
            for (c, ch) in row.chars().enumerate() {
                cells[r][c] = match ch {
                    '1' => MaskCell::Stroke,
                    '0' => MaskCell::Background,
                    '-' => MaskCell::Wildcard,
                    other => panic!("bad mask cell {other:?} in {pattern}"),
                };
            }
        }
        assert_eq!(cells[1][1], MaskCell::Stroke, "mask center must be stroke");
        PruneMask { cells, action }
    }

    /// Whether the mask matches the window centered at (row, col); off-raster
    /// cells read as background.
    pub fn matches(&self, img: &BinaryRaster, row: usize, col: usize) -> bool {
        for dr in 0..3 {
            for dc in 0..3 {
                let value = img.get_or_zero(row as isize + dr - 1, col as isize + dc - 1);
                let ok = match self.cells[dr as usize][dc as usize] {
                    MaskCell::Stroke => value == 1,
                    MaskCell::Background => value == 0,
                    MaskCell::Wildcard => true,
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }
}

/// The parsed mask set in test order: the Keep mask first, then the Remove
/// masks in table order.
pub fn prune_masks() -> Vec<PruneMask> {
    PRUNE_MASK_TABLE
        .iter()
        .map(|&(pattern, action)| PruneMask::from_pattern(pattern, action))
        .collect()
}

/// One pruning sweep. At each stroke pixel the masks are tested in table
/// order: if the Keep mask matches the pixel is retained and no further mask
/// is tested; otherwise the pixel is deleted if any Remove mask matches.
/// Deletions are decided against the sweep-start state and applied together.
pub fn prune(img: &BinaryRaster) -> BinaryRaster {
    let masks = prune_masks();
    let (w, h) = (img.width(), img.height());
    let mut deletions = Vec::new();
    for r in 0..h {
        for c in 0..w {
            if !img.is_stroke(r, c) {
                continue;
            }
            let mut remove = false;
            for mask in &masks {
                if mask.matches(img, r, c) {
                    match mask.action {
                        MaskAction::Keep => {
                            remove = false;
                            break;
                        }
                        MaskAction::Remove => {
                            remove = true;
                            break;
                        }
                    }
                }
            }
            if remove {
                deletions.push((r, c));
            }
        }
    }
    let mut pixels = img.pixels().to_vec();
    for (r, c) in deletions {
        pixels[r * w + c] = 0;
    }
    BinaryRaster::from_raw(w, h, pixels)
}
