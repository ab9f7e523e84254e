//! Dataset ingestion, deterministic train/test splitting, and the synthetic
//! glyph generator that stands in for a handwritten corpus.

mod prototypes;

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::netpbm::{read_netpbm, NetpbmImage};
use crate::raster::{binarize, BinaryRaster, CANONICAL_SIZE};

use prototypes::PROTOTYPES;

/// One labeled character image.
#[derive(Debug, Clone)]
pub struct LabeledSample {
    pub image: BinaryRaster,
    /// Class index, `0..n_classes`.
    pub label: usize,
    /// Stable identifier: file path for loaded samples, generated id for
    /// synthetic ones.
    pub source_id: String,
}

/// Per-class train/test sizes and the shuffle seed.
#[derive(Debug, Clone, Copy)]
pub struct SplitSpec {
    pub train_per_class: usize,
    pub test_per_class: usize,
    pub seed: u64,
}

/// Number of built-in synthetic classes.
pub fn prototype_count() -> usize {
    PROTOTYPES.len()
}

/// Names of the first `n` synthetic classes.
pub fn prototype_names(n: usize) -> Vec<String> {
    PROTOTYPES[..n].iter().map(|p| p.name.to_string()).collect()
}

/// Loads a directory-per-class dataset. Class indices follow lexicographic
/// subdirectory order; within a class, files load in lexicographic order, so
/// the same root always yields the same sample list. PBM files are taken as
/// binary; PGM files go through [`binarize`] with `threshold`.
pub fn load_dataset(root: &Path, threshold: u8) -> Result<(Vec<LabeledSample>, Vec<String>)> {
    let mut class_dirs: Vec<_> = fs::read_dir(root)
        .map_err(|e| Error::io(format!("reading dataset root {}", root.display()), e))?
        .filter_map(|entry| entry.ok())
        .filter(|entry| entry.path().is_dir())
        .map(|entry| entry.path())
        .collect();
    class_dirs.sort();
    if class_dirs.is_empty() {
        return Err(Error::NoClassesFound(root.to_path_buf()));
    }

    let mut samples = Vec::new();
    let mut names = Vec::new();
    for (label, dir) in class_dirs.iter().enumerate() {
        let name = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut files: Vec<_> = fs::read_dir(dir)
            .map_err(|e| Error::io(format!("reading class dir {}", dir.display()), e))?
            .filter_map(|entry| entry.ok())
            .map(|entry| entry.path())
            .filter(|p| {
                p.is_file()
                    && matches!(
                        p.extension().and_then(|e| e.to_str()),
                        Some("pbm" | "pgm" | "PBM" | "PGM")
                    )
            })
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(Error::EmptyClass { class: name });
        }
        for file in files {
            let image = match read_netpbm(&file)? {
                NetpbmImage::Bitmap(b) => b,
                NetpbmImage::Graymap(g) => binarize(&g, threshold)?,
            };
            samples.push(LabeledSample {
                image,
                label,
                source_id: file.to_string_lossy().into_owned(),
            });
        }
        names.push(name);
    }
    Ok((samples, names))
}

/// Writes samples to a directory-per-class tree of packed PBM files, the
/// layout [`load_dataset`] reads back.
pub fn write_dataset(root: &Path, samples: &[LabeledSample], names: &[String]) -> Result<()> {
    use crate::netpbm::{write_pbm, PbmFormat};
    let mut per_class_index = vec![0usize; names.len()];
    for sample in samples {
        let dir = root.join(&names[sample.label]);
        fs::create_dir_all(&dir)
            .map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
        let path = dir.join(format!("{:04}.pbm", per_class_index[sample.label]));
        per_class_index[sample.label] += 1;
        write_pbm(&path, &sample.image, PbmFormat::Packed)?;
    }
    Ok(())
}

/// Writes the `source_id,class_index,class_name` manifest.
pub fn write_manifest(path: &Path, samples: &[LabeledSample], names: &[String]) -> Result<()> {
    let mut out = String::from("source_id,class_index,class_name\n");
    for sample in samples {
        out.push_str(&format!(
            "{},{},{}\n",
            sample.source_id, sample.label, names[sample.label]
        ));
    }
    fs::write(path, out).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// Splits per class: a seeded shuffle of each class's samples, the first
/// `train_per_class` to the train set, the next `test_per_class` to the test
/// set, the rest unused. Same seed, same split.
pub fn split(
    samples: &[LabeledSample],
    spec: &SplitSpec,
) -> Result<(Vec<LabeledSample>, Vec<LabeledSample>)> {
    let n_classes = samples.iter().map(|s| s.label + 1).max().unwrap_or(0);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, sample) in samples.iter().enumerate() {
        by_class[sample.label].push(i);
    }
    let needed = spec.train_per_class + spec.test_per_class;
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (label, indices) in by_class.iter_mut().enumerate() {
        if indices.len() < needed {
            return Err(Error::InsufficientSamples {
                class: format!("{label}"),
                available: indices.len(),
                needed,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(mix(spec.seed, label as u64, 0));
        indices.shuffle(&mut rng);
        for &i in &indices[..spec.train_per_class] {
            train.push(samples[i].clone());
        }
        for &i in &indices[spec.train_per_class..needed] {
            test.push(samples[i].clone());
        }
    }
    Ok((train, test))
}

/// Maximum jitter distance applied to any prototype vertex, in pixels.
pub const MAX_VERTEX_JITTER: f64 = 5.0;
/// Maximum global rotation applied to a sample, in degrees.
pub const MAX_ROTATION_DEG: f64 = 5.0;

/// Generates the synthetic corpus: `per_class` perturbed renderings of each
/// of the first `n_classes` prototype stroke programs. Each sample jitters
/// every vertex within [`MAX_VERTEX_JITTER`], rotates the glyph about the
/// canvas center within [`MAX_ROTATION_DEG`], and draws with a stroke
/// thickness of 1 to 3 pixels. Output is a pure function of the arguments.
pub fn generate_synthetic(
    n_classes: usize,
    per_class: usize,
    seed: u64,
) -> Result<Vec<LabeledSample>> {
    if n_classes > PROTOTYPES.len() {
        return Err(Error::TooManyClasses {
            requested: n_classes,
            available: PROTOTYPES.len(),
        });
    }
    if n_classes == 0 {
        return Err(Error::ZeroDimension("n_classes"));
    }
    if per_class == 0 {
        return Err(Error::ZeroDimension("per_class"));
    }
    let mut samples = Vec::with_capacity(n_classes * per_class);
    for (label, proto) in PROTOTYPES[..n_classes].iter().enumerate() {
        for idx in 0..per_class {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, label as u64, idx as u64));
            let image = render_sample(proto.strokes, &mut rng);
            samples.push(LabeledSample {
                image,
                label,
                source_id: format!("synthetic/{}/{idx:04}", proto.name),
            });
        }
    }
    Ok(samples)
}

fn mix(seed: u64, a: u64, b: u64) -> u64 {
    seed ^ a.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ b.wrapping_mul(0xd1b5_4a32_d192_ed03)
}

fn jitter_offset(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    let radius = rng.random_range(0.0..=MAX_VERTEX_JITTER);
    (radius * angle.cos(), radius * angle.sin())
}

/// RNG draw order is fixed: thickness, rotation, then vertex jitters in
/// stroke order. Changing it would silently change every generated corpus.
fn render_sample(strokes: &[&[(f64, f64)]], rng: &mut ChaCha8Rng) -> BinaryRaster {
    let thickness: usize = rng.random_range(1..=3);
    let theta = rng
        .random_range(-MAX_ROTATION_DEG..=MAX_ROTATION_DEG)
        .to_radians();
    let (sin_t, cos_t) = theta.sin_cos();
    let center = CANONICAL_SIZE as f64 / 2.0;

    let mut pixels = vec![0u8; CANONICAL_SIZE * CANONICAL_SIZE];
    for stroke in strokes {
        let moved: Vec<(f64, f64)> = stroke
            .iter()
            .map(|&(x, y)| {
                let (dx, dy) = jitter_offset(rng);
                debug_assert!((dx * dx + dy * dy).sqrt() <= MAX_VERTEX_JITTER + 1e-9);
                let (jx, jy) = (x + dx, y + dy);
                // rotate about the canvas center
                let (rx, ry) = (jx - center, jy - center);
                (
                    center + rx * cos_t - ry * sin_t,
                    center + rx * sin_t + ry * cos_t,
                )
            })
            .collect();
        for pair in moved.windows(2) {
            draw_segment(&mut pixels, pair[0], pair[1], thickness);
        }
    }
    BinaryRaster::from_raw(CANONICAL_SIZE, CANONICAL_SIZE, pixels)
}

/// Bresenham segment stamped with a thickness x thickness block per point,
/// clipped to the canvas.
fn draw_segment(pixels: &mut [u8], from: (f64, f64), to: (f64, f64), thickness: usize) {
    let s = CANONICAL_SIZE as i64;
    let (mut x0, mut y0) = (from.0.round() as i64, from.1.round() as i64);
    let (x1, y1) = (to.0.round() as i64, to.1.round() as i64);
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    let anchor = thickness as i64 / 2;
    loop {
        for oy in 0..thickness as i64 {
            for ox in 0..thickness as i64 {
                let (px, py) = (x0 - anchor + ox, y0 - anchor + oy);
                if (0..s).contains(&px) && (0..s).contains(&py) {
                    pixels[(py * s + px) as usize] = 1;
                }
            }
        }
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}
