//! Shared fixtures for the pipeline benchmarks.

use akshar_core::classifier::LabeledVector;
use akshar_core::dataset::{generate_synthetic, LabeledSample};
use akshar_core::pipeline::{featurize_samples, PipelineConfig};

/// A deterministic glyph batch.
pub fn glyph_batch(classes: usize, per_class: usize) -> Vec<LabeledSample> {
    generate_synthetic(classes, per_class, 0xBE7C).expect("generator arguments are valid")
}

/// Features of a deterministic glyph batch, ready for the trainer.
pub fn feature_batch(classes: usize, per_class: usize, cfg: &PipelineConfig) -> Vec<LabeledVector> {
    featurize_samples(&glyph_batch(classes, per_class), classes, cfg)
        .expect("synthetic glyphs always featurize")
}
