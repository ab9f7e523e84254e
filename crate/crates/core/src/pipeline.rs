//! End-to-end glue: preprocessing stages, per-sample feature extraction, and
//! train/evaluate drivers shared by the CLI and the acceptance suite.

use rayon::prelude::*;

use crate::classifier::{
    cg_train, evaluate, init_model, Evaluation, LabeledVector, MlpModel, TraceEntry, TrainConfig,
};
use crate::dataset::LabeledSample;
use crate::error::{Error, Result};
use crate::features::{extract_features, FeatureConfig, FeatureVector};
use crate::netpbm::NetpbmImage;
use crate::raster::{binarize, crop_to_content, scale_to_canonical, BinaryRaster};
use crate::thinning::{prune, thin};

/// Every knob of the pipeline in one place. All values have module defaults;
/// the CLI exposes each as a flag.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Segment grid side, 2..=5.
    pub grid_n: usize,
    /// Threshold for grayscale inputs.
    pub binarize_threshold: u8,
    /// Hidden layer width; 0 means twice the feature length.
    pub n_hidden: usize,
    pub features: FeatureConfig,
    pub train: TrainConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            grid_n: 4,
            binarize_threshold: 128,
            n_hidden: 0,
            features: FeatureConfig::default(),
            train: TrainConfig::default(),
        }
    }
}

impl PipelineConfig {
    /// Feature vector length for the configured grid.
    pub fn feature_len(&self) -> usize {
        self.grid_n * self.grid_n + 7
    }

    /// Hidden width after resolving the 0 = auto default.
    pub fn hidden_width(&self) -> usize {
        if self.n_hidden == 0 {
            2 * self.feature_len()
        } else {
            self.n_hidden
        }
    }
}

/// All intermediate rasters of one character, in pipeline order.
#[derive(Debug, Clone)]
pub struct GlyphStages {
    /// Input after binarization (the input itself when it was already binary).
    pub binarized: BinaryRaster,
    pub cropped: BinaryRaster,
    pub scaled: BinaryRaster,
    pub thinned: BinaryRaster,
    pub pruned: BinaryRaster,
}

/// Resolves a parsed netpbm image to a binary raster.
pub fn to_binary(img: NetpbmImage, threshold: u8) -> Result<BinaryRaster> {
    match img {
        NetpbmImage::Bitmap(b) => Ok(b),
        NetpbmImage::Graymap(g) => binarize(&g, threshold),
    }
}

/// Runs the preprocessing chain crop -> scale -> thin -> prune, keeping every
/// stage. Fails with "blank image" when there is nothing to crop.
pub fn preprocess(img: &BinaryRaster) -> Result<GlyphStages> {
    let cropped = crop_to_content(img)?;
    let scaled = scale_to_canonical(&cropped);
    let thinned = thin(&scaled);
    let pruned = prune(&thinned);
    Ok(GlyphStages {
        binarized: img.clone(),
        cropped,
        scaled,
        thinned,
        pruned,
    })
}

/// Preprocesses one raster and extracts its feature vector.
pub fn featurize_raster(img: &BinaryRaster, cfg: &PipelineConfig) -> Result<FeatureVector> {
    let stages = preprocess(img)?;
    extract_features(&stages.pruned, &stages.scaled, cfg.grid_n, &cfg.features)
}

/// Extracts features for a whole sample set, fanning out across threads.
/// Results are collected in dataset order, so the output is deterministic.
pub fn featurize_samples(
    samples: &[LabeledSample],
    n_classes: usize,
    cfg: &PipelineConfig,
) -> Result<Vec<LabeledVector>> {
    samples
        .par_iter()
        .map(|sample| {
            if sample.label >= n_classes {
                return Err(Error::DimensionMismatch {
                    expected: n_classes,
                    actual: sample.label + 1,
                });
            }
            let fv = featurize_raster(&sample.image, cfg)?;
            Ok(LabeledVector::from_class(
                fv.to_vec(),
                sample.label,
                n_classes,
            ))
        })
        .collect()
}

/// Initializes a fresh model for the configured feature length and trains it
/// on the samples with conjugate gradient.
pub fn train_classifier(
    samples: &[LabeledSample],
    n_classes: usize,
    cfg: &PipelineConfig,
) -> Result<(MlpModel, Vec<TraceEntry>)> {
    let data = featurize_samples(samples, n_classes, cfg)?;
    let model = init_model(
        cfg.feature_len(),
        cfg.hidden_width(),
        n_classes,
        cfg.train.seed,
    )?;
    cg_train(&model, &data, &cfg.train)
}

/// Evaluates a trained model on a sample set. The configured grid must
/// produce vectors of the model's input length; mismatches report both sizes.
pub fn evaluate_classifier(
    model: &MlpModel,
    samples: &[LabeledSample],
    cfg: &PipelineConfig,
) -> Result<Evaluation> {
    if cfg.feature_len() != model.n_in {
        return Err(Error::DimensionMismatch {
            expected: model.n_in,
            actual: cfg.feature_len(),
        });
    }
    let data = featurize_samples(samples, model.n_out, cfg)?;
    evaluate(model, &data)
}

/// Classifies one raster: predicted class index and its output score.
pub fn predict_raster(
    model: &MlpModel,
    img: &BinaryRaster,
    cfg: &PipelineConfig,
) -> Result<(usize, f64)> {
    if cfg.feature_len() != model.n_in {
        return Err(Error::DimensionMismatch {
            expected: model.n_in,
            actual: cfg.feature_len(),
        });
    }
    let fv = featurize_raster(img, cfg)?;
    let outputs = crate::classifier::forward(model, &fv.to_vec())?;
    let mut best = 0;
    for (i, &v) in outputs.iter().enumerate().skip(1) {
        if v > outputs[best] {
            best = i;
        }
    }
    Ok((best, outputs[best]))
}

/// Reusable training-config knob: `TrainConfig` lives in the classifier
/// module but most callers reach it through the pipeline config.
pub use crate::classifier::TrainConfig as PipelineTrainConfig;
