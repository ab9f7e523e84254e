//! Handwritten Devanagari character recognition.
//!
//! The pipeline scales a binarized character into a fixed 140x140 frame,
//! skeletonizes it, and extracts a structural feature vector (per-segment
//! accumulated chain-code direction change, intersection count, headline and
//! vertical-spine categories). A one-hidden-layer perceptron trained with
//! nonlinear conjugate gradient classifies the vectors.
//!
//! Modules follow the pipeline order:
//!
//! - [`raster`]: binary rasters, binarization, cropping, canonical scaling
//! - [`netpbm`]: PBM/PGM file I/O
//! - [`thinning`]: skeletonization and pruning
//! - [`features`]: feature extraction
//! - [`classifier`]: MLP model, conjugate-gradient trainer, model file I/O
//! - [`dataset`]: labeled-sample loading, splitting, synthetic glyphs
//! - [`pipeline`]: end-to-end glue shared by the CLI and the test suites

pub mod classifier;
pub mod dataset;
mod error;
pub mod features;
pub mod netpbm;
pub mod pipeline;
pub mod raster;
pub mod thinning;

pub use classifier::{MlpModel, TrainConfig};
pub use dataset::{LabeledSample, SplitSpec};
pub use error::{Error, Result};
pub use features::{FeatureConfig, FeatureVector, ShirorekhaType, SpineType};
pub use pipeline::PipelineConfig;
pub use raster::{BinaryRaster, GrayRaster, Neighborhood, CANONICAL_SIZE};
