//! One-hidden-layer perceptron classifier trained with nonlinear conjugate
//! gradient.
//!
//! The trainer never asks for a learning rate: each step length comes from a
//! bracketed line search along the current search direction, and successive
//! directions mix the new steepest-descent direction with the previous one.

mod cg;
mod io;
mod mlp;

pub use cg::{cg_minimize, cg_train, line_search, CgState, Objective, TraceEntry, TrainConfig};
pub use io::{load_model, read_model, save_model, write_model, MODEL_MAGIC};
pub use mlp::{
    batch_loss, evaluate, forward, init_model, loss_and_gradient, one_hot, predict, Evaluation,
    LabeledVector, MlpModel,
};
