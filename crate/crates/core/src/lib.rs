//! Instance-level risk estimation for multiple instance learning (MIL).
//!
//! In MIL, training data comes as *bags* of feature vectors with one binary
//! label per bag: a negative bag contains only negative instances, a positive
//! bag contains at least one positive instance. This crate trains and
//! evaluates *instance-level* classifiers from such data:
//!
//! - an unbiased estimator of the instance-level risk that needs only bag
//!   labels and the negative-class prior `pi0 = P(Y_X = 0)`,
//! - a constrained variant that adds a hinge penalty enforcing the bag
//!   labels on the classifier's per-bag margins,
//! - a fully supervised baseline and a logistic-regression baseline with
//!   `softmax_alpha` pooling,
//! - bag generators (synthetic Gaussians, IDX image files, CSV features)
//!   and the experiment harnesses used to verify the estimator's behaviour
//!   (unbiasedness, concentration in the negative instance count, prior
//!   sensitivity, bounded vs unbounded losses).
//!
//! The `milbag` binary exposes all of this behind `generate`, `train`,
//! `experiment` and `eval` subcommands.

pub mod cli;
pub mod config;
pub mod data;
pub mod error;
pub mod eval;
pub mod io;
pub mod loss;
pub mod model;
pub mod risk;
pub mod trainer;
pub(crate) mod util;

pub use data::{Bag, BagDataset, GaussianPoolConfig, Instance};
pub use error::{Error, Result};
pub use loss::LossKind;
pub use model::{Activation, Model, ModelSpec, OptimizerState};
pub use risk::{EstimatorConfig, RiskBreakdown};
// pub use trainer::{BatchSpec, Method, TrainConfig, TrainHistory, TrainOutcome};
