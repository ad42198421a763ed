//! Surrogate loss functions on raw classifier scores.
//!
//! All losses are evaluated on the raw (pre-sigmoid) score `s = f(x)` and a
//! binary label. Writing `w = sigmoid(s)`:
//!
//! - `Mse`:     `(w - y)^2`, bounded in `[0, 1]`
//! - `Ce`:      logistic loss `-y log w - (1-y) log(1-w)`, unbounded above
//! - `ZeroOne`: misclassification indicator, evaluation only (no gradient)
//!
//! The cross-entropy value is computed as `log(1 + exp(-(2y-1) s))`, which is
//! the same function in a form that stays finite for |s| well past 30.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Surrogate loss selector, carrying boundedness metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    Mse,
    Ce,
    ZeroOne,
}

impl LossKind {
    /// Upper bound M of the loss range, when one exists.
    pub fn bound(self) -> Option<f64> {
        match self {
            LossKind::Mse | LossKind::ZeroOne => Some(1.0),
            LossKind::Ce => None,
        }
    }

    /// True for losses that can be trained on (have a gradient).
    pub fn is_surrogate(self) -> bool {
        !matches!(self, LossKind::ZeroOne)
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LossKind::Mse => write!(f, "mse"),
            LossKind::Ce => write!(f, "ce"),
            LossKind::ZeroOne => write!(f, "zero_one"),
        }
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mse" => Ok(LossKind::Mse),
            "ce" => Ok(LossKind::Ce),
            "zero_one" | "zero-one" | "01" => Ok(LossKind::ZeroOne),
            other => Err(Error::Config(format!("unknown loss kind '{other}'"))),
        }
    }
}

/// Numerically stable logistic sigmoid.
pub fn sigmoid(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

/// Numerically stable `log(1 + exp(t))`.
pub fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// Decision rule on raw scores: positive iff the score is strictly above 0.
///
/// `sigmoid(0) = 0.5` is the decision boundary; the tie at exactly 0 is
/// resolved to the negative class so predictions are deterministic.
pub fn predict(score: f64) -> u8 {
    u8::from(score > 0.0)
}

fn check_label(label: u8) -> Result<()> {
    if label > 1 {
        return Err(Error::Contract(format!("label must be 0 or 1, got {label}")));
    }
    Ok(())
}

/// Loss of raw score `score` against binary label `label`.
pub fn loss_value(kind: LossKind, score: f64, label: u8) -> Result<f64> {
    check_label(label)?;
    let y = f64::from(label);
    Ok(match kind {
        LossKind::Mse => {
            let w = sigmoid(score);
            (w - y) * (w - y)
        }
        LossKind::Ce => softplus(-(2.0 * y - 1.0) * score),
        LossKind::ZeroOne => f64::from(predict(score) != label),
    })
}

/// Derivative of `loss_value` with respect to the raw score.
pub fn loss_grad(kind: LossKind, score: f64, label: u8) -> Result<f64> {
    check_label(label)?;
    let y = f64::from(label);
    match kind {
        LossKind::Mse => {
            let w = sigmoid(score);
            Ok(2.0 * (w - y) * w * (1.0 - w))
        }
        LossKind::Ce => Ok(sigmoid(score) - y),
        LossKind::ZeroOne => Err(Error::UnsupportedGradient(
            "zero_one loss has no gradient; it is evaluation-only".into(),
        )),
    }
}

/// Result of the margin-form consistency check for a surrogate loss.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConsistencyReport {
    /// Central finite difference of the margin representation Phi at 0.
    pub phi_prime_at_zero: f64,
    /// Whether Phi is differentiable at 0 with negative slope.
    pub is_consistent: bool,
    /// Loss range bound, if any.
    pub bound: Option<f64>,
}

/// Checks the classification-calibration condition for a surrogate loss.
///
/// Each surrogate has a margin representation `L = Phi(g(x) (y - 1/2))` for a
/// suitable link `g`; a convex Phi that is differentiable at 0 with
/// `Phi'(0) < 0` drives the minimiser to the Bayes decision rule. The slope
/// at 0 is measured by central differencing Phi:
///
/// - `Mse`: Phi(t) = (1/2 - t)^2, slope -1
/// - `Ce`:  Phi(t) = log(1 + exp(-t)), slope -1/2
pub fn bayes_consistency_report(kind: LossKind) -> Result<ConsistencyReport> {
    let phi: fn(f64) -> f64 = match kind {
        LossKind::Mse => |t| (0.5 - t) * (0.5 - t),
        LossKind::Ce => |t| softplus(-t),
        LossKind::ZeroOne => {
            return Err(Error::Contract(
                "zero_one is not a surrogate loss; consistency check applies to mse/ce".into(),
            ))
        }
    };
    let h = 1e-6;
    let slope = (phi(h) - phi(-h)) / (2.0 * h);
    Ok(ConsistencyReport {
        phi_prime_at_zero: slope,
        is_consistent: slope < 0.0,
        bound: kind.bound(),
    })
}
