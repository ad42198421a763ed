//! Risk functionals over bag datasets, with values and parameter gradients.
//!
//! The estimators here are what the rest of the crate is built around:
//!
//! - [`supervised_risk`]: ordinary empirical risk, needs instance labels.
//! - [`unbiased_risk`]: estimates the same quantity from bag labels alone.
//!   Writing `N` for the total instance count and `m` for the instance count
//!   over negative bags, it is
//!   `(1/N) sum_all L(f(x), 1) + (pi0/m) sum_neg [L(f(x), 0) - L(f(x), 1)]`.
//!   The estimator may go negative in finite samples; it is reported as-is,
//!   since large negative excursions are the diagnostic for unbounded-loss
//!   overfitting.
//! - [`bag_margin`] / [`constraint_penalty`] / [`bimil_objective`]: per-bag
//!   margin `max_x L(f(x),0) - L(f(x),1)`, its hinge penalty (negative bags
//!   must not have positive margins, positive bags must not have negative
//!   ones), and the penalised objective `unbiased + C * penalty`. The slack
//!   variables of the constrained program are eliminated analytically: at the
//!   optimum each slack equals the hinge of its bag margin, so the penalty is
//!   computed directly from the margins.
//! - [`milr_bag_loss`]: bag-level logistic regression baseline with
//!   [`softmax_alpha`] pooling of instance probabilities.
//!
//! All reductions use a fixed pairwise summation order so results are
//! reproducible bit-for-bit.

use serde::{Deserialize, Serialize};

use crate::data::{Bag, BagDataset};
use crate::error::{Error, Result};
use crate::loss::{self, LossKind};
use crate::model::{Model, Scratch};
use crate::util::pairwise_sum;

/// Configuration of the bag-label risk estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    /// Negative-class prior `P(Y_X = 0)` used by the estimator.
    pub pi0: f64,
    /// Weight `C` of the bag-constraint penalty.
    pub penalty_weight: f64,
    pub loss: LossKind,
}

impl EstimatorConfig {
    pub const DEFAULT_PENALTY_WEIGHT: f64 = 10.0;

    pub fn new(pi0: f64, loss: LossKind) -> Result<EstimatorConfig> {
        let config = EstimatorConfig { pi0, penalty_weight: Self::DEFAULT_PENALTY_WEIGHT, loss };
        config.validate()?;
        Ok(config)
    }

    pub fn with_penalty_weight(mut self, penalty_weight: f64) -> Result<EstimatorConfig> {
        self.penalty_weight = penalty_weight;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.pi0) {
            return Err(Error::Config(format!("pi0 must be in [0, 1], got {}", self.pi0)));
        }
        if !(self.penalty_weight >= 0.0 && self.penalty_weight.is_finite()) {
            return Err(Error::Config(format!(
                "penalty weight must be finite and non-negative, got {}",
                self.penalty_weight
            )));
        }
        Ok(())
    }
}

/// Value of a risk evaluation, split into its terms.
///
/// `total = term_all_pos + term_neg_correction + penalty_weight * penalty`;
/// the penalty entries are zero for the plain estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskBreakdown {
    pub total: f64,
    /// Mean of `L(f(x), 1)` over all instances.
    pub term_all_pos: f64,
    /// `pi0`-weighted correction from negative-bag instances.
    pub term_neg_correction: f64,
    /// Sum of hinge slacks over bags (not scaled by `C`).
    pub penalty: f64,
}

fn all_indices(dataset: &BagDataset) -> Vec<usize> {
    (0..dataset.n_bags()).collect()
}

fn instance_label(bag_index: usize, inst: &crate::data::Instance) -> Result<u8> {
    inst.true_label().ok_or_else(|| {
        Error::Contract(format!("instance in bag {bag_index} has no true label"))
    })
}

/// Mean loss over all instances, using true instance labels.
pub fn supervised_risk(model: &Model, loss: LossKind, dataset: &BagDataset) -> Result<f64> {
    supervised_risk_on(model, loss, dataset, &all_indices(dataset))
}

/// [`supervised_risk`] restricted to the bags listed in `indices`.
pub fn supervised_risk_on(
    model: &Model,
    loss: LossKind,
    dataset: &BagDataset,
    indices: &[usize],
) -> Result<f64> {
    let mut terms = Vec::new();
    for &i in indices {
        let bag = &dataset.bags()[i];
        for inst in bag.instances() {
            let y = instance_label(i, inst)?;
            terms.push(loss::loss_value(loss, model.forward(inst.features())?, y)?);
        }
    }
    if terms.is_empty() {
        return Err(Error::Contract("supervised risk of an empty dataset".into()));
    }
    Ok(pairwise_sum(&terms) / terms.len() as f64)
}

/// Value and parameter gradient of the supervised risk.
pub fn supervised_risk_grad_on(
    model: &Model,
    loss: LossKind,
    dataset: &BagDataset,
    indices: &[usize],
) -> Result<(f64, Vec<f64>)> {
    let count: usize = indices.iter().map(|&i| dataset.bags()[i].len()).sum();
    if count == 0 {
        return Err(Error::Contract("supervised risk of an empty dataset".into()));
    }
    let inv = 1.0 / count as f64;
    let mut terms = Vec::with_capacity(count);
    let mut grad = vec![0.0; model.param_count()];
    let mut scratch = Scratch::default();
    for &i in indices {
        for inst in dataset.bags()[i].instances() {
            let y = instance_label(i, inst)?;
            let s = model.forward_cached(inst.features(), &mut scratch);
            terms.push(loss::loss_value(loss, s, y)?);
            let upstream = inv * loss::loss_grad(loss, s, y)?;
            model.backward_cached(inst.features(), upstream, &mut scratch, &mut grad);
        }
    }
    Ok((pairwise_sum(&terms) * inv, grad))
}

/// Instance-level risk estimated from bag labels alone.
///
/// Requires at least one negative-bag instance; instance labels are never
/// consulted.
pub fn unbiased_risk(model: &Model, config: &EstimatorConfig, dataset: &BagDataset) -> Result<RiskBreakdown> {
    unbiased_risk_on(model, config, dataset, &all_indices(dataset))
}

/// [`unbiased_risk`] restricted to the bags listed in `indices`; the
/// normalising counts come from those bags only.
pub fn unbiased_risk_on(
    model: &Model,
    config: &EstimatorConfig,
    dataset: &BagDataset,
    indices: &[usize],
) -> Result<RiskBreakdown> {
    config.validate()?;
    let mut all_terms = Vec::new();
    let mut neg_terms = Vec::new();
    for &i in indices {
        let bag = &dataset.bags()[i];
        for inst in bag.instances() {
            let s = model.forward(inst.features())?;
            let loss_pos = loss::loss_value(config.loss, s, 1)?;
            all_terms.push(loss_pos);
            if bag.label() == 0 {
                neg_terms.push(loss::loss_value(config.loss, s, 0)? - loss_pos);
            }
        }
    }
    if neg_terms.is_empty() {
        return Err(Error::EstimatorUndefined(
            "no negative-bag instances to normalise against".into(),
        ));
    }
    let term_all_pos = pairwise_sum(&all_terms) / all_terms.len() as f64;
    let term_neg_correction = config.pi0 * pairwise_sum(&neg_terms) / neg_terms.len() as f64;
    Ok(RiskBreakdown {
        total: term_all_pos + term_neg_correction,
        term_all_pos,
        term_neg_correction,
        penalty: 0.0,
    })
}

/// Value and parameter gradient of [`unbiased_risk_on`].
pub fn unbiased_risk_grad_on(
    model: &Model,
    config: &EstimatorConfig,
    dataset: &BagDataset,
    indices: &[usize],
) -> Result<(RiskBreakdown, Vec<f64>)> {
    config.validate()?;
    let total_count: usize = indices.iter().map(|&i| dataset.bags()[i].len()).sum();
    let neg_count: usize = indices
        .iter()
        .map(|&i| {
            let bag = &dataset.bags()[i];
            if bag.label() == 0 {
                bag.len()
            } else {
                0
            }
        })
        .sum();
    if neg_count == 0 {
        return Err(Error::EstimatorUndefined(
            "no negative-bag instances to normalise against".into(),
        ));
    }
    let inv_all = 1.0 / total_count as f64;
    let neg_weight = config.pi0 / neg_count as f64;

    let mut all_terms = Vec::with_capacity(total_count);
    let mut neg_terms = Vec::with_capacity(neg_count);
    let mut grad = vec![0.0; model.param_count()];
    let mut scratch = Scratch::default();
    for &i in indices {
        let bag = &dataset.bags()[i];
        for inst in bag.instances() {
            let s = model.forward_cached(inst.features(), &mut scratch);
            let loss_pos = loss::loss_value(config.loss, s, 1)?;
            let grad_pos = loss::loss_grad(config.loss, s, 1)?;
            all_terms.push(loss_pos);
            let mut upstream = inv_all * grad_pos;
            if bag.label() == 0 {
                neg_terms.push(loss::loss_value(config.loss, s, 0)? - loss_pos);
                upstream += neg_weight * (loss::loss_grad(config.loss, s, 0)? - grad_pos);
            }
            model.backward_cached(inst.features(), upstream, &mut scratch, &mut grad);
        }
    }
    let term_all_pos = pairwise_sum(&all_terms) * inv_all;
    let term_neg_correction = config.pi0 * pairwise_sum(&neg_terms) / neg_count as f64;
    Ok((
        RiskBreakdown {
            total: term_all_pos + term_neg_correction,
            term_all_pos,
            term_neg_correction,
            penalty: 0.0,
        },
        grad,
    ))
}

/// Bag margin `max_{x in b} L(f(x), 0) - L(f(x), 1)` and the index of the
/// attaining instance (first index on ties).
///
/// The margin is positive iff some instance is scored on the positive side
/// of the decision boundary.
pub fn bag_margin(model: &Model, loss: LossKind, bag: &Bag) -> Result<(f64, usize)> {
    if bag.is_empty() {
        return Err(Error::Contract("bag_margin of an empty bag".into()));
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_idx = 0;
    for (idx, inst) in bag.instances().iter().enumerate() {
        let s = model.forward(inst.features())?;
        let margin = loss::loss_value(loss, s, 0)? - loss::loss_value(loss, s, 1)?;
        if margin > best {
            best = margin;
            best_idx = idx;
        }
    }
    Ok((best, best_idx))
}

/// Hinge slacks of the bag constraints and their sum.
///
/// Negative bags owe `max(0, margin)`, positive bags `max(0, -margin)`.
/// Returns `(penalty, per-bag slacks)` with slacks in `indices` order.
pub fn constraint_penalty(model: &Model, loss: LossKind, dataset: &BagDataset) -> Result<(f64, Vec<f64>)> {
    constraint_penalty_on(model, loss, dataset, &all_indices(dataset))
}

/// [`constraint_penalty`] restricted to the bags listed in `indices`.
pub fn constraint_penalty_on(
    model: &Model,
    loss: LossKind,
    dataset: &BagDataset,
    indices: &[usize],
) -> Result<(f64, Vec<f64>)> {
    if indices.is_empty() {
        return Err(Error::Contract("constraint penalty of an empty dataset".into()));
    }
    let mut slacks = Vec::with_capacity(indices.len());
    for &i in indices {
        let bag = &dataset.bags()[i];
        let (margin, _) = bag_margin(model, loss, bag)?;
        let slack = if bag.label() == 0 { margin.max(0.0) } else { (-margin).max(0.0) };
        slacks.push(slack);
    }
    Ok((pairwise_sum(&slacks), slacks))
}

/// Accumulates `weight * d(penalty)/d(params)` into `grad`.
///
/// The subgradient of each bag's max flows through the first attaining
/// instance only, and only for violated bags (slack strictly positive).
fn accumulate_penalty_grad(
    model: &Model,
    loss: LossKind,
    dataset: &BagDataset,
    indices: &[usize],
    weight: f64,
    scratch: &mut Scratch,
    grad: &mut [f64],
) -> Result<()> {
    for &i in indices {
        let bag = &dataset.bags()[i];
        let (margin, argmax) = bag_margin(model, loss, bag)?;
        let violated = if bag.label() == 0 { margin > 0.0 } else { margin < 0.0 };
        if !violated {
            continue;
        }
        let sign = if bag.label() == 0 { 1.0 } else { -1.0 };
        let inst = &bag.instances()[argmax];
        let s = model.forward_cached(inst.features(), scratch);
        let dmargin = loss::loss_grad(loss, s, 0)? - loss::loss_grad(loss, s, 1)?;
        model.backward_cached(inst.features(), weight * sign * dmargin, scratch, grad);
    }
    Ok(())
}

/// Penalised objective: unbiased risk plus `C` times the constraint penalty.
///
/// With `C == 0` the penalty path is skipped entirely, so the value and
/// gradient are exactly those of [`unbiased_risk`].
pub fn bimil_objective(model: &Model, config: &EstimatorConfig, dataset: &BagDataset) -> Result<RiskBreakdown> {
    bimil_objective_on(model, config, dataset, &all_indices(dataset))
}

/// [`bimil_objective`] restricted to the bags listed in `indices`.
pub fn bimil_objective_on(
    model: &Model,
    config: &EstimatorConfig,
    dataset: &BagDataset,
    indices: &[usize],
) -> Result<RiskBreakdown> {
    let mut breakdown = unbiased_risk_on(model, config, dataset, indices)?;
    if config.penalty_weight > 0.0 {
        let (penalty, _) = constraint_penalty_on(model, config.loss, dataset, indices)?;
        breakdown.penalty = penalty;
        breakdown.total += config.penalty_weight * penalty;
    }
    Ok(breakdown)
}

/// Value and parameter gradient of [`bimil_objective_on`].
pub fn bimil_objective_grad_on(
    model: &Model,
    config: &EstimatorConfig,
    dataset: &BagDataset,
    indices: &[usize],
) -> Result<(RiskBreakdown, Vec<f64>)> {
    let (mut breakdown, mut grad) = unbiased_risk_grad_on(model, config, dataset, indices)?;
    if config.penalty_weight > 0.0 {
        let (penalty, _) = constraint_penalty_on(model, config.loss, dataset, indices)?;
        breakdown.penalty = penalty;
        breakdown.total += config.penalty_weight * penalty;
        let mut scratch = Scratch::default();
        accumulate_penalty_grad(
            model,
            config.loss,
            dataset,
            indices,
            config.penalty_weight,
            &mut scratch,
            &mut grad,
        )?;
    }
    Ok((breakdown, grad))
}

/// Exponentially weighted mean `sum_i x_i e^{a x_i} / sum_i e^{a x_i}`.
///
/// Interpolates between the arithmetic mean (`a = 0`) and the max
/// (`a -> inf`). Computed with max subtraction so large `a` stays stable.
pub fn softmax_alpha(values: &[f64], alpha: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Contract("softmax_alpha of an empty list".into()));
    }
    let peak = values.iter().fold(f64::NEG_INFINITY, |acc, &v| acc.max(alpha * v));
    let mut numer = 0.0;
    let mut denom = 0.0;
    for &v in values {
        let e = (alpha * v - peak).exp();
        numer += v * e;
        denom += e;
    }
    Ok(numer / denom)
}

const MILR_CLAMP: f64 = 1e-12;

/// Bag-level negative log likelihood with `softmax_alpha` pooling.
///
/// Each bag's positive probability is `softmax_alpha` of its instance
/// probabilities `sigmoid(f(x))`; positive bags contribute `-log p`,
/// negative bags `-log(1 - p)`, averaged over bags. Probabilities are
/// clamped to `[1e-12, 1 - 1e-12]` before the log.
pub fn milr_bag_loss(model: &Model, dataset: &BagDataset, alpha: f64) -> Result<f64> {
    milr_bag_loss_on(model, dataset, &all_indices(dataset), alpha)
}

/// [`milr_bag_loss`] restricted to the bags listed in `indices`.
pub fn milr_bag_loss_on(
    model: &Model,
    dataset: &BagDataset,
    indices: &[usize],
    alpha: f64,
) -> Result<f64> {
    if indices.is_empty() {
        return Err(Error::Contract("milr_bag_loss of an empty dataset".into()));
    }
    let mut terms = Vec::with_capacity(indices.len());
    for &i in indices {
        let bag = &dataset.bags()[i];
        let mut probs = Vec::with_capacity(bag.len());
        for inst in bag.instances() {
            probs.push(loss::sigmoid(model.forward(inst.features())?));
        }
        let p = softmax_alpha(&probs, alpha)?.clamp(MILR_CLAMP, 1.0 - MILR_CLAMP);
        terms.push(if bag.label() == 1 { -p.ln() } else { -(1.0 - p).ln() });
    }
    Ok(pairwise_sum(&terms) / indices.len() as f64)
}

/// Value and parameter gradient of [`milr_bag_loss_on`].
pub fn milr_bag_loss_grad_on(
    model: &Model,
    dataset: &BagDataset,
    indices: &[usize],
    alpha: f64,
) -> Result<(f64, Vec<f64>)> {
    if indices.is_empty() {
        return Err(Error::Contract("milr_bag_loss of an empty dataset".into()));
    }
    let inv = 1.0 / indices.len() as f64;
    let mut terms = Vec::with_capacity(indices.len());
    let mut grad = vec![0.0; model.param_count()];
    let mut scratch = Scratch::default();
    for &i in indices {
        let bag = &dataset.bags()[i];
        let mut scores = Vec::with_capacity(bag.len());
        let mut probs = Vec::with_capacity(bag.len());
        for inst in bag.instances() {
            let s = model.forward_cached(inst.features(), &mut scratch);
            scores.push(s);
            probs.push(loss::sigmoid(s));
        }
        let p_raw = softmax_alpha(&probs, alpha)?;
        let p = p_raw.clamp(MILR_CLAMP, 1.0 - MILR_CLAMP);
        terms.push(if bag.label() == 1 { -p.ln() } else { -(1.0 - p).ln() });

        // the clamp is flat: no gradient once the pooled probability has
        // saturated past it
        if p_raw <= MILR_CLAMP || p_raw >= 1.0 - MILR_CLAMP {
            continue;
        }
        let dloss_dp = if bag.label() == 1 { -1.0 / p_raw } else { 1.0 / (1.0 - p_raw) };

        let peak = probs.iter().fold(f64::NEG_INFINITY, |acc, &w| acc.max(alpha * w));
        let weights: Vec<f64> = probs.iter().map(|&w| (alpha * w - peak).exp()).collect();
        let weight_sum: f64 = weights.iter().sum();
        for (idx, inst) in bag.instances().iter().enumerate() {
            let w = probs[idx];
            let dp_dw = weights[idx] / weight_sum * (1.0 + alpha * (w - p_raw));
            let upstream = inv * dloss_dp * dp_dw * w * (1.0 - w);
            let _ = model.forward_cached(inst.features(), &mut scratch);
            model.backward_cached(inst.features(), upstream, &mut scratch, &mut grad);
        }
    }
    Ok((pairwise_sum(&terms) * inv, grad))
}
