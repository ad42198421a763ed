//! Scoring models `f: R^d -> R` with analytic gradients.
//!
//! A model is either linear or a fully connected network with one or more
//! hidden layers (relu or softplus) and a linear output unit. Parameters
//! live in a single flat `Vec<f64>`; per-layer offsets are kept in a layout
//! so forward/backward can walk the vector directly. Models are plain
//! values: forward and backward are pure functions of `(params, input)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loss::{self, LossKind};

/// Hidden-layer activation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Softplus,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::Softplus => loss::softplus(z),
        }
    }

    fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Softplus => loss::sigmoid(z),
        }
    }
}

impl std::str::FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relu" => Ok(Activation::Relu),
            "softplus" => Ok(Activation::Softplus),
            other => Err(Error::Config(format!("unknown activation '{other}'"))),
        }
    }
}

/// Architecture + init seed. Identical spec and seed give bit-identical
/// initial parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub input_dim: usize,
    /// Hidden layer widths; empty means a plain linear model.
    pub hidden_dims: Vec<usize>,
    pub activation: Activation,
    pub seed: u64,
}

impl ModelSpec {
    pub fn linear(input_dim: usize, seed: u64) -> Self {
        ModelSpec { input_dim, hidden_dims: Vec::new(), activation: Activation::Relu, seed }
    }

    pub fn mlp(input_dim: usize, hidden_dims: Vec<usize>, activation: Activation, seed: u64) -> Self {
        ModelSpec { input_dim, hidden_dims, activation, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 {
            return Err(Error::Config("input_dim must be at least 1".into()));
        }
        if self.hidden_dims.iter().any(|&h| h == 0) {
            return Err(Error::Config("hidden dims must be at least 1".into()));
        }
        Ok(())
    }

    /// Layer widths including input and the scalar output.
    fn layer_dims(&self) -> Vec<usize> {
        let mut dims = Vec::with_capacity(self.hidden_dims.len() + 2);
        dims.push(self.input_dim);
        dims.extend_from_slice(&self.hidden_dims);
        dims.push(1);
        dims
    }

    pub fn param_count(&self) -> usize {
        let dims = self.layer_dims();
        dims.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
    }
}

/// Offsets of one dense layer inside the flat parameter vector.
/// Weights are row-major with shape `(out_dim, in_dim)`, biases follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct LayerLayout {
    in_dim: usize,
    out_dim: usize,
    weights: usize,
    biases: usize,
}

/// A scoring model: spec plus flat parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    spec: ModelSpec,
    params: Vec<f64>,
    layers: Vec<LayerLayout>,
}

fn build_layout(spec: &ModelSpec) -> Vec<LayerLayout> {
    let dims = spec.layer_dims();
    let mut layers = Vec::with_capacity(dims.len() - 1);
    let mut offset = 0;
    for w in dims.windows(2) {
        let (in_dim, out_dim) = (w[0], w[1]);
        layers.push(LayerLayout { in_dim, out_dim, weights: offset, biases: offset + in_dim * out_dim });
        offset += in_dim * out_dim + out_dim;
    }
    layers
}

/// Initialises a model from its spec.
///
/// Weights are uniform on `[-a, a]` with `a = sqrt(6 / (fan_in + fan_out))`
/// per layer; biases start at zero. Deterministic in the spec's seed.
pub fn init_model(spec: &ModelSpec) -> Result<Model> {
    spec.validate()?;
    let layers = build_layout(spec);
    let mut params = vec![0.0; spec.param_count()];
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for layer in &layers {
        let a = (6.0 / (layer.in_dim + layer.out_dim) as f64).sqrt();
        for w in &mut params[layer.weights..layer.weights + layer.in_dim * layer.out_dim] {
            *w = rng.random_range(-a..a);
        }
        // biases stay zero
    }
    Ok(Model { spec: spec.clone(), params, layers })
}

/// Reusable buffers for a forward/backward pass.
#[derive(Debug, Default, Clone)]
pub struct Scratch {
    /// Pre-activations per layer.
    preacts: Vec<Vec<f64>>,
    /// Post-activation outputs per layer.
    acts: Vec<Vec<f64>>,
    delta: Vec<f64>,
    delta_prev: Vec<f64>,
}

impl Model {
    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    /// Replaces the whole parameter vector.
    pub fn set_params(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.params.len() {
            return Err(Error::Shape(format!(
                "expected {} parameters, got {}",
                self.params.len(),
                params.len()
            )));
        }
        self.params.copy_from_slice(params);
        Ok(())
    }

    /// Rebuilds a model from a spec and a flat parameter vector.
    pub fn from_params(spec: &ModelSpec, params: Vec<f64>) -> Result<Model> {
        spec.validate()?;
        if params.len() != spec.param_count() {
            return Err(Error::Shape(format!(
                "spec wants {} parameters, got {}",
                spec.param_count(),
                params.len()
            )));
        }
        Ok(Model { spec: spec.clone(), layers: build_layout(spec), params })
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.spec.input_dim {
            return Err(Error::Shape(format!(
                "input has dim {}, model expects {}",
                x.len(),
                self.spec.input_dim
            )));
        }
        Ok(())
    }

    /// Raw (pre-sigmoid) score for one input.
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x)?;
        let mut scratch = Scratch::default();
        Ok(self.forward_cached(x, &mut scratch))
    }

    /// Forward pass that records pre-activations for a later backward pass.
    pub fn forward_cached(&self, x: &[f64], scratch: &mut Scratch) -> f64 {
        debug_assert_eq!(x.len(), self.spec.input_dim);
        let n_layers = self.layers.len();
        scratch.preacts.resize(n_layers, Vec::new());
        scratch.acts.resize(n_layers, Vec::new());

        for idx in 0..n_layers {
            let layer = self.layers[idx];
            scratch.preacts[idx].clear();
            scratch.preacts[idx].resize(layer.out_dim, 0.0);
            let is_output = idx == n_layers - 1;
            for o in 0..layer.out_dim {
                let row = layer.weights + o * layer.in_dim;
                let mut z = self.params[layer.biases + o];
                if idx == 0 {
                    for (i, &xi) in x.iter().enumerate() {
                        z += self.params[row + i] * xi;
                    }
                } else {
                    for i in 0..layer.in_dim {
                        z += self.params[row + i] * scratch.acts[idx - 1][i];
                    }
                }
                scratch.preacts[idx][o] = z;
            }
            scratch.acts[idx].clear();
            for o in 0..layer.out_dim {
                let z = scratch.preacts[idx][o];
                scratch.acts[idx].push(if is_output { z } else { self.spec.activation.apply(z) });
            }
        }
        scratch.acts[n_layers - 1][0]
    }

    /// Gradient of `upstream * f(x)` with respect to the parameters.
    pub fn backward(&self, x: &[f64], upstream: f64) -> Result<Vec<f64>> {
        self.check_input(x)?;
        if !upstream.is_finite() {
            return Err(Error::Contract("upstream gradient must be finite".into()));
        }
        let mut scratch = Scratch::default();
        self.forward_cached(x, &mut scratch);
        let mut grad = vec![0.0; self.params.len()];
        self.backward_cached(x, upstream, &mut scratch, &mut grad);
        Ok(grad)
    }

    /// Accumulates the gradient of `upstream * f(x)` into `grad`.
    ///
    /// `scratch` must hold the caches from a `forward_cached` call on the
    /// same input.
    pub fn backward_cached(&self, x: &[f64], upstream: f64, scratch: &mut Scratch, grad: &mut [f64]) {
        debug_assert_eq!(grad.len(), self.params.len());
        let n_layers = self.layers.len();
        scratch.delta.clear();
        scratch.delta.push(upstream);

        for idx in (0..n_layers).rev() {
            let layer = &self.layers[idx];
            let input: &[f64] = if idx == 0 { x } else { &scratch.acts[idx - 1] };

            // parameter gradients for this layer
            for o in 0..layer.out_dim {
                let d = scratch.delta[o];
                if d == 0.0 {
                    continue;
                }
                let row = layer.weights + o * layer.in_dim;
                for (i, &xi) in input.iter().enumerate() {
                    grad[row + i] += d * xi;
                }
                grad[layer.biases + o] += d;
            }

            if idx == 0 {
                break;
            }

            // delta for the previous layer: W^T delta, then activation slope
            scratch.delta_prev.clear();
            scratch.delta_prev.resize(layer.in_dim, 0.0);
            for o in 0..layer.out_dim {
                let d = scratch.delta[o];
                if d == 0.0 {
                    continue;
                }
                let row = layer.weights + o * layer.in_dim;
                for i in 0..layer.in_dim {
                    scratch.delta_prev[i] += self.params[row + i] * d;
                }
            }
            for (i, dp) in scratch.delta_prev.iter_mut().enumerate() {
                *dp *= self.spec.activation.derivative(scratch.preacts[idx - 1][i]);
            }
            std::mem::swap(&mut scratch.delta, &mut scratch.delta_prev);
        }
    }
}

/// Checks the analytic gradient of a mean loss against central differences.
///
/// Returns the maximum relative error over all parameters, with the
/// denominator guarded by `max(|analytic|, |numeric|, 1e-8)`.
pub fn grad_check(model: &Model, loss: LossKind, batch: &[(Vec<f64>, u8)], h: f64) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::Contract("grad_check needs a non-empty batch".into()));
    }
    if h <= 0.0 {
        return Err(Error::Contract("finite-difference step must be positive".into()));
    }

    let n = batch.len() as f64;
    let mut scratch = Scratch::default();
    let mut analytic = vec![0.0; model.param_count()];
    for (x, y) in batch {
        let s = model.forward_cached(x, &mut scratch);
        let upstream = loss::loss_grad(loss, s, *y)? / n;
        model.backward_cached(x, upstream, &mut scratch, &mut analytic);
    }

    let mean_loss = |m: &Model| -> Result<f64> {
        let mut total = 0.0;
        for (x, y) in batch {
            total += loss::loss_value(loss, m.forward(x)?, *y)?;
        }
        Ok(total / n)
    };

    let mut probe = model.clone();
    let mut max_rel = 0.0f64;
    for p in 0..model.param_count() {
        let original = model.params[p];
        probe.params[p] = original + h;
        let plus = mean_loss(&probe)?;
        probe.params[p] = original - h;
        let minus = mean_loss(&probe)?;
        probe.params[p] = original;
        let numeric = (plus - minus) / (2.0 * h);
        let denom = analytic[p].abs().max(numeric.abs()).max(1e-8);
        max_rel = max_rel.max(((analytic[p] - numeric) / denom).abs());
    }
    Ok(max_rel)
}

/// Central-difference gradient of an arbitrary scalar function of the model
/// parameters. Used as the independent oracle when verifying analytic
/// gradients of risk functionals.
pub fn finite_difference_gradient<F>(model: &Model, h: f64, mut f: F) -> Result<Vec<f64>>
where
    F: FnMut(&Model) -> Result<f64>,
{
    if h <= 0.0 {
        return Err(Error::Contract("finite-difference step must be positive".into()));
    }
    let mut probe = model.clone();
    let mut grad = vec![0.0; model.param_count()];
    for p in 0..model.param_count() {
        let original = model.params[p];
        probe.params[p] = original + h;
        let plus = f(&probe)?;
        probe.params[p] = original - h;
        let minus = f(&probe)?;
        probe.params[p] = original;
        grad[p] = (plus - minus) / (2.0 * h);
    }
    Ok(grad)
}

/// RMSprop optimizer state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerState {
    pub kind: OptimizerKind,
    pub learning_rate: f64,
    pub decay: f64,
    pub epsilon: f64,
    /// Running mean of squared gradients, element-wise non-negative.
    pub accumulators: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Rmsprop,
}

impl OptimizerState {
    pub fn rmsprop(learning_rate: f64, param_count: usize) -> Self {
        OptimizerState {
            kind: OptimizerKind::Rmsprop,
            learning_rate,
            decay: 0.9,
            epsilon: 1e-8,
            accumulators: vec![0.0; param_count],
        }
    }
}

/// One RMSprop update, in place:
/// `acc <- decay*acc + (1-decay)*g^2`, `p <- p - lr*g/(sqrt(acc)+eps)`.
pub fn rmsprop_step(state: &mut OptimizerState, params: &mut [f64], grads: &[f64]) -> Result<()> {
    if params.len() != grads.len() || params.len() != state.accumulators.len() {
        return Err(Error::Shape(format!(
            "rmsprop_step length mismatch: params {}, grads {}, accumulators {}",
            params.len(),
            grads.len(),
            state.accumulators.len()
        )));
    }
    for ((p, &g), acc) in params.iter_mut().zip(grads).zip(&mut state.accumulators) {
        *acc = state.decay * *acc + (1.0 - state.decay) * g * g;
        *p -= state.learning_rate * g / (acc.sqrt() + state.epsilon);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn linear_with(weights: &[f64], bias: f64) -> Model {
        let spec = ModelSpec::linear(weights.len(), 0);
        let mut params = weights.to_vec();
        params.push(bias);
        Model::from_params(&spec, params).unwrap()
    }

    #[test]
    fn linear_model_has_one_weight_per_input_plus_bias() {
        let model = init_model(&ModelSpec::linear(2, 7)).unwrap();
        assert_eq!(model.param_count(), 3);
        // bias initialised to zero
        assert_eq!(model.params()[2], 0.0);
    }

    #[test]
    fn same_spec_and_seed_is_bit_identical() {
        let spec = ModelSpec::mlp(5, vec![4], Activation::Relu, 42);
        let a = init_model(&spec).unwrap();
        let b = init_model(&spec).unwrap();
        assert_eq!(a.params(), b.params());
        let c = init_model(&ModelSpec { seed: 43, ..spec }).unwrap();
        assert_ne!(a.params(), c.params());
    }

    #[test]
    fn param_count_follows_layer_arithmetic() {
        let spec = ModelSpec::mlp(4, vec![8], Activation::Relu, 1);
        assert_eq!(spec.param_count(), 4 * 8 + 8 + 8 + 1);
        assert_eq!(init_model(&spec).unwrap().param_count(), 49);
    }

    #[test]
    fn zero_dim_spec_is_rejected() {
        assert!(init_model(&ModelSpec::linear(0, 1)).is_err());
        assert!(init_model(&ModelSpec::mlp(3, vec![0], Activation::Relu, 1)).is_err());
    }

    #[test]
    fn forward_zero_params_is_zero() {
        let model = linear_with(&[0.0, 0.0], 0.0);
        assert_eq!(model.forward(&[3.0, -4.0]).unwrap(), 0.0);
    }

    #[test]
    fn forward_is_the_dot_product_plus_bias() {
        let model = linear_with(&[1.0, 2.0], 0.5);
        assert_eq!(model.forward(&[1.0, 1.0]).unwrap(), 3.5);
    }

    #[test]
    fn relu_mlp_with_zero_weights_outputs_its_bias() {
        let spec = ModelSpec::mlp(3, vec![4], Activation::Relu, 0);
        let mut params = vec![0.0; spec.param_count()];
        let n = params.len();
        params[n - 1] = 1.0; // output bias
        let model = Model::from_params(&spec, params).unwrap();
        assert_eq!(model.forward(&[10.0, -3.0, 0.2]).unwrap(), 1.0);
    }

    #[test]
    fn forward_rejects_wrong_dimension() {
        let model = linear_with(&[1.0, 2.0], 0.0);
        assert!(matches!(model.forward(&[1.0]), Err(Error::Shape(_))));
    }

    #[test]
    fn forward_is_pure() {
        let model = init_model(&ModelSpec::mlp(3, vec![5, 4], Activation::Softplus, 9)).unwrap();
        let x = [0.3, -1.2, 2.0];
        let a = model.forward(&x).unwrap();
        let b = model.forward(&x).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn linear_backward_is_input_and_one() {
        let model = linear_with(&[0.7, -0.3], 0.1);
        let grad = model.backward(&[1.0, 1.0], 1.0).unwrap();
        assert_eq!(grad, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn backward_is_linear_in_upstream() {
        let model = init_model(&ModelSpec::mlp(4, vec![6], Activation::Softplus, 3)).unwrap();
        let x = [0.1, 0.2, -0.4, 1.0];
        let zero = model.backward(&x, 0.0).unwrap();
        assert!(zero.iter().all(|&g| g == 0.0));
        let g1 = model.backward(&x, 1.0).unwrap();
        let g2 = model.backward(&x, 2.0).unwrap();
        for (a, b) in g1.iter().zip(&g2) {
            assert!((2.0 * a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn backward_matches_finite_differences_of_the_score() {
        let h = 1e-5;
        for (spec, label) in [
            (ModelSpec::linear(3, 11), "linear"),
            (ModelSpec::mlp(3, vec![6], Activation::Softplus, 12), "softplus mlp"),
            (ModelSpec::mlp(3, vec![6, 4], Activation::Relu, 13), "relu mlp"),
        ] {
            let model = init_model(&spec).unwrap();
            let x = [0.35, -0.8, 1.4];
            let analytic = model.backward(&x, 1.0).unwrap();
            let mut probe = model.clone();
            for p in 0..model.param_count() {
                let orig = model.params()[p];
                probe.params_mut()[p] = orig + h;
                let plus = probe.forward(&x).unwrap();
                probe.params_mut()[p] = orig - h;
                let minus = probe.forward(&x).unwrap();
                probe.params_mut()[p] = orig;
                let numeric = (plus - minus) / (2.0 * h);
                let denom = analytic[p].abs().max(numeric.abs()).max(1e-8);
                assert!(
                    ((analytic[p] - numeric) / denom).abs() <= 1e-5,
                    "{label}: param {p}: {} vs {}",
                    analytic[p],
                    numeric
                );
            }
        }
    }

    fn random_batch(dim: usize, n: usize, seed: u64) -> Vec<(Vec<f64>, u8)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
                let y = u8::from(rng.random_range(0.0..1.0) > 0.5);
                (x, y)
            })
            .collect()
    }

    #[test]
    fn grad_check_linear_mse() {
        let model = init_model(&ModelSpec::linear(4, 21)).unwrap();
        let batch = random_batch(4, 10, 5);
        let err = grad_check(&model, LossKind::Mse, &batch, 1e-5).unwrap();
        assert!(err <= 1e-4, "max rel error {err}");
    }

    #[test]
    fn grad_check_mlp_softplus_ce() {
        let model = init_model(&ModelSpec::mlp(4, vec![8], Activation::Softplus, 22)).unwrap();
        let batch = random_batch(4, 10, 6);
        let err = grad_check(&model, LossKind::Ce, &batch, 1e-5).unwrap();
        assert!(err <= 1e-4, "max rel error {err}");
    }

    #[test]
    fn grad_check_at_a_stationary_point_is_tiny() {
        // score 0 on both labels: the mean mse loss is at its minimum in
        // every direction, so both gradients vanish.
        let model = linear_with(&[0.0, 0.0], 0.0);
        let batch = vec![(vec![1.0, -1.0], 1u8), (vec![1.0, -1.0], 0u8)];
        let err = grad_check(&model, LossKind::Mse, &batch, 1e-5).unwrap();
        assert!(err <= 1e-4, "max rel error {err}");
    }

    #[test]
    fn grad_check_randomised_over_architectures_and_losses() {
        // 20+ random parameter points per architecture/loss pair
        let mut seed = 100;
        for hidden in [vec![], vec![6]] {
            for kind in [LossKind::Mse, LossKind::Ce] {
                for _ in 0..20 {
                    seed += 1;
                    let spec = ModelSpec::mlp(3, hidden.clone(), Activation::Softplus, seed);
                    let model = init_model(&spec).unwrap();
                    let batch = random_batch(3, 6, seed * 7 + 1);
                    let err = grad_check(&model, kind, &batch, 1e-5).unwrap();
                    assert!(err <= 1e-4, "seed {seed} {kind}: {err}");
                }
            }
        }
    }

    #[test]
    fn rmsprop_zero_gradient_leaves_params_and_decays_accumulators() {
        let mut state = OptimizerState::rmsprop(0.1, 2);
        state.accumulators = vec![1.0, 4.0];
        let mut params = vec![0.5, -0.5];
        rmsprop_step(&mut state, &mut params, &[0.0, 0.0]).unwrap();
        assert_eq!(params, vec![0.5, -0.5]);
        assert_eq!(state.accumulators, vec![0.9, 3.6]);
    }

    #[test]
    fn rmsprop_single_step_hand_computation() {
        let mut state = OptimizerState::rmsprop(0.1, 1);
        state.epsilon = 0.0;
        let mut params = vec![0.0];
        rmsprop_step(&mut state, &mut params, &[1.0]).unwrap();
        assert!((state.accumulators[0] - 0.1).abs() < 1e-15);
        let expected = -0.1 / 0.1f64.sqrt();
        assert!((params[0] - expected).abs() < 1e-12, "step {} vs {expected}", params[0]);
    }

    #[test]
    fn rmsprop_step_magnitude_approaches_learning_rate() {
        let mut state = OptimizerState::rmsprop(0.05, 1);
        state.epsilon = 0.0;
        let mut params = vec![0.0];
        let mut last = 0.0;
        for _ in 0..400 {
            last = params[0];
            rmsprop_step(&mut state, &mut params, &[3.0]).unwrap();
        }
        let step = (params[0] - last).abs();
        assert!((step - 0.05).abs() < 1e-3, "limit step {step}");
    }

    #[test]
    fn rmsprop_rejects_length_mismatch() {
        let mut state = OptimizerState::rmsprop(0.1, 2);
        let mut params = vec![0.0, 0.0];
        assert!(rmsprop_step(&mut state, &mut params, &[1.0]).is_err());
    }

    #[test]
    fn accumulators_stay_non_negative() {
        let mut state = OptimizerState::rmsprop(0.01, 3);
        let mut params = vec![1.0, -1.0, 0.0];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g: Vec<f64> = (0..3).map(|_| rng.random_range(-5.0..5.0)).collect();
            rmsprop_step(&mut state, &mut params, &g).unwrap();
            assert!(state.accumulators.iter().all(|&a| a >= 0.0));
        }
    }
}
