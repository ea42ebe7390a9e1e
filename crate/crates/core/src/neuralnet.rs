//! Two-layer feed-forward classifier (logsig hidden layer, single tansig
//! output) trained with Levenberg–Marquardt under Bayesian regularization.
//!
//! Training minimizes `F(θ) = β·E_D + α·E_W`, where `E_D` is the sum of
//! squared residuals and `E_W` the sum of squared parameters. Each epoch
//! takes one accepted damped Gauss–Newton step
//!
//! ```text
//! Δθ = −(β JᵀJ + (α + μ) I)⁻¹ (β Jᵀ r + α θ)
//! ```
//!
//! with `J = ∂r/∂θ`, then re-estimates the hyperparameters from the evidence:
//!
//! ```text
//! γ = N − α·tr((β JᵀJ + α I)⁻¹)
//! α = γ / (2 E_W)
//! β = (n − γ) / (2 E_D)
//! ```
//!
//! `γ` is the effective number of parameters and stays in `[0, N]`.
//!
//! Parameter layout in `θ`: hidden weights (row-major, `n_hidden × n_inputs`),
//! hidden biases, output weights, output bias.

use std::io::{self, BufRead, Write};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn logsig(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

pub fn tansig(z: f64) -> f64 {
    2.0 / (1.0 + (-2.0 * z).exp()) - 1.0
}

pub fn n_params(n_inputs: usize, n_hidden: usize) -> usize {
    (n_inputs + 1) * n_hidden + n_hidden + 1
}

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    n_inputs: usize,
    n_hidden: usize,
    params: Vec<f64>,
}

impl Network {
    pub fn zeros(n_inputs: usize, n_hidden: usize) -> Self {
        Network {
            n_inputs,
            n_hidden,
            params: vec![0.0; n_params(n_inputs, n_hidden)],
        }
    }

    pub fn from_params(n_inputs: usize, n_hidden: usize, params: Vec<f64>) -> Result<Self> {
        let expected = n_params(n_inputs, n_hidden);
        if params.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: params.len(),
            });
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::Numeric("non-finite network parameter".into()));
        }
        Ok(Network {
            n_inputs,
            n_hidden,
            params,
        })
    }

    /// Uniform weights in `[−0.5, 0.5] / √fan_in` for each layer.
    pub fn random(n_inputs: usize, n_hidden: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut net = Network::zeros(n_inputs, n_hidden);
        let hidden_scale = 1.0 / (n_inputs.max(1) as f64).sqrt();
        let output_scale = 1.0 / (n_hidden as f64).sqrt();
        let split = (n_inputs + 1) * n_hidden;
        for (i, p) in net.params.iter_mut().enumerate() {
            let scale = if i < split {
                hidden_scale
            } else {
                output_scale
            };
            *p = rng.random_range(-0.5..=0.5) * scale;
        }
        net
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_hidden(&self) -> usize {
        self.n_hidden
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    fn hidden_weights(&self, h: usize) -> &[f64] {
        &self.params[h * self.n_inputs..(h + 1) * self.n_inputs]
    }

    fn hidden_bias(&self, h: usize) -> f64 {
        self.params[self.n_inputs * self.n_hidden + h]
    }

    fn output_weight(&self, h: usize) -> f64 {
        self.params[(self.n_inputs + 1) * self.n_hidden + h]
    }

    fn output_bias(&self) -> f64 {
        self.params[self.params.len() - 1]
    }

    /// Hidden activations and network output.
    fn activations(&self, x: &[f64], hidden: &mut [f64]) -> f64 {
        let mut o = self.output_bias();
        for (h, slot) in hidden.iter_mut().enumerate() {
            let a = self
                .hidden_weights(h)
                .iter()
                .zip(x)
                .map(|(w, v)| w * v)
                .sum::<f64>()
                + self.hidden_bias(h);
            *slot = logsig(a);
            o += self.output_weight(h) * *slot;
        }
        tansig(o)
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_inputs {
            return Err(Error::DimensionMismatch {
                expected: self.n_inputs,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x)?;
        let mut hidden = vec![0.0; self.n_hidden];
        Ok(self.activations(x, &mut hidden))
    }

    /// `+1` when the output is `≥ 0`, else `−1`.
    pub fn predict_class(&self, x: &[f64]) -> Result<i8> {
        Ok(if self.forward(x)? >= 0.0 { 1 } else { -1 })
    }

    /// Residuals `t − y` for a batch.
    pub fn residuals(&self, inputs: &[Vec<f64>], targets: &[f64]) -> Result<Vec<f64>> {
        check_batch(self, inputs, targets)?;
        let mut hidden = vec![0.0; self.n_hidden];
        Ok(inputs
            .iter()
            .zip(targets)
            .map(|(x, t)| t - self.activations(x, &mut hidden))
            .collect())
    }

    /// `J[s, j] = ∂(t_s − y_s)/∂θ_j` by backpropagation through both layers.
    pub fn jacobian(&self, inputs: &[Vec<f64>], targets: &[f64]) -> Result<DMatrix<f64>> {
        check_batch(self, inputs, targets)?;
        Ok(self.jacobian_unchecked(inputs))
    }

    fn jacobian_unchecked(&self, inputs: &[Vec<f64>]) -> DMatrix<f64> {
        let (ni, nh) = (self.n_inputs, self.n_hidden);
        let b1 = ni * nh;
        let w2 = b1 + nh;
        let b2 = w2 + nh;
        let mut jac = DMatrix::zeros(inputs.len(), self.n_params());
        let mut hidden = vec![0.0; nh];
        for (s, x) in inputs.iter().enumerate() {
            let y = self.activations(x, &mut hidden);
            // residual = t − y, so every derivative carries a minus sign
            let d_out = -(1.0 - y * y);
            jac[(s, b2)] = d_out;
            for (h, &hv) in hidden.iter().enumerate() {
                jac[(s, w2 + h)] = d_out * hv;
                let d_hidden = d_out * self.output_weight(h) * hv * (1.0 - hv);
                jac[(s, b1 + h)] = d_hidden;
                for (i, &xv) in x.iter().enumerate() {
                    jac[(s, h * ni + i)] = d_hidden * xv;
                }
            }
        }
        jac
    }

    /// Text format: `n_inputs n_hidden seed` on the first line, then one
    /// parameter per line.
    pub fn write_text<W: Write>(&self, seed: u64, mut out: W) -> io::Result<()> {
        writeln!(out, "{} {} {}", self.n_inputs, self.n_hidden, seed)?;
        for p in &self.params {
            writeln!(out, "{p}")?;
        }
        Ok(())
    }

    /// Inverse of [`Network::write_text`]; returns the network and its seed.
    pub fn read_text<R: BufRead>(input: R) -> Result<(Self, u64)> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| parse_error(1, "missing header"))??;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_error(1, "expected `n_inputs n_hidden seed`"));
        }
        let n_inputs = fields[0]
            .parse()
            .map_err(|_| parse_error(1, "bad n_inputs"))?;
        let n_hidden = fields[1]
            .parse()
            .map_err(|_| parse_error(1, "bad n_hidden"))?;
        let seed = fields[2].parse().map_err(|_| parse_error(1, "bad seed"))?;
        let mut params = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            params.push(
                line.parse()
                    .map_err(|_| parse_error(i + 2, "bad parameter"))?,
            );
        }
        Ok((Network::from_params(n_inputs, n_hidden, params)?, seed))
    }
}

fn parse_error(row: usize, detail: &str) -> Error {
    Error::Parse {
        row,
        kind: "malformed model",
        detail: detail.to_string(),
    }
}

fn check_batch(net: &Network, inputs: &[Vec<f64>], targets: &[f64]) -> Result<()> {
    if inputs.is_empty() {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    if inputs.len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: inputs.len(),
            got: targets.len(),
        });
    }
    inputs.iter().try_for_each(|x| net.check_input(x))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub n_inputs: usize,
    pub n_hidden: usize,
    pub max_epochs: usize,
    pub seed: u64,
    pub mu_init: f64,
    pub mu_increase: f64,
    pub mu_decrease: f64,
    pub mu_max: f64,
    pub min_grad: f64,
}

impl NetworkConfig {
    pub fn new(n_inputs: usize, seed: u64) -> Self {
        NetworkConfig {
            n_inputs,
            n_hidden: 20,
            max_epochs: 150,
            seed,
            mu_init: 1e-3,
            mu_increase: 10.0,
            mu_decrease: 0.1,
            mu_max: 1e10,
            min_grad: 1e-7,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkState {
    pub network: Network,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub mu: f64,
}

impl NetworkState {
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        self.network.forward(x)
    }

    pub fn predict_class(&self, x: &[f64]) -> Result<i8> {
        self.network.predict_class(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    MaxEpochs,
    MinGradient,
    MaxMu,
}

/// One accepted step. `objective_before` and `objective_after` are both
/// evaluated with the hyperparameters that were in force during the step;
/// `alpha`, `beta` and `gamma` are the values re-estimated after it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub objective_before: f64,
    pub objective_after: f64,
    pub sse: f64,
    pub ssw: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub mu: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingTrace {
    pub epochs: Vec<EpochRecord>,
    pub stop: StopReason,
}

fn sum_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Upper bound on `α` and `β`. A perfect fit drives `E_D` to zero and `β`
/// towards infinity; past this bound the regularization is already negligible.
const HYPER_MAX: f64 = 1e10;

/// Solves `(β JᵀJ + c I) x = rhs`. When there are fewer samples than
/// parameters the system is solved in sample space through the push-through
/// identity `(cI + βJᵀJ)⁻¹ = (I − βJᵀ(cI + βJJᵀ)⁻¹J) / c`.
fn solve_damped(jac: &DMatrix<f64>, beta: f64, c: f64, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    let (n, p) = jac.shape();
    if p <= n {
        let mut a = jac.tr_mul(jac) * beta;
        for i in 0..p {
            a[(i, i)] += c;
        }
        a.cholesky().map(|ch| ch.solve(rhs))
    } else {
        let mut small = jac * jac.transpose() * beta;
        for i in 0..n {
            small[(i, i)] += c;
        }
        let inner = small.cholesky()?.solve(&(jac * rhs));
        Some((rhs - jac.tr_mul(&inner) * beta) / c)
    }
}

/// Effective number of parameters `Σ βλᵢ/(βλᵢ + α)` over the eigenvalues of
/// `JᵀJ`, which equals `N − α·tr((βJᵀJ + αI)⁻¹)`. With `α = 0` it counts the
/// numerically non-zero eigenvalues.
fn effective_parameters(jac: &DMatrix<f64>, alpha: f64, beta: f64) -> Option<f64> {
    let (n, p) = jac.shape();
    let gram = if p <= n {
        jac.tr_mul(jac)
    } else {
        jac * jac.transpose()
    };
    if gram.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let eig = gram.symmetric_eigenvalues();
    if eig.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let top = eig.iter().fold(0.0f64, |a, &b| a.max(b));
    let tol = top * 1e-12 * (n.max(p) as f64);
    let gamma: f64 = eig
        .iter()
        .map(|&l| {
            let l = l.max(0.0);
            if alpha > 0.0 {
                beta * l / (beta * l + alpha)
            } else if l > tol {
                1.0
            } else {
                0.0
            }
        })
        .sum();
    gamma.is_finite().then(|| gamma.clamp(0.0, p as f64))
}

/// Bayesian-regularized Levenberg–Marquardt. Deterministic for a fixed
/// `config.seed`.
pub fn train(
    config: &NetworkConfig,
    inputs: &[Vec<f64>],
    targets: &[f64],
) -> Result<(NetworkState, TrainingTrace)> {
    if config.n_hidden == 0 || config.max_epochs == 0 {
        return Err(Error::InvalidArgument(
            "n_hidden and max_epochs must be positive".into(),
        ));
    }
    let mut net = Network::random(config.n_inputs, config.n_hidden, config.seed);
    check_batch(&net, inputs, targets)?;
    if targets.iter().any(|&t| t != -1.0 && t != 1.0) {
        return Err(Error::InvalidArgument("targets must be -1 or +1".into()));
    }
    let n = inputs.len() as f64;
    let p = net.n_params() as f64;

    let mut alpha = 0.0;
    let mut beta = 1.0;
    let mut gamma = p;
    let mut mu = config.mu_init;

    let mut res = DVector::from_vec(net.residuals(inputs, targets)?);
    let mut sse = res.norm_squared();
    let mut ssw = sum_sq(&net.params);
    let mut objective = beta * sse + alpha * ssw;
    let mut epochs = Vec::new();
    let mut stop = StopReason::MaxEpochs;

    'epochs: for epoch in 1..=config.max_epochs {
        let jac = net.jacobian_unchecked(inputs);
        let theta = DVector::from_column_slice(&net.params);
        let half_grad = jac.tr_mul(&res) * beta + &theta * alpha;
        if 2.0 * half_grad.norm() < config.min_grad {
            stop = StopReason::MinGradient;
            break;
        }
        let neg_grad = -half_grad;
        let objective_before = objective;
        loop {
            if let Some(step) = solve_damped(&jac, beta, alpha + mu, &neg_grad) {
                let trial = (&theta + step).as_slice().to_vec();
                if trial.iter().all(|v| v.is_finite()) {
                    let candidate = Network {
                        params: trial,
                        ..net.clone()
                    };
                    let trial_res = DVector::from_vec(candidate.residuals(inputs, targets)?);
                    let trial_sse = trial_res.norm_squared();
                    let trial_ssw = sum_sq(&candidate.params);
                    let trial_obj = beta * trial_sse + alpha * trial_ssw;
                    if trial_obj.is_finite() && trial_obj < objective {
                        net = candidate;
                        res = trial_res;
                        sse = trial_sse;
                        ssw = trial_ssw;
                        mu = (mu * config.mu_decrease).max(f64::MIN_POSITIVE);
                        epochs.push(EpochRecord {
                            epoch,
                            objective_before,
                            objective_after: trial_obj,
                            sse,
                            ssw,
                            alpha,
                            beta,
                            gamma,
                            mu,
                        });
                        break;
                    }
                }
            }
            mu *= config.mu_increase;
            if mu > config.mu_max {
                stop = StopReason::MaxMu;
                break 'epochs;
            }
        }

        if let Some(g) = effective_parameters(&jac, alpha, beta) {
            gamma = g;
        }
        alpha = if ssw > 0.0 {
            (gamma / (2.0 * ssw)).min(HYPER_MAX)
        } else {
            1.0
        };
        if n - gamma > 0.0 && sse > 0.0 {
            beta = ((n - gamma) / (2.0 * sse)).min(HYPER_MAX);
        }
        objective = beta * sse + alpha * ssw;
        if !objective.is_finite() {
            return Err(Error::Numeric(format!(
                "objective became non-finite at epoch {epoch} (alpha = {alpha}, beta = {beta}, sse = {sse})"
            )));
        }
        if let Some(last) = epochs.last_mut() {
            last.alpha = alpha;
            last.beta = beta;
            last.gamma = gamma;
        }
    }

    Ok((
        NetworkState {
            network: net,
            alpha,
            beta,
            gamma,
            mu,
        },
        TrainingTrace { epochs, stop },
    ))
}

/// Per-feature z-scoring fitted on training rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Standardizer {
    /// Population statistics; constant features keep unit scale.
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::InvalidArgument("no rows to standardize".into()))?;
        let d = first.len();
        let n = rows.len() as f64;
        let mut means = vec![0.0; d];
        for r in rows {
            if r.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: r.len(),
                });
            }
            means.iter_mut().zip(r).for_each(|(m, v)| *m += v);
        }
        means.iter_mut().for_each(|m| *m /= n);
        let mut stds = vec![0.0; d];
        for r in rows {
            stds.iter_mut()
                .zip(r.iter().zip(&means))
                .for_each(|(s, (v, m))| *s += (v - m) * (v - m));
        }
        stds.iter_mut().for_each(|s| {
            *s = (*s / n).sqrt();
            if *s <= f64::EPSILON {
                *s = 1.0;
            }
        });
        Ok(Standardizer { means, stds })
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    pub fn apply_all(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| self.apply(r)).collect()
    }
}

/// A trained network together with the input scaling it was trained under.
#[derive(Clone, Debug)]
pub struct Classifier {
    pub standardizer: Standardizer,
    pub state: NetworkState,
    pub trace: TrainingTrace,
}

impl Classifier {
    pub fn fit(config: &NetworkConfig, rows: &[Vec<f64>], targets: &[f64]) -> Result<Self> {
        let standardizer = Standardizer::fit(rows)?;
        let (state, trace) = train(config, &standardizer.apply_all(rows), targets)?;
        Ok(Classifier {
            standardizer,
            state,
            trace,
        })
    }

    pub fn predict_class(&self, x: &[f64]) -> Result<i8> {
        self.state.predict_class(&self.standardizer.apply(x))
    }

    /// Percentage of rows whose predicted class matches the target.
    pub fn accuracy(&self, rows: &[Vec<f64>], targets: &[f64]) -> Result<f64> {
        let mut hits = 0usize;
        for (x, &t) in rows.iter().zip(targets) {
            if f64::from(self.predict_class(x)?) == t {
                hits += 1;
            }
        }
        Ok(100.0 * hits as f64 / rows.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn activation_identities() {
        assert_eq!(logsig(0.0), 0.5);
        assert_eq!(tansig(0.0), 0.0);
        assert!((tansig(0.7) - 0.7f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn zero_network() {
        let net = Network::zeros(3, 4);
        assert_eq!(net.n_params(), 4 * 4 + 5);
        assert_eq!(net.forward(&[1.0, -2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(net.predict_class(&[5.0, 5.0, 5.0]).unwrap(), 1);
        let mut hidden = vec![0.0; 4];
        net.activations(&[1.0, 2.0, 3.0], &mut hidden);
        assert!(hidden.iter().all(|&h| h == 0.5));
        assert!(net.forward(&[1.0]).is_err());
    }

    #[test]
    fn predict_sign_rule() {
        // output bias only: y = tansig(b2)
        let mut params = vec![0.0; n_params(1, 1)];
        params[3] = 0.73f64.atanh();
        let net = Network::from_params(1, 1, params.clone()).unwrap();
        assert!((net.forward(&[0.0]).unwrap() - 0.73).abs() < 1e-12);
        assert_eq!(net.predict_class(&[0.0]).unwrap(), 1);
        params[3] = (-0.2f64).atanh();
        let net = Network::from_params(1, 1, params).unwrap();
        assert_eq!(net.predict_class(&[0.0]).unwrap(), -1);
    }

    #[test]
    fn jacobian_shape_and_zero_input() {
        let net = Network::random(3, 5, 11);
        let jac = net.jacobian(&[vec![0.0, 0.0, 0.0]], &[1.0]).unwrap();
        assert_eq!(jac.shape(), (1, net.n_params()));
        for j in 0..15 {
            assert_eq!(jac[(0, j)], 0.0);
        }
        assert!(jac[(0, 15)] != 0.0);
    }

    #[test]
    fn push_through_solve_matches_primal() {
        let net = Network::random(2, 3, 5);
        let inputs: Vec<Vec<f64>> = (0..4)
            .map(|i| vec![i as f64 * 0.3, 1.0 - i as f64 * 0.2])
            .collect();
        let jac = net.jacobian_unchecked(&inputs);
        let rhs = DVector::from_fn(net.n_params(), |i, _| (i as f64).sin());
        let fast = solve_damped(&jac, 2.0, 0.5, &rhs).unwrap();
        let mut a = jac.tr_mul(&jac) * 2.0;
        for i in 0..a.nrows() {
            a[(i, i)] += 0.5;
        }
        let direct = a.lu().solve(&rhs).unwrap();
        assert!((fast - direct).amax() < 1e-10);
    }

    #[test]
    fn gamma_matches_trace_formula() {
        let net = Network::random(2, 2, 8);
        let inputs: Vec<Vec<f64>> = (0..3).map(|i| vec![i as f64, -(i as f64) * 0.5]).collect();
        let jac = net.jacobian_unchecked(&inputs);
        let (alpha, beta) = (0.3, 1.7);
        let mut h = jac.tr_mul(&jac) * beta;
        for i in 0..h.nrows() {
            h[(i, i)] += alpha;
        }
        let trace = h.try_inverse().unwrap().trace();
        let expected = net.n_params() as f64 - alpha * trace;
        assert!((effective_parameters(&jac, alpha, beta).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn conflicting_targets_stay_finite() {
        let inputs = vec![vec![0.5, 0.5]; 6];
        let targets = [1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        let (state, trace) = train(&NetworkConfig::new(2, 3), &inputs, &targets).unwrap();
        assert!(state.network.params().iter().all(|p| p.is_finite()));
        assert!(trace
            .epochs
            .iter()
            .all(|e| e.objective_after.is_finite() && e.sse >= 6.0 - 1e-9));
    }

    #[test]
    fn model_text_round_trip() {
        let net = Network::random(4, 3, 99);
        let mut buf = Vec::new();
        net.write_text(99, &mut buf).unwrap();
        assert!(buf.starts_with(b"4 3 99\n"));
        let (back, seed) = Network::read_text(buf.as_slice()).unwrap();
        assert_eq!(seed, 99);
        assert_eq!(back, net);
        assert!(Network::read_text("4 3\n".as_bytes()).is_err());
        assert!(Network::read_text("1 1 0\n0.5\n".as_bytes()).is_err());
    }

    #[test]
    fn standardizer_uses_training_stats() {
        let rows = vec![vec![1.0, 5.0], vec![3.0, 5.0]];
        let s = Standardizer::fit(&rows).unwrap();
        assert_eq!(s.means, vec![2.0, 5.0]);
        assert_eq!(s.stds, vec![1.0, 1.0]);
        assert_eq!(s.apply(&[4.0, 6.0]), vec![2.0, 1.0]);
    }
}
