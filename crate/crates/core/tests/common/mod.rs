//! Independent reference computations used by the integration tests. None of
//! these call into the code paths they check.
#![allow(dead_code, clippy::needless_range_loop)]

use mrsband_core::dataset::{BinaryDataset, ClassCode, EchoTime, Spectrum};
use mrsband_core::neuralnet::Network;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Literal evaluation of the two displayed variance expressions with
/// explicit index loops: centroid distance over summed group scatter.
pub fn lambda_oracle(x: &[Vec<f64>], y: &[Vec<f64>]) -> f64 {
    let w = x[0].len();
    let n = x.len();
    let my = y.len();
    let mut mu_x = vec![0.0; w];
    let mut mu_y = vec![0.0; w];
    for q in 0..w {
        for i in 0..n {
            mu_x[q] += x[i][q] / n as f64;
        }
        for j in 0..my {
            mu_y[q] += y[j][q] / my as f64;
        }
    }
    let mut scatter = 0.0;
    for i in 0..n {
        let mut s = 0.0;
        for q in 0..w {
            s += (x[i][q] - mu_x[q]).powi(2);
        }
        scatter += s.sqrt() / (n as f64 * (w as f64).sqrt());
    }
    for j in 0..my {
        let mut s = 0.0;
        for q in 0..w {
            s += (y[j][q] - mu_y[q]).powi(2);
        }
        scatter += s.sqrt() / (my as f64 * (w as f64).sqrt());
    }
    let mut d = 0.0;
    for q in 0..w {
        d += (mu_x[q] - mu_y[q]).powi(2);
    }
    let distance = d.sqrt() / (w as f64).sqrt();
    if scatter < 1e-12 {
        if distance < 1e-12 {
            0.0
        } else {
            distance / 1e-12
        }
    } else {
        distance / scatter
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs())
}

pub fn random_groups(
    rng: &mut ChaCha8Rng,
    max_n: usize,
    max_w: usize,
) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let w = rng.random_range(1..=max_w);
    let n = rng.random_range(1..=max_n);
    let my = rng.random_range(1..=max_n);
    let shift: f64 = rng.random_range(-3.0..3.0);
    let x = (0..n)
        .map(|_| (0..w).map(|_| rng.random_range(-5.0..5.0)).collect())
        .collect();
    let y = (0..my)
        .map(|_| {
            (0..w)
                .map(|_| rng.random_range(-5.0..5.0) + shift)
                .collect()
        })
        .collect();
    (x, y)
}

pub fn binary_from_groups(x: &[Vec<f64>], y: &[Vec<f64>]) -> BinaryDataset {
    let m = x[0].len();
    let mut spectra = Vec::new();
    let mut targets = Vec::new();
    for (i, row) in x.iter().chain(y).enumerate() {
        let first = i < x.len();
        spectra.push(Spectrum {
            id: format!("s{i}"),
            label: if first { ClassCode::Gl } else { ClassCode::Me },
            intensities: row.clone(),
            echo_time: EchoTime::Short,
        });
        targets.push(if first { -1 } else { 1 });
    }
    BinaryDataset::from_parts(ClassCode::Gl, ClassCode::Me, m, spectra, targets).unwrap()
}

/// Network output straight from the two activation formulas.
pub fn forward_oracle(net: &Network, x: &[f64]) -> f64 {
    let (ni, nh) = (net.n_inputs(), net.n_hidden());
    let p = net.params();
    let mut o = p[p.len() - 1];
    for h in 0..nh {
        let mut a = p[ni * nh + h];
        for i in 0..ni {
            a += p[h * ni + i] * x[i];
        }
        let hidden = 1.0 / (1.0 + (-a).exp());
        o += p[(ni + 1) * nh + h] * hidden;
    }
    2.0 / (1.0 + (-2.0 * o).exp()) - 1.0
}

/// Central finite differences of the residuals `t − y` in every parameter.
pub fn jacobian_fd(net: &Network, inputs: &[Vec<f64>], targets: &[f64], h: f64) -> Vec<Vec<f64>> {
    let base = net.params().to_vec();
    let mut out = vec![vec![0.0; base.len()]; inputs.len()];
    for j in 0..base.len() {
        let mut plus = base.clone();
        plus[j] += h;
        let mut minus = base.clone();
        minus[j] -= h;
        let np = Network::from_params(net.n_inputs(), net.n_hidden(), plus).unwrap();
        let nm = Network::from_params(net.n_inputs(), net.n_hidden(), minus).unwrap();
        for (s, (x, t)) in inputs.iter().zip(targets).enumerate() {
            let rp = t - forward_oracle(&np, x);
            let rm = t - forward_oracle(&nm, x);
            out[s][j] = (rp - rm) / (2.0 * h);
        }
    }
    out
}

/// Worst entrywise disagreement, relative to the entry magnitude with a
/// floor of 1e-3 for entries that are essentially zero.
pub fn jacobian_max_rel_err(net: &Network, inputs: &[Vec<f64>], targets: &[f64]) -> f64 {
    let analytic = net.jacobian(inputs, targets).unwrap();
    let fd = jacobian_fd(net, inputs, targets, 1e-6);
    let mut worst = 0.0f64;
    for (s, row) in fd.iter().enumerate() {
        for (j, &f) in row.iter().enumerate() {
            let a = analytic[(s, j)];
            worst = worst.max((a - f).abs() / a.abs().max(f.abs()).max(1e-3));
        }
    }
    worst
}

pub fn random_network(
    rng: &mut ChaCha8Rng,
    max_inputs: usize,
) -> (Network, Vec<Vec<f64>>, Vec<f64>) {
    let ni = rng.random_range(1..=max_inputs);
    let nh = rng.random_range(1..=20);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let n_params = (ni + 1) * nh + nh + 1;
    let params = (0..n_params).map(|_| normal.sample(rng)).collect();
    let net = Network::from_params(ni, nh, params).unwrap();
    let samples = rng.random_range(1..=4);
    let inputs = (0..samples)
        .map(|_| (0..ni).map(|_| normal.sample(rng)).collect())
        .collect();
    let targets = (0..samples)
        .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    (net, inputs, targets)
}

/// Two Gaussian blobs centred at (−2, −2) and (2, 2), `n` points each.
pub fn blobs(n: usize, sigma: f64, seed: u64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sigma).unwrap();
    let mut x = Vec::new();
    let mut t = Vec::new();
    for i in 0..2 * n {
        let c = if i < n { -2.0 } else { 2.0 };
        x.push(vec![c + noise.sample(&mut rng), c + noise.sample(&mut rng)]);
        t.push(if i < n { -1.0 } else { 1.0 });
    }
    (x, t)
}

/// Brute-force search for a separating line over 3600 directions.
pub fn linearly_separable(x: &[Vec<f64>], t: &[f64]) -> bool {
    (0..3600).any(|k| {
        let a = k as f64 * std::f64::consts::PI / 1800.0;
        let (c, s) = (a.cos(), a.sin());
        let proj: Vec<f64> = x.iter().map(|p| c * p[0] + s * p[1]).collect();
        let max_neg = proj
            .iter()
            .zip(t)
            .filter(|(_, &y)| y < 0.0)
            .map(|(p, _)| *p)
            .fold(f64::MIN, f64::max);
        let min_pos = proj
            .iter()
            .zip(t)
            .filter(|(_, &y)| y > 0.0)
            .map(|(p, _)| *p)
            .fold(f64::MAX, f64::min);
        max_neg < min_pos
    })
}

/// Cross-validated nearest-centroid accuracy (percent) on the given folds.
pub fn nearest_centroid_cv(rows: &[Vec<f64>], targets: &[i8], folds: &[Vec<usize>]) -> f64 {
    let mut hits = 0;
    for fold in folds {
        let train: Vec<usize> = (0..rows.len()).filter(|i| !fold.contains(i)).collect();
        let centroid = |cls: i8| -> Vec<f64> {
            let members: Vec<&Vec<f64>> = train
                .iter()
                .filter(|&&i| targets[i] == cls)
                .map(|&i| &rows[i])
                .collect();
            (0..rows[0].len())
                .map(|d| members.iter().map(|r| r[d]).sum::<f64>() / members.len() as f64)
                .collect()
        };
        let (ca, cb) = (centroid(-1), centroid(1));
        for &i in fold {
            let da: f64 = rows[i].iter().zip(&ca).map(|(a, b)| (a - b).powi(2)).sum();
            let db: f64 = rows[i].iter().zip(&cb).map(|(a, b)| (a - b).powi(2)).sum();
            let pred = if da < db { -1 } else { 1 };
            if pred == targets[i] {
                hits += 1;
            }
        }
    }
    100.0 * hits as f64 / rows.len() as f64
}
