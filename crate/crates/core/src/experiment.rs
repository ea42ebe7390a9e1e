//! Cross-validated pairwise experiments and the ratio-versus-accuracy trend.
//!
//! A pair experiment computes the `w = 1` separation profile, builds the
//! cumulative-energy feature groups and, for every requested percent, runs
//! one stratified 5-fold cross-validation of the network on that group. The
//! suite sorts pairs by the 10% group's energy ratio, and the trend fit
//! regresses mean accuracy on a quartic in `ln(ratio)`.

use std::io::{self, BufRead, Write};

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{pair_name, select_binary, BinaryDataset, ClassCode, Dataset};
use crate::energy::{
    cumulative_groups, energy_ratios, EnergyReport, FeatureGroup, SelectionScope, ZoneConfig,
};
use crate::error::{Error, Result};
use crate::neuralnet::{Classifier, NetworkConfig};
use crate::seed::{derive, hash_str};
use crate::window::sweep_windows;

/// The group whose ratio orders the suite.
pub const REFERENCE_PERCENT: u8 = 10;

/// Pairs of the published reference suite, in its ascending-ratio order.
pub const REFERENCE_PAIRS: [(ClassCode, ClassCode); 19] = {
    use ClassCode::*;
    [
        (A2, A3),
        (Gl, Me),
        (Od, A2),
        (A2, Oa),
        (Gl, Ly),
        (Gl, Ab),
        (Me, Ly),
        (Gl, A3),
        (A2, Ly),
        (Gl, Pn),
        (Me, Pn),
        (Mm, Ab),
        (G1, Mm),
        (A2, G2),
        (G1, G2),
        (Me, Mm),
        (G2, Mm),
        (G1, No),
        (Me, No),
    ]
};

const FOLD_STREAM: u64 = 0xF01D;

/// Where feature selection is fitted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMode {
    /// Once on the whole pair dataset, before cross-validation.
    #[default]
    Paper,
    /// Again inside every training fold.
    Nested,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub zones: ZoneConfig,
    pub percents: Vec<u8>,
    pub scope: SelectionScope,
    pub mode: SelectionMode,
    pub seed: u64,
    pub folds: usize,
    pub n_hidden: usize,
    pub max_epochs: usize,
}

impl ExperimentConfig {
    pub fn new(zones: ZoneConfig, seed: u64) -> Self {
        ExperimentConfig {
            zones,
            percents: (1..=10).collect(),
            scope: SelectionScope::Z1AndZ2,
            mode: SelectionMode::Paper,
            seed,
            folds: 5,
            n_hidden: 20,
            max_epochs: 150,
        }
    }

    /// Requested percents plus the reference percent, ascending.
    pub fn evaluated_percents(&self) -> Vec<u8> {
        let mut p = self.percents.clone();
        if !p.contains(&REFERENCE_PERCENT) {
            p.push(REFERENCE_PERCENT);
        }
        p.sort_unstable();
        p.dedup();
        p
    }
}

/// Assigns every row to one of `k` folds, class by class. Each class is
/// shuffled and dealt round-robin, continuing from where the previous class
/// stopped, so per-class counts across folds differ by at most one.
pub fn stratified_kfold(targets: &[i8], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 folds, got {k}"
        )));
    }
    let mut classes: Vec<i8> = targets.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for class in classes {
        let mut members: Vec<usize> = (0..targets.len())
            .filter(|&i| targets[i] == class)
            .collect();
        if members.len() < k {
            return Err(Error::InvalidArgument(format!(
                "class {class:+} has {} members, fewer than {k} folds",
                members.len()
            )));
        }
        members.shuffle(&mut rng);
        for i in members {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

/// Cross-validation outcome for one feature group. Accuracies are percents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub percent: u8,
    pub n_vars: usize,
    pub fold_accuracies: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation over folds.
    pub stdev: f64,
}

impl CvResult {
    pub fn from_folds(percent: u8, n_vars: usize, fold_accuracies: Vec<f64>) -> Self {
        let (mean, stdev) = mean_stdev(&fold_accuracies);
        CvResult {
            percent,
            n_vars,
            fold_accuracies,
            mean,
            stdev,
        }
    }
}

pub fn mean_stdev(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub pair: (ClassCode, ClassCode),
    pub ratio_e10_e3: f64,
    pub energy: EnergyReport,
    pub result_at_10: CvResult,
    pub best_result: CvResult,
    pub best_percent: u8,
    pub mode: SelectionMode,
    /// Every evaluated percent, ascending.
    pub results: Vec<CvResult>,
}

impl ExperimentRow {
    pub fn pair_name(&self) -> String {
        pair_name(self.pair.0, self.pair.1)
    }
}

fn task_seed(pair_seed: u64, percent: u8, fold: usize) -> u64 {
    derive(pair_seed, (u64::from(percent) << 32) | fold as u64)
}

fn groups_for(
    bin: &BinaryDataset,
    cfg: &ExperimentConfig,
    percents: &[u8],
) -> Result<(EnergyReport, Vec<FeatureGroup>)> {
    let lambdas = sweep_windows(bin, 1)?;
    let report = energy_ratios(&lambdas, &cfg.zones)?;
    let groups = cumulative_groups(&lambdas, &cfg.zones, cfg.scope, percents)?;
    Ok((report, groups))
}

fn fold_accuracy(
    bin: &BinaryDataset,
    indices: &[usize],
    train_rows: &[usize],
    test_rows: &[usize],
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<f64> {
    let features = bin.features(indices);
    let targets = bin.targets_f64();
    let pick = |rows: &[usize]| -> (Vec<Vec<f64>>, Vec<f64>) {
        (
            rows.iter().map(|&i| features[i].clone()).collect(),
            rows.iter().map(|&i| targets[i]).collect(),
        )
    };
    let (x_train, y_train) = pick(train_rows);
    let (x_test, y_test) = pick(test_rows);
    let mut net = NetworkConfig::new(indices.len(), seed);
    net.n_hidden = cfg.n_hidden;
    net.max_epochs = cfg.max_epochs;
    Classifier::fit(&net, &x_train, &y_train)?.accuracy(&x_test, &y_test)
}

/// Runs the full protocol for one class pair of `ds`.
pub fn run_pair(
    ds: &Dataset,
    pair: (ClassCode, ClassCode),
    cfg: &ExperimentConfig,
) -> Result<ExperimentRow> {
    let bin = select_binary(ds, pair.0, pair.1)?;
    run_binary(&bin, cfg)
}

pub fn run_binary(bin: &BinaryDataset, cfg: &ExperimentConfig) -> Result<ExperimentRow> {
    cfg.zones.validate(bin.m())?;
    crate::energy::validate_percents(&cfg.percents)?;
    let percents = cfg.evaluated_percents();
    let ref_pos = percents
        .iter()
        .position(|&p| p == REFERENCE_PERCENT)
        .expect("reference percent");
    let (energy, full_groups) = groups_for(bin, cfg, &percents)?;

    let pair_seed = derive(cfg.seed, hash_str(&bin.pair_name()));
    let folds = stratified_kfold(&bin.targets, cfg.folds, derive(pair_seed, FOLD_STREAM))?;
    let train_rows: Vec<Vec<usize>> = (0..folds.len())
        .map(|f| {
            folds
                .iter()
                .enumerate()
                .filter(|(g, _)| *g != f)
                .flat_map(|(_, rows)| rows.iter().copied())
                .collect()
        })
        .collect();

    // Per-fold feature groups: shared in paper mode, refitted on the training
    // rows in nested mode.
    let fold_groups: Vec<Vec<FeatureGroup>> = match cfg.mode {
        SelectionMode::Paper => vec![full_groups.clone(); folds.len()],
        SelectionMode::Nested => train_rows
            .par_iter()
            .map(|rows| Ok(groups_for(&bin.subset(rows)?, cfg, &percents)?.1))
            .collect::<Result<_>>()?,
    };

    let tasks: Vec<(usize, usize)> = (0..percents.len())
        .flat_map(|p| (0..folds.len()).map(move |f| (p, f)))
        .collect();
    let accuracies: Vec<f64> = tasks
        .par_iter()
        .map(|&(p, f)| {
            let group = &fold_groups[f][p];
            fold_accuracy(
                bin,
                &group.indices,
                &train_rows[f],
                &folds[f],
                cfg,
                task_seed(pair_seed, percents[p], f),
            )
        })
        .collect::<Result<_>>()?;

    let results: Vec<CvResult> = percents
        .iter()
        .enumerate()
        .map(|(p, &percent)| {
            let accs = accuracies[p * folds.len()..(p + 1) * folds.len()].to_vec();
            CvResult::from_folds(percent, full_groups[p].n_vars(), accs)
        })
        .collect();
    let best = results
        .iter()
        .fold(
            &results[0],
            |best, r| if r.mean > best.mean { r } else { best },
        )
        .clone();

    Ok(ExperimentRow {
        pair: (bin.class_a, bin.class_b),
        ratio_e10_e3: full_groups[ref_pos].group_energy_ratio,
        energy,
        result_at_10: results[ref_pos].clone(),
        best_percent: best.percent,
        best_result: best,
        mode: cfg.mode,
        results,
    })
}

/// One row per pair, ascending by the 10% energy ratio (ties by pair name).
pub fn run_pairwise_suite(
    ds: &Dataset,
    pairs: &[(ClassCode, ClassCode)],
    cfg: &ExperimentConfig,
) -> Result<Vec<ExperimentRow>> {
    let mut rows = pairs
        .iter()
        .map(|&pair| run_pair(ds, pair, cfg))
        .collect::<Result<Vec<_>>>()?;
    sort_rows(&mut rows);
    Ok(rows)
}

pub fn sort_rows(rows: &mut [ExperimentRow]) {
    rows.sort_by(|a, b| {
        a.ratio_e10_e3
            .total_cmp(&b.ratio_e10_e3)
            .then_with(|| a.pair_name().cmp(&b.pair_name()))
    });
}

/// All unordered pairs of the given codes, in list order.
pub fn all_pairs(codes: &[ClassCode]) -> Vec<(ClassCode, ClassCode)> {
    let mut out = Vec::new();
    for (i, &a) in codes.iter().enumerate() {
        for &b in &codes[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

/// Quartic least-squares fit of accuracy on `u = ln(ratio)` plus the
/// Spearman rank correlation of ratio and accuracy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendFit {
    /// Coefficients of `1, u, u², u³, u⁴`.
    pub coefficients: [f64; 5],
    /// `None` when either variable is constant.
    pub spearman: Option<f64>,
    pub n_points: usize,
}

impl TrendFit {
    pub fn predict(&self, ratio: f64) -> f64 {
        let u = ratio.ln();
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * u + c)
    }
}

pub fn trend_fit(points: &[(f64, f64)]) -> Result<TrendFit> {
    if points.len() < 6 {
        return Err(Error::InvalidArgument(format!(
            "trend fit needs at least 6 points, got {}",
            points.len()
        )));
    }
    if let Some(&(r, _)) = points.iter().find(|(r, _)| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidArgument(format!(
            "ratios must be positive, got {r}"
        )));
    }
    let design = DMatrix::from_fn(points.len(), 5, |i, j| points[i].0.ln().powi(j as i32));
    let y = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let sol = design
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::Numeric(format!("trend fit failed: {e}")))?;
    let mut coefficients = [0.0; 5];
    coefficients.copy_from_slice(sol.as_slice());
    let ratios: Vec<f64> = points.iter().map(|p| p.0).collect();
    let accs: Vec<f64> = points.iter().map(|p| p.1).collect();
    Ok(TrendFit {
        coefficients,
        spearman: spearman(&ratios, &accs),
        n_points: points.len(),
    })
}

pub fn trend_fit_rows(rows: &[ExperimentRow]) -> Result<TrendFit> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.ratio_e10_e3, r.result_at_10.mean))
        .collect();
    trend_fit(&points)
}

/// Ranks starting at 1, ties sharing their average rank.
fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            out[o] = rank;
        }
        i = j + 1;
    }
    out
}

/// Pearson correlation of the ranks.
pub fn spearman(a: &[f64], b: &[f64]) -> Option<f64> {
    assert_eq!(a.len(), b.len());
    let (ra, rb) = (ranks(a), ranks(b));
    let (ma, _) = mean_stdev(&ra);
    let (mb, _) = mean_stdev(&rb);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma) * (x - ma)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb) * (y - mb)).sum();
    if va == 0.0 || vb == 0.0 {
        return None;
    }
    Some(cov / (va * vb).sqrt())
}

pub const SUITE_CSV_HEADER: &str =
    "pair,ratio_e10_e3,mean_at_10,std_at_10,best_mean,best_std,best_percent,n_vars_at_10";

pub fn write_suite_csv<W: Write>(rows: &[ExperimentRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{SUITE_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.pair_name(),
            r.ratio_e10_e3,
            r.result_at_10.mean,
            r.result_at_10.stdev,
            r.best_result.mean,
            r.best_result.stdev,
            r.best_percent,
            r.result_at_10.n_vars
        )?;
    }
    Ok(())
}

/// The `(ratio_e10_e3, mean_at_10)` columns of a suite CSV, keyed by pair.
pub fn read_suite_csv<R: BufRead>(input: R) -> Result<Vec<(String, f64, f64)>> {
    let mut lines = input.lines();
    let header = lines.next().ok_or(Error::Parse {
        row: 1,
        kind: "missing header",
        detail: "empty file".into(),
    })??;
    if header.trim_end() != SUITE_CSV_HEADER {
        return Err(Error::Parse {
            row: 1,
            kind: "malformed header",
            detail: format!("expected {SUITE_CSV_HEADER}"),
        });
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.trim_end().split(',').collect();
        if f.len() != 8 {
            return Err(Error::Parse {
                row,
                kind: "wrong column count",
                detail: format!("expected 8 fields, found {}", f.len()),
            });
        }
        let num = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Parse {
                row,
                kind: "malformed value",
                detail: format!("{s:?}"),
            })
        };
        out.push((f[0].to_string(), num(f[1])?, num(f[2])?));
    }
    Ok(out)
}

#[derive(Serialize)]
struct SuiteJson<'a> {
    rows: Vec<SuiteJsonRow<'a>>,
    trend: Option<&'a TrendFit>,
    stdev_over: &'static str,
}

#[derive(Serialize)]
struct SuiteJsonRow<'a> {
    pair: String,
    #[serde(flatten)]
    row: &'a ExperimentRow,
}

/// JSON variant of the suite report with per-fold detail and the trend fit.
pub fn suite_json(rows: &[ExperimentRow], trend: Option<&TrendFit>) -> String {
    let doc = SuiteJson {
        rows: rows
            .iter()
            .map(|row| SuiteJsonRow {
                pair: row.pair_name(),
                row,
            })
            .collect(),
        trend,
        stdev_over: "folds",
    };
    serde_json::to_string_pretty(&doc).expect("suite report serializes")
}
