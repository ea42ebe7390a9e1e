use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use mrsband_core::dataset::{
    load_dataset, save_dataset, select_binary, synthesize, Band, BinaryDataset, ClassCode, Dataset,
    EchoTime, SynthSpec,
};
use mrsband_core::energy::{cumulative_groups, energy_ratios, write_groups_csv, ZoneConfig};
use mrsband_core::experiment::{
    all_pairs, read_suite_csv, run_pairwise_suite, suite_json, trend_fit, trend_fit_rows,
    write_suite_csv, REFERENCE_PAIRS,
};
use mrsband_core::neuralnet::{Classifier, NetworkConfig};
use mrsband_core::window::{build_dim, sweep_windows};
use serde::Serialize;

use crate::args::{DataArgs, PairArgs, SynthArgs};
use crate::config::{parse_list, RunConfig};
use crate::UsageError;

const DEFAULT_LABELS: [ClassCode; 15] = {
    use ClassCode::*;
    [Gl, Mm, Me, A2, A3, Ab, Ly, No, Oa, Od, Pn, Hb, Pi, Ra, Sc]
};

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .with_context(|| format!("cannot create {}", parent.display()))?;
    }
    let f = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes())?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn synth_spec(args: &SynthArgs, seed: u64) -> Result<SynthSpec> {
    let Some(classes) = &args.classes else {
        return Err(UsageError("no dataset: pass --data FILE or --classes N,N,...".into()).into());
    };
    let counts: Vec<usize> = parse_list(classes, "class count")?;
    let labels: Vec<ClassCode> = match &args.labels {
        Some(l) => parse_list(l, "class code")?,
        None if counts.len() <= DEFAULT_LABELS.len() => DEFAULT_LABELS[..counts.len()].to_vec(),
        None => {
            return Err(UsageError(format!(
                "at most {} classes without --labels",
                DEFAULT_LABELS.len()
            ))
            .into())
        }
    };
    let levels: Vec<f64> = match &args.levels {
        Some(l) => parse_list(l, "level")?,
        None if counts.len() == 1 => vec![0.0],
        None => (0..counts.len())
            .map(|i| i as f64 / (counts.len() - 1) as f64)
            .collect(),
    };
    if labels.len() != counts.len() || levels.len() != counts.len() {
        return Err(UsageError(format!(
            "--classes, --labels and --levels must have equal lengths ({}, {}, {})",
            counts.len(),
            labels.len(),
            levels.len()
        ))
        .into());
    }
    let band = match &args.sep_band {
        Some(b) => b
            .parse::<Band>()
            .map_err(|e| UsageError(format!("--sep-band: {e}")))?,
        None => Band {
            start: 200 * args.m / 512,
            end: 250 * args.m / 512,
        },
    };
    let classes: Vec<(ClassCode, usize, f64)> = labels
        .into_iter()
        .zip(counts)
        .zip(levels)
        .map(|((l, c), v)| (l, c, v))
        .collect();
    let spec = SynthSpec::banded(args.m, &classes, band, args.amplitude, args.noise, seed)
        .map_err(|e| UsageError(e.to_string()))?;
    Ok(spec)
}

fn load(data: &DataArgs, rc: &RunConfig) -> Result<Dataset> {
    match &data.data {
        Some(path) => {
            let echo = rc
                .echo
                .or_else(|| EchoTime::from_path(path))
                .unwrap_or(EchoTime::Short);
            Ok(load_dataset(path, echo).with_context(|| format!("loading {}", path.display()))?)
        }
        None => {
            let mut spec = synth_spec(&data.synth, rc.seed)?;
            if let Some(echo) = rc.echo {
                spec.echo_time = echo;
            }
            Ok(synthesize(&spec)?)
        }
    }
}

fn parse_pair(s: &str) -> Result<(ClassCode, ClassCode)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| UsageError(format!("pair {s:?} is not of the form a:b")))?;
    let code = |c: &str| {
        c.trim()
            .parse::<ClassCode>()
            .map_err(|e| UsageError(e.to_string()))
    };
    Ok((code(a)?, code(b)?))
}

fn zones(rc: &RunConfig, m: usize) -> Result<ZoneConfig> {
    let zc = rc.zones_for(m);
    zc.validate(m).map_err(|e| UsageError(e.to_string()))?;
    println!(
        "zones: Z1 [0, {}) Z2 [{}, {}) Z3 [{}, {m})",
        zc.z1_end, zc.z1_end, zc.z2_end, zc.z2_end
    );
    Ok(zc)
}

fn load_pair(args: &PairArgs, rc: &RunConfig) -> Result<(BinaryDataset, ZoneConfig)> {
    let ds = load(&args.data, rc)?;
    let (a, b) = match &args.pair {
        Some(p) => parse_pair(p)?,
        None => match ds.labels()[..] {
            [a, b] => (a, b),
            ref labels => {
                let names: Vec<String> = labels.iter().map(ToString::to_string).collect();
                return Err(UsageError(format!(
                    "--pair is required; dataset classes: {}",
                    names.join(", ")
                ))
                .into());
            }
        },
    };
    let bin = select_binary(&ds, a, b)?;
    println!(
        "pair: {} ({} vs {} spectra)",
        bin.pair_name(),
        bin.count(-1),
        bin.count(1)
    );
    let zc = zones(rc, bin.m())?;
    Ok((bin, zc))
}

pub fn synth(args: &SynthArgs, output: Option<PathBuf>, rc: &RunConfig) -> Result<()> {
    let spec = synth_spec(args, rc.seed)?;
    let mut spec = spec;
    if let Some(echo) = rc.echo {
        spec.echo_time = echo;
    }
    let ds = synthesize(&spec)?;
    let path = output.unwrap_or_else(|| rc.out_path("synth.csv"));
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .with_context(|| format!("cannot create {}", parent.display()))?;
    }
    save_dataset(&ds, &path).with_context(|| format!("cannot write {}", path.display()))?;
    for label in ds.labels() {
        println!("{label}: {}", ds.count(label));
    }
    println!(
        "wrote {} spectra of {} samples to {}",
        ds.len(),
        ds.m(),
        path.display()
    );
    Ok(())
}

pub fn dim(args: &PairArgs, rc: &RunConfig) -> Result<()> {
    let (bin, zc) = load_pair(args, rc)?;
    let dim = build_dim(&bin)?;
    let csv = rc.out_path("dim.csv");
    let mut w = create(&csv)?;
    dim.write_csv(&mut w)?;
    w.flush()?;
    let pgm = rc.out_path("dim.pgm");
    let mut w = create(&pgm)?;
    dim.write_pgm(&mut w)?;
    w.flush()?;
    println!(
        "wrote {} cells to {} and {}",
        dim.values().len(),
        csv.display(),
        pgm.display()
    );

    let (k, width, value) = dim.max_cell();
    println!("largest lambda {value:.6} at k = {k}, w = {width}");
    match energy_ratios(dim.row(1), &zc) {
        Ok(r) => println!(
            "zone energies: E1 {:.6} E2 {:.6} E3 {:.6} (E1/E3 {:.4}, E2/E3 {:.4})",
            r.e1, r.e2, r.e3, r.r1, r.r2
        ),
        Err(e) => println!("zone energies unavailable: {e}"),
    }
    Ok(())
}

pub fn energy(args: &PairArgs, rc: &RunConfig) -> Result<()> {
    let (bin, zc) = load_pair(args, rc)?;
    let report = energy_ratios(&sweep_windows(&bin, 1)?, &zc)?;
    let path = rc.out_path("energy.json");
    write_text(&path, &report.to_json())?;
    println!(
        "E1 {:.6} E2 {:.6} E3 {:.6}",
        report.e1, report.e2, report.e3
    );
    println!("E1/E3 {:.4} E2/E3 {:.4}", report.r1, report.r2);
    println!("wrote {}", path.display());
    Ok(())
}

pub fn select(args: &PairArgs, rc: &RunConfig) -> Result<()> {
    let (bin, zc) = load_pair(args, rc)?;
    let groups = cumulative_groups(&sweep_windows(&bin, 1)?, &zc, rc.scope(), &rc.percents)?;
    let path = rc.out_path("groups.csv");
    let mut w = create(&path)?;
    write_groups_csv(&groups, &mut w)?;
    w.flush()?;
    for g in &groups {
        println!(
            "{:>3}%: {:>4} variables, energy ratio {:.4}",
            g.percent,
            g.n_vars(),
            g.group_energy_ratio
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct ModelInputs<'a> {
    features: &'a [usize],
    means: &'a [f64],
    stds: &'a [f64],
}

pub fn train(
    args: &PairArgs,
    percent: u8,
    hidden: usize,
    epochs: usize,
    rc: &RunConfig,
) -> Result<()> {
    let (bin, zc) = load_pair(args, rc)?;
    let groups = cumulative_groups(&sweep_windows(&bin, 1)?, &zc, rc.scope(), &[percent])?;
    let features = &groups[0].indices;
    let rows = bin.features(features);
    let targets = bin.targets_f64();
    let mut cfg = NetworkConfig::new(features.len(), rc.seed);
    cfg.n_hidden = hidden;
    cfg.max_epochs = epochs;
    let clf = Classifier::fit(&cfg, &rows, &targets)?;
    let accuracy = clf.accuracy(&rows, &targets)?;

    let model = rc.out_path("model.txt");
    let mut w = create(&model)?;
    clf.state.network.write_text(rc.seed, &mut w)?;
    w.flush()?;
    let inputs = ModelInputs {
        features,
        means: &clf.standardizer.means,
        stds: &clf.standardizer.stds,
    };
    let std_path = rc.out_path("standardizer.json");
    write_text(&std_path, &serde_json::to_string_pretty(&inputs)?)?;

    println!("group {percent}%: {} variables", features.len());
    println!(
        "{} epochs ({:?}), gamma {:.2}, training accuracy {accuracy:.2}%",
        clf.trace.epochs.len(),
        clf.trace.stop,
        clf.state.gamma
    );
    println!("wrote {} and {}", model.display(), std_path.display());
    Ok(())
}

pub fn suite(
    data: &DataArgs,
    pairs: Option<&str>,
    reference_pairs: bool,
    rc: &RunConfig,
) -> Result<()> {
    if reference_pairs && data.data.is_none() && data.synth.classes.is_none() {
        println!("reference pairs:");
        for (a, b) in REFERENCE_PAIRS {
            println!("  {a} vs {b}");
        }
        println!("dataset not provided: pass --data FILE to run these pairs");
        return Err(mrsband_core::Error::InvalidDataset("dataset not provided".into()).into());
    }
    let ds = load(data, rc)?;
    let pairs = match pairs {
        Some(list) => list
            .split(',')
            .map(parse_pair)
            .collect::<Result<Vec<_>>>()?,
        None if reference_pairs => REFERENCE_PAIRS.to_vec(),
        None => all_pairs(&ds.labels()),
    };
    let cfg = rc.experiment(ds.m());
    zones(rc, ds.m())?;
    let rows = run_pairwise_suite(&ds, &pairs, &cfg)?;
    let trend = match trend_fit_rows(&rows) {
        Ok(t) => Some(t),
        Err(e) => {
            println!("trend fit skipped: {e}");
            None
        }
    };

    let csv = rc.out_path("suite.csv");
    let mut w = create(&csv)?;
    write_suite_csv(&rows, &mut w)?;
    w.flush()?;
    let json = rc.out_path("suite.json");
    write_text(&json, &suite_json(&rows, trend.as_ref()))?;

    println!(
        "{:<12} {:>12} {:>16} {:>16} {:>6}",
        "pair", "E10/E3", "acc at 10%", "best acc", "best%"
    );
    for r in &rows {
        println!(
            "{:<12} {:>12.4} {:>9.2} ± {:<5.2} {:>9.2} ± {:<5.2} {:>6}",
            r.pair_name(),
            r.ratio_e10_e3,
            r.result_at_10.mean,
            r.result_at_10.stdev,
            r.best_result.mean,
            r.best_result.stdev,
            r.best_percent
        );
    }
    if let Some(t) = &trend {
        print_trend(t);
    }
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(())
}

fn print_trend(t: &mrsband_core::TrendFit) {
    let c = t.coefficients;
    println!(
        "trend: acc = {:.4} + {:.4} u + {:.4} u^2 + {:.4} u^3 + {:.4} u^4, u = ln(ratio)",
        c[0], c[1], c[2], c[3], c[4]
    );
    match t.spearman {
        Some(rho) => println!(
            "spearman(ratio, accuracy) = {rho:.4} over {} pairs",
            t.n_points
        ),
        None => println!("spearman undefined over {} pairs", t.n_points),
    }
}

pub fn trend(suite: Option<PathBuf>, rc: &RunConfig) -> Result<()> {
    let path = suite.unwrap_or_else(|| rc.out_path("suite.csv"));
    let f = File::open(&path).with_context(|| format!("cannot open {}", path.display()))?;
    let rows =
        read_suite_csv(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))?;
    let points: Vec<(f64, f64)> = rows.iter().map(|(_, r, a)| (*r, *a)).collect();
    let fit = trend_fit(&points)?;
    let mut doc = BTreeMap::new();
    doc.insert("trend", serde_json::to_value(&fit)?);
    doc.insert(
        "pairs",
        serde_json::to_value(rows.iter().map(|(p, _, _)| p).collect::<Vec<_>>())?,
    );
    let out = rc.out_path("trend.json");
    write_text(&out, &serde_json::to_string_pretty(&doc)?)?;
    print_trend(&fit);
    println!("wrote {}", out.display());
    Ok(())
}
