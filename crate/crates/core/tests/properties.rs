//! Invariants of the separation ratio, the energy selection and the trainer.

mod common;

use common::*;
use mrsband_core::dataset::{read_dataset, write_dataset, ClassCode, Dataset, EchoTime, Spectrum};
use mrsband_core::energy::{
    cumulative_groups, energy_ratios, rank_variables, zone_energy, SelectionScope, ZoneConfig,
};
use mrsband_core::experiment::stratified_kfold;
use mrsband_core::neuralnet::{n_params, train, Network, NetworkConfig};
use mrsband_core::window::{
    build_dim, lambda_ratio, sweep_windows, DissimilarityIndexMatrix, GroupedWindows,
};
use proptest::prelude::*;

fn groups() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    (1usize..=6, 1usize..=8, 1usize..=8).prop_flat_map(|(w, n, my)| {
        (
            prop::collection::vec(prop::collection::vec(-10.0..10.0f64, w), n),
            prop::collection::vec(prop::collection::vec(-10.0..10.0f64, w), my),
        )
    })
}

fn lambdas(m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01..5.0f64, m)
}

proptest! {
    #[test]
    fn lambda_is_nonnegative_and_symmetric((x, y) in groups()) {
        let g = GroupedWindows::new(x, y).unwrap();
        let l = lambda_ratio(&g);
        prop_assert!(l >= 0.0 && l.is_finite());
        prop_assert_eq!(l, lambda_ratio(&g.swapped()));
    }

    #[test]
    fn lambda_scale_and_translation_invariant((x, y) in groups(), c in 1e-3..1e3f64, shift in -50.0..50.0f64) {
        // With no within-group scatter the ratio is pinned to D/ε, which is not scale free.
        prop_assume!(x.len() + y.len() >= 3);
        let base = lambda_ratio(&GroupedWindows::new(x.clone(), y.clone()).unwrap());
        let scale = |g: &[Vec<f64>]| g.iter().map(|r| r.iter().map(|v| v * c).collect()).collect::<Vec<Vec<f64>>>();
        let scaled = lambda_ratio(&GroupedWindows::new(scale(&x), scale(&y)).unwrap());
        let offset: Vec<f64> = (0..x[0].len()).map(|q| shift * (q as f64 + 1.0)).collect();
        let shift_all = |g: &[Vec<f64>]| g.iter().map(|r| r.iter().zip(&offset).map(|(v, o)| v + o).collect()).collect::<Vec<Vec<f64>>>();
        let shifted = lambda_ratio(&GroupedWindows::new(shift_all(&x), shift_all(&y)).unwrap());
        prop_assert!(rel_err(base, scaled) < 1e-9, "{} vs {}", base, scaled);
        prop_assert!(rel_err(base, shifted) < 1e-9, "{} vs {}", base, shifted);
    }

    #[test]
    fn lambda_zero_iff_equal_means((x, _) in groups()) {
        let g = GroupedWindows::new(x.clone(), x).unwrap();
        prop_assert_eq!(lambda_ratio(&g), 0.0);
    }

    #[test]
    fn dim_shape_and_first_row((x, y) in groups()) {
        let ds = binary_from_groups(&x, &y);
        let m = ds.m();
        let dim = build_dim(&ds).unwrap();
        prop_assert_eq!(dim.values().len(), DissimilarityIndexMatrix::cell_count(m));
        let sweep = sweep_windows(&ds, 1).unwrap();
        prop_assert_eq!(dim.row(1), sweep.as_slice());
        prop_assert!(dim.values().iter().all(|&v| v >= 0.0));
        for w in 1..=m {
            prop_assert_eq!(dim.row(w).len(), m - w + 1);
        }
    }

    #[test]
    fn zone_energy_is_permutation_invariant(mut v in lambdas(12), seed in any::<u64>()) {
        let before = zone_energy(&v, 0..12).unwrap();
        let n = v.len();
        for i in (1..n).rev() {
            v.swap(i, (seed as usize).wrapping_mul(i + 7) % (i + 1));
        }
        prop_assert!(rel_err(before, zone_energy(&v, 0..12).unwrap()) < 1e-12);
    }

    #[test]
    fn groups_are_nested_and_monotone(v in lambdas(40)) {
        let zc = ZoneConfig { z1_end: 8, z2_end: 30 };
        let percents: Vec<u8> = (1..=100).collect();
        let groups = cumulative_groups(&v, &zc, SelectionScope::Z1AndZ2, &percents).unwrap();
        for pair in groups.windows(2) {
            prop_assert!(pair[1].indices.starts_with(&pair[0].indices));
        }
        prop_assert_eq!(groups[99].indices.len(), 30);
        prop_assert!(groups.iter().all(|g| g.indices.iter().all(|&k| k < 30)));
    }

    #[test]
    fn uniform_lambda_scaling(v in lambdas(40), c in 0.1..10.0f64) {
        let zc = ZoneConfig { z1_end: 8, z2_end: 30 };
        let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
        let (a, b) = (energy_ratios(&v, &zc).unwrap(), energy_ratios(&scaled, &zc).unwrap());
        prop_assert!(rel_err(b.e1, a.e1 * c * c) < 1e-9);
        prop_assert!(rel_err(a.r1, b.r1) < 1e-9 && rel_err(a.r2, b.r2) < 1e-9);
        prop_assert_eq!(
            rank_variables(&v, &zc, SelectionScope::Z1AndZ2).unwrap(),
            rank_variables(&scaled, &zc, SelectionScope::Z1AndZ2).unwrap()
        );
        let p: Vec<u8> = (1..=10).collect();
        let ga = cumulative_groups(&v, &zc, SelectionScope::Z1AndZ2, &p).unwrap();
        let gb = cumulative_groups(&scaled, &zc, SelectionScope::Z1AndZ2, &p).unwrap();
        for (x, y) in ga.iter().zip(&gb) {
            prop_assert_eq!(&x.indices, &y.indices);
        }
    }

    #[test]
    fn z2_scope_excludes_z1(v in lambdas(40)) {
        let zc = ZoneConfig { z1_end: 8, z2_end: 30 };
        let r = rank_variables(&v, &zc, SelectionScope::Z2Only).unwrap();
        prop_assert_eq!(r.len(), 22);
        prop_assert!(r.iter().all(|&k| (8..30).contains(&k)));
    }

    #[test]
    fn folds_partition_and_stratify(n_neg in 5usize..30, n_pos in 5usize..30, seed in any::<u64>()) {
        let targets: Vec<i8> = (0..n_neg + n_pos).map(|i| if i < n_neg { -1 } else { 1 }).collect();
        let folds = stratified_kfold(&targets, 5, seed).unwrap();
        let mut all: Vec<usize> = folds.concat();
        all.sort_unstable();
        prop_assert_eq!(all, (0..targets.len()).collect::<Vec<_>>());
        for class in [-1i8, 1] {
            let counts: Vec<usize> = folds.iter().map(|f| f.iter().filter(|&&i| targets[i] == class).count()).collect();
            prop_assert!(counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1);
        }
    }

    #[test]
    fn forward_stays_inside_open_interval(seed in any::<u64>(), x in prop::collection::vec(-3.0..3.0f64, 5)) {
        let net = Network::random(5, 7, seed);
        let y = net.forward(&x).unwrap();
        prop_assert!(y > -1.0 && y < 1.0);
    }

    #[test]
    fn dataset_csv_round_trip(rows in prop::collection::vec(prop::collection::vec(-1e6..1e6f64, 4), 1..6)) {
        let spectra = rows.iter().enumerate().map(|(i, r)| Spectrum {
            id: format!("p{i}"),
            label: ClassCode::ATOMIC[i % 15],
            intensities: r.clone(),
            echo_time: EchoTime::Short,
        }).collect();
        let ds = Dataset::new(4, spectra).unwrap();
        let mut buf = Vec::new();
        write_dataset(&ds, &mut buf).unwrap();
        let back = read_dataset(buf.as_slice(), EchoTime::Short).unwrap();
        prop_assert_eq!(&back, &ds);
        let mut again = Vec::new();
        write_dataset(&back, &mut again).unwrap();
        prop_assert_eq!(buf, again);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn training_invariants(seed in any::<u64>()) {
        let (x, t) = blobs(8, 1.2, seed);
        let (state, trace) = train(&NetworkConfig::new(2, seed), &x, &t).unwrap();
        let n = n_params(2, 20) as f64;
        for e in &trace.epochs {
            prop_assert!(e.objective_after <= e.objective_before);
            prop_assert!((0.0..=n).contains(&e.gamma));
            prop_assert!(e.alpha > 0.0 && e.beta > 0.0);
        }
        prop_assert!(state.mu > 0.0);
        let (again, _) = train(&NetworkConfig::new(2, seed), &x, &t).unwrap();
        prop_assert_eq!(state.network.params(), again.network.params());
    }
}
