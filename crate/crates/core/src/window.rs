//! Moving-window class separation.
//!
//! For a window of width `w` starting at frequency `k`, each spectrum
//! contributes the `w`-dimensional vector of its intensities in `[k, k + w)`.
//! The separation ratio of two groups of such vectors is
//!
//! ```text
//! D = ‖μx − μy‖ / √w
//! S = Σᵢ ‖xᵢ − μx‖ / (n √w) + Σⱼ ‖yⱼ − μy‖ / (m_y √w)
//! λ = D / S
//! ```
//!
//! so a large `λ` means the class centroids are far apart relative to the
//! spread of each class. Collecting `λ` for every valid `(k, w)` gives the
//! [`DissimilarityIndexMatrix`].

use std::io::{self, Write};

use rayon::prelude::*;

use crate::dataset::BinaryDataset;
use crate::error::{Error, Result};

/// Scatter below this is treated as zero.
pub const EPSILON: f64 = 1e-12;

/// Two groups of equal-width window vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupedWindows {
    group_x: Vec<Vec<f64>>,
    group_y: Vec<Vec<f64>>,
    width: usize,
}

impl GroupedWindows {
    pub fn new(group_x: Vec<Vec<f64>>, group_y: Vec<Vec<f64>>) -> Result<Self> {
        if group_x.is_empty() || group_y.is_empty() {
            return Err(Error::InvalidArgument(
                "both window groups need at least one vector".into(),
            ));
        }
        let width = group_x[0].len();
        if width == 0 {
            return Err(Error::InvalidArgument(
                "window width must be at least 1".into(),
            ));
        }
        if let Some(v) = group_x.iter().chain(&group_y).find(|v| v.len() != width) {
            return Err(Error::DimensionMismatch {
                expected: width,
                got: v.len(),
            });
        }
        Ok(GroupedWindows {
            group_x,
            group_y,
            width,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn group_x(&self) -> &[Vec<f64>] {
        &self.group_x
    }

    pub fn group_y(&self) -> &[Vec<f64>] {
        &self.group_y
    }

    pub fn swapped(&self) -> Self {
        GroupedWindows {
            group_x: self.group_y.clone(),
            group_y: self.group_x.clone(),
            width: self.width,
        }
    }
}

fn mean_rows(rows: &[&[f64]], len: usize) -> Vec<f64> {
    let mut acc = vec![0.0; len];
    for row in rows {
        for (a, v) in acc.iter_mut().zip(row.iter()) {
            *a += v;
        }
    }
    let n = rows.len() as f64;
    acc.iter_mut().for_each(|a| *a /= n);
    acc
}

/// Coordinate-wise means of both groups.
pub fn group_means(g: &GroupedWindows) -> (Vec<f64>, Vec<f64>) {
    let xs: Vec<&[f64]> = g.group_x.iter().map(Vec::as_slice).collect();
    let ys: Vec<&[f64]> = g.group_y.iter().map(Vec::as_slice).collect();
    (mean_rows(&xs, g.width), mean_rows(&ys, g.width))
}

fn scatter(rows: &[&[f64]], mean: &[f64]) -> f64 {
    rows.iter()
        .map(|row| {
            row.iter()
                .zip(mean)
                .map(|(v, m)| (v - m) * (v - m))
                .sum::<f64>()
                .sqrt()
        })
        .sum()
}

fn separation(between: f64, within: f64) -> f64 {
    if within < EPSILON {
        if between < EPSILON {
            0.0
        } else {
            between / EPSILON
        }
    } else {
        between / within
    }
}

/// `λ` for rows and means already restricted to one window. Both the direct
/// entry point and the sweep go through here, so they agree bit for bit.
fn window_lambda(xs: &[&[f64]], ys: &[&[f64]], mu_x: &[f64], mu_y: &[f64]) -> f64 {
    let sqrt_w = (mu_x.len() as f64).sqrt();
    let within = scatter(xs, mu_x) / (xs.len() as f64 * sqrt_w)
        + scatter(ys, mu_y) / (ys.len() as f64 * sqrt_w);
    let between = mu_x
        .iter()
        .zip(mu_y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
        / sqrt_w;
    separation(between, within)
}

/// Between-centroid distance over summed within-group scatter.
pub fn lambda_ratio(g: &GroupedWindows) -> f64 {
    let xs: Vec<&[f64]> = g.group_x.iter().map(Vec::as_slice).collect();
    let ys: Vec<&[f64]> = g.group_y.iter().map(Vec::as_slice).collect();
    let (mu_x, mu_y) = group_means(g);
    window_lambda(&xs, &ys, &mu_x, &mu_y)
}

/// Per-class rows and per-frequency means of a binary dataset, shared by
/// all window widths.
struct ClassProfile<'a> {
    xs: Vec<&'a [f64]>,
    ys: Vec<&'a [f64]>,
    mu_x: Vec<f64>,
    mu_y: Vec<f64>,
    m: usize,
}

impl<'a> ClassProfile<'a> {
    fn new(ds: &'a BinaryDataset) -> Result<Self> {
        let xs = ds.group(-1);
        let ys = ds.group(1);
        if xs.is_empty() || ys.is_empty() {
            return Err(Error::InvalidPair(format!(
                "{} has an empty class",
                ds.pair_name()
            )));
        }
        let m = ds.m();
        let mu_x = mean_rows(&xs, m);
        let mu_y = mean_rows(&ys, m);
        Ok(ClassProfile {
            xs,
            ys,
            mu_x,
            mu_y,
            m,
        })
    }

    fn sweep(&self, w: usize) -> Vec<f64> {
        let mut xs_win = vec![&[][..]; self.xs.len()];
        let mut ys_win = vec![&[][..]; self.ys.len()];
        (0..=self.m - w)
            .map(|k| {
                let span = k..k + w;
                for (dst, row) in xs_win.iter_mut().zip(&self.xs) {
                    *dst = &row[span.clone()];
                }
                for (dst, row) in ys_win.iter_mut().zip(&self.ys) {
                    *dst = &row[span.clone()];
                }
                window_lambda(&xs_win, &ys_win, &self.mu_x[span.clone()], &self.mu_y[span])
            })
            .collect()
    }
}

/// `λ` at every window position for width `w`; `m − w + 1` entries.
pub fn sweep_windows(ds: &BinaryDataset, w: usize) -> Result<Vec<f64>> {
    if w == 0 || w > ds.m() {
        return Err(Error::InvalidArgument(format!(
            "window width {w} outside 1..={}",
            ds.m()
        )));
    }
    Ok(ClassProfile::new(ds)?.sweep(w))
}

/// Triangular table of `λ` over all windows `(k, w)` with `k + w ≤ m`.
///
/// Storage is a flat array, width-major: all `m` cells of `w = 1`, then the
/// `m − 1` cells of `w = 2`, and so on down to the single cell of `w = m`.
/// Cells with `k + w > m` do not exist.
#[derive(Clone, Debug, PartialEq)]
pub struct DissimilarityIndexMatrix {
    m: usize,
    values: Vec<f64>,
}

impl DissimilarityIndexMatrix {
    pub fn cell_count(m: usize) -> usize {
        m * (m + 1) / 2
    }

    fn offset(&self, w: usize) -> usize {
        (w - 1) * (self.m + 1) - (w - 1) * w / 2
    }

    fn from_rows(m: usize, rows: Vec<Vec<f64>>) -> Self {
        let mut values = Vec::with_capacity(Self::cell_count(m));
        for row in rows {
            values.extend(row);
        }
        debug_assert_eq!(values.len(), Self::cell_count(m));
        DissimilarityIndexMatrix { m, values }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `λ` of the window starting at `k` with width `w`, or `None` when the
    /// window does not fit.
    pub fn get(&self, k: usize, w: usize) -> Option<f64> {
        if w == 0 || w > self.m || k + w > self.m {
            return None;
        }
        Some(self.values[self.offset(w) + k])
    }

    /// All cells of one width, indexed by `k`.
    pub fn row(&self, w: usize) -> &[f64] {
        assert!(w >= 1 && w <= self.m, "width {w} outside 1..={}", self.m);
        let start = self.offset(w);
        &self.values[start..start + self.m - w + 1]
    }

    /// `(k, w, λ)` in ascending `(w, k)` order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (1..=self.m).flat_map(move |w| self.row(w).iter().enumerate().map(move |(k, &v)| (k, w, v)))
    }

    /// Cell with the largest `λ`; the first one in `(w, k)` order on ties.
    pub fn max_cell(&self) -> (usize, usize, f64) {
        self.cells()
            .fold(None, |best: Option<(usize, usize, f64)>, c| match best {
                Some(b) if b.2 >= c.2 => Some(b),
                _ => Some(c),
            })
            .expect("non-empty matrix")
    }

    /// CSV with header `k,w,lambda`, one row per cell in ascending `(w, k)`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,w,lambda")?;
        for (k, w, v) in self.cells() {
            writeln!(out, "{k},{w},{v}")?;
        }
        Ok(())
    }

    /// Binary PGM (P5) heatmap: row `w − 1` holds width `w`, column `k`
    /// holds the window start. Valid cells are min–max scaled to 0..=255,
    /// missing cells are 0. A constant matrix renders black.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> io::Result<()> {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        let range = hi - lo;
        write!(out, "P5\n{} {}\n255\n", self.m, self.m)?;
        let mut line = vec![0u8; self.m];
        for w in 1..=self.m {
            line.iter_mut().for_each(|p| *p = 0);
            for (k, &v) in self.row(w).iter().enumerate() {
                line[k] = if range > 0.0 {
                    ((v - lo) / range * 255.0).round() as u8
                } else {
                    0
                };
            }
            out.write_all(&line)?;
        }
        Ok(())
    }
}

/// Every width swept in parallel; identical to [`build_dim_sequential`].
pub fn build_dim(ds: &BinaryDataset) -> Result<DissimilarityIndexMatrix> {
    let profile = ClassProfile::new(ds)?;
    let rows: Vec<Vec<f64>> = (1..=profile.m)
        .into_par_iter()
        .map(|w| profile.sweep(w))
        .collect();
    Ok(DissimilarityIndexMatrix::from_rows(profile.m, rows))
}

pub fn build_dim_sequential(ds: &BinaryDataset) -> Result<DissimilarityIndexMatrix> {
    let profile = ClassProfile::new(ds)?;
    let rows = (1..=profile.m).map(|w| profile.sweep(w)).collect();
    Ok(DissimilarityIndexMatrix::from_rows(profile.m, rows))
}
