//! Labeled spectra: class schema, CSV I/O, binary pair selection and a
//! synthetic generator.
//!
//! Dataset CSV layout: a header `id,label,v0,v1,...,v{m-1}` followed by one
//! spectrum per row. Values are plain decimal floats, comma separated, no
//! quoting. Labels are atomic class codes; composite codes (`G1`, `G2`) are
//! only meaningful when selecting a pair.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Number of spectral samples in the reference acquisitions.
pub const DEFAULT_SAMPLES: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EchoTime {
    #[serde(rename = "SET")]
    Short,
    #[serde(rename = "LET")]
    Long,
}

impl EchoTime {
    /// Reads the echo time from a `_set.csv` / `_let.csv` file name suffix.
    pub fn from_path(path: &Path) -> Option<Self> {
        let name = path.file_name()?.to_str()?.to_ascii_lowercase();
        if name.ends_with("_set.csv") {
            Some(EchoTime::Short)
        } else if name.ends_with("_let.csv") {
            Some(EchoTime::Long)
        } else {
            None
        }
    }
}

impl fmt::Display for EchoTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EchoTime::Short => "SET",
            EchoTime::Long => "LET",
        })
    }
}

impl FromStr for EchoTime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "set" | "short" => Ok(EchoTime::Short),
            "let" | "long" => Ok(EchoTime::Long),
            _ => Err(Error::InvalidArgument(format!("unknown echo time {s:?}"))),
        }
    }
}

/// Tumour class code. The fifteen atomic codes label individual spectra;
/// `G1` and `G2` are composite groups that exist only for pair selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassCode {
    A2,
    A3,
    Ab,
    Gl,
    Hb,
    Ly,
    Me,
    Mm,
    No,
    Oa,
    Od,
    Pi,
    Pn,
    Ra,
    Sc,
    /// Low-grade gliomas: a2 + oa + od.
    G1,
    /// High-grade malignant tumours: gl + me.
    G2,
}

impl ClassCode {
    pub const ATOMIC: [ClassCode; 15] = [
        ClassCode::A2,
        ClassCode::A3,
        ClassCode::Ab,
        ClassCode::Gl,
        ClassCode::Hb,
        ClassCode::Ly,
        ClassCode::Me,
        ClassCode::Mm,
        ClassCode::No,
        ClassCode::Oa,
        ClassCode::Od,
        ClassCode::Pi,
        ClassCode::Pn,
        ClassCode::Ra,
        ClassCode::Sc,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ClassCode::A2 => "a2",
            ClassCode::A3 => "a3",
            ClassCode::Ab => "ab",
            ClassCode::Gl => "gl",
            ClassCode::Hb => "hb",
            ClassCode::Ly => "ly",
            ClassCode::Me => "me",
            ClassCode::Mm => "mm",
            ClassCode::No => "no",
            ClassCode::Oa => "oa",
            ClassCode::Od => "od",
            ClassCode::Pi => "pi",
            ClassCode::Pn => "pn",
            ClassCode::Ra => "ra",
            ClassCode::Sc => "sc",
            ClassCode::G1 => "G1",
            ClassCode::G2 => "G2",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ClassCode::A2 => "astrocytoma, grade II",
            ClassCode::A3 => "astrocytoma, grade III",
            ClassCode::Ab => "brain abscess",
            ClassCode::Gl => "glioblastoma",
            ClassCode::Hb => "haemangioblastoma",
            ClassCode::Ly => "lymphoma",
            ClassCode::Me => "metastasis",
            ClassCode::Mm => "meningioma, grade I",
            ClassCode::No => "normal cerebral tissue, white matter",
            ClassCode::Oa => "oligoastrocytoma, grade II",
            ClassCode::Od => "oligodendroglioma, grade II",
            ClassCode::Pi => "pilocytic astrocytoma, grade I",
            ClassCode::Pn => "primitive neuroectodermal tumour / medulloblastoma",
            ClassCode::Ra => "rare tumours",
            ClassCode::Sc => "schwannoma",
            ClassCode::G1 => "low-grade gliomas (a2 + oa + od)",
            ClassCode::G2 => "high-grade malignant tumours (gl + me)",
        }
    }

    pub fn is_composite(self) -> bool {
        matches!(self, ClassCode::G1 | ClassCode::G2)
    }

    /// The atomic codes this code stands for. Atomic codes expand to
    /// themselves, so expansion is idempotent.
    pub fn expand(self) -> &'static [ClassCode] {
        match self {
            ClassCode::G1 => &[ClassCode::A2, ClassCode::Oa, ClassCode::Od],
            ClassCode::G2 => &[ClassCode::Gl, ClassCode::Me],
            _ => std::slice::from_ref(&Self::ATOMIC[self.atomic_index()]),
        }
    }

    fn atomic_index(self) -> usize {
        Self::ATOMIC
            .iter()
            .position(|&c| c == self)
            .expect("atomic code")
    }

    pub fn covers(self, label: ClassCode) -> bool {
        self.expand().contains(&label)
    }
}

impl fmt::Display for ClassCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ClassCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("g1") {
            return Ok(ClassCode::G1);
        }
        if s.eq_ignore_ascii_case("g2") {
            return Ok(ClassCode::G2);
        }
        ClassCode::ATOMIC
            .iter()
            .copied()
            .find(|c| c.code() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown class code {s:?}")))
    }
}

impl Serialize for ClassCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for ClassCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub id: String,
    pub label: ClassCode,
    pub intensities: Vec<f64>,
    pub echo_time: EchoTime,
}

/// A validated collection of equal-length spectra with unique ids.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    spectra: Vec<Spectrum>,
    m: usize,
}

impl Dataset {
    pub fn new(m: usize, spectra: Vec<Spectrum>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDataset(
                "sample count must be positive".into(),
            ));
        }
        let mut ids = HashSet::with_capacity(spectra.len());
        for s in &spectra {
            if s.intensities.len() != m {
                return Err(Error::InvalidDataset(format!(
                    "spectrum {} has {} samples, expected {m}",
                    s.id,
                    s.intensities.len()
                )));
            }
            if s.id.is_empty() || s.id.contains([',', '\n', '\r']) {
                return Err(Error::InvalidDataset(format!(
                    "invalid spectrum id {:?}",
                    s.id
                )));
            }
            if s.label.is_composite() {
                return Err(Error::InvalidDataset(format!(
                    "spectrum {} carries composite label {}",
                    s.id, s.label
                )));
            }
            if let Some(i) = s.intensities.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidDataset(format!(
                    "spectrum {} has a non-finite value at v{i}",
                    s.id
                )));
            }
            if !ids.insert(s.id.as_str()) {
                return Err(Error::InvalidDataset(format!(
                    "duplicate spectrum id {}",
                    s.id
                )));
            }
        }
        Ok(Dataset { spectra, m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn spectra(&self) -> &[Spectrum] {
        &self.spectra
    }

    pub fn len(&self) -> usize {
        self.spectra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spectra.is_empty()
    }

    pub fn count(&self, class: ClassCode) -> usize {
        self.spectra
            .iter()
            .filter(|s| class.covers(s.label))
            .count()
    }

    /// Atomic labels present, in order of first appearance.
    pub fn labels(&self) -> Vec<ClassCode> {
        let mut out = Vec::new();
        for s in &self.spectra {
            if !out.contains(&s.label) {
                out.push(s.label);
            }
        }
        out
    }
}

/// Parses a dataset CSV. Row numbers in errors are 1-based file lines, so the
/// header is row 1.
pub fn read_dataset<R: Read>(reader: R, echo_time: EchoTime) -> Result<Dataset> {
    let mut lines = BufReader::new(reader).lines();
    let header = match lines.next() {
        Some(line) => line?,
        None => {
            return Err(Error::Parse {
                row: 1,
                kind: "missing header",
                detail: "empty file".into(),
            })
        }
    };
    let columns: Vec<&str> = header.trim_end().split(',').collect();
    if columns.len() < 3 || columns[0] != "id" || columns[1] != "label" {
        return Err(Error::Parse {
            row: 1,
            kind: "malformed header",
            detail: "expected id,label,v0,...".into(),
        });
    }
    let m = columns.len() - 2;

    let mut spectra = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = i + 2;
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != m + 2 {
            return Err(Error::Parse {
                row,
                kind: "wrong column count",
                detail: format!("expected {} fields, found {}", m + 2, fields.len()),
            });
        }
        let label: ClassCode = fields[1].parse().map_err(|_| Error::Parse {
            row,
            kind: "unknown class code",
            detail: format!("{:?}", fields[1]),
        })?;
        if label.is_composite() {
            return Err(Error::Parse {
                row,
                kind: "composite class code",
                detail: format!("{label} cannot label a single spectrum"),
            });
        }
        let mut intensities = Vec::with_capacity(m);
        for (j, field) in fields[2..].iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                row,
                kind: "malformed value",
                detail: format!("v{j} = {field:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    kind: "non-finite value",
                    detail: format!("v{j} = {field}"),
                });
            }
            intensities.push(v);
        }
        spectra.push(Spectrum {
            id: fields[0].to_string(),
            label,
            intensities,
            echo_time,
        });
    }
    Dataset::new(m, spectra)
}

pub fn load_dataset(path: &Path, echo_time: EchoTime) -> Result<Dataset> {
    read_dataset(File::open(path)?, echo_time)
}

/// Writes `ds` in the dataset CSV layout. Values use the shortest decimal
/// form that parses back to the same `f64`.
pub fn write_dataset<W: Write>(ds: &Dataset, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    write!(w, "id,label")?;
    for j in 0..ds.m {
        write!(w, ",v{j}")?;
    }
    writeln!(w)?;
    for s in &ds.spectra {
        write!(w, "{},{}", s.id, s.label)?;
        for v in &s.intensities {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    write_dataset(ds, File::create(path)?)
}

/// Spectra of one class pair with targets `-1` (first class) / `+1` (second).
#[derive(Clone, Debug)]
pub struct BinaryDataset {
    pub class_a: ClassCode,
    pub class_b: ClassCode,
    pub spectra: Vec<Spectrum>,
    pub targets: Vec<i8>,
    m: usize,
}

impl BinaryDataset {
    /// Builds a binary dataset directly from rows. Both classes must be present.
    pub fn from_parts(
        class_a: ClassCode,
        class_b: ClassCode,
        m: usize,
        spectra: Vec<Spectrum>,
        targets: Vec<i8>,
    ) -> Result<Self> {
        if spectra.len() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: spectra.len(),
                got: targets.len(),
            });
        }
        if let Some(s) = spectra.iter().find(|s| s.intensities.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: s.intensities.len(),
            });
        }
        if targets.iter().any(|&t| t != -1 && t != 1) {
            return Err(Error::InvalidArgument("targets must be -1 or +1".into()));
        }
        let out = BinaryDataset {
            class_a,
            class_b,
            spectra,
            targets,
            m,
        };
        if out.count(-1) == 0 || out.count(1) == 0 {
            return Err(Error::InvalidPair(format!(
                "{} has an empty side",
                out.pair_name()
            )));
        }
        Ok(out)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.spectra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spectra.is_empty()
    }

    pub fn pair_name(&self) -> String {
        pair_name(self.class_a, self.class_b)
    }

    pub fn count(&self, target: i8) -> usize {
        self.targets.iter().filter(|&&t| t == target).count()
    }

    /// Intensity vectors of the spectra with the given target.
    pub fn group(&self, target: i8) -> Vec<&[f64]> {
        self.spectra
            .iter()
            .zip(&self.targets)
            .filter(|(_, &t)| t == target)
            .map(|(s, _)| s.intensities.as_slice())
            .collect()
    }

    /// Restricts the dataset to the given rows, keeping their order.
    pub fn subset(&self, rows: &[usize]) -> Result<Self> {
        BinaryDataset::from_parts(
            self.class_a,
            self.class_b,
            self.m,
            rows.iter().map(|&i| self.spectra[i].clone()).collect(),
            rows.iter().map(|&i| self.targets[i]).collect(),
        )
    }

    /// Feature rows made of the selected frequency indices.
    pub fn features(&self, indices: &[usize]) -> Vec<Vec<f64>> {
        self.spectra
            .iter()
            .map(|s| indices.iter().map(|&k| s.intensities[k]).collect())
            .collect()
    }

    pub fn targets_f64(&self) -> Vec<f64> {
        self.targets.iter().map(|&t| f64::from(t)).collect()
    }
}

pub fn pair_name(a: ClassCode, b: ClassCode) -> String {
    format!("{a} vs {b}")
}

/// Keeps the spectra covered by `class_a` (target −1) or `class_b` (target +1).
pub fn select_binary(
    ds: &Dataset,
    class_a: ClassCode,
    class_b: ClassCode,
) -> Result<BinaryDataset> {
    if class_a == class_b {
        return Err(Error::InvalidPair(format!("identical classes {class_a}")));
    }
    if let Some(c) = class_a.expand().iter().find(|c| class_b.covers(**c)) {
        return Err(Error::InvalidPair(format!(
            "{class_a} and {class_b} overlap on {c}"
        )));
    }
    let mut spectra = Vec::new();
    let mut targets = Vec::new();
    for s in ds.spectra() {
        if class_a.covers(s.label) {
            spectra.push(s.clone());
            targets.push(-1);
        } else if class_b.covers(s.label) {
            spectra.push(s.clone());
            targets.push(1);
        }
    }
    for (class, target) in [(class_a, -1), (class_b, 1)] {
        if !targets.contains(&target) {
            return Err(Error::InvalidPair(format!("no spectra for class {class}")));
        }
    }
    BinaryDataset::from_parts(class_a, class_b, ds.m(), spectra, targets)
}

/// A Gaussian line `amplitude * exp(-(t - center)^2 / (2 width^2))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
}

impl Peak {
    pub fn value_at(&self, t: f64) -> f64 {
        let d = t - self.center;
        self.amplitude * (-(d * d) / (2.0 * self.width * self.width)).exp()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthClass {
    pub label: ClassCode,
    pub count: usize,
    pub peaks: Vec<Peak>,
}

/// Recipe for a synthetic dataset: per-class Gaussian peak sums plus i.i.d.
/// Gaussian noise, reproducible from `seed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub m: usize,
    pub classes: Vec<SynthClass>,
    pub noise_sigma: f64,
    pub seed: u64,
    pub echo_time: EchoTime,
}

/// Half-open frequency interval `[start, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Band {
    pub start: usize,
    pub end: usize,
}

impl Band {
    pub fn contains(&self, k: usize) -> bool {
        (self.start..self.end).contains(&k)
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// A peak centred in the band whose ±4σ support stays inside it.
    pub fn peak(&self, amplitude: f64) -> Peak {
        Peak {
            center: (self.start + self.end - 1) as f64 / 2.0,
            width: self.len() as f64 / 8.0,
            amplitude,
        }
    }
}

impl FromStr for Band {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("band must look like start:end, got {s:?}"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        let start = a.trim().parse().map_err(|_| bad())?;
        let end = b.trim().parse().map_err(|_| bad())?;
        if end <= start {
            return Err(bad());
        }
        Ok(Band { start, end })
    }
}

/// Peaks shared by every synthetic class, placed at fixed fractions of the axis.
pub fn baseline_peaks(m: usize) -> Vec<Peak> {
    let scale = m as f64;
    [
        (0.08, 0.012, 3.0),
        (0.35, 0.008, 1.0),
        (0.55, 0.006, 0.8),
        (0.62, 0.006, 1.2),
        (0.78, 0.01, 0.5),
    ]
    .iter()
    .map(|&(c, w, a)| Peak {
        center: c * scale,
        width: (w * scale).max(0.5),
        amplitude: a,
    })
    .collect()
}

impl SynthSpec {
    /// Classes that share [`baseline_peaks`] and differ only by a peak inside
    /// `band` whose amplitude is `level * amplitude` (level 0 means no peak).
    pub fn banded(
        m: usize,
        classes: &[(ClassCode, usize, f64)],
        band: Band,
        amplitude: f64,
        noise_sigma: f64,
        seed: u64,
    ) -> Result<Self> {
        if band.is_empty() || band.end > m {
            return Err(Error::InvalidArgument(format!(
                "band outside signal: {}:{} with m = {m}",
                band.start, band.end
            )));
        }
        let base = baseline_peaks(m);
        let classes = classes
            .iter()
            .map(|&(label, count, level)| {
                let mut peaks = base.clone();
                if level * amplitude > 0.0 {
                    peaks.push(band.peak(level * amplitude));
                }
                SynthClass {
                    label,
                    count,
                    peaks,
                }
            })
            .collect();
        let spec = SynthSpec {
            m,
            classes,
            noise_sigma,
            seed,
            echo_time: EchoTime::Long,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.m == 0 {
            return bad("m must be positive".into());
        }
        if self.classes.is_empty() {
            return bad("at least one class is required".into());
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!(
                "noise sigma must be a non-negative real, got {}",
                self.noise_sigma
            ));
        }
        let mut seen = HashSet::new();
        for c in &self.classes {
            if c.label.is_composite() || !seen.insert(c.label) {
                return bad(format!("class label {} is composite or repeated", c.label));
            }
            if c.count == 0 {
                return bad(format!("class {} has zero spectra", c.label));
            }
            for p in &c.peaks {
                if !(p.center >= 0.0 && p.center < self.m as f64) {
                    return bad(format!("peak center {} outside [0, {})", p.center, self.m));
                }
                if !(p.width > 0.0 && p.width.is_finite())
                    || !(p.amplitude > 0.0 && p.amplitude.is_finite())
                {
                    return bad(format!(
                        "peak at {} needs positive width and amplitude",
                        p.center
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Generates the dataset described by `spec`. Spectra are emitted class by
/// class; ids are `<label>_<index>`.
pub fn synthesize(spec: &SynthSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise =
        Normal::new(0.0, spec.noise_sigma).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut spectra = Vec::new();
    for class in &spec.classes {
        let clean: Vec<f64> = (0..spec.m)
            .map(|t| class.peaks.iter().map(|p| p.value_at(t as f64)).sum())
            .collect();
        for i in 0..class.count {
            let intensities = if spec.noise_sigma > 0.0 {
                clean.iter().map(|v| v + noise.sample(&mut rng)).collect()
            } else {
                clean.clone()
            };
            spectra.push(Spectrum {
                id: format!("{}_{i:03}", class.label),
                label: class.label,
                intensities,
                echo_time: spec.echo_time,
            });
        }
    }
    Dataset::new(spec.m, spectra)
}
