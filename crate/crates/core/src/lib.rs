//! Frequency-band selection and classification for magnetic-resonance spectra.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`dataset`]: load or synthesize labeled spectra and pick a binary pair
//!    of (possibly composite) tumour classes.
//! 2. [`window`]: slide a window over the frequency axis and score each
//!    window with the between/within class separation ratio `λ`, collecting
//!    every `(start, width)` cell into a [`DissimilarityIndexMatrix`].
//! 3. [`energy`]: split the axis into three zones, compute standardized zone
//!    energies of the `w = 1` ratios and build cumulative-energy feature
//!    groups from the descending-`λ` ranking.
//! 4. [`neuralnet`] and [`experiment`]: train a 2-layer network with
//!    Bayesian-regularized Levenberg-Marquardt on each feature group and
//!    evaluate it with stratified 5-fold cross-validation.

pub mod dataset;
pub mod energy;
pub mod error;
pub mod experiment;
pub mod neuralnet;
pub mod seed;
pub mod window;

pub use dataset::{
    BinaryDataset, ClassCode, Dataset, EchoTime, Peak, Spectrum, SynthClass, SynthSpec,
};
pub use energy::{EnergyReport, FeatureGroup, SelectionScope, ZoneConfig};
pub use error::{Error, Result};
pub use experiment::{CvResult, ExperimentConfig, ExperimentRow, SelectionMode, TrendFit};
pub use neuralnet::{
    Classifier, Network, NetworkConfig, NetworkState, Standardizer, TrainingTrace,
};
pub use window::{DissimilarityIndexMatrix, GroupedWindows};
