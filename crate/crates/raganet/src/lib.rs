//! Modeling of symbolic raga note sequences.
//!
//! The crate treats a melody as a time series of integer pitch values
//! (semitone offsets from the tonic Sa) and provides two generators over it:
//!
//! - a single-hidden-layer autoregressive neural network trained by
//!   full-batch gradient descent with momentum ([`network`], [`training`]),
//!   plus the grid-search harness that ranks architectures by RMSE/MAE
//!   ([`selection`]);
//! - a first-order Markov transition-matrix baseline ([`markov`]).
//!
//! [`notation`] owns the swara codec, the embedded 240-note Bageshree corpus
//! and raga-conformance validation; [`series`] turns sequences into
//! lag-embedded supervised datasets with optional min-max scaling and a
//! contiguous hold-out split.
//!
//! All numeric code is generic over the scalar type through the [`Scalar`]
//! trait (`f32` or `f64`); the `*64` aliases at the crate root are the
//! concrete types the CLI and most tests use.
//!
//! # Reproducibility
//!
//! Every randomized operation (weight initialization, Markov simulation)
//! takes an explicit 64-bit seed and draws from `ChaCha8Rng`
//! (`rand_chacha` 0.3), so identical seeds give bit-identical results on
//! every platform.

pub mod error;
pub mod markov;
pub mod model;
pub mod network;
pub mod notation;
pub mod scalar;
pub mod selection;
pub mod series;
pub mod training;
pub mod util;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use markov::TransitionMatrix;
pub use model::{ModelMetadata, SavedModel};
pub use network::{Activation, NetworkConfig, NetworkWeights, Prediction};
pub use notation::{NoteSequence, Octave, PitchValue, RagaProfile, Swara, SwaraLetter};
pub use selection::{GridEntry, MetricPair, SweepCell, SweepReport};
pub use series::{LagDataset, Scaler, ScalingMode, SplitSpec};
pub use training::{TrainConfig, TrainReport};

/// `f64`-backed aliases for the generic core types.
pub type Weights64 = network::NetworkWeights<f64>;
pub type Prediction64 = network::Prediction<f64>;
pub type Dataset64 = series::LagDataset<f64>;
pub type Scaler64 = series::Scaler<f64>;
pub type TrainConfig64 = training::TrainConfig<f64>;
pub type TrainReport64 = training::TrainReport<f64>;
pub type MetricPair64 = selection::MetricPair<f64>;
pub type SweepReport64 = selection::SweepReport<f64>;
pub type GridEntry64 = selection::GridEntry<f64>;
pub type TransitionMatrix64 = markov::TransitionMatrix<f64>;
