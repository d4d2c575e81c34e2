//! Lag embedding, feature scaling and train/holdout splitting for
//! autoregressive modelling of a note sequence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::notation::NoteSequence;
use crate::scalar::Scalar;

/// One supervised example: the `p` most recent notes predicting the next.
#[derive(Debug, Clone, PartialEq)]
pub struct LagRow<F> {
    /// Inputs ordered most-recent-first: `[y_{t-1}, y_{t-2}, ..., y_{t-p}]`.
    pub input: Vec<F>,
    /// The note being predicted, `y_t`.
    pub target: F,
    /// 1-based serial position of the target within the source sequence.
    pub t: usize,
}

/// A lag-embedded dataset with fixed order `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagDataset<F> {
    pub p: usize,
    pub rows: Vec<LagRow<F>>,
}

impl<F> LagDataset<F> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Embed a sequence of length `N` into `N - p` lag rows.
///
/// Requires `p >= 1` and `N >= p + 1`.
pub fn embed_lags<F: Scalar>(seq: &NoteSequence, p: usize) -> Result<LagDataset<F>> {
    if p == 0 {
        return Err(Error::InvalidArgument("lag order p must be at least 1".into()));
    }
    if seq.len() < p + 1 {
        return Err(Error::InsufficientData {
            context: "lag embedding",
            needed: p + 1,
            got: seq.len(),
        });
    }
    let notes = seq.notes();
    let rows = (p..notes.len())
        .map(|i| LagRow {
            input: (1..=p).map(|k| F::from_i32(notes[i - k].value())).collect(),
            target: F::from_i32(notes[i].value()),
            t: i + 1,
        })
        .collect();
    Ok(LagDataset { p, rows })
}

/// How raw pitches are mapped into network range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalingMode {
    /// Use raw pitch values unchanged.
    None,
    /// Affine map from the observed `[min, max]` onto a fixed interval.
    MinMax,
}

impl std::fmt::Display for ScalingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalingMode::None => write!(f, "none"),
            ScalingMode::MinMax => write!(f, "minmax"),
        }
    }
}

impl std::str::FromStr for ScalingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(ScalingMode::None),
            "minmax" => Ok(ScalingMode::MinMax),
            _ => Err(Error::InvalidArgument(format!("unknown scaling mode `{s}`"))),
        }
    }
}

/// An invertible affine map fitted to data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Scaler<F> {
    /// Identity.
    None,
    /// Maps `[src_min, src_max]` onto `[lo, hi]`.
    MinMax { lo: F, hi: F, src_min: F, src_max: F },
}

impl<F: Scalar> Scaler<F> {
    pub fn apply(&self, x: F) -> F {
        match *self {
            Scaler::None => x,
            Scaler::MinMax { lo, hi, src_min, src_max } => {
                lo + (hi - lo) * (x - src_min) / (src_max - src_min)
            }
        }
    }

    pub fn invert(&self, y: F) -> F {
        match *self {
            Scaler::None => y,
            Scaler::MinMax { lo, hi, src_min, src_max } => {
                src_min + (src_max - src_min) * (y - lo) / (hi - lo)
            }
        }
    }
}

/// Fit a min-max scaler onto `values`, mapping their observed range onto
/// `[lo, hi]`. Fails on constant data, where the affine map would be
/// degenerate; the error carries the sample count.
pub fn fit_scaler<F: Scalar>(values: &[F], lo: F, hi: F) -> Result<Scaler<F>> {
    if hi <= lo {
        return Err(Error::InvalidArgument(format!(
            "scaler target interval is empty: [{lo}, {hi}]"
        )));
    }
    if values.is_empty() {
        return Err(Error::EmptyData("scaler fit"));
    }
    let mut src_min = values[0];
    let mut src_max = values[0];
    for &v in &values[1..] {
        if v < src_min {
            src_min = v;
        }
        if v > src_max {
            src_max = v;
        }
    }
    if src_min == src_max {
        return Err(Error::DegenerateScale(values.len()));
    }
    Ok(Scaler::MinMax { lo, hi, src_min, src_max })
}

/// Contiguous tail-holdout specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    /// Fraction of lag rows held out from the end, in `[0, 1)`.
    /// Zero means in-sample evaluation on the full dataset.
    pub holdout_fraction: f64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec { holdout_fraction: 0.0 }
    }
}

impl SplitSpec {
    pub fn new(holdout_fraction: f64) -> Result<Self> {
        if (0.0..1.0).contains(&holdout_fraction) {
            Ok(SplitSpec { holdout_fraction })
        } else {
            Err(Error::InvalidArgument(format!(
                "holdout fraction must lie in [0, 1), got {holdout_fraction}"
            )))
        }
    }

    /// Number of rows held out of `rows` total (round-half-up).
    pub fn holdout_rows(&self, rows: usize) -> usize {
        (self.holdout_fraction * rows as f64).round() as usize
    }
}

/// Split a dataset into a training head and holdout tail.
///
/// The holdout size is `round(fraction * rows)`; the training part must
/// remain non-empty.
pub fn split<F: Clone>(
    data: &LagDataset<F>,
    spec: SplitSpec,
) -> Result<(LagDataset<F>, LagDataset<F>)> {
    let holdout = spec.holdout_rows(data.len());
    if holdout >= data.len() {
        return Err(Error::Split {
            rows: data.len(),
            fraction: spec.holdout_fraction,
        });
    }
    let cut = data.len() - holdout;
    Ok((
        LagDataset { p: data.p, rows: data.rows[..cut].to_vec() },
        LagDataset { p: data.p, rows: data.rows[cut..].to_vec() },
    ))
}

/// Apply `input` to every lag input and `target` to every target,
/// producing the dataset the network actually sees.
pub fn scale_dataset<F: Scalar>(
    data: &LagDataset<F>,
    input: &Scaler<F>,
    target: &Scaler<F>,
) -> LagDataset<F> {
    LagDataset {
        p: data.p,
        rows: data
            .rows
            .iter()
            .map(|row| LagRow {
                input: row.input.iter().map(|&x| input.apply(x)).collect(),
                target: target.apply(row.target),
                t: row.t,
            })
            .collect(),
    }
}
