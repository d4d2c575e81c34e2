//! First-order transition-probability baseline: estimation from a note
//! sequence, seeded simulation, and a stationarity diagnostic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::notation::{NoteSequence, PitchValue};
use crate::scalar::Scalar;
use crate::util::sig6;

/// Empirical first-order transition matrix over the observed alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix<F> {
    /// Distinct observed pitch values, ascending.
    pub alphabet: Vec<PitchValue>,
    /// `counts[a][b]` = adjacent pairs (alphabet[a], alphabet[b]).
    pub counts: Vec<Vec<u64>>,
    /// Row-stochastic probabilities, `counts` row-normalised.
    pub probs: Vec<Vec<F>>,
    /// True for states with no observed successor (see [`estimate_transitions`]).
    pub absorbing: Vec<bool>,
}

impl<F: Scalar> TransitionMatrix<F> {
    /// Position of a pitch in the alphabet.
    pub fn index_of(&self, v: PitchValue) -> Option<usize> {
        self.alphabet.binary_search(&v).ok()
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }
}

/// Count adjacent pairs of `seq` and normalise each row.
///
/// A state that never has a successor (a value appearing only as the
/// final note) would make simulation stall, so it gets a self-loop with
/// probability 1 and its `absorbing` flag set.
pub fn estimate_transitions<F: Scalar>(seq: &NoteSequence) -> Result<TransitionMatrix<F>> {
    if seq.len() < 2 {
        return Err(Error::InsufficientData {
            context: "transition estimation",
            needed: 2,
            got: seq.len(),
        });
    }
    let alphabet = seq.alphabet();
    let n = alphabet.len();
    let index = |v: PitchValue| {
        alphabet
            .binary_search(&v)
            .expect("alphabet contains every note")
    };
    let mut counts = vec![vec![0u64; n]; n];
    let notes = seq.notes();
    for pair in notes.windows(2) {
        counts[index(pair[0])][index(pair[1])] += 1;
    }
    let mut probs = vec![vec![F::zero(); n]; n];
    let mut absorbing = vec![false; n];
    for (i, row) in counts.iter().enumerate() {
        let total: u64 = row.iter().sum();
        if total == 0 {
            probs[i][i] = F::one();
            absorbing[i] = true;
        } else {
            let total = F::from_f64(total as f64);
            for (j, &c) in row.iter().enumerate() {
                probs[i][j] = F::from_f64(c as f64) / total;
            }
        }
    }
    Ok(TransitionMatrix { alphabet, counts, probs, absorbing })
}

/// Walk the chain for `length` notes starting at `start`.
///
/// Each successor is drawn by inverse-CDF over the row in alphabet order
/// from `ChaCha8Rng::seed_from_u64(seed)`, one `f64` draw per step, so a
/// given (matrix, start, length, seed) always yields the same sequence.
pub fn simulate<F: Scalar>(
    tm: &TransitionMatrix<F>,
    start: PitchValue,
    length: usize,
    seed: u64,
) -> Result<NoteSequence> {
    if length == 0 {
        return Err(Error::InvalidArgument("simulation length must be positive".into()));
    }
    let mut state = tm
        .index_of(start)
        .ok_or(Error::UnknownState(start.value()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut notes = Vec::with_capacity(length);
    notes.push(tm.alphabet[state]);
    for _ in 1..length {
        let u = F::from_f64(rng.gen::<f64>());
        let row = &tm.probs[state];
        let mut cum = F::zero();
        let mut next = tm.len() - 1; // fallback soaks up rounding in the row sum
        for (j, &p) in row.iter().enumerate() {
            cum = cum + p;
            if u < cum {
                next = j;
                break;
            }
        }
        state = next;
        notes.push(tm.alphabet[state]);
    }
    Ok(NoteSequence::new(notes))
}

/// How far a sample's empirical next-note frequencies sit from the
/// matrix rows, per state and at worst.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryReport<F> {
    /// (state, L1 distance) for every state that occurs as a source in
    /// the sample; states the sample never leaves from are skipped.
    pub per_state: Vec<(PitchValue, F)>,
    /// Largest per-state distance (zero for an empty report).
    pub max_l1: F,
}

/// Compare a sample against the matrix it supposedly follows.
///
/// Sample frequencies are computed with the same count/total arithmetic
/// as [`estimate_transitions`], so a sample identical to the training
/// sequence reports distance exactly zero.
pub fn stationary_check<F: Scalar>(
    tm: &TransitionMatrix<F>,
    sample: &NoteSequence,
) -> Result<StationaryReport<F>> {
    if sample.len() < 2 {
        return Err(Error::InsufficientData {
            context: "stationarity check",
            needed: 2,
            got: sample.len(),
        });
    }
    let n = tm.len();
    let mut counts = vec![vec![0u64; n]; n];
    let notes = sample.notes();
    for pair in notes.windows(2) {
        let a = tm
            .index_of(pair[0])
            .ok_or(Error::UnknownState(pair[0].value()))?;
        let b = tm
            .index_of(pair[1])
            .ok_or(Error::UnknownState(pair[1].value()))?;
        counts[a][b] += 1;
    }
    let mut per_state = Vec::new();
    let mut max_l1 = F::zero();
    for (i, row) in counts.iter().enumerate() {
        let total: u64 = row.iter().sum();
        if total == 0 {
            continue;
        }
        let total = F::from_f64(total as f64);
        let mut l1 = F::zero();
        for (j, &c) in row.iter().enumerate() {
            let freq = F::from_f64(c as f64) / total;
            l1 = l1 + (freq - tm.probs[i][j]).abs();
        }
        if l1 > max_l1 {
            max_l1 = l1;
        }
        per_state.push((tm.alphabet[i], l1));
    }
    Ok(StationaryReport { per_state, max_l1 })
}

/// Serialize the probability matrix as CSV: a header of alphabet values,
/// then one row per state (state value first, probabilities after, 6
/// significant digits).
pub fn write_matrix_csv<F: Scalar>(tm: &TransitionMatrix<F>) -> String {
    let header: Vec<String> = tm.alphabet.iter().map(|v| v.to_string()).collect();
    let mut out = format!("state,{}\n", header.join(","));
    for (state, row) in tm.alphabet.iter().zip(&tm.probs) {
        let cells: Vec<String> = row.iter().map(|&p| sig6(p.as_f64())).collect();
        out.push_str(&format!("{},{}\n", state, cells.join(",")));
    }
    out
}
