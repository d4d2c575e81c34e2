//! Swara notation codec, the embedded Bageshree corpus, and raga-conformance
//! validation.
//!
//! Pitches are integer semitone offsets from the middle-octave tonic Sa
//! (S = 0). Three octaves are covered: lower (−12..−1), middle (0..11) and
//! upper (12..23). The twelve swara letters are case-sensitive: uppercase
//! for sudh (natural) notes, lowercase for komal (flat) variants, and `m`
//! for tivra Ma.
//!
//! The text grammar follows the convention common in online raga archives:
//! a single trailing apostrophe marks the lower octave, a double apostrophe
//! the upper one (`n'` = lower komal Ni, `M''` = upper Ma). Plain decimal
//! integers are accepted interchangeably with swara tokens.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// Lowest encodable pitch (lower-octave S).
pub const PITCH_MIN: i32 = -12;
/// Highest encodable pitch (upper-octave N).
pub const PITCH_MAX: i32 = 23;

/// Integer semitone offset from middle Sa, restricted to `[-12, 23]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PitchValue(i32);

impl PitchValue {
    pub fn new(value: i32) -> Result<Self> {
        if (PITCH_MIN..=PITCH_MAX).contains(&value) {
            Ok(PitchValue(value))
        } else {
            Err(Error::PitchOutOfRange(value as i64))
        }
    }

    pub fn value(self) -> i32 {
        self.0
    }

    /// Pitch class in `0..=11` (mathematical modulus, so `-7` maps to 5).
    pub fn pitch_class(self) -> u8 {
        self.0.rem_euclid(12) as u8
    }

    /// The swara spelling of this pitch.
    pub fn swara(self) -> Swara {
        decode_pitch(self)
    }
}

impl TryFrom<i32> for PitchValue {
    type Error = Error;

    fn try_from(value: i32) -> Result<Self> {
        PitchValue::new(value)
    }
}

impl fmt::Display for PitchValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The twelve swara letters of the chromatic octave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwaraLetter {
    Sa,
    KomalRe,
    SudhRe,
    KomalGa,
    SudhGa,
    SudhMa,
    TivraMa,
    Pa,
    KomalDha,
    SudhDha,
    KomalNi,
    SudhNi,
}

impl SwaraLetter {
    pub const ALL: [SwaraLetter; 12] = [
        SwaraLetter::Sa,
        SwaraLetter::KomalRe,
        SwaraLetter::SudhRe,
        SwaraLetter::KomalGa,
        SwaraLetter::SudhGa,
        SwaraLetter::SudhMa,
        SwaraLetter::TivraMa,
        SwaraLetter::Pa,
        SwaraLetter::KomalDha,
        SwaraLetter::SudhDha,
        SwaraLetter::KomalNi,
        SwaraLetter::SudhNi,
    ];

    /// Semitone offset from Sa within one octave (0..=11).
    pub fn pitch_class(self) -> u8 {
        self as u8
    }

    /// The case-sensitive ASCII letter: `S r R g G M m P d D n N`.
    pub fn symbol(self) -> char {
        match self {
            SwaraLetter::Sa => 'S',
            SwaraLetter::KomalRe => 'r',
            SwaraLetter::SudhRe => 'R',
            SwaraLetter::KomalGa => 'g',
            SwaraLetter::SudhGa => 'G',
            SwaraLetter::SudhMa => 'M',
            SwaraLetter::TivraMa => 'm',
            SwaraLetter::Pa => 'P',
            SwaraLetter::KomalDha => 'd',
            SwaraLetter::SudhDha => 'D',
            SwaraLetter::KomalNi => 'n',
            SwaraLetter::SudhNi => 'N',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.symbol() == c)
    }

    fn from_pitch_class(pc: u8) -> Self {
        Self::ALL[pc as usize]
    }
}

/// Octave register relative to the middle octave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Octave {
    Lower,
    Middle,
    Upper,
}

impl Octave {
    pub const ALL: [Octave; 3] = [Octave::Lower, Octave::Middle, Octave::Upper];

    /// Semitone offset added to the middle-octave value.
    pub fn offset(self) -> i32 {
        match self {
            Octave::Lower => -12,
            Octave::Middle => 0,
            Octave::Upper => 12,
        }
    }

    /// Apostrophe suffix in the text grammar.
    pub fn suffix(self) -> &'static str {
        match self {
            Octave::Lower => "'",
            Octave::Middle => "",
            Octave::Upper => "''",
        }
    }
}

/// A note name: swara letter plus octave register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Swara {
    pub letter: SwaraLetter,
    pub octave: Octave,
}

impl Swara {
    pub fn new(letter: SwaraLetter, octave: Octave) -> Self {
        Swara { letter, octave }
    }

    pub fn pitch(self) -> PitchValue {
        encode_swara(self)
    }
}

impl fmt::Display for Swara {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter.symbol(), self.octave.suffix())
    }
}

/// Map a swara to its integer pitch value.
pub fn encode_swara(s: Swara) -> PitchValue {
    PitchValue(s.letter.pitch_class() as i32 + s.octave.offset())
}

/// Map a pitch value back to its unique swara spelling.
pub fn decode_pitch(v: PitchValue) -> Swara {
    let octave = match v.0 {
        i32::MIN..=-1 => Octave::Lower,
        0..=11 => Octave::Middle,
        _ => Octave::Upper,
    };
    Swara {
        letter: SwaraLetter::from_pitch_class(v.pitch_class()),
        octave,
    }
}

/// An ordered melody of pitch values. Serial positions are 1-based
/// throughout, matching how note sequences are catalogued.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoteSequence {
    notes: Vec<PitchValue>,
}

impl NoteSequence {
    pub fn new(notes: Vec<PitchValue>) -> Self {
        NoteSequence { notes }
    }

    /// Build from raw integers, validating the pitch range.
    pub fn from_values(values: impl IntoIterator<Item = i32>) -> Result<Self> {
        let notes = values
            .into_iter()
            .map(PitchValue::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(NoteSequence { notes })
    }

    pub fn len(&self) -> usize {
        self.notes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.notes.is_empty()
    }

    pub fn notes(&self) -> &[PitchValue] {
        &self.notes
    }

    /// Note at 1-based serial position `t`.
    pub fn at(&self, t: usize) -> Option<PitchValue> {
        if t == 0 {
            None
        } else {
            self.notes.get(t - 1).copied()
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = PitchValue> + '_ {
        self.notes.iter().copied()
    }

    /// Distinct pitch values in ascending order.
    pub fn alphabet(&self) -> Vec<PitchValue> {
        let set: BTreeSet<PitchValue> = self.notes.iter().copied().collect();
        set.into_iter().collect()
    }

    /// Render as swara tokens, one space-separated line.
    /// `parse_sequence(render())` reproduces the sequence exactly.
    pub fn render(&self) -> String {
        let tokens: Vec<String> = self.notes.iter().map(|v| v.swara().to_string()).collect();
        tokens.join(" ")
    }
}

/// Parse whitespace-separated tokens into a note sequence.
///
/// Each token is either a swara letter with an optional octave mark
/// (`'` lower, `''` upper) or a decimal integer in `[-12, 23]`.
pub fn parse_sequence(text: &str) -> Result<NoteSequence> {
    let mut notes = Vec::new();
    for (i, token) in text.split_whitespace().enumerate() {
        notes.push(parse_token(token, i + 1)?);
    }
    Ok(NoteSequence::new(notes))
}

fn parse_token(token: &str, position: usize) -> Result<PitchValue> {
    // Numeric first: a leading sign or digit can never start a swara token.
    if token
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_digit() || c == '-' || c == '+')
    {
        let value: i64 = token.parse().map_err(|_| Error::Parse {
            token: token.to_string(),
            position,
        })?;
        let value = i32::try_from(value).map_err(|_| Error::PitchOutOfRange(value))?;
        return PitchValue::new(value);
    }

    let mut chars = token.chars();
    let letter = chars
        .next()
        .and_then(SwaraLetter::from_symbol)
        .ok_or_else(|| Error::Parse {
            token: token.to_string(),
            position,
        })?;
    let octave = match chars.as_str() {
        "" => Octave::Middle,
        "'" => Octave::Lower,
        "''" => Octave::Upper,
        _ => {
            return Err(Error::Parse {
                token: token.to_string(),
                position,
            })
        }
    };
    Ok(Swara::new(letter, octave).pitch())
}

/// Load a sequence from a corpus file.
///
/// Two layouts are accepted:
/// - plain text: whitespace-separated tokens in the [`parse_sequence`]
///   grammar; lines starting with `#` are comments;
/// - CSV: two columns `sr,pitch` (header optional), pitch a decimal integer.
///
/// The layout is detected from the first non-comment line (a comma means
/// CSV).
pub fn load_sequence_file(path: impl AsRef<Path>) -> Result<NoteSequence> {
    let text = std::fs::read_to_string(path)?;
    parse_sequence_file(&text)
}

/// File-format frontend over [`parse_sequence`]; see [`load_sequence_file`].
pub fn parse_sequence_file(text: &str) -> Result<NoteSequence> {
    let lines: Vec<&str> = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect();
    let is_csv = lines
        .iter()
        .find(|l| !l.trim().is_empty())
        .is_some_and(|l| l.contains(','));
    if !is_csv {
        return parse_sequence(&lines.join("\n"));
    }

    let mut notes = Vec::new();
    let mut position = 0usize;
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        position += 1;
        let mut fields = line.split(',').map(str::trim);
        let sr = fields.next().unwrap_or("");
        let pitch = fields.next().ok_or_else(|| Error::Parse {
            token: line.to_string(),
            position,
        })?;
        if position == 1 && sr.parse::<i64>().is_err() {
            // header row
            position = 0;
            continue;
        }
        notes.push(parse_token(pitch, position)?);
    }
    Ok(NoteSequence::new(notes))
}

/// Write a sequence as a two-column `sr,pitch` CSV.
pub fn render_csv(seq: &NoteSequence) -> String {
    let mut out = String::from("sr,pitch\n");
    for (i, v) in seq.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, v.value()));
    }
    out
}

/// Permitted and forbidden pitch classes of a raga.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RagaProfile {
    pub name: String,
    pub permitted_pitch_classes: BTreeSet<u8>,
    pub vivadi_pitch_classes: BTreeSet<u8>,
}

impl RagaProfile {
    /// The two sets must be disjoint subsets of `0..=11`.
    pub fn new(
        name: impl Into<String>,
        permitted: impl IntoIterator<Item = u8>,
        vivadi: impl IntoIterator<Item = u8>,
    ) -> Result<Self> {
        let permitted: BTreeSet<u8> = permitted.into_iter().collect();
        let vivadi: BTreeSet<u8> = vivadi.into_iter().collect();
        if permitted.union(&vivadi).any(|&pc| pc > 11) {
            return Err(Error::InvalidArgument(
                "raga pitch classes must lie in 0..=11".into(),
            ));
        }
        if permitted.intersection(&vivadi).next().is_some() {
            return Err(Error::InvalidArgument(
                "permitted and vivadi pitch classes overlap".into(),
            ));
        }
        Ok(RagaProfile {
            name: name.into(),
            permitted_pitch_classes: permitted,
            vivadi_pitch_classes: vivadi,
        })
    }

    /// Raga Bageshree: permitted S R g M P D n, vivadi r G m d N.
    pub fn bageshree() -> Self {
        RagaProfile::new("Bageshree", [0, 2, 3, 5, 7, 9, 10], [1, 4, 6, 8, 11])
            .expect("builtin profile is valid")
    }
}

/// Result of checking a sequence against a raga profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformanceReport {
    pub total_notes: usize,
    pub vivadi_count: usize,
    /// 1-based serial positions of the offending notes.
    pub vivadi_positions: Vec<usize>,
}

impl ConformanceReport {
    pub fn conforms(&self) -> bool {
        self.vivadi_count == 0
    }
}

/// Count the notes whose pitch class is forbidden by the profile.
pub fn validate_against_raga(seq: &NoteSequence, profile: &RagaProfile) -> ConformanceReport {
    let vivadi_positions: Vec<usize> = seq
        .iter()
        .enumerate()
        .filter(|(_, v)| profile.vivadi_pitch_classes.contains(&v.pitch_class()))
        .map(|(i, _)| i + 1)
        .collect();
    ConformanceReport {
        total_notes: seq.len(),
        vivadi_count: vivadi_positions.len(),
        vivadi_positions,
    }
}

/// The 240-note Bageshree corpus, in serial order.
const BAGESHREE_NOTES: [i32; 240] = [
    0, -2, -3, -2, 0, 5, 5, 3, 5, 9, 10, 9,
    5, 10, 9, 5, 9, 10, 12, 12, 10, 9, 5, 7,
    9, 5, 3, 5, 3, 2, 0, -3, -2, 0, 5, 0,
    -2, -3, -7, -3, -2, -3, -7, -2, -3, -7, -3, -2,
    0, 5, 3, 2, 0, 2, 0, -2, -3, -7, -3, 0,
    0, -2, -3, 0, -2, 0, 5, 3, 5, 9, 10, 9,
    5, 10, 9, 5, 7, 9, 3, 5, 3, 2, 0, 0,
    2, 0, -2, -3, -7, -3, -2, -3, 0, 5, 3, 5,
    9, 5, 9, 9, 10, 9, 5, 7, 9, 3, 5, 3,
    2, 0, 0, -2, 0, 5, 3, 5, 10, 9, 10, 12,
    14, 10, 12, 10, 9, 5, 9, 10, 9, 3, 3, 5,
    5, 9, 9, 10, 9, 12, 9, 10, 12, 9, 10, 9,
    12, 10, 9, 5, 9, 10, 12, 10, 9, 5, 7, 9,
    5, 3, 2, 0, 5, 3, 5, 9, 10, 12, 14, 12,
    17, 15, 14, 12, 17, 15, 14, 12, 10, 12, 14, 10,
    12, 10, 9, 14, 10, 9, 5, 9, 5, 10, 10, 9,
    5, 9, 12, 12, 17, 15, 17, 15, 14, 12, 12, 14,
    10, 12, 10, 9, 12, 10, 9, 5, 9, 10, 9, 12,
    9, 10, 12, 9, 10, 9, 12, 10, 12, 14, 10, 12,
    10, 9, 5, 7, 9, 5, 3, 2, 0, -2, -3, 0,
];

/// The embedded 240-note Bageshree corpus.
pub fn load_corpus() -> NoteSequence {
    NoteSequence::from_values(BAGESHREE_NOTES).expect("embedded corpus is in range")
}
