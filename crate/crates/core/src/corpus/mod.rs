//! Annotated corpus: labels, speakers, turns, word units and their audio.
//!
//! A corpus is described by a line-oriented manifest (see [`manifest`]) that
//! references one mono 16 kHz / 16 bit WAV file per turn. Word units are
//! sample spans inside the turn's audio.

mod audio;
pub mod manifest;
pub mod synth;
mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use audio::{read_wav, read_wav_header, write_wav, WavHeader};
pub use manifest::{load_manifest, write_manifest};
pub use synth::{synthesize_corpus, SynthConfig, VoicePreset};
pub use validate::{validate_corpus, CorpusSummary, ValidationReport, Violation};

/// Fixed corpus sample rate in Hz.
pub const SAMPLE_RATE: u32 = 16_000;
/// Fixed PCM bit depth.
pub const BIT_DEPTH: u16 = 16;
/// Samples per 10 ms analysis frame.
pub const FRAME_HOP: usize = 160;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}")]
    Wav {
        path: PathBuf,
        #[source]
        source: hound::Error,
    },
    #[error("{path}: {problem}")]
    AudioFormat { path: PathBuf, problem: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown {field} token `{token}`")]
    UnknownToken {
        line: usize,
        field: &'static str,
        token: String,
    },
    #[error("line {line}: audio file {path} does not exist")]
    MissingAudio { line: usize, path: PathBuf },
    #[error("line {line}: duplicate turn id `{turn_id}`")]
    DuplicateTurn { line: usize, turn_id: String },
    #[error("line {line}: duplicate speaker id `{speaker_id}`")]
    DuplicateSpeaker { line: usize, speaker_id: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("no such segment: {0}")]
    UnresolvedSegment(String),
    #[error("segment {id} has {len} samples, below the minimum of {min}")]
    ShortSegment { id: String, len: usize, min: usize },
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = CorpusError> = std::result::Result<T, E>;

/// Word-level laughter annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LaughterLabel {
    /// Plain word, no laughter.
    W,
    /// Weak speech-laugh.
    SLw,
    /// Strong speech-laugh.
    SLs,
    /// Unvoiced laughter.
    Lu,
    /// Laughter with voiced and unvoiced sections.
    Lvu,
    /// Voiced laughter.
    Lv,
}

/// Three-way grouping of [`LaughterLabel`]: word, speech-laugh, laughter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SuperClass {
    W,
    SL,
    L,
}

impl LaughterLabel {
    pub const ALL: [LaughterLabel; 6] = [
        LaughterLabel::W,
        LaughterLabel::SLw,
        LaughterLabel::SLs,
        LaughterLabel::Lu,
        LaughterLabel::Lvu,
        LaughterLabel::Lv,
    ];

    pub fn token(self) -> &'static str {
        match self {
            LaughterLabel::W => "W",
            LaughterLabel::SLw => "SLw",
            LaughterLabel::SLs => "SLs",
            LaughterLabel::Lu => "Lu",
            LaughterLabel::Lvu => "Lvu",
            LaughterLabel::Lv => "Lv",
        }
    }

    pub fn super_class(self) -> SuperClass {
        match self {
            LaughterLabel::W => SuperClass::W,
            LaughterLabel::SLw | LaughterLabel::SLs => SuperClass::SL,
            LaughterLabel::Lu | LaughterLabel::Lvu | LaughterLabel::Lv => SuperClass::L,
        }
    }

    /// True for every label except `W`. Used for the 2-class word task, where
    /// speech-laugh and laughter are merged.
    pub fn is_laughing(self) -> bool {
        self != LaughterLabel::W
    }
}

impl SuperClass {
    pub fn token(self) -> &'static str {
        match self {
            SuperClass::W => "W",
            SuperClass::SL => "SL",
            SuperClass::L => "L",
        }
    }
}

impl fmt::Display for LaughterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl fmt::Display for SuperClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for LaughterLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        LaughterLabel::ALL
            .into_iter()
            .find(|l| l.token() == s)
            .ok_or_else(|| s.to_string())
    }
}

macro_rules! token_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $tok:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn token(self) -> &'static str {
                match self {
                    $($name::$variant => $tok),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.token())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
                $name::ALL
                    .iter()
                    .copied()
                    .find(|v| v.token() == s)
                    .ok_or_else(|| s.to_string())
            }
        }
    };
}

token_enum!(
    /// Position of a laughter instance relative to syntactic units.
    SyntacticPosition {
        Isolated => "isolated",
        Vocative => "vocative",
        BeginOfUnit => "begin_of_unit",
        EndOfPhrase => "end_of_phrase",
        EndOfClause => "end_of_clause",
        LeftAdjacent => "left_adjacent",
        RightAdjacent => "right_adjacent",
        Covering => "covering",
        Internal => "internal",
    }
);

token_enum!(
    /// Word-level emotion label. `Mixed` marks words without a majority label.
    EmotionLabel {
        Joyful => "joyful",
        Surprised => "surprised",
        Emphatic => "emphatic",
        Helpless => "helpless",
        Touchy => "touchy",
        Angry => "angry",
        Motherese => "motherese",
        Bored => "bored",
        Reprimanding => "reprimanding",
        Rest => "rest",
        Neutral => "neutral",
        Mixed => "mixed",
    }
);

token_enum!(
    Gender {
        Male => "m",
        Female => "f",
    }
);

/// Half-open sample range `[start, end)` at the corpus sample rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpan {
    pub start: usize,
    pub end: usize,
}

impl SampleSpan {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Duration in whole 10 ms frames.
    pub fn frames(&self) -> usize {
        self.len() / FRAME_HOP
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordUnit {
    pub turn_id: String,
    pub index: usize,
    pub span: SampleSpan,
    pub laughter: LaughterLabel,
    pub emotion: Option<EmotionLabel>,
    pub syntactic_position: Option<SyntacticPosition>,
    pub transcript: Option<String>,
}

impl WordUnit {
    pub fn segment_id(&self) -> String {
        format!("{}#{}", self.turn_id, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Turn {
    pub turn_id: String,
    pub speaker_id: String,
    /// 1-based position of the turn in the speaker's dialogue.
    pub ordinal: u32,
    pub dialogue_length: u32,
    /// Audio path as written in the manifest, relative to the corpus root
    /// unless absolute.
    pub audio_path: PathBuf,
    pub units: Vec<WordUnit>,
}

impl Turn {
    /// Turn-level class: `L` if any unit is laughter, else `SL` if any unit
    /// is speech-laugh, else `W`.
    pub fn class(&self) -> SuperClass {
        turn_class(self.units.iter().map(|u| u.laughter))
    }

    pub fn relative_position(&self) -> f64 {
        f64::from(self.ordinal) / f64::from(self.dialogue_length)
    }

    pub fn laughter_instances(&self) -> usize {
        self.units
            .iter()
            .filter(|u| u.laughter.is_laughing())
            .count()
    }
}

pub fn turn_class(labels: impl IntoIterator<Item = LaughterLabel>) -> SuperClass {
    labels
        .into_iter()
        .map(LaughterLabel::super_class)
        .max_by_key(|c| match c {
            SuperClass::W => 0,
            SuperClass::SL => 1,
            SuperClass::L => 2,
        })
        .unwrap_or(SuperClass::W)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Speaker {
    pub speaker_id: String,
    pub gender: Gender,
    pub school: Option<String>,
}

/// Reference to an analysable stretch of audio.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SegmentRef {
    Turn(String),
    Unit { turn_id: String, index: usize },
}

impl fmt::Display for SegmentRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegmentRef::Turn(id) => f.write_str(id),
            SegmentRef::Unit { turn_id, index } => write!(f, "{turn_id}#{index}"),
        }
    }
}

/// Mono samples scaled to `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSegment {
    pub id: String,
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

impl SignalSegment {
    pub fn new(id: impl Into<String>, samples: Vec<f64>) -> Self {
        Self {
            id: id.into(),
            samples,
            sample_rate: SAMPLE_RATE,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    /// Directory that relative audio paths are resolved against.
    pub root: PathBuf,
    pub speakers: Vec<Speaker>,
    pub turns: Vec<Turn>,
    pub sample_rate: u32,
    pub bit_depth: u16,
}

impl Corpus {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self {
            root: root.into(),
            speakers: Vec::new(),
            turns: Vec::new(),
            sample_rate: SAMPLE_RATE,
            bit_depth: BIT_DEPTH,
        }
    }

    pub fn speaker(&self, speaker_id: &str) -> Option<&Speaker> {
        self.speakers.iter().find(|s| s.speaker_id == speaker_id)
    }

    pub fn turn(&self, turn_id: &str) -> Option<&Turn> {
        self.turns.iter().find(|t| t.turn_id == turn_id)
    }

    pub fn units(&self) -> impl Iterator<Item = &WordUnit> {
        self.turns.iter().flat_map(|t| t.units.iter())
    }

    pub fn resolve_audio(&self, turn: &Turn) -> PathBuf {
        resolve(&self.root, &turn.audio_path)
    }

    /// Whole-turn audio as samples in `[-1, 1]`.
    pub fn turn_audio(&self, turn: &Turn) -> Result<Vec<f64>> {
        read_wav(&self.resolve_audio(turn))
    }

    /// Speaker id → turn indices, keyed in speaker id order.
    pub fn turns_by_speaker(&self) -> BTreeMap<&str, Vec<usize>> {
        let mut map: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, t) in self.turns.iter().enumerate() {
            map.entry(t.speaker_id.as_str()).or_default().push(i);
        }
        map
    }

    /// Cut a unit or a whole turn out of the corpus audio.
    ///
    /// Segments shorter than [`crate::dsp::MIN_SEGMENT_SAMPLES`] are rejected
    /// with [`CorpusError::ShortSegment`].
    pub fn slice_segment(&self, reference: &SegmentRef) -> Result<SignalSegment> {
        let unresolved = || CorpusError::UnresolvedSegment(reference.to_string());
        let (turn, span) = match reference {
            SegmentRef::Turn(id) => (self.turn(id).ok_or_else(unresolved)?, None),
            SegmentRef::Unit { turn_id, index } => {
                let turn = self.turn(turn_id).ok_or_else(unresolved)?;
                let unit = turn
                    .units
                    .iter()
                    .find(|u| u.index == *index)
                    .ok_or_else(unresolved)?;
                (turn, Some(unit.span))
            }
        };
        let audio = self.turn_audio(turn)?;
        segment_from_audio(reference.to_string(), &audio, span)
    }
}

/// Slice already-loaded turn audio. `span = None` takes the whole turn.
pub fn segment_from_audio(
    id: String,
    audio: &[f64],
    span: Option<SampleSpan>,
) -> Result<SignalSegment> {
    let samples = match span {
        None => audio.to_vec(),
        Some(span) => {
            if span.start >= span.end || span.end > audio.len() {
                return Err(CorpusError::UnresolvedSegment(format!(
                    "{id}: span {}..{} outside audio of {} samples",
                    span.start,
                    span.end,
                    audio.len()
                )));
            }
            audio[span.start..span.end].to_vec()
        }
    };
    let min = crate::dsp::MIN_SEGMENT_SAMPLES;
    if samples.len() < min {
        return Err(CorpusError::ShortSegment {
            id,
            len: samples.len(),
            min,
        });
    }
    Ok(SignalSegment::new(id, samples))
}

pub(crate) fn resolve(root: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        root.join(path)
    }
}
