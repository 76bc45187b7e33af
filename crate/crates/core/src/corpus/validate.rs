use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use super::{read_wav_header, Corpus, LaughterLabel, SuperClass, BIT_DEPTH, SAMPLE_RATE};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Speaker id, turn id, or `turn#index`.
    pub location: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub speakers: usize,
    pub turns: usize,
    pub units: usize,
    pub units_per_label: BTreeMap<LaughterLabel, usize>,
    pub turns_per_class: BTreeMap<SuperClass, usize>,
    /// Turns containing at least one non-`W` unit.
    pub laughter_turns: usize,
    /// Non-`W` units; adjacent instances count separately.
    pub laughter_instances: usize,
    /// `laughter_instances / laughter_turns`, 0 when there are no such turns.
    pub instances_per_laughter_turn: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub summary: CorpusSummary,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every invariant violation in `corpus`. Never fails: problems are
/// returned as data.
pub fn validate_corpus(corpus: &Corpus) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |location: &str, message: String| {
        violations.push(Violation {
            location: location.to_string(),
            message,
        })
    };

    if corpus.sample_rate != SAMPLE_RATE || corpus.bit_depth != BIT_DEPTH {
        push(
            "corpus",
            format!(
                "format {} Hz / {} bit, expected {SAMPLE_RATE} Hz / {BIT_DEPTH} bit",
                corpus.sample_rate, corpus.bit_depth
            ),
        );
    }

    let mut speakers = HashSet::new();
    for s in &corpus.speakers {
        if !speakers.insert(s.speaker_id.as_str()) {
            push(&s.speaker_id, "duplicate speaker id".into());
        }
    }

    let mut turn_ids = HashSet::new();
    let mut headers = HashMap::new();
    for turn in &corpus.turns {
        let loc = turn.turn_id.as_str();
        if !turn_ids.insert(loc) {
            push(loc, "duplicate turn id".into());
        }
        if !speakers.contains(turn.speaker_id.as_str()) {
            push(loc, format!("unknown speaker `{}`", turn.speaker_id));
        }
        if turn.ordinal == 0 || turn.ordinal > turn.dialogue_length {
            push(
                loc,
                format!(
                    "ordinal {} outside 1..={}",
                    turn.ordinal, turn.dialogue_length
                ),
            );
        }

        let path = corpus.resolve_audio(turn);
        let audio_len = match headers
            .entry(path.clone())
            .or_insert_with(|| read_wav_header(&path))
        {
            Ok(h) => {
                if let Some(problem) = h.format_problem() {
                    push(loc, format!("{}: {problem}", path.display()));
                }
                Some(h.len)
            }
            Err(e) => {
                push(loc, format!("unreadable audio: {e}"));
                None
            }
        };

        let mut indices = HashSet::new();
        let mut prev_end: Option<usize> = None;
        let mut prev_index: Option<usize> = None;
        for unit in &turn.units {
            let uloc = format!("{}#{}", turn.turn_id, unit.index);
            if unit.turn_id != turn.turn_id {
                push(&uloc, format!("unit belongs to turn `{}`", unit.turn_id));
            }
            if !indices.insert(unit.index) {
                push(&uloc, "duplicate unit index".into());
            }
            if prev_index.is_some_and(|p| unit.index < p) {
                push(&uloc, "units not ordered by index".into());
            }
            if unit.span.start >= unit.span.end {
                push(
                    &uloc,
                    format!("empty span {}..{}", unit.span.start, unit.span.end),
                );
            }
            if prev_end.is_some_and(|e| unit.span.start < e) {
                push(&uloc, "span overlaps the preceding unit".into());
            }
            if let Some(len) = audio_len {
                if unit.span.end > len {
                    push(
                        &uloc,
                        format!("span end {} beyond audio length {len}", unit.span.end),
                    );
                }
            }
            prev_end = Some(unit.span.end);
            prev_index = Some(unit.index);
        }
    }

    ValidationReport {
        violations,
        summary: summarize(corpus),
    }
}

fn summarize(corpus: &Corpus) -> CorpusSummary {
    let mut units_per_label: BTreeMap<LaughterLabel, usize> =
        LaughterLabel::ALL.iter().map(|&l| (l, 0)).collect();
    let mut turns_per_class: BTreeMap<SuperClass, usize> = BTreeMap::new();
    let mut laughter_turns = 0;
    let mut laughter_instances = 0;
    for turn in &corpus.turns {
        for unit in &turn.units {
            *units_per_label.entry(unit.laughter).or_default() += 1;
        }
        *turns_per_class.entry(turn.class()).or_default() += 1;
        let n = turn.laughter_instances();
        if n > 0 {
            laughter_turns += 1;
            laughter_instances += n;
        }
    }
    CorpusSummary {
        speakers: corpus.speakers.len(),
        turns: corpus.turns.len(),
        units: units_per_label.values().sum(),
        units_per_label,
        turns_per_class,
        laughter_turns,
        laughter_instances,
        instances_per_laughter_turn: if laughter_turns == 0 {
            0.0
        } else {
            laughter_instances as f64 / laughter_turns as f64
        },
    }
}
