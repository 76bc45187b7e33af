//! Tab-separated corpus manifest.
//!
//! ```text
//! SPEAKER <id> <m|f> [school]
//! TURN    <turn_id> <speaker_id> <ordinal> <dialogue_length> <audio_path>
//! UNIT    <turn_id> <index> <start_sample> <end_sample> <label> <emotion|-> <synpos|-> <transcript|->
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Audio paths are
//! resolved relative to the manifest's directory.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{
    read_wav_header, resolve, Corpus, CorpusError, Gender, Result, SampleSpan, Speaker, Turn,
    WordUnit,
};

const PLACEHOLDER: &str = "-";

/// Loads and fully checks a manifest: syntax, labels, linkage, span order,
/// and presence and format of every referenced audio file.
pub fn load_manifest(path: &Path) -> Result<Corpus> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let root = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let (corpus, lines) = parse_manifest(&text, root)?;
    check_audio(&corpus, &lines)?;
    Ok(corpus)
}

/// Source line of each turn and unit, for error reporting after parsing.
#[derive(Debug, Default)]
pub struct LineIndex {
    turns: HashMap<String, usize>,
    units: HashMap<(String, usize), usize>,
}

/// Parses manifest text without touching the filesystem.
pub fn parse_manifest(text: &str, root: PathBuf) -> Result<(Corpus, LineIndex)> {
    let mut corpus = Corpus::new(root);
    let mut lines = LineIndex::default();
    let mut speaker_lines: HashMap<String, usize> = HashMap::new();
    let mut units: Vec<(usize, WordUnit)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        match fields[0] {
            "SPEAKER" => {
                if !(3..=4).contains(&fields.len()) {
                    return Err(arity(line, "SPEAKER", "3 or 4", fields.len()));
                }
                let speaker_id = fields[1].to_string();
                let gender = token::<Gender>(line, "gender", fields[2])?;
                let school = fields.get(3).map(|s| s.to_string());
                if speaker_lines.insert(speaker_id.clone(), line).is_some() {
                    return Err(CorpusError::DuplicateSpeaker { line, speaker_id });
                }
                corpus.speakers.push(Speaker {
                    speaker_id,
                    gender,
                    school,
                });
            }
            "TURN" => {
                if fields.len() != 6 {
                    return Err(arity(line, "TURN", "6", fields.len()));
                }
                let turn_id = fields[1].to_string();
                let ordinal: u32 = number(line, "ordinal", fields[3])?;
                let dialogue_length: u32 = number(line, "dialogue length", fields[4])?;
                if ordinal == 0 || ordinal > dialogue_length {
                    return Err(CorpusError::Invalid {
                        line,
                        message: format!("turn ordinal {ordinal} outside 1..={dialogue_length}"),
                    });
                }
                if lines.turns.insert(turn_id.clone(), line).is_some() {
                    return Err(CorpusError::DuplicateTurn { line, turn_id });
                }
                corpus.turns.push(Turn {
                    turn_id,
                    speaker_id: fields[2].to_string(),
                    ordinal,
                    dialogue_length,
                    audio_path: PathBuf::from(fields[5]),
                    units: Vec::new(),
                });
            }
            "UNIT" => {
                if fields.len() != 9 {
                    return Err(arity(line, "UNIT", "9", fields.len()));
                }
                let index: usize = number(line, "unit index", fields[2])?;
                let start: usize = number(line, "start sample", fields[3])?;
                let end: usize = number(line, "end sample", fields[4])?;
                if start >= end {
                    return Err(CorpusError::Invalid {
                        line,
                        message: format!("empty or reversed span {start}..{end}"),
                    });
                }
                let unit = WordUnit {
                    turn_id: fields[1].to_string(),
                    index,
                    span: SampleSpan::new(start, end),
                    laughter: token(line, "laughter label", fields[5])?,
                    emotion: optional_token(line, "emotion", fields[6])?,
                    syntactic_position: optional_token(line, "syntactic position", fields[7])?,
                    transcript: (fields[8] != PLACEHOLDER).then(|| fields[8].to_string()),
                };
                units.push((line, unit));
            }
            other => {
                return Err(CorpusError::Parse {
                    line,
                    message: format!("unknown record type `{other}`"),
                })
            }
        }
    }

    for turn in &corpus.turns {
        if !speaker_lines.contains_key(&turn.speaker_id) {
            return Err(CorpusError::Invalid {
                line: lines.turns[&turn.turn_id],
                message: format!("turn references unknown speaker `{}`", turn.speaker_id),
            });
        }
    }

    let turn_pos: HashMap<String, usize> = corpus
        .turns
        .iter()
        .enumerate()
        .map(|(i, t)| (t.turn_id.clone(), i))
        .collect();
    for (line, unit) in units {
        let Some(&pos) = turn_pos.get(&unit.turn_id) else {
            return Err(CorpusError::Invalid {
                line,
                message: format!("unit references unknown turn `{}`", unit.turn_id),
            });
        };
        let key = (unit.turn_id.clone(), unit.index);
        if lines.units.insert(key, line).is_some() {
            return Err(CorpusError::Invalid {
                line,
                message: format!(
                    "duplicate unit index {} in turn `{}`",
                    unit.index, unit.turn_id
                ),
            });
        }
        corpus.turns[pos].units.push(unit);
    }

    for turn in &mut corpus.turns {
        turn.units.sort_by_key(|u| u.index);
        for pair in turn.units.windows(2) {
            if pair[1].span.start < pair[0].span.end {
                return Err(CorpusError::Invalid {
                    line: lines.units[&(turn.turn_id.clone(), pair[1].index)],
                    message: format!(
                        "span {}..{} overlaps the preceding unit {}..{}",
                        pair[1].span.start, pair[1].span.end, pair[0].span.start, pair[0].span.end
                    ),
                });
            }
        }
    }

    Ok((corpus, lines))
}

fn check_audio(corpus: &Corpus, lines: &LineIndex) -> Result<()> {
    for turn in &corpus.turns {
        let line = lines.turns[&turn.turn_id];
        let path = resolve(&corpus.root, &turn.audio_path);
        if !path.is_file() {
            return Err(CorpusError::MissingAudio { line, path });
        }
        let header = read_wav_header(&path)?;
        if let Some(problem) = header.format_problem() {
            return Err(CorpusError::Invalid {
                line,
                message: format!("{}: {problem}", path.display()),
            });
        }
        for unit in &turn.units {
            if unit.span.end > header.len {
                return Err(CorpusError::Invalid {
                    line: lines.units[&(turn.turn_id.clone(), unit.index)],
                    message: format!(
                        "span end {} beyond audio length {}",
                        unit.span.end, header.len
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Renders the manifest text for a corpus; inverse of [`parse_manifest`].
pub fn render_manifest(corpus: &Corpus) -> String {
    let mut out = String::new();
    let opt = |s: Option<&str>| s.unwrap_or(PLACEHOLDER).to_string();
    for s in &corpus.speakers {
        match &s.school {
            Some(school) => writeln!(out, "SPEAKER\t{}\t{}\t{}", s.speaker_id, s.gender, school),
            None => writeln!(out, "SPEAKER\t{}\t{}", s.speaker_id, s.gender),
        }
        .unwrap();
    }
    for t in &corpus.turns {
        writeln!(
            out,
            "TURN\t{}\t{}\t{}\t{}\t{}",
            t.turn_id,
            t.speaker_id,
            t.ordinal,
            t.dialogue_length,
            t.audio_path.display()
        )
        .unwrap();
        for u in &t.units {
            writeln!(
                out,
                "UNIT\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                u.turn_id,
                u.index,
                u.span.start,
                u.span.end,
                u.laughter,
                opt(u.emotion.map(|e| e.token())),
                opt(u.syntactic_position.map(|p| p.token())),
                opt(u.transcript.as_deref()),
            )
            .unwrap();
        }
    }
    out
}

pub fn write_manifest(corpus: &Corpus, path: &Path) -> Result<()> {
    fs::write(path, render_manifest(corpus)).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn arity(line: usize, record: &str, expected: &str, found: usize) -> CorpusError {
    CorpusError::Parse {
        line,
        message: format!("{record} record needs {expected} tab-separated fields, found {found}"),
    }
}

fn number<T: FromStr>(line: usize, what: &str, s: &str) -> Result<T> {
    s.parse().map_err(|_| CorpusError::Parse {
        line,
        message: format!("invalid {what} `{s}`"),
    })
}

fn token<T: FromStr>(line: usize, field: &'static str, s: &str) -> Result<T> {
    s.parse().map_err(|_| CorpusError::UnknownToken {
        line,
        field,
        token: s.to_string(),
    })
}

fn optional_token<T: FromStr>(line: usize, field: &'static str, s: &str) -> Result<Option<T>> {
    if s == PLACEHOLDER {
        Ok(None)
    } else {
        token(line, field, s).map(Some)
    }
}
