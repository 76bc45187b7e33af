//! The static feature vector: every functional of every contour.
//!
//! Feature `i` is functional `i % 51` of contour `i / 51`, so contours are
//! major and functionals minor. Names read `<lld>_<base|de|dede>__<functional>`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use crate::corpus::SignalSegment;
use crate::dsp::{
    contour_name, Analyzer, DspError, FrameConfig, NUM_CONTOURS, NUM_DERIVATIVES, NUM_LLD,
};
use crate::functionals::{apply_functionals, Functional, FunctionalError, NUM_FUNCTIONALS};

pub const NUM_FEATURES: usize = NUM_CONTOURS * NUM_FUNCTIONALS;
const _: () = assert!(NUM_FEATURES == 5967 && NUM_LLD * NUM_DERIVATIVES == NUM_CONTOURS);

#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    #[error(transparent)]
    Dsp(#[from] DspError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error("feature index {0} out of range 0..{NUM_FEATURES}")]
    IndexOutOfRange(usize),
    #[error("no feature named `{0}`")]
    UnknownName(String),
    #[error("registry holds {names} distinct names for {NUM_FEATURES} features")]
    Registry { names: usize },
    #[error("{path}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("feature table line {line}: {message}")]
    Table { line: usize, message: String },
}

pub fn feature_index(contour: usize, functional: Functional) -> usize {
    contour * NUM_FUNCTIONALS + functional.index()
}

/// Inverse of [`feature_index`].
pub fn split_index(index: usize) -> Result<(usize, Functional), FeatureError> {
    if index >= NUM_FEATURES {
        return Err(FeatureError::IndexOutOfRange(index));
    }
    let f = Functional::from_index(index % NUM_FUNCTIONALS).expect("index below 51");
    Ok((index / NUM_FUNCTIONALS, f))
}

pub fn feature_name(index: usize) -> Result<&'static str, FeatureError> {
    feature_names()
        .get(index)
        .map(String::as_str)
        .ok_or(FeatureError::IndexOutOfRange(index))
}

pub fn feature_names() -> &'static [String] {
    static NAMES: OnceLock<Vec<String>> = OnceLock::new();
    NAMES.get_or_init(|| {
        (0..NUM_CONTOURS)
            .flat_map(|c| {
                let contour = contour_name(c);
                Functional::ALL
                    .iter()
                    .map(move |f| format!("{contour}__{}", f.name()))
            })
            .collect()
    })
}

pub fn index_of_name(name: &str) -> Result<usize, FeatureError> {
    feature_names()
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| FeatureError::UnknownName(name.to_string()))
}

/// Confirms the descriptor and functional registries multiply out to the
/// documented 5,967 uniquely named features.
pub fn check_registry() -> Result<(), FeatureError> {
    let names = feature_names();
    let distinct: HashSet<&String> = names.iter().collect();
    if names.len() != NUM_FEATURES || distinct.len() != NUM_FEATURES {
        return Err(FeatureError::Registry {
            names: distinct.len(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    /// Turn id or `turn#index`.
    pub segment_id: String,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn get(&self, contour: usize, functional: Functional) -> f64 {
        self.values[feature_index(contour, functional)]
    }
}

pub fn assemble_feature_vector(
    segment: &SignalSegment,
    cfg: &FrameConfig,
) -> Result<FeatureVector, FeatureError> {
    assemble_with(&Analyzer::new(cfg.clone())?, segment)
}

/// Same as [`assemble_feature_vector`] with a prepared analyzer, for batch use.
pub fn assemble_with(
    analyzer: &Analyzer,
    segment: &SignalSegment,
) -> Result<FeatureVector, FeatureError> {
    let contours = analyzer.extract(&segment.samples)?;
    let mut values = Vec::with_capacity(NUM_FEATURES);
    for row in contours.rows() {
        values.extend_from_slice(apply_functionals(row)?.as_slice());
    }
    debug_assert_eq!(values.len(), NUM_FEATURES);
    Ok(FeatureVector {
        segment_id: segment.id.clone(),
        values,
    })
}

/// One labelled row of a feature table.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub segment_id: String,
    pub speaker_id: String,
    pub label: String,
    pub values: Vec<f64>,
}

/// Rows in corpus order; every row has [`NUM_FEATURES`] values.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureTable {
    pub rows: Vec<FeatureRow>,
}

impl FeatureTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        let mut header = String::from("segment_id,speaker_id,label");
        for name in feature_names() {
            header.push(',');
            header.push_str(name);
        }
        writeln!(out, "{header}")?;
        let mut line = String::new();
        for row in &self.rows {
            line.clear();
            write!(line, "{},{},{}", row.segment_id, row.speaker_id, row.label).unwrap();
            for v in &row.values {
                // `{:?}` prints the shortest string that round-trips exactly
                write!(line, ",{v:?}").unwrap();
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), FeatureError> {
        let io = |source| FeatureError::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
        self.write_csv(&mut w).map_err(io)?;
        w.flush().map_err(io)
    }

    pub fn read_csv(input: impl BufRead) -> Result<Self, FeatureError> {
        let mut lines = input.lines().enumerate();
        let table_err = |line: usize, message: String| FeatureError::Table {
            line: line + 1,
            message,
        };
        let io_err = |source| FeatureError::Io {
            path: PathBuf::from("<feature table>"),
            source,
        };
        let (_, header) = lines
            .next()
            .ok_or_else(|| table_err(0, "empty file".into()))?;
        let header = header.map_err(io_err)?;
        let expected: Vec<&str> = ["segment_id", "speaker_id", "label"]
            .into_iter()
            .chain(feature_names().iter().map(String::as_str))
            .collect();
        if header.split(',').ne(expected.iter().copied()) {
            return Err(table_err(
                0,
                "header does not match the feature registry".into(),
            ));
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let line = line.map_err(io_err)?;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != NUM_FEATURES + 3 {
                return Err(table_err(
                    i,
                    format!("{} fields, expected {}", fields.len(), NUM_FEATURES + 3),
                ));
            }
            let values = fields[3..]
                .iter()
                .map(|s| s.parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| table_err(i, e.to_string()))?;
            rows.push(FeatureRow {
                segment_id: fields[0].to_string(),
                speaker_id: fields[1].to_string(),
                label: fields[2].to_string(),
                values,
            });
        }
        Ok(Self { rows })
    }

    pub fn load(path: &Path) -> Result<Self, FeatureError> {
        let file = std::fs::File::open(path).map_err(|source| FeatureError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::read_csv(std::io::BufReader::new(file))
    }
}
