//! Linear SVM classification: z-score standardisation, SMO-trained binary
//! machines, and one-vs-one voting for more than two classes.

mod smo;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;

pub use smo::{train_binary_smo, train_binary_smo_traced, BinarySvm, SmoConfig, SmoOutcome};

/// Standard deviations below this are replaced by it.
pub const STD_FLOOR: f64 = 1e-12;
const FORMAT_HEADER: &str = "laughkit-svm 1";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SvmError {
    #[error("training data holds a single class")]
    SingleClass,
    #[error("binary labels must be +1 or -1")]
    InvalidLabel,
    #[error("{labels} labels for {rows} rows")]
    LabelCount { labels: usize, rows: usize },
    #[error("expected {expected} features, found {found}{}", row.map(|r| format!(" in row {r}")).unwrap_or_default())]
    DimensionMismatch {
        expected: usize,
        found: usize,
        row: Option<usize>,
    },
    #[error("row {row} holds a non-finite value")]
    NonFinite { row: usize },
    #[error("class index {0} has no name")]
    UnknownClass(usize),
    #[error("SMO stopped after {iterations} iterations with KKT violation {violation:.3e}")]
    NoConvergence { iterations: usize, violation: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("model text line {line}: {message}")]
    Format { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    /// Population mean and σ per column.
    pub fn fit(x: &[Vec<f64>]) -> Self {
        let n = x.len().max(1) as f64;
        let d = x.first().map_or(0, Vec::len);
        let mut mean = vec![0.0; d];
        for row in x {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; d];
        for row in x {
            for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let std = var
            .into_iter()
            .map(|s| (s / n).sqrt().max(STD_FLOOR))
            .collect();
        Self { mean, std }
    }

    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    pub fn transform_all(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        x.iter().map(|r| self.transform(r)).collect()
    }
}

/// Binary machine for the class pair `(positive, negative)`, where
/// `positive < negative` in class order.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMachine {
    pub positive: usize,
    pub negative: usize,
    pub svm: BinarySvm,
}

/// Standardizer plus one-vs-one ensemble. Class ids index `class_names`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub class_names: Vec<String>,
    /// Class ids seen in training, ascending.
    pub classes: Vec<usize>,
    pub standardizer: Standardizer,
    pub machines: Vec<PairMachine>,
}

impl SvmModel {
    /// Standardises `x` and trains one machine per unordered pair of the
    /// classes present in `y`.
    pub fn fit(
        x: &[Vec<f64>],
        y: &[usize],
        class_names: &[String],
        cfg: &SmoConfig,
    ) -> Result<Self, SvmError> {
        if y.len() != x.len() {
            return Err(SvmError::LabelCount {
                labels: y.len(),
                rows: x.len(),
            });
        }
        if let Some(&bad) = y.iter().find(|&&c| c >= class_names.len()) {
            return Err(SvmError::UnknownClass(bad));
        }
        let d = x.first().map_or(0, Vec::len);
        if let Some((row, r)) = x.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(SvmError::DimensionMismatch {
                expected: d,
                found: r.len(),
                row: Some(row),
            });
        }
        let standardizer = Standardizer::fit(x);
        let z = standardizer.transform_all(x);
        let machines = train_one_vs_one(&z, y, cfg)?;
        Ok(Self {
            class_names: class_names.to_vec(),
            classes: y
                .iter()
                .copied()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
            standardizer,
            machines,
        })
    }

    pub fn num_features(&self) -> usize {
        self.standardizer.mean.len()
    }

    pub fn predict(&self, x: &[f64]) -> Result<usize, SvmError> {
        if x.len() != self.num_features() {
            return Err(SvmError::DimensionMismatch {
                expected: self.num_features(),
                found: x.len(),
                row: None,
            });
        }
        Ok(vote(
            &self.classes,
            &self.machines,
            &self.standardizer.transform(x),
        ))
    }

    pub fn predict_name(&self, x: &[f64]) -> Result<&str, SvmError> {
        Ok(&self.class_names[self.predict(x)?])
    }

    /// Versioned text form: standardizer vectors, class list, and per-pair
    /// weights and bias. Floats are written in shortest round-trip form.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:?}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(s, "{FORMAT_HEADER}").unwrap();
        writeln!(s, "class_names {}", self.class_names.join(" ")).unwrap();
        writeln!(
            s,
            "classes {}",
            self.classes
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        )
        .unwrap();
        writeln!(s, "features {}", self.num_features()).unwrap();
        writeln!(s, "mean {}", join(&self.standardizer.mean)).unwrap();
        writeln!(s, "std {}", join(&self.standardizer.std)).unwrap();
        for m in &self.machines {
            writeln!(s, "pair {} {} {:?}", m.positive, m.negative, m.svm.bias).unwrap();
            writeln!(s, "weights {}", join(&m.svm.weights)).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, SvmError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let err = |line: usize, message: &str| SvmError::Format {
            line,
            message: message.to_string(),
        };
        let mut field = |key: &str| -> Result<(usize, Vec<String>), SvmError> {
            let (line, text) = lines
                .next()
                .ok_or_else(|| err(0, "unexpected end of model"))?;
            let mut parts = text.split(' ');
            if parts.next() != Some(key) {
                return Err(err(line, &format!("expected `{key}`")));
            }
            Ok((
                line,
                parts
                    .filter(|p| !p.is_empty())
                    .map(str::to_string)
                    .collect(),
            ))
        };
        let floats = |line: usize, v: &[String]| -> Result<Vec<f64>, SvmError> {
            v.iter()
                .map(|s| s.parse::<f64>().map_err(|e| err(line, &e.to_string())))
                .collect()
        };
        let ints = |line: usize, v: &[String]| -> Result<Vec<usize>, SvmError> {
            v.iter()
                .map(|s| s.parse::<usize>().map_err(|e| err(line, &e.to_string())))
                .collect()
        };

        let (_, header) = field("laughkit-svm")?;
        if header != ["1"] {
            return Err(err(1, "unsupported model version"));
        }
        let (_, class_names) = field("class_names")?;
        let (l, classes) = field("classes")?;
        let classes = ints(l, &classes)?;
        let (l, features) = field("features")?;
        let features = *ints(l, &features)?
            .first()
            .ok_or_else(|| err(l, "missing count"))?;
        let (l, mean) = field("mean")?;
        let mean = floats(l, &mean)?;
        let (l, std) = field("std")?;
        let std = floats(l, &std)?;
        if mean.len() != features || std.len() != features {
            return Err(err(l, "standardizer length differs from feature count"));
        }
        let pairs = classes.len() * classes.len().saturating_sub(1) / 2;
        let mut machines = Vec::with_capacity(pairs);
        for _ in 0..pairs {
            let (l, p) = field("pair")?;
            if p.len() != 3 {
                return Err(err(l, "pair needs two classes and a bias"));
            }
            let ids = ints(l, &p[..2])?;
            let bias = floats(l, &p[2..])?[0];
            let (l, w) = field("weights")?;
            let weights = floats(l, &w)?;
            if weights.len() != features {
                return Err(err(l, "weight vector length differs from feature count"));
            }
            machines.push(PairMachine {
                positive: ids[0],
                negative: ids[1],
                svm: BinarySvm { weights, bias },
            });
        }
        Ok(Self {
            class_names,
            classes,
            standardizer: Standardizer { mean, std },
            machines,
        })
    }
}

/// One machine per unordered pair of present classes, trained on that
/// pair's rows only; the lower class id is the positive side.
pub fn train_one_vs_one(
    x: &[Vec<f64>],
    y: &[usize],
    cfg: &SmoConfig,
) -> Result<Vec<PairMachine>, SvmError> {
    let classes: Vec<usize> = y
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if classes.len() < 2 {
        return Err(SvmError::SingleClass);
    }
    let pairs: Vec<(usize, usize)> = classes
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| classes[i + 1..].iter().map(move |&b| (a, b)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(a, b)| {
            let (rows, labels): (Vec<Vec<f64>>, Vec<f64>) = x
                .iter()
                .zip(y)
                .filter(|(_, &c)| c == a || c == b)
                .map(|(r, &c)| (r.clone(), if c == a { 1.0 } else { -1.0 }))
                .unzip();
            let out = train_binary_smo(&rows, &labels, cfg)?;
            Ok(PairMachine {
                positive: a,
                negative: b,
                svm: out.model,
            })
        })
        .collect()
}

/// Majority vote; ties go to the larger summed margin in the class's
/// favour, then to the lower class id.
pub fn vote(classes: &[usize], machines: &[PairMachine], z: &[f64]) -> usize {
    let slot = |c: usize| {
        classes
            .iter()
            .position(|&k| k == c)
            .expect("machine class listed")
    };
    let mut votes = vec![0usize; classes.len()];
    let mut margins = vec![0.0f64; classes.len()];
    for m in machines {
        let f = m.svm.decision(z);
        let (p, n) = (slot(m.positive), slot(m.negative));
        margins[p] += f;
        margins[n] -= f;
        if f >= 0.0 {
            votes[p] += 1;
        } else {
            votes[n] += 1;
        }
    }
    let best = (0..classes.len())
        .max_by(|&a, &b| {
            votes[a]
                .cmp(&votes[b])
                .then(margins[a].total_cmp(&margins[b]))
                .then(b.cmp(&a))
        })
        .expect("at least two classes");
    classes[best]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standardizer_columns() {
        let x = vec![vec![1.0, 5.0], vec![3.0, 5.0], vec![5.0, 5.0]];
        let s = Standardizer::fit(&x);
        let z = s.transform_all(&x);
        assert!(z.iter().map(|r| r[0]).sum::<f64>().abs() < 1e-12);
        let var: f64 = z.iter().map(|r| r[0] * r[0]).sum::<f64>() / 3.0;
        assert!((var - 1.0).abs() < 1e-12);
        assert_eq!(s.std[1], STD_FLOOR);
        assert!(z.iter().all(|r| r[1] == 0.0));
    }

    #[test]
    fn pair_counts() {
        let names: Vec<String> = (0..6).map(|i| format!("c{i}")).collect();
        let x: Vec<Vec<f64>> = (0..60)
            .map(|i| vec![(i / 10) as f64, ((i * 7) % 10) as f64 * 0.01])
            .collect();
        let y: Vec<usize> = (0..60).map(|i| i / 10).collect();
        let m = SvmModel::fit(&x, &y, &names, &SmoConfig::default()).unwrap();
        assert_eq!(m.machines.len(), 15);
        let m3 = SvmModel::fit(&x[..30], &y[..30], &names, &SmoConfig::default()).unwrap();
        assert_eq!(m3.machines.len(), 3);
    }

    #[test]
    fn text_round_trip() {
        let names = vec!["W".to_string(), "SL".to_string(), "L".to_string()];
        let x: Vec<Vec<f64>> = (0..30)
            .map(|i| vec![(i % 3) as f64 + 0.1 * (i as f64).sin(), (i as f64).cos()])
            .collect();
        let y: Vec<usize> = (0..30).map(|i| i % 3).collect();
        let m = SvmModel::fit(&x, &y, &names, &SmoConfig::default()).unwrap();
        let back = SvmModel::from_text(&m.to_text()).unwrap();
        assert_eq!(back, m);
        assert!(SvmModel::from_text("garbage").is_err());
    }

    #[test]
    fn predict_checks_dimension() {
        let names = vec!["a".to_string(), "b".to_string()];
        let m = SvmModel::fit(
            &[vec![0.0], vec![1.0]],
            &[0, 1],
            &names,
            &SmoConfig::default(),
        )
        .unwrap();
        assert!(matches!(
            m.predict(&[1.0, 2.0]),
            Err(SvmError::DimensionMismatch { .. })
        ));
        assert_eq!(m.predict_name(&[1.0]).unwrap(), "b");
        assert_eq!(m.predict(&[0.0]).unwrap(), 0);
    }
}
