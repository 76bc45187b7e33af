//! Descriptive statistics over the annotations: durations, rank
//! correlation, Mann-Whitney U, chi-square goodness of fit, the
//! emotion × speech-laugh cross-tabulation and the dialogue-position
//! histogram. All p-values are two-tailed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal, StudentsT};

use crate::corpus::{Corpus, EmotionLabel, LaughterLabel, SuperClass, SyntacticPosition, WordUnit};

/// Largest combined sample size for the exact Mann-Whitney distribution.
pub const EXACT_MANN_WHITNEY_MAX: usize = 12;
/// Below this many pairs the Spearman p-value is flagged as rough.
pub const SPEARMAN_SMALL_N: usize = 10;
pub const HISTOGRAM_BINS: usize = 10;
/// Significance level marked with `*` in the correlation table.
pub const CORRELATION_ALPHA: f64 = 0.001;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("empty sample")]
    EmptySample,
    #[error("samples differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} values, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("correlation undefined for a constant sample")]
    ConstantSample,
    #[error("expected count in cell {0} is not positive")]
    ZeroExpected(usize),
    #[error("turn ordinal {ordinal} exceeds dialogue length {length}")]
    OrdinalOutOfRange { ordinal: u32, length: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    /// Exact permutation distribution.
    Exact,
    /// Normal approximation with tie-corrected variance and continuity
    /// correction.
    NormalApprox,
    /// Student t approximation; `rough` when n is small.
    TApprox { rough: bool },
    /// Chi-square survival function.
    ChiSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestResult {
    /// U, χ² or ρ.
    pub statistic: f64,
    pub p_value: f64,
    pub method: Method,
}

/// Duration descriptives in 10 ms frames.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DurationStats {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (divisor n − 1); 0 for n = 1.
    pub std: f64,
    /// Adjusted Fisher–Pearson skewness; 0 when n < 3 or the variance vanishes.
    pub skewness: f64,
    pub min: f64,
    pub max: f64,
}

pub fn describe_durations(samples: &[f64]) -> Result<DurationStats, StatsError> {
    let n = samples.len();
    if n == 0 {
        return Err(StatsError::EmptySample);
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let m2 = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / nf;
    let m3 = samples.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / nf;
    let std = if n > 1 {
        (m2 * nf / (nf - 1.0)).sqrt()
    } else {
        0.0
    };
    let skewness = if n >= 3 && m2 > 1e-24 {
        let g1 = m3 / m2.powf(1.5);
        g1 * (nf * (nf - 1.0)).sqrt() / (nf - 2.0)
    } else {
        0.0
    };
    Ok(DurationStats {
        n,
        mean,
        median,
        std,
        skewness,
        min: sorted[0],
        max: sorted[n - 1],
    })
}

/// Column groups of the duration table: the five laughter types and the
/// two pooled super-classes.
pub const DURATION_GROUPS: [&str; 7] = ["SLs", "SLw", "SLtot", "Lv", "Lvu", "Lu", "Ltot"];

/// Unit durations in frames per duration group. Plain words are left out.
pub fn durations_by_group(corpus: &Corpus) -> BTreeMap<&'static str, Vec<f64>> {
    let mut out: BTreeMap<&'static str, Vec<f64>> =
        DURATION_GROUPS.iter().map(|&g| (g, Vec::new())).collect();
    for u in corpus.units() {
        if !u.laughter.is_laughing() {
            continue;
        }
        let frames = u.span.frames() as f64;
        out.get_mut(u.laughter.token())
            .expect("group per label")
            .push(frames);
        let pool = match u.laughter.super_class() {
            SuperClass::SL => "SLtot",
            _ => "Ltot",
        };
        out.get_mut(pool).expect("pooled group").push(frames);
    }
    out
}

/// Mid-ranks (1-based) and the tie groups' sizes.
fn mid_ranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        if j > i {
            ties.push(j - i + 1);
        }
        i = j + 1;
    }
    (ranks, ties)
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        None
    } else {
        Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
    }
}

/// Spearman's ρ with mid-ranks for ties; p from the t approximation with
/// n − 2 degrees of freedom.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<TestResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(StatsError::TooFew { needed: 3, got: n });
    }
    let rho = pearson(&mid_ranks(x).0, &mid_ranks(y).0).ok_or(StatsError::ConstantSample)?;
    let df = (n - 2) as f64;
    let p = if rho.abs() >= 1.0 {
        0.0
    } else {
        let t = rho * (df / (1.0 - rho * rho)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
        (2.0 * dist.sf(t.abs())).min(1.0)
    };
    Ok(TestResult {
        statistic: rho,
        p_value: p,
        method: Method::TApprox {
            rough: n < SPEARMAN_SMALL_N,
        },
    })
}

/// Two-sided Mann-Whitney U test. `statistic` is U of sample `a`.
///
/// Uses the exact distribution when the samples total at most
/// [`EXACT_MANN_WHITNEY_MAX`] values without ties, the normal
/// approximation otherwise.
pub fn mann_whitney(a: &[f64], b: &[f64]) -> Result<TestResult, StatsError> {
    let exact_ok = a.len() + b.len() <= EXACT_MANN_WHITNEY_MAX && {
        let all: Vec<f64> = a.iter().chain(b).copied().collect();
        mid_ranks(&all).1.is_empty()
    };
    mann_whitney_with(
        a,
        b,
        if exact_ok {
            Method::Exact
        } else {
            Method::NormalApprox
        },
    )
}

/// Mann-Whitney with a chosen method. `Method::Exact` ignores ties in its
/// null distribution, so use it only on tie-free data.
pub fn mann_whitney_with(a: &[f64], b: &[f64], method: Method) -> Result<TestResult, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let (na, nb) = (a.len(), b.len());
    let all: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = mid_ranks(&all);
    let ra: f64 = ranks[..na].iter().sum();
    let u = ra - (na * (na + 1)) as f64 / 2.0;
    let p = match method {
        Method::Exact => exact_mann_whitney_p(u, na, nb),
        _ => {
            let n = (na + nb) as f64;
            let mean = (na * nb) as f64 / 2.0;
            let tie_term: f64 =
                ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (n * (n - 1.0));
            let var = (na * nb) as f64 / 12.0 * ((n + 1.0) - tie_term);
            if var <= 0.0 {
                1.0
            } else {
                let z = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
                let normal = Normal::new(0.0, 1.0).expect("standard normal");
                (2.0 * normal.sf(z)).min(1.0)
            }
        }
    };
    Ok(TestResult {
        statistic: u,
        p_value: p,
        method: match method {
            Method::Exact => Method::Exact,
            _ => Method::NormalApprox,
        },
    })
}

/// Two-sided p of U under the no-ties null: the number of rank subsets of
/// size `na` from `na + nb` with each U value, counted by dynamic
/// programming over the ranks.
fn exact_mann_whitney_p(u: f64, na: usize, nb: usize) -> f64 {
    let max_u = na * nb;
    // ways[k][s]: subsets of size k of the ranks seen so far whose U-sum is s,
    // where choosing the element at position i (0-based) among the first
    // m elements contributes (i − k_before) to U
    let mut ways = vec![vec![0f64; max_u + 1]; na + 1];
    ways[0][0] = 1.0;
    for pos in 0..na + nb {
        for k in (0..na.min(pos + 1)).rev() {
            // choosing this element as the (k+1)-th from a: it exceeds pos − k elements of b
            let gain = pos - k;
            if gain > nb {
                continue;
            }
            for s in (0..=max_u - gain).rev() {
                let w = ways[k][s];
                if w > 0.0 {
                    ways[k + 1][s + gain] += w;
                }
            }
        }
    }
    let counts = &ways[na];
    let total: f64 = counts.iter().sum();
    let u = u.round() as usize;
    let lower: f64 = counts[..=u.min(max_u)].iter().sum();
    let upper: f64 = counts[u.min(max_u)..].iter().sum();
    (2.0 * lower.min(upper) / total).min(1.0)
}

/// Pearson chi-square goodness of fit; `expected = None` means uniform over
/// the observed total.
pub fn chi_square_gof(
    observed: &[f64],
    expected: Option<&[f64]>,
) -> Result<TestResult, StatsError> {
    let k = observed.len();
    if k < 2 {
        return Err(StatsError::TooFew { needed: 2, got: k });
    }
    let uniform;
    let expected = match expected {
        Some(e) if e.len() != k => return Err(StatsError::LengthMismatch(k, e.len())),
        Some(e) => e,
        None => {
            uniform = vec![observed.iter().sum::<f64>() / k as f64; k];
            &uniform
        }
    };
    if let Some(cell) = expected.iter().position(|&e| e <= 0.0) {
        return Err(StatsError::ZeroExpected(cell));
    }
    let chi2: f64 = observed
        .iter()
        .zip(expected)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dist = ChiSquared::new((k - 1) as f64).expect("positive degrees of freedom");
    Ok(TestResult {
        statistic: chi2,
        p_value: dist.sf(chi2).clamp(0.0, 1.0),
        method: Method::ChiSquare,
    })
}

/// Emotion × laughter-label counts with margins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossTab {
    pub rows: Vec<EmotionLabel>,
    pub columns: Vec<LaughterLabel>,
    /// `counts[row][column]`.
    pub counts: Vec<Vec<usize>>,
    /// Units with a selected laughter label but no emotion label.
    pub unlabeled: usize,
}

impl CrossTab {
    pub fn row_sums(&self) -> Vec<usize> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<usize> {
        (0..self.columns.len())
            .map(|c| self.counts.iter().map(|r| r[c]).sum())
            .collect()
    }

    pub fn total(&self) -> usize {
        self.row_sums().iter().sum()
    }

    pub fn row(&self, emotion: EmotionLabel) -> Option<&[usize]> {
        self.rows
            .iter()
            .position(|&e| e == emotion)
            .map(|i| self.counts[i].as_slice())
    }

    /// Plain-text table: one row per emotion with its sum, then totals.
    pub fn render(&self) -> String {
        let mut s = String::from("emotion");
        for c in &self.columns {
            write!(s, "\t{c}").unwrap();
        }
        s.push_str("\tsum\n");
        for (e, row) in self.rows.iter().zip(&self.counts) {
            write!(s, "{e}").unwrap();
            for v in row {
                write!(s, "\t{v}").unwrap();
            }
            writeln!(s, "\t{}", row.iter().sum::<usize>()).unwrap();
        }
        s.push_str("total");
        for v in self.column_sums() {
            write!(s, "\t{v}").unwrap();
        }
        writeln!(s, "\t{}", self.total()).unwrap();
        s
    }
}

/// Counts units per (emotion, label) for labels in `columns`; every
/// emotion label gets a row.
pub fn crosstab<'a>(
    units: impl IntoIterator<Item = &'a WordUnit>,
    columns: &[LaughterLabel],
) -> CrossTab {
    let rows = EmotionLabel::ALL.to_vec();
    let mut counts = vec![vec![0; columns.len()]; rows.len()];
    let mut unlabeled = 0;
    for u in units {
        let Some(c) = columns.iter().position(|&l| l == u.laughter) else {
            continue;
        };
        match u.emotion {
            Some(e) => {
                let r = rows
                    .iter()
                    .position(|&x| x == e)
                    .expect("every emotion has a row");
                counts[r][c] += 1;
            }
            None => unlabeled += 1,
        }
    }
    CrossTab {
        rows,
        columns: columns.to_vec(),
        counts,
        unlabeled,
    }
}

/// Bin of relative position `ordinal / length`: `min(floor(10·r), 9)`.
pub fn position_bin(ordinal: u32, length: u32) -> Result<usize, StatsError> {
    if length == 0 || ordinal > length {
        return Err(StatsError::OrdinalOutOfRange { ordinal, length });
    }
    // integer arithmetic so that e.g. 3/10 lands in bin 3 exactly
    let bin = (u64::from(ordinal) * HISTOGRAM_BINS as u64 / u64::from(length)) as usize;
    Ok(bin.min(HISTOGRAM_BINS - 1))
}

pub fn dialogue_position_histogram(
    events: &[(u32, u32)],
) -> Result<[usize; HISTOGRAM_BINS], StatsError> {
    let mut bins = [0; HISTOGRAM_BINS];
    for &(ordinal, length) in events {
        bins[position_bin(ordinal, length)?] += 1;
    }
    Ok(bins)
}

/// Speech-laugh and laughter counts at edge positions (begin of unit, end of
/// phrase, end of clause) and at the inner positions (adjacent, covering,
/// internal). Isolated and vocative units are left out: each occurs with
/// only one of the two classes by definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EdgePositionCounts {
    /// `[speech-laugh, laughter]`
    pub edge: [usize; 2],
    pub inner: [usize; 2],
}

pub fn edge_position_counts(corpus: &Corpus) -> EdgePositionCounts {
    use SyntacticPosition::*;
    let mut c = EdgePositionCounts::default();
    for u in corpus.units() {
        let column = match u.laughter.super_class() {
            SuperClass::SL => 0,
            SuperClass::L => 1,
            SuperClass::W => continue,
        };
        match u.syntactic_position {
            Some(BeginOfUnit | EndOfPhrase | EndOfClause) => c.edge[column] += 1,
            Some(LeftAdjacent | RightAdjacent | Covering | Internal) => c.inner[column] += 1,
            Some(Isolated | Vocative) | None => {}
        }
    }
    c
}

/// One (ordinal, dialogue length) event per laughter instance.
pub fn laughter_position_events(corpus: &Corpus) -> Vec<(u32, u32)> {
    corpus
        .turns
        .iter()
        .flat_map(|t| std::iter::repeat_n((t.ordinal, t.dialogue_length), t.laughter_instances()))
        .collect()
}

pub const CORRELATION_VARIABLES: [&str; 5] =
    ["motherese", "angry", "words", "speech-laugh", "laughter"];

/// Lower-triangular Spearman matrix over per-speaker frequencies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationTable {
    pub variables: Vec<String>,
    /// `cells[i][j]` for `j < i`; `None` when a variable is constant.
    pub cells: Vec<Vec<Option<TestResult>>>,
}

impl CorrelationTable {
    pub fn render(&self) -> String {
        let mut s = String::from("type");
        for v in &self.variables[..self.variables.len() - 1] {
            write!(s, "\t{v}").unwrap();
        }
        s.push('\n');
        for (i, v) in self.variables.iter().enumerate() {
            s.push_str(v);
            for j in 0..self.variables.len() - 1 {
                let cell = match j.cmp(&i) {
                    std::cmp::Ordering::Less => match &self.cells[i][j] {
                        Some(r) => format!(
                            "{:.2}{}",
                            r.statistic,
                            if r.p_value < CORRELATION_ALPHA {
                                "*"
                            } else {
                                ""
                            }
                        ),
                        None => "n/a".into(),
                    },
                    std::cmp::Ordering::Equal => "--".into(),
                    std::cmp::Ordering::Greater => String::new(),
                };
                write!(s, "\t{cell}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

/// Per-speaker counts of motherese words, angry words, all words,
/// speech-laugh units and laughter units, correlated pairwise.
pub fn speaker_correlations(corpus: &Corpus) -> CorrelationTable {
    let by_speaker = corpus.turns_by_speaker();
    let mut columns = vec![Vec::new(); CORRELATION_VARIABLES.len()];
    for s in &corpus.speakers {
        let mut counts = [0.0; 5];
        for &t in by_speaker
            .get(s.speaker_id.as_str())
            .map(Vec::as_slice)
            .unwrap_or(&[])
        {
            for u in &corpus.turns[t].units {
                counts[0] += f64::from(u8::from(u.emotion == Some(EmotionLabel::Motherese)));
                counts[1] += f64::from(u8::from(u.emotion == Some(EmotionLabel::Angry)));
                counts[2] += 1.0;
                match u.laughter.super_class() {
                    SuperClass::SL => counts[3] += 1.0,
                    SuperClass::L => counts[4] += 1.0,
                    SuperClass::W => {}
                }
            }
        }
        for (col, c) in columns.iter_mut().zip(counts) {
            col.push(c);
        }
    }
    correlation_table(
        &CORRELATION_VARIABLES
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>(),
        &columns,
    )
}

pub fn correlation_table(variables: &[String], columns: &[Vec<f64>]) -> CorrelationTable {
    let cells = (0..variables.len())
        .map(|i| {
            (0..i)
                .map(|j| spearman_rho(&columns[i], &columns[j]).ok())
                .collect()
        })
        .collect();
    CorrelationTable {
        variables: variables.to_vec(),
        cells,
    }
}

/// Duration table: one row per statistic, one column per group.
/// Two-sided Mann-Whitney tests on the duration pairs of interest: SLs vs
/// SLw and every pair of laughter types. Pairs with an empty side are
/// skipped.
pub fn duration_comparisons(
    groups: &BTreeMap<&'static str, Vec<f64>>,
) -> Vec<(&'static str, &'static str, TestResult)> {
    [("SLs", "SLw"), ("Lv", "Lvu"), ("Lv", "Lu"), ("Lvu", "Lu")]
        .into_iter()
        .filter_map(|(a, b)| Some((a, b, mann_whitney(groups.get(a)?, groups.get(b)?).ok()?)))
        .collect()
}

pub fn render_duration_table(groups: &BTreeMap<&'static str, Vec<f64>>) -> String {
    let stats: Vec<(&str, Option<DurationStats>)> = DURATION_GROUPS
        .iter()
        .map(|&g| (g, groups.get(g).and_then(|v| describe_durations(v).ok())))
        .collect();
    let mut s = String::from("statistic");
    for (g, _) in &stats {
        write!(s, "\t{g}").unwrap();
    }
    s.push('\n');
    type Getter = fn(&DurationStats) -> String;
    let rows: [(&str, Getter); 7] = [
        ("tokens", |d| d.n.to_string()),
        ("mean", |d| format!("{:.2}", d.mean)),
        ("median", |d| format!("{:.2}", d.median)),
        ("std", |d| format!("{:.2}", d.std)),
        ("skewness", |d| format!("{:.2}", d.skewness)),
        ("min", |d| format!("{}", d.min)),
        ("max", |d| format!("{}", d.max)),
    ];
    for (name, get) in rows {
        s.push_str(name);
        for (_, d) in &stats {
            match d {
                Some(d) => write!(s, "\t{}", get(d)).unwrap(),
                None => s.push_str(if name == "tokens" { "\t0" } else { "\t-" }),
            }
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn durations() {
        let d = describe_durations(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((d.mean, d.median, d.skewness), (2.0, 2.0, 0.0));
        assert_eq!(d.std, 1.0);
        let d = describe_durations(&[1.0, 1.0, 1.0, 10.0]).unwrap();
        // g1 = m3 / m2^1.5 with deviations (−2.25 ×3, 6.75); G1 = g1·√(n(n−1))/(n−2)
        let m2 = (3.0 * 2.25f64.powi(2) + 6.75f64.powi(2)) / 4.0;
        let m3 = (3.0 * (-2.25f64).powi(3) + 6.75f64.powi(3)) / 4.0;
        let expected = m3 / m2.powf(1.5) * 12f64.sqrt() / 2.0;
        assert!((d.skewness - expected).abs() < 1e-12 && d.skewness > 0.0);
        assert_eq!(describe_durations(&[]), Err(StatsError::EmptySample));
    }

    #[test]
    fn spearman_extremes() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(
            spearman_rho(&x, &[2.0, 4.0, 8.0, 16.0, 32.0])
                .unwrap()
                .statistic,
            1.0
        );
        assert_eq!(
            spearman_rho(&x, &[5.0, 4.0, 3.0, 2.0, 1.0])
                .unwrap()
                .statistic,
            -1.0
        );
        assert_eq!(spearman_rho(&x, &[1.0; 5]), Err(StatsError::ConstantSample));
    }

    #[test]
    fn mann_whitney_small_exact() {
        let r = mann_whitney(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.method, Method::Exact);
        assert!((r.p_value - 2.0 / 6.0).abs() < 1e-12);
        let same = [3.0, 1.0, 4.0, 1.0, 5.0];
        let r = mann_whitney(&same, &same).unwrap();
        assert_eq!(r.statistic, 12.5);
        assert!(r.p_value >= 0.99);
    }

    #[test]
    fn chi_square_examples() {
        let r = chi_square_gof(&[50.0, 50.0], None).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        assert_eq!(
            chi_square_gof(&[1.0, 2.0], Some(&[0.0, 3.0])),
            Err(StatsError::ZeroExpected(0))
        );
    }

    #[test]
    fn histogram_bins() {
        assert_eq!(dialogue_position_histogram(&[(1, 100); 5]).unwrap()[0], 5);
        assert_eq!(position_bin(7, 7).unwrap(), 9);
        assert_eq!(position_bin(3, 10).unwrap(), 3);
        assert!(position_bin(8, 7).is_err());
    }

    #[test]
    fn empty_crosstab() {
        let t = crosstab(
            std::iter::empty(),
            &[LaughterLabel::SLs, LaughterLabel::SLw],
        );
        assert_eq!(t.total(), 0);
        assert_eq!(t.rows.len(), 12);
    }
}
