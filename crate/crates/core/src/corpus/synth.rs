//! Synthetic corpus generator.
//!
//! Produces laughter-like and speech-like signals with known labels so the
//! whole pipeline can be exercised without the original recordings:
//!
//! * `W`: a sustained vowel with a fixed F0 per token, shaped by three
//!   formant resonators.
//! * `SLw` / `SLs`: a `W` token with a 4–6 Hz amplitude and voicing
//!   modulation on top (breathy noise fills the troughs). Weak speech-laugh
//!   uses [`VoicePreset::weak_depth`], strong uses [`VoicePreset::strong_depth`].
//! * `Lv`: voiced schwa-like bursts at the burst rate, never fully silent.
//! * `Lu`: bursts of aspiration noise (`[h]`) at the burst rate.
//! * `Lvu`: each burst cycle is a voiced half followed by an `[h]` half.
//!
//! All acoustics are fixed presets; output depends only on the config and
//! the seed.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    write_manifest, write_wav, Corpus, CorpusError, EmotionLabel, Gender, LaughterLabel, Result,
    SampleSpan, Speaker, SyntacticPosition, Turn, WordUnit, SAMPLE_RATE,
};

/// File name of the manifest written next to the generated audio.
pub const MANIFEST_NAME: &str = "corpus.tsv";

const SR: f64 = SAMPLE_RATE as f64;

/// Named acoustic presets for the generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoicePreset {
    /// Speaker base F0 range in Hz (children's voices).
    pub f0_range: (f64, f64),
    /// Vowel formant triples (F1, F2, F3) in Hz used for plain words.
    pub vowels: Vec<[f64; 3]>,
    /// Formant bandwidths in Hz for voiced sounds.
    pub vowel_bandwidths: [f64; 3],
    /// Formants of the central `[@]`-like laughter vowel.
    pub laugh_vowel: [f64; 3],
    /// F0 of laughter bursts relative to the speaker's base F0.
    pub laugh_f0_ratio: f64,
    /// Formants and bandwidths of the `[h]`-like aspiration noise.
    pub aspiration: [f64; 3],
    pub aspiration_bandwidths: [f64; 3],
    /// Laughter burst / modulation rate range in Hz.
    pub burst_rate: (f64, f64),
    /// Modulation depth of weak and strong speech-laugh.
    pub weak_depth: f64,
    pub strong_depth: f64,
    /// Envelope floor between voiced laughter bursts.
    pub voiced_burst_floor: f64,
    /// Word and laughter token durations in seconds.
    pub word_duration: (f64, f64),
    pub laugh_duration: (f64, f64),
    /// Pause between units in seconds.
    pub gap: f64,
    /// Peak level of a unit before speaker gain.
    pub level: f64,
    /// Background noise amplitude.
    pub noise_floor: f64,
}

impl Default for VoicePreset {
    fn default() -> Self {
        Self {
            f0_range: (220.0, 320.0),
            vowels: vec![
                [800.0, 1300.0, 2600.0],
                [450.0, 2000.0, 2700.0],
                [320.0, 2300.0, 3000.0],
                [500.0, 900.0, 2500.0],
                [350.0, 800.0, 2400.0],
            ],
            vowel_bandwidths: [80.0, 100.0, 150.0],
            laugh_vowel: [550.0, 1500.0, 2500.0],
            laugh_f0_ratio: 1.3,
            aspiration: [600.0, 1600.0, 2800.0],
            aspiration_bandwidths: [400.0, 500.0, 600.0],
            burst_rate: (4.0, 6.0),
            weak_depth: 0.4,
            strong_depth: 0.8,
            voiced_burst_floor: 0.35,
            word_duration: (0.25, 0.5),
            laugh_duration: (0.45, 0.9),
            gap: 0.06,
            level: 0.3,
            noise_floor: 0.001,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub speakers: usize,
    pub turns_per_speaker: usize,
    /// Units per speaker for each label (the class mix).
    pub units_per_speaker: BTreeMap<LaughterLabel, usize>,
    pub voice: VoicePreset,
}

impl Default for SynthConfig {
    fn default() -> Self {
        use LaughterLabel::*;
        Self {
            speakers: 20,
            turns_per_speaker: 4,
            units_per_speaker: [(W, 8), (SLw, 1), (SLs, 1), (Lu, 1), (Lvu, 1), (Lv, 1)]
                .into_iter()
                .collect(),
            voice: VoicePreset::default(),
        }
    }
}

impl SynthConfig {
    pub fn with_mix(mut self, mix: &[(LaughterLabel, usize)]) -> Self {
        self.units_per_speaker = mix.iter().copied().collect();
        self
    }

    fn check(&self) -> Result<()> {
        let total: usize = self.units_per_speaker.values().sum();
        if total == 0 {
            return Err(CorpusError::InvalidConfig("class mix has no units".into()));
        }
        if self.speakers < 2 {
            return Err(CorpusError::InvalidConfig(format!(
                "need at least 2 speakers, got {}",
                self.speakers
            )));
        }
        if self.turns_per_speaker == 0 || self.turns_per_speaker > total {
            return Err(CorpusError::InvalidConfig(format!(
                "turns per speaker must be in 1..={total}, got {}",
                self.turns_per_speaker
            )));
        }
        Ok(())
    }
}

/// Generates audio files and a manifest under `out_dir` and returns the
/// corpus. Identical `(config, seed)` give byte-identical output.
pub fn synthesize_corpus(config: &SynthConfig, seed: u64, out_dir: &Path) -> Result<Corpus> {
    config.check()?;
    let audio_dir = out_dir.join("audio");
    fs::create_dir_all(&audio_dir).map_err(|source| CorpusError::Io {
        path: audio_dir.clone(),
        source,
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let voice = &config.voice;
    let mut corpus = Corpus::new(out_dir);

    for s in 0..config.speakers {
        let speaker_id = format!("S{:02}", s + 1);
        let gender = if rng.gen_bool(0.4) {
            Gender::Male
        } else {
            Gender::Female
        };
        let base_f0 = rng.gen_range(voice.f0_range.0..voice.f0_range.1);
        let gain = rng.gen_range(0.6..1.0);
        corpus.speakers.push(Speaker {
            speaker_id: speaker_id.clone(),
            gender,
            school: None,
        });

        let mut labels: Vec<LaughterLabel> = config
            .units_per_speaker
            .iter()
            .flat_map(|(&l, &n)| std::iter::repeat_n(l, n))
            .collect();
        labels.shuffle(&mut rng);

        let n_turns = config.turns_per_speaker;
        let mut start = 0;
        for t in 0..n_turns {
            let take = labels.len() / n_turns + usize::from(t < labels.len() % n_turns);
            let turn_labels = &labels[start..start + take];
            start += take;

            let turn_id = format!("{speaker_id}_T{:02}", t + 1);
            let gap = (voice.gap * SR) as usize;
            let mut audio = vec![0.0; gap];
            let mut units = Vec::with_capacity(turn_labels.len());
            for (index, &label) in turn_labels.iter().enumerate() {
                let signal = synthesize_unit(label, voice, base_f0, &mut rng);
                let begin = audio.len();
                audio.extend(signal.iter().map(|x| x * gain));
                units.push(annotate(
                    &turn_id,
                    index,
                    SampleSpan::new(begin, audio.len()),
                    label,
                    &mut rng,
                ));
                audio.extend(std::iter::repeat_n(0.0, gap));
            }
            for x in &mut audio {
                *x += voice.noise_floor * (rng.gen::<f64>() * 2.0 - 1.0);
            }

            let rel = PathBuf::from("audio").join(format!("{turn_id}.wav"));
            write_wav(&out_dir.join(&rel), &audio)?;
            corpus.turns.push(Turn {
                turn_id,
                speaker_id: speaker_id.clone(),
                ordinal: (t + 1) as u32,
                dialogue_length: n_turns as u32,
                audio_path: rel,
                units,
            });
        }
    }

    write_manifest(&corpus, &out_dir.join(MANIFEST_NAME))?;
    Ok(corpus)
}

const WORDS: &[&str] = &[
    "hallo",
    "aibo",
    "links",
    "rechts",
    "stopp",
    "geradeaus",
    "sitz",
    "lauf",
    "gut",
    "nein",
];

fn annotate(
    turn_id: &str,
    index: usize,
    span: SampleSpan,
    label: LaughterLabel,
    rng: &mut ChaCha8Rng,
) -> WordUnit {
    use EmotionLabel::*;
    use SyntacticPosition::*;
    let pick = |rng: &mut ChaCha8Rng, weighted: &[(EmotionLabel, f64)]| {
        let total: f64 = weighted.iter().map(|w| w.1).sum();
        let mut x = rng.gen::<f64>() * total;
        for &(e, w) in weighted {
            if x < w {
                return e;
            }
            x -= w;
        }
        weighted[weighted.len() - 1].0
    };
    let (emotion, position, transcript) = match label.super_class() {
        super::SuperClass::W => (
            pick(
                rng,
                &[
                    (Neutral, 0.8),
                    (Emphatic, 0.1),
                    (Angry, 0.05),
                    (Motherese, 0.05),
                ],
            ),
            None,
            Some(WORDS[rng.gen_range(0..WORDS.len())].to_string()),
        ),
        super::SuperClass::SL => (
            pick(
                rng,
                &[(Joyful, 0.5), (Neutral, 0.32), (Mixed, 0.16), (Angry, 0.02)],
            ),
            Some(
                [
                    EndOfClause,
                    EndOfPhrase,
                    BeginOfUnit,
                    Vocative,
                    Covering,
                    Internal,
                ][rng.gen_range(0..6)],
            ),
            Some(WORDS[rng.gen_range(0..WORDS.len())].to_string()),
        ),
        super::SuperClass::L => (
            pick(rng, &[(Joyful, 0.6), (Neutral, 0.4)]),
            Some([Isolated, BeginOfUnit, EndOfClause, EndOfPhrase][rng.gen_range(0..4)]),
            None,
        ),
    };
    WordUnit {
        turn_id: turn_id.to_string(),
        index,
        span,
        laughter: label,
        emotion: Some(emotion),
        syntactic_position: position,
        transcript,
    }
}

/// One labelled token, before speaker gain and background noise.
pub fn synthesize_unit(
    label: LaughterLabel,
    voice: &VoicePreset,
    base_f0: f64,
    rng: &mut impl Rng,
) -> Vec<f64> {
    let (lo, hi) = if label.super_class() == super::SuperClass::L {
        voice.laugh_duration
    } else {
        voice.word_duration
    };
    let n = (rng.gen_range(lo..hi) * SR) as usize;
    let rate = rng.gen_range(voice.burst_rate.0..voice.burst_rate.1);
    let phase = rng.gen_range(0.0..1.0);
    // fraction of the burst cycle at time t, in [0, 1)
    let cycle = |i: usize| (i as f64 / SR * rate + phase).fract();
    // raised-cosine hump over one burst cycle, peak 1 at mid-cycle
    let hump = |i: usize| 0.5 - 0.5 * (2.0 * PI * cycle(i)).cos();

    let signal = match label {
        LaughterLabel::W | LaughterLabel::SLw | LaughterLabel::SLs => {
            let vowel = voice.vowels[rng.gen_range(0..voice.vowels.len())];
            let f0 = base_f0 * rng.gen_range(0.9..1.1);
            let voiced = normalize(resonate(
                &harmonic_source(f0, n, rng),
                vowel,
                voice.vowel_bandwidths,
            ));
            let depth = match label {
                LaughterLabel::SLw => voice.weak_depth,
                LaughterLabel::SLs => voice.strong_depth,
                _ => 0.0,
            };
            if depth == 0.0 {
                voiced
            } else {
                let breath = normalize(resonate(
                    &white_noise(n, rng),
                    voice.aspiration,
                    voice.aspiration_bandwidths,
                ));
                (0..n)
                    .map(|i| {
                        let m = 1.0 - depth * hump(i);
                        m * voiced[i] + 0.5 * depth * (1.0 - m) * breath[i]
                    })
                    .collect()
            }
        }
        LaughterLabel::Lv => {
            let f0 = base_f0 * voice.laugh_f0_ratio * rng.gen_range(0.95..1.05);
            let voiced = normalize(resonate(
                &harmonic_source(f0, n, rng),
                voice.laugh_vowel,
                voice.vowel_bandwidths,
            ));
            let floor = voice.voiced_burst_floor;
            (0..n)
                .map(|i| (floor + (1.0 - floor) * hump(i)) * voiced[i])
                .collect()
        }
        LaughterLabel::Lu => {
            let noise = normalize(resonate(
                &white_noise(n, rng),
                voice.aspiration,
                voice.aspiration_bandwidths,
            ));
            (0..n).map(|i| (0.1 + 0.9 * hump(i)) * noise[i]).collect()
        }
        LaughterLabel::Lvu => {
            let f0 = base_f0 * voice.laugh_f0_ratio * rng.gen_range(0.95..1.05);
            let voiced = normalize(resonate(
                &harmonic_source(f0, n, rng),
                voice.laugh_vowel,
                voice.vowel_bandwidths,
            ));
            let noise = normalize(resonate(
                &white_noise(n, rng),
                voice.aspiration,
                voice.aspiration_bandwidths,
            ));
            (0..n)
                .map(|i| {
                    let c = cycle(i);
                    // half-cycle hump for each of the two phases
                    let h = (PI * (2.0 * c).fract()).sin().max(0.0);
                    let env = 0.15 + 0.85 * h;
                    if c < 0.5 {
                        env * voiced[i]
                    } else {
                        0.8 * env * noise[i]
                    }
                })
                .collect()
        }
    };

    let mut out: Vec<f64> = signal.into_iter().map(|x| x * voice.level).collect();
    apply_fades(&mut out, (0.015 * SR) as usize);
    out
}

/// Band-limited sawtooth-like source: harmonics with 1/k amplitude up to 5 kHz.
fn harmonic_source(f0: f64, n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let harmonics = ((5000.0 / f0) as usize).max(1);
    let phases: Vec<f64> = (0..harmonics)
        .map(|_| rng.gen_range(0.0..2.0 * PI))
        .collect();
    (0..n)
        .map(|i| {
            let t = i as f64 / SR;
            phases
                .iter()
                .enumerate()
                .map(|(k, ph)| {
                    let k = (k + 1) as f64;
                    (2.0 * PI * f0 * k * t + ph).sin() / k
                })
                .sum()
        })
        .collect()
}

fn white_noise(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect()
}

/// Cascade of two-pole resonators.
fn resonate(input: &[f64], formants: [f64; 3], bandwidths: [f64; 3]) -> Vec<f64> {
    let mut x = input.to_vec();
    for (f, b) in formants.iter().zip(bandwidths) {
        let r = (-PI * b / SR).exp();
        let a1 = 2.0 * r * (2.0 * PI * f / SR).cos();
        let a2 = -r * r;
        let (mut y1, mut y2) = (0.0, 0.0);
        for v in &mut x {
            let y = (1.0 - r) * *v + a1 * y1 + a2 * y2;
            y2 = y1;
            y1 = y;
            *v = y;
        }
    }
    x
}

fn normalize(x: Vec<f64>) -> Vec<f64> {
    let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        x
    } else {
        x.into_iter().map(|v| v / peak).collect()
    }
}

fn apply_fades(x: &mut [f64], len: usize) {
    let len = len.min(x.len() / 2);
    let n = x.len();
    for i in 0..len {
        let g = 0.5 - 0.5 * (PI * i as f64 / len as f64).cos();
        x[i] *= g;
        x[n - 1 - i] *= g;
    }
}
