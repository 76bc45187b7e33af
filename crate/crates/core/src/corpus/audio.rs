use std::path::Path;

use super::{CorpusError, Result, BIT_DEPTH, SAMPLE_RATE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WavHeader {
    pub channels: u16,
    pub sample_rate: u32,
    pub bits_per_sample: u16,
    pub is_pcm_int: bool,
    /// Samples per channel.
    pub len: usize,
}

impl WavHeader {
    /// Describes why the file does not match the corpus format, if it doesn't.
    pub fn format_problem(&self) -> Option<String> {
        if self.channels != 1 {
            Some(format!(
                "expected mono audio, found {} channels",
                self.channels
            ))
        } else if self.sample_rate != SAMPLE_RATE {
            Some(format!(
                "expected {SAMPLE_RATE} Hz, found {} Hz",
                self.sample_rate
            ))
        } else if !self.is_pcm_int || self.bits_per_sample != BIT_DEPTH {
            Some(format!(
                "expected {BIT_DEPTH}-bit integer PCM, found {} bits",
                self.bits_per_sample
            ))
        } else {
            None
        }
    }
}

fn wav_err(path: &Path) -> impl FnOnce(hound::Error) -> CorpusError + '_ {
    move |source| CorpusError::Wav {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_wav_header(path: &Path) -> Result<WavHeader> {
    let reader = hound::WavReader::open(path).map_err(wav_err(path))?;
    let spec = reader.spec();
    Ok(WavHeader {
        channels: spec.channels,
        sample_rate: spec.sample_rate,
        bits_per_sample: spec.bits_per_sample,
        is_pcm_int: spec.sample_format == hound::SampleFormat::Int,
        len: reader.duration() as usize,
    })
}

/// Reads a mono 16 kHz / 16 bit PCM file into samples scaled to `[-1, 1]`.
pub fn read_wav(path: &Path) -> Result<Vec<f64>> {
    let mut reader = hound::WavReader::open(path).map_err(wav_err(path))?;
    let spec = reader.spec();
    let header = WavHeader {
        channels: spec.channels,
        sample_rate: spec.sample_rate,
        bits_per_sample: spec.bits_per_sample,
        is_pcm_int: spec.sample_format == hound::SampleFormat::Int,
        len: reader.duration() as usize,
    };
    if let Some(problem) = header.format_problem() {
        return Err(CorpusError::AudioFormat {
            path: path.to_path_buf(),
            problem,
        });
    }
    reader
        .samples::<i16>()
        .map(|s| s.map(|v| f64::from(v) / 32768.0))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(wav_err(path))
}

/// Writes samples in `[-1, 1]` as mono 16 kHz / 16 bit PCM. Values outside
/// the range are clipped.
pub fn write_wav(path: &Path, samples: &[f64]) -> Result<()> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: SAMPLE_RATE,
        bits_per_sample: BIT_DEPTH,
        sample_format: hound::SampleFormat::Int,
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(wav_err(path))?;
    for &s in samples {
        let v = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        writer.write_sample(v).map_err(wav_err(path))?;
    }
    writer.finalize().map_err(wav_err(path))
}
