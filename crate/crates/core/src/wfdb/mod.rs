//! PhysioNet WFDB record ingestion.
//!
//! Parses `.hea` headers, `.dat` signal payloads (formats 212 and 16) and MIT
//! `.atr` annotation streams into [`EcgRecord`] values with gain-corrected mV
//! samples, and maps annotation symbols onto the five AAMI beat classes.

mod aami;
mod annotations;
mod header;
mod signal;

pub use aami::{map_to_aami, AamiLabel, AamiMap};
pub use annotations::{parse_annotations, write_annotations, Annotation};
pub use header::{parse_header, HeaderInfo, SignalSpec};
pub use signal::{pack_212, parse_signal_16, parse_signal_212, write_signal_16};

use crate::error::{EcgError, Result};
use std::path::Path;

/// One channel of a WFDB record.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelInfo {
    pub name: String,
    /// ADC units per millivolt.
    pub gain: f64,
    /// ADC value corresponding to 0 mV.
    pub baseline: i32,
}

/// A fully loaded record: gain-corrected multichannel signal plus beat annotations.
#[derive(Debug, Clone)]
pub struct EcgRecord {
    pub record_id: String,
    /// Sampling rate in Hz.
    pub fs: f64,
    pub channels: Vec<ChannelInfo>,
    /// Row-major: `signal[sample * n_channels + channel]`, in mV.
    signal: Vec<f64>,
    n_samples: usize,
    /// `(sample_index, symbol)` pairs, non-decreasing in sample index.
    pub annotations: Vec<(usize, char)>,
}

impl EcgRecord {
    pub fn new(
        record_id: String,
        fs: f64,
        channels: Vec<ChannelInfo>,
        signal: Vec<f64>,
        annotations: Vec<(usize, char)>,
    ) -> Result<Self> {
        let n_ch = channels.len();
        if n_ch == 0 || fs <= 0.0 {
            return Err(EcgError::InvalidParameter(
                "record needs >= 1 channel and fs > 0".into(),
            ));
        }
        if signal.len() % n_ch != 0 {
            return Err(EcgError::DimensionMismatch {
                expected: n_ch,
                actual: signal.len() % n_ch,
            });
        }
        let n_samples = signal.len() / n_ch;
        if n_samples == 0 {
            return Err(EcgError::InvalidParameter("empty signal".into()));
        }
        for &(idx, sym) in &annotations {
            if idx >= n_samples {
                return Err(EcgError::AnnotationParse(format!(
                    "annotation '{sym}' at sample {idx} beyond record end {n_samples}"
                )));
            }
        }
        Ok(Self {
            record_id,
            fs,
            channels,
            signal,
            n_samples,
            annotations,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    /// Copy of one channel in mV.
    pub fn channel(&self, ch: usize) -> Vec<f64> {
        let n_ch = self.channels.len();
        (0..self.n_samples)
            .map(|i| self.signal[i * n_ch + ch])
            .collect()
    }

    pub fn sample(&self, idx: usize, ch: usize) -> f64 {
        self.signal[idx * self.channels.len() + ch]
    }

    /// Beat annotations mapped to AAMI classes; non-beat symbols dropped.
    pub fn aami_beats(&self, map: &AamiMap) -> Vec<(usize, AamiLabel)> {
        self.annotations
            .iter()
            .filter_map(|&(idx, sym)| map.lookup(sym).map(|l| (idx, l)))
            .collect()
    }

    /// Replace the signal contents, e.g. after filtering. Length must match.
    pub fn with_signal(mut self, signal: Vec<f64>) -> Result<Self> {
        if signal.len() != self.signal.len() {
            return Err(EcgError::DimensionMismatch {
                expected: self.signal.len(),
                actual: signal.len(),
            });
        }
        self.signal = signal;
        Ok(self)
    }
}

/// Load a record from `dir/<name>.hea`, `.dat` and (if present) `.atr`.
///
/// Channel selection and resampling happen downstream; this returns the raw
/// record with samples converted to mV.
pub fn load_record(dir: &Path, name: &str) -> Result<EcgRecord> {
    let hea = std::fs::read_to_string(dir.join(format!("{name}.hea")))?;
    let header = parse_header(&hea)?;

    let dat_name = header
        .signals
        .first()
        .map(|s| s.file_name.clone())
        .unwrap_or_else(|| format!("{name}.dat"));
    let dat = std::fs::read(dir.join(&dat_name))?;
    let n_ch = header.signals.len();

    let raw = match header.signals[0].format {
        212 => parse_signal_212(&dat, n_ch, header.n_samples)?,
        16 => parse_signal_16(&dat, n_ch, header.n_samples)?,
        f => return Err(EcgError::UnsupportedFormat { format: f }),
    };

    let mut signal = vec![0.0f64; raw.len()];
    for ch in 0..n_ch {
        let spec = &header.signals[ch];
        let gain = if spec.gain > 0.0 { spec.gain } else { 200.0 };
        let baseline = spec.baseline as f64;
        for i in 0..header.n_samples {
            let v = raw[i * n_ch + ch] as f64;
            signal[i * n_ch + ch] = (v - baseline) / gain;
        }
    }

    let atr_path = dir.join(format!("{name}.atr"));
    let annotations = if atr_path.exists() {
        let atr = std::fs::read(atr_path)?;
        parse_annotations(&atr)?
            .into_iter()
            .map(|a| (a.sample, a.symbol))
            .collect()
    } else {
        Vec::new()
    };

    let channels = header
        .signals
        .iter()
        .map(|s| ChannelInfo {
            name: s.description.clone(),
            gain: if s.gain > 0.0 { s.gain } else { 200.0 },
            baseline: s.baseline,
        })
        .collect();

    EcgRecord::new(name.to_string(), header.fs, channels, signal, annotations)
}

/// Dump a record as CSV (`sample_index, ch0_mV, ch1_mV, ...`) for inspection.
pub fn record_to_csv(record: &EcgRecord) -> String {
    let n_ch = record.n_channels();
    let mut out = String::from("sample_index");
    for ch in 0..n_ch {
        out.push_str(&format!(",ch{ch}_mV"));
    }
    out.push('\n');
    for i in 0..record.n_samples() {
        out.push_str(&i.to_string());
        for ch in 0..n_ch {
            out.push_str(&format!(",{:.6}", record.sample(i, ch)));
        }
        out.push('\n');
    }
    out
}
