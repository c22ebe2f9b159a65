//! R-peak detection: three independent detectors weighted by a kurtosis
//! signal-quality index and merged within a refractory tolerance.

mod adaptive;
mod cwt_detector;
mod merge;
mod pan_tompkins;
mod sqi;

pub use adaptive::detect_adaptive_threshold;
pub use cwt_detector::detect_cwt;
pub use merge::ensemble_merge;
pub use pan_tompkins::detect_pan_tompkins;
pub use sqi::sqi_kurtosis;

use crate::dsp::{design_butterworth_bandpass, filtfilt};
use crate::error::{EcgError, Result};

/// Which algorithm produced a peak set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorId {
    PanTompkins,
    Cwt,
    AdaptiveThreshold,
}

impl DetectorId {
    pub fn as_str(self) -> &'static str {
        match self {
            DetectorId::PanTompkins => "pan_tompkins",
            DetectorId::Cwt => "cwt",
            DetectorId::AdaptiveThreshold => "adaptive_threshold",
        }
    }

    fn rank(self) -> u8 {
        match self {
            DetectorId::PanTompkins => 0,
            DetectorId::Cwt => 1,
            DetectorId::AdaptiveThreshold => 2,
        }
    }
}

/// Candidate R-peaks from one detector plus its signal-quality weighting.
#[derive(Debug, Clone)]
pub struct PeakSet {
    pub detector_id: DetectorId,
    /// Strictly increasing sample indices.
    pub peaks: Vec<usize>,
    /// Record-level weight (mean of the window weights).
    pub sqi_weight: f64,
    /// Per 5 s non-overlapping window weights; empty falls back to `sqi_weight`.
    pub window_weights: Vec<f64>,
    /// Samples per SQI window.
    pub window_len: usize,
}

impl PeakSet {
    /// Uniform-weight set, mainly for tests and hand-built merges.
    pub fn uniform(detector_id: DetectorId, peaks: Vec<usize>, weight: f64) -> Self {
        PeakSet {
            detector_id,
            peaks,
            sqi_weight: weight,
            window_weights: Vec::new(),
            window_len: 0,
        }
    }

    /// Vote weight for a candidate at `sample`.
    pub fn weight_at(&self, sample: usize) -> f64 {
        if self.window_weights.is_empty() || self.window_len == 0 {
            return self.sqi_weight;
        }
        let idx = (sample / self.window_len).min(self.window_weights.len() - 1);
        self.window_weights[idx]
    }
}

/// 5-15 Hz zero-phase bandpass shared by the detectors.
pub(crate) fn qrs_bandpass(x: &[f64], fs: f64) -> Result<Vec<f64>> {
    let cascade = design_butterworth_bandpass(2, 5.0, 15.0, fs)?;
    filtfilt(&cascade, x)
}

pub(crate) fn check_detector_input(x: &[f64], fs: f64) -> Result<()> {
    let need = (2.0 * fs) as usize;
    if x.len() < need {
        return Err(EcgError::SignalTooShort {
            need,
            got: x.len(),
        });
    }
    Ok(())
}

pub(crate) fn is_flat(x: &[f64]) -> bool {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() <= 0.0
}

/// Snap a coarse detection to the local maximum of |bandpassed| within
/// +-50 ms, then drop refined duplicates closer than the refractory gap.
pub(crate) fn refine_peaks(bp: &[f64], coarse: &[usize], fs: f64) -> Vec<usize> {
    let half = (0.05 * fs).round() as usize;
    let refractory = (0.2 * fs).round() as usize;
    let mut refined: Vec<usize> = Vec::with_capacity(coarse.len());
    for &c in coarse {
        let lo = c.saturating_sub(half);
        let hi = (c + half + 1).min(bp.len());
        if lo >= hi {
            continue;
        }
        let best = (lo..hi)
            .max_by(|&a, &b| bp[a].abs().partial_cmp(&bp[b].abs()).unwrap())
            .unwrap();
        match refined.last() {
            Some(&prev) if best <= prev || best - prev < refractory => {
                if bp[best].abs() > bp[*refined.last().unwrap()].abs() {
                    *refined.last_mut().unwrap() = best.max(prev);
                }
            }
            _ => refined.push(best),
        }
    }
    refined
}

/// Per 5 s non-overlapping window SQI weights of the working signal.
pub(crate) fn sqi_windows(x: &[f64], fs: f64) -> (Vec<f64>, usize, f64) {
    let window_len = ((5.0 * fs).round() as usize).max(4);
    let weights: Vec<f64> = x
        .chunks(window_len)
        .filter(|c| c.len() >= 4)
        .map(sqi_kurtosis)
        .collect();
    let mean = if weights.is_empty() {
        0.0
    } else {
        weights.iter().sum::<f64>() / weights.len() as f64
    };
    (weights, window_len, mean)
}

pub(crate) fn build_peakset(
    detector_id: DetectorId,
    peaks: Vec<usize>,
    bp: &[f64],
    fs: f64,
) -> PeakSet {
    let (window_weights, window_len, mean) = sqi_windows(bp, fs);
    PeakSet {
        detector_id,
        peaks,
        sqi_weight: mean,
        window_weights,
        window_len,
    }
}

/// Run the three detectors on one channel.
pub fn detect_all(x: &[f64], fs: f64) -> Result<Vec<PeakSet>> {
    Ok(vec![
        detect_pan_tompkins(x, fs)?,
        detect_cwt(x, fs)?,
        detect_adaptive_threshold(x, fs)?,
    ])
}

/// Full ensemble: detect on one channel and merge at the default 0.05 s
/// refractory tolerance.
pub fn detect_rpeaks(x: &[f64], fs: f64) -> Result<Vec<usize>> {
    let sets = detect_all(x, fs)?;
    ensemble_merge(&sets, fs, 0.05)
}

#[cfg(test)]
pub(crate) mod testsig {
    use std::f64::consts::PI;

    /// Train of Gaussian QRS-like bumps at a given beat rate, with optional
    /// amplitude schedule and additive deterministic "noise".
    pub fn bump_train(fs: f64, seconds: f64, rate_hz: f64, amp: impl Fn(f64) -> f64) -> Vec<f64> {
        let n = (fs * seconds) as usize;
        let sigma = 0.012 * fs; // ~12 ms QRS-ish bump
        let period = fs / rate_hz;
        (0..n)
            .map(|i| {
                let t = i as f64;
                let k = (t / period).round();
                let center = k * period;
                let d = (t - center) / sigma;
                let qrs = amp(center / fs) * (-0.5 * d * d).exp();
                // small baseline + mains-ish ripple so the signal is not sparse-only
                qrs + 0.02 * (2.0 * PI * 0.3 * t / fs).sin() + 0.01 * (2.0 * PI * 7.0 * t / fs).sin()
            })
            .collect()
    }

    pub fn count_near(expected: usize, got: usize, slack: usize) -> bool {
        got + slack >= expected && got <= expected + slack
    }
}
