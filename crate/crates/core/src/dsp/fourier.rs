//! DFT magnitudes and Welch power spectral density estimation.

use crate::error::{EcgError, Result};
use rustfft::{num_complex::Complex64, FftPlanner};
use std::f64::consts::PI;

/// Full complex DFT of a real signal.
pub fn dft_complex(x: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

/// Magnitude spectrum |X(k)| for k = 0..N-1.
pub fn dft_magnitudes(x: &[f64]) -> Result<Vec<f64>> {
    if x.len() < 2 {
        return Err(EcgError::SignalTooShort {
            need: 2,
            got: x.len(),
        });
    }
    Ok(dft_complex(x).iter().map(|c| c.norm()).collect())
}

/// One-sided power spectrum |X(k)|^2 for k = 0..N/2 with its bin width in Hz.
pub fn one_sided_power(x: &[f64], fs: f64) -> (Vec<f64>, f64) {
    let n = x.len();
    let spec = dft_complex(x);
    let power = (0..=n / 2).map(|k| spec[k].norm_sqr()).collect();
    (power, fs / n as f64)
}

/// Averaged-periodogram PSD estimate.
#[derive(Debug, Clone)]
pub struct PsdEstimate {
    /// Frequency grid, strictly increasing from 0 to Nyquist.
    pub freqs: Vec<f64>,
    /// One-sided spectral density, power per Hz.
    pub power: Vec<f64>,
    pub n_segments: usize,
    pub window_length: usize,
}

impl PsdEstimate {
    /// Integrated power over `[f_low, f_high)` via rectangle rule.
    pub fn band_power(&self, f_low: f64, f_high: f64) -> f64 {
        let df = if self.freqs.len() > 1 {
            self.freqs[1] - self.freqs[0]
        } else {
            return 0.0;
        };
        self.freqs
            .iter()
            .zip(&self.power)
            .filter(|(f, _)| **f >= f_low && **f < f_high)
            .map(|(_, p)| p * df)
            .sum()
    }
}

/// Welch PSD: Hann-windowed, mean-detrended, overlapping segments averaged
/// with density normalization (1 / (fs * sum(w^2))).
pub fn welch_psd(x: &[f64], fs: f64, window_length: usize, overlap: f64) -> Result<PsdEstimate> {
    if window_length < 2 || window_length > x.len() {
        return Err(EcgError::InvalidParameter(format!(
            "window length {} must lie in [2, {}]",
            window_length,
            x.len()
        )));
    }
    if !(0.0..1.0).contains(&overlap) {
        return Err(EcgError::InvalidParameter(
            "overlap fraction must be in [0, 1)".into(),
        ));
    }
    let step = ((window_length as f64 * (1.0 - overlap)).round() as usize).max(1);
    let window: Vec<f64> = (0..window_length)
        .map(|i| 0.5 * (1.0 - (2.0 * PI * i as f64 / window_length as f64).cos()))
        .collect();
    let win_ss: f64 = window.iter().map(|w| w * w).sum();
    let scale = 1.0 / (fs * win_ss);

    let n_bins = window_length / 2 + 1;
    let mut acc = vec![0.0f64; n_bins];
    let mut n_segments = 0usize;
    let mut offset = 0usize;
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(window_length);
    while offset + window_length <= x.len() {
        let seg = &x[offset..offset + window_length];
        let mean = seg.iter().sum::<f64>() / window_length as f64;
        let mut buf: Vec<Complex64> = seg
            .iter()
            .zip(&window)
            .map(|(&v, &w)| Complex64::new((v - mean) * w, 0.0))
            .collect();
        fft.process(&mut buf);
        for (k, a) in acc.iter_mut().enumerate() {
            let mut p = buf[k].norm_sqr() * scale;
            if k != 0 && !(window_length % 2 == 0 && k == window_length / 2) {
                p *= 2.0;
            }
            *a += p;
        }
        n_segments += 1;
        offset += step;
    }
    if n_segments == 0 {
        return Err(EcgError::InvalidParameter(
            "not a single full segment fits the signal".into(),
        ));
    }
    for a in acc.iter_mut() {
        *a /= n_segments as f64;
    }
    let freqs = (0..n_bins)
        .map(|k| k as f64 * fs / window_length as f64)
        .collect();
    Ok(PsdEstimate {
        freqs,
        power: acc,
        n_segments,
        window_length,
    })
}
