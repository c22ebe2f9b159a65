//! Adaptive-threshold detector: sliding-window mean + 1.5 sigma on the
//! squared bandpassed signal.

use super::{build_peakset, check_detector_input, is_flat, qrs_bandpass, refine_peaks};
use super::{DetectorId, PeakSet};
use crate::error::Result;

pub fn detect_adaptive_threshold(x: &[f64], fs: f64) -> Result<PeakSet> {
    check_detector_input(x, fs)?;
    if is_flat(x) {
        log::warn!("adaptive threshold: flat signal, emitting no peaks");
        return Ok(PeakSet::uniform(
            DetectorId::AdaptiveThreshold,
            Vec::new(),
            0.0,
        ));
    }
    let bp = qrs_bandpass(x, fs)?;
    let sq: Vec<f64> = bp.iter().map(|v| v * v).collect();
    let n = sq.len();

    // Centered 2 s sliding window via prefix sums.
    let w = ((2.0 * fs).round() as usize).max(2).min(n);
    let mut prefix = vec![0.0f64; n + 1];
    let mut prefix_sq = vec![0.0f64; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + sq[i];
        prefix_sq[i + 1] = prefix_sq[i] + sq[i] * sq[i];
    }
    let threshold = |i: usize| {
        let lo = i.saturating_sub(w / 2);
        let hi = (i + w / 2).min(n);
        let len = (hi - lo) as f64;
        let mean = (prefix[hi] - prefix[lo]) / len;
        let var = ((prefix_sq[hi] - prefix_sq[lo]) / len - mean * mean).max(0.0);
        mean + 1.5 * var.sqrt()
    };

    let lockout = (0.2 * fs).round() as usize;
    let mut coarse: Vec<usize> = Vec::new();
    for i in 1..n.saturating_sub(1) {
        if sq[i] > sq[i - 1] && sq[i] >= sq[i + 1] && sq[i] > threshold(i) {
            match coarse.last() {
                Some(&prev) if i - prev < lockout => {
                    if sq[i] > sq[prev] {
                        *coarse.last_mut().unwrap() = i;
                    }
                }
                _ => coarse.push(i),
            }
        }
    }

    let peaks = refine_peaks(&bp, &coarse, fs);
    Ok(build_peakset(DetectorId::AdaptiveThreshold, peaks, &bp, fs))
}
