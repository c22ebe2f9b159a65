//! Lead-II morphological delineation via small-scale Mexican-hat CWT.
//!
//! QRS onset/offset are the nearest zero-crossings of the ~10 ms-scale CWT
//! coefficients around R; P/T landmarks and ST deviation are measured against
//! the PR baseline. Failed delineation is flagged missing for imputation.

use super::time_domain::Feature;
use crate::dsp::cwt_mexican_hat;

const MORPH_COUNT: usize = 14;

fn ms_to_samples(ms: f64, fs: f64) -> usize {
    ((ms / 1000.0) * fs).round() as usize
}

/// Registry order: qrs_dur_ms, r_amp_mV, q_amp_mV, s_amp_mV, p_amp_mV,
/// t_amp_mV, st_dev_mV, qt_ms, pr_ms, p_peak_ms, t_peak_ms, qrs_onset_ms,
/// qrs_offset_ms, qrs_area.
pub fn morphological_features(x: &[f64], fs: f64, r_offset: usize) -> Vec<Feature> {
    let missing = vec![(0.0, true); MORPH_COUNT];
    let n = x.len();
    if n < 32 || r_offset >= n {
        return missing;
    }

    // ~10 ms wavelet scale (4 samples at 360 Hz).
    let scale = (0.011 * fs).max(2.0);
    let coeffs = &cwt_mexican_hat(x, &[scale])[0];
    if coeffs.iter().all(|&c| c == 0.0) {
        return missing; // flat segment
    }

    let search = ms_to_samples(150.0, fs);
    let onset = match zero_crossing_backward(coeffs, r_offset, search) {
        Some(i) => i,
        None => return missing,
    };
    let offset = match zero_crossing_forward(coeffs, r_offset, search) {
        Some(i) => i,
        None => return missing,
    };

    let ms_per_sample = 1000.0 / fs;
    let qrs_dur_ms = (offset - onset) as f64 * ms_per_sample;

    // PR baseline: mean over [-90, -60] ms before R, clamped to the segment.
    let b_lo = r_offset.saturating_sub(ms_to_samples(90.0, fs));
    let b_hi = r_offset.saturating_sub(ms_to_samples(60.0, fs)).max(b_lo + 1);
    let baseline_window = &x[b_lo..b_hi.min(n)];
    let baseline = if baseline_window.is_empty() {
        0.0
    } else {
        baseline_window.iter().sum::<f64>() / baseline_window.len() as f64
    };

    let r_amp = x[r_offset] - baseline;
    let q_amp = segment_min(x, onset, r_offset).map(|v| v - baseline);
    let s_amp = segment_min(x, r_offset, (offset + 1).min(n)).map(|v| v - baseline);

    // T wave: strongest excursion from baseline in [offset+80, offset+400] ms.
    let t_window = (
        offset + ms_to_samples(80.0, fs),
        offset + ms_to_samples(400.0, fs),
    );
    let t_peak = argmax_excursion(x, baseline, t_window.0, t_window.1.min(n));
    // P wave: strongest excursion in [onset-200, onset-30] ms.
    let p_window = (
        onset.saturating_sub(ms_to_samples(200.0, fs)),
        onset.saturating_sub(ms_to_samples(30.0, fs)),
    );
    let p_peak = argmax_excursion(x, baseline, p_window.0, p_window.1);

    // ST deviation: mean over [offset+40, offset+80] ms minus baseline.
    let st_lo = offset + ms_to_samples(40.0, fs);
    let st_hi = offset + ms_to_samples(80.0, fs);
    let st_dev = if st_lo < n {
        let seg = &x[st_lo..st_hi.min(n)];
        if seg.is_empty() {
            None
        } else {
            Some(seg.iter().sum::<f64>() / seg.len() as f64 - baseline)
        }
    } else {
        None
    };

    let qrs_area =
        x[onset..=offset.min(n - 1)].iter().map(|v| (v - baseline).abs()).sum::<f64>()
            * ms_per_sample;

    let opt = |v: Option<f64>| -> Feature {
        match v {
            Some(v) => (v, false),
            None => (0.0, true),
        }
    };
    vec![
        (qrs_dur_ms, false),
        (r_amp, false),
        opt(q_amp),
        opt(s_amp),
        opt(p_peak.map(|i| x[i] - baseline)),
        opt(t_peak.map(|i| x[i] - baseline)),
        opt(st_dev),
        opt(t_peak.map(|i| (i - onset) as f64 * ms_per_sample)),
        opt(p_peak.map(|i| (onset as f64 - i as f64) * ms_per_sample)),
        opt(p_peak.map(|i| (r_offset as f64 - i as f64) * ms_per_sample)),
        opt(t_peak.map(|i| (i as f64 - r_offset as f64) * ms_per_sample)),
        ((r_offset - onset) as f64 * ms_per_sample, false),
        ((offset - r_offset) as f64 * ms_per_sample, false),
        (qrs_area, false),
    ]
}

fn zero_crossing_backward(c: &[f64], from: usize, max_dist: usize) -> Option<usize> {
    let stop = from.saturating_sub(max_dist);
    let mut i = from;
    while i > stop {
        if c[i - 1] * c[i] < 0.0 || (c[i - 1] == 0.0 && c[i] != 0.0) {
            return Some(i - 1);
        }
        i -= 1;
    }
    None
}

fn zero_crossing_forward(c: &[f64], from: usize, max_dist: usize) -> Option<usize> {
    let stop = (from + max_dist).min(c.len() - 1);
    let mut i = from;
    while i < stop {
        if c[i] * c[i + 1] < 0.0 || (c[i + 1] == 0.0 && c[i] != 0.0) {
            return Some(i + 1);
        }
        i += 1;
    }
    None
}

fn segment_min(x: &[f64], lo: usize, hi: usize) -> Option<f64> {
    if lo >= hi || hi > x.len() {
        return None;
    }
    x[lo..hi].iter().cloned().reduce(f64::min)
}

fn argmax_excursion(x: &[f64], baseline: f64, lo: usize, hi: usize) -> Option<usize> {
    if lo >= hi || lo >= x.len() {
        return None;
    }
    (lo..hi.min(x.len())).max_by(|&a, &b| {
        (x[a] - baseline)
            .abs()
            .partial_cmp(&(x[b] - baseline).abs())
            .unwrap()
    })
}
