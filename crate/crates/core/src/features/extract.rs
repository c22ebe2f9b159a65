//! Base feature-row assembly for one beat segment.

use super::frequency::frequency_domain_features;
use super::morphology::morphological_features;
use super::registry::{FeatureRegistry, CWT_SCALES};
use super::time_domain::{extra_shape_features, time_domain_features, Feature};
use crate::dsp::{cwt_mexican_hat, wavelet_packet_energies};
use crate::segmentation::BeatSegment;

/// One extracted row: values plus per-cell missing flags, in registry order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub values: Vec<f64>,
    pub missing: Vec<bool>,
}

/// Per-beat extraction context derived from the record's beat sequence.
#[derive(Debug, Clone, Copy)]
pub struct BeatContext {
    /// Mean RR (seconds) over a +-5 beat neighborhood.
    pub local_rr_mean: f64,
}

/// Contexts for a record's ordered segment list.
pub fn beat_contexts(segments: &[BeatSegment]) -> Vec<BeatContext> {
    let rr: Vec<f64> = segments.iter().map(|s| s.rr_prev).collect();
    (0..segments.len())
        .map(|i| {
            let lo = i.saturating_sub(5);
            let hi = (i + 6).min(rr.len());
            let window = &rr[lo..hi];
            BeatContext {
                local_rr_mean: window.iter().sum::<f64>() / window.len() as f64,
            }
        })
        .collect()
}

fn missing_block(n: usize) -> Vec<Feature> {
    vec![(0.0, true); n]
}

fn channel_or_missing(seg: &BeatSegment, ch: usize) -> Option<&[f64]> {
    seg.samples.get(ch).map(Vec::as_slice)
}

/// Wavelet-packet leaf energies (db4, depth 3); all-zero inputs are flagged.
fn wpe_features(x: &[f64]) -> Vec<Feature> {
    match wavelet_packet_energies(x, 4, 3) {
        Ok(e) => {
            let degenerate = e.iter().all(|&v| v == 0.0);
            e.into_iter().map(|v| (v, degenerate)).collect()
        }
        Err(_) => missing_block(8),
    }
}

/// Total CWT energy per reference scale (scales track the segment rate).
fn cwt_energy_features(x: &[f64], fs: f64) -> Vec<Feature> {
    let scales: Vec<f64> = CWT_SCALES
        .iter()
        .map(|&s| (s as f64 * fs / 360.0).max(2.0))
        .collect();
    cwt_mexican_hat(x, &scales)
        .into_iter()
        .map(|row| (row.iter().map(|c| c * c).sum::<f64>(), false))
        .collect()
}

/// Assemble the 88-value base row for one segment, in the exact order of
/// [`FeatureRegistry::base`]. Failed extractors contribute flagged
/// placeholders rather than aborting the beat.
pub fn extract_base_features(seg: &BeatSegment, ctx: &BeatContext) -> FeatureRow {
    let fs = seg.fs;
    let mut features: Vec<Feature> = Vec::with_capacity(FeatureRegistry::base().len());

    for ch in 0..2 {
        match channel_or_missing(seg, ch) {
            Some(x) => features.extend(time_domain_features(x)),
            None => features.extend(missing_block(10)),
        }
    }
    for ch in 0..2 {
        match channel_or_missing(seg, ch) {
            Some(x) => features.extend(frequency_domain_features(x, fs)),
            None => features.extend(missing_block(6)),
        }
    }
    for ch in 0..2 {
        match channel_or_missing(seg, ch) {
            Some(x) => features.extend(wpe_features(x)),
            None => features.extend(missing_block(8)),
        }
    }
    for ch in 0..2 {
        match channel_or_missing(seg, ch) {
            Some(x) => features.extend(cwt_energy_features(x, fs)),
            None => features.extend(missing_block(4)),
        }
    }
    for ch in 0..2 {
        match channel_or_missing(seg, ch) {
            Some(x) => features.extend(extra_shape_features(x)),
            None => features.extend(missing_block(7)),
        }
    }
    match channel_or_missing(seg, 0) {
        Some(x) => features.extend(morphological_features(x, fs, seg.r_offset)),
        None => features.extend(missing_block(14)),
    }

    // RR context (seconds / dimensionless ratio).
    features.push((seg.rr_prev, false));
    features.push((seg.rr_next, false));
    if seg.rr_next > 0.0 {
        features.push((seg.rr_prev / seg.rr_next, false));
    } else {
        features.push((0.0, true));
    }
    features.push((ctx.local_rr_mean, false));

    let (values, missing) = features.into_iter().unzip();
    FeatureRow { values, missing }
}
