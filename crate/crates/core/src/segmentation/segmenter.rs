//! Window extraction, IQR pruning and fixed-length resampling.

use super::{rr_context, WindowParams};
use crate::dsp::resample_to_len;
use crate::error::{EcgError, Result};
use crate::wfdb::{AamiLabel, EcgRecord};

/// One resampled heartbeat window.
#[derive(Debug, Clone)]
pub struct BeatSegment {
    pub record_id: String,
    /// R sample index in the source record.
    pub r_peak: usize,
    /// R sample index inside the resampled window.
    pub r_offset: usize,
    pub window: WindowParams,
    /// Per-channel samples, each exactly `target_len` long, in mV.
    pub samples: Vec<Vec<f64>>,
    pub label: Option<AamiLabel>,
    /// RR to the previous / next beat, seconds.
    pub rr_prev: f64,
    pub rr_next: f64,
    /// Effective sampling rate of `samples` after length normalization.
    pub fs: f64,
    /// Raw window duration before resampling, ms.
    pub raw_duration_ms: f64,
    /// Window hit a record boundary and was edge-padded.
    pub padded: bool,
}

impl BeatSegment {
    pub fn target_len(&self) -> usize {
        self.samples.first().map(Vec::len).unwrap_or(0)
    }
}

/// Maximum R-to-annotation distance for label attachment (75 ms).
const LABEL_TOLERANCE_S: f64 = 0.075;

/// Extract one window per merged R-peak, drop raw-length outliers by the
/// 1.5 IQR rule (per record, skipped when fewer than 3 beats), resample
/// survivors to `target_len` and attach the nearest AAMI label within 75 ms.
pub fn segment_record(
    record: &EcgRecord,
    r_peaks: &[usize],
    labels: &[(usize, AamiLabel)],
    window: WindowParams,
    target_len: usize,
) -> Result<Vec<BeatSegment>> {
    if target_len < 64 {
        return Err(EcgError::InvalidParameter(format!(
            "target_len must be >= 64, got {target_len}"
        )));
    }
    if r_peaks.is_empty() {
        return Ok(Vec::new());
    }
    let fs = record.fs;
    let n = record.n_samples();
    let rr = rr_context(r_peaks, fs);

    // Intended (unclipped) extents; raw length is independent of clipping so
    // boundary beats do not skew the IQR statistics.
    struct Candidate {
        r: usize,
        start: i64,
        end: i64,
        rr_prev: f64,
        rr_next: f64,
    }
    let candidates: Vec<Candidate> = r_peaks
        .iter()
        .zip(&rr)
        .map(|(&r, &(rr_prev, rr_next))| {
            let pre = (window.alpha * rr_prev).round() as i64;
            let post = (window.beta * rr_next).round() as i64;
            Candidate {
                r,
                start: r as i64 - pre,
                end: r as i64 + post,
                rr_prev: rr_prev / fs,
                rr_next: rr_next / fs,
            }
        })
        .collect();

    let raw_lens: Vec<f64> = candidates.iter().map(|c| (c.end - c.start) as f64).collect();
    let keep: Vec<bool> = if candidates.len() < 3 {
        vec![true; candidates.len()]
    } else {
        let (q1, q3) = quartiles(&raw_lens);
        let iqr = q3 - q1;
        let (lo, hi) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
        raw_lens.iter().map(|&l| l >= lo && l <= hi).collect()
    };

    let channels: Vec<Vec<f64>> = (0..record.n_channels())
        .map(|ch| record.channel(ch))
        .collect();

    let mut segments = Vec::new();
    for (c, &kept) in candidates.iter().zip(&keep) {
        if !kept {
            continue;
        }
        let raw_len = (c.end - c.start) as usize;
        if raw_len < 2 {
            continue;
        }
        let padded = c.start < 0 || c.end > n as i64;
        let mut samples = Vec::with_capacity(channels.len());
        for ch in &channels {
            let mut raw = Vec::with_capacity(raw_len);
            for idx in c.start..c.end {
                let clamped = idx.clamp(0, n as i64 - 1) as usize;
                raw.push(ch[clamped]);
            }
            samples.push(resample_to_len(&raw, target_len)?);
        }
        let r_offset = (((c.r as i64 - c.start) as f64 * target_len as f64 / raw_len as f64)
            .round() as usize)
            .min(target_len - 1);

        let label = nearest_label(labels, c.r, fs);
        segments.push(BeatSegment {
            record_id: record.record_id.clone(),
            r_peak: c.r,
            r_offset,
            window,
            samples,
            label,
            rr_prev: c.rr_prev,
            rr_next: c.rr_next,
            fs: target_len as f64 * fs / raw_len as f64,
            raw_duration_ms: raw_len as f64 / fs * 1000.0,
            padded,
        });
        if padded {
            log::debug!(
                "segment at r={} in {} clipped record bounds, edge-padded",
                c.r,
                record.record_id
            );
        }
    }
    Ok(segments)
}

fn nearest_label(labels: &[(usize, AamiLabel)], r: usize, fs: f64) -> Option<AamiLabel> {
    let tol = (LABEL_TOLERANCE_S * fs).round() as i64;
    labels
        .iter()
        .map(|&(s, l)| ((s as i64 - r as i64).abs(), l))
        .filter(|&(d, _)| d <= tol)
        .min_by_key(|&(d, _)| d)
        .map(|(_, l)| l)
}

/// Linear-interpolation quartiles.
fn quartiles(values: &[f64]) -> (f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |p: f64| -> f64 {
        let pos = p * (v.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        if lo == hi {
            v[lo]
        } else {
            v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
        }
    };
    (q(0.25), q(0.75))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rpeak::testsig::bump_train;
    use crate::wfdb::ChannelInfo;

    fn record_with_peaks(rate_hz: f64, seconds: f64) -> (EcgRecord, Vec<usize>) {
        let fs = 360.0;
        let x = bump_train(fs, seconds, rate_hz, |_| 1.0);
        let period = fs / rate_hz;
        let peaks: Vec<usize> = (1..)
            .map(|k| (k as f64 * period).round() as usize)
            .take_while(|&p| p + 1 < x.len())
            .collect();
        let n = x.len();
        let anns: Vec<(usize, char)> = peaks.iter().map(|&p| (p, 'N')).collect();
        let rec = EcgRecord::new(
            "synthetic".into(),
            fs,
            vec![ChannelInfo {
                name: "MLII".into(),
                gain: 200.0,
                baseline: 0,
            }],
            x,
            anns.into_iter().filter(|&(p, _)| p < n).collect(),
        )
        .unwrap();
        (rec, peaks)
    }

    #[test]
    fn equal_rr_prunes_nothing() {
        let (rec, peaks) = record_with_peaks(1.25, 30.0);
        let labels = rec.aami_beats(&crate::wfdb::AamiMap::default());
        let segs = segment_record(
            &rec,
            &peaks,
            &labels,
            WindowParams { alpha: 0.3, beta: 0.5 },
            324,
        )
        .unwrap();
        assert_eq!(segs.len(), peaks.len());
    }

    #[test]
    fn segments_have_exact_target_len() {
        let (rec, peaks) = record_with_peaks(1.1, 25.0);
        let labels = rec.aami_beats(&crate::wfdb::AamiMap::default());
        for target in [64usize, 324] {
            let segs = segment_record(
                &rec,
                &peaks,
                &labels,
                WindowParams { alpha: 0.233, beta: 0.367 },
                target,
            )
            .unwrap();
            assert!(!segs.is_empty());
            for s in &segs {
                assert_eq!(s.target_len(), target);
                assert!(s.label.is_some());
                assert!(s.r_offset < target);
            }
        }
    }

    #[test]
    fn nine_hundred_ms_window_resamples_to_324() {
        // A raw 900 ms window at 360 Hz is 324 samples; the contract is the
        // fixed output length regardless.
        let (rec, peaks) = record_with_peaks(1.0, 20.0);
        let labels = rec.aami_beats(&crate::wfdb::AamiMap::default());
        // alpha * RR + beta * RR = 0.9 s when RR = 1 s and alpha+beta = 0.9
        let segs = segment_record(
            &rec,
            &peaks,
            &labels,
            WindowParams { alpha: 0.45, beta: 0.45 },
            324,
        )
        .unwrap();
        for s in &segs {
            assert_eq!(s.target_len(), 324);
            assert!((s.raw_duration_ms - 900.0).abs() < 10.0);
        }
    }

    #[test]
    fn boundary_windows_are_padded_and_flagged() {
        let (rec, mut peaks) = record_with_peaks(1.0, 10.0);
        peaks.insert(0, 3); // implausible first beat right at the record start
        let labels = rec.aami_beats(&crate::wfdb::AamiMap::default());
        let segs = segment_record(
            &rec,
            &peaks,
            &labels,
            WindowParams { alpha: 0.4, beta: 0.4 },
            128,
        )
        .unwrap();
        if let Some(first) = segs.iter().find(|s| s.r_peak == 3) {
            assert!(first.padded);
        }
    }

    #[test]
    fn outlier_rr_is_pruned() {
        let fs = 360.0;
        let x = bump_train(fs, 40.0, 1.0, |_| 1.0);
        let n = x.len();
        // regular peaks plus one with an absurd RR gap at the end
        let mut peaks: Vec<usize> = (1..30).map(|k| (k as f64 * 360.0) as usize).collect();
        peaks.push(n - 10);
        let rec = EcgRecord::new(
            "outlier".into(),
            fs,
            vec![ChannelInfo { name: "MLII".into(), gain: 200.0, baseline: 0 }],
            x,
            vec![],
        )
        .unwrap();
        let segs = segment_record(
            &rec,
            &peaks,
            &[],
            WindowParams { alpha: 0.3, beta: 0.5 },
            128,
        )
        .unwrap();
        assert!(segs.len() < peaks.len());
    }
}
