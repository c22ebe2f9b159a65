//! SQI-weighted ensemble merge of detector outputs.

use super::PeakSet;
use crate::error::{EcgError, Result};

/// Cluster candidates across detectors by single linkage at the given
/// tolerance; a cluster survives when its SQI-weighted vote reaches half the
/// total detector weight, and is localized at the weighted median sample.
pub fn ensemble_merge(peaksets: &[PeakSet], fs: f64, tolerance_s: f64) -> Result<Vec<usize>> {
    if tolerance_s <= 0.0 {
        return Err(EcgError::InvalidParameter(
            "merge tolerance must be > 0".into(),
        ));
    }
    let tol = ((tolerance_s * fs).round() as usize).max(1);

    // (sample, detector rank, weight) sorted by sample then detector so the
    // result is independent of the order peak sets are supplied in.
    let mut candidates: Vec<(usize, u8, f64)> = Vec::new();
    for set in peaksets {
        for &p in &set.peaks {
            candidates.push((p, set.detector_id.rank(), set.weight_at(p)));
        }
    }
    if candidates.is_empty() {
        return Ok(Vec::new());
    }
    candidates.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

    let mut merged = Vec::new();
    let mut start = 0usize;
    for i in 1..=candidates.len() {
        let boundary = i == candidates.len() || candidates[i].0 - candidates[i - 1].0 > tol;
        if !boundary {
            continue;
        }
        let cluster = &candidates[start..i];
        start = i;

        // One vote per detector: its strongest candidate in the cluster.
        let mut per_detector: Vec<(u8, usize, f64)> = Vec::new();
        for &(sample, rank, weight) in cluster {
            match per_detector.iter_mut().find(|(r, _, _)| *r == rank) {
                Some(entry) => {
                    if weight > entry.2 {
                        entry.1 = sample;
                        entry.2 = weight;
                    }
                }
                None => per_detector.push((rank, sample, weight)),
            }
        }
        let center = cluster[cluster.len() / 2].0;
        let mut vote: f64 = per_detector.iter().map(|(_, _, w)| w).sum();
        let mut total: f64 = peaksets.iter().map(|s| s.weight_at(center)).sum();
        if total <= 0.0 {
            // All-zero quality: fall back to an unweighted majority.
            vote = per_detector.len() as f64;
            total = peaksets.len() as f64;
            per_detector.iter_mut().for_each(|e| e.2 = 1.0);
        }
        if vote + 1e-12 < 0.5 * total {
            continue;
        }

        merged.push(weighted_median(&per_detector));
    }
    Ok(merged)
}

fn weighted_median(entries: &[(u8, usize, f64)]) -> usize {
    let mut samples: Vec<(usize, f64)> = entries.iter().map(|&(_, s, w)| (s, w)).collect();
    samples.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let total: f64 = samples.iter().map(|(_, w)| w).sum();
    if total <= 0.0 {
        return samples[(samples.len() - 1) / 2].0;
    }
    let mut acc = 0.0;
    for (s, w) in &samples {
        acc += w;
        if acc + 1e-12 >= total / 2.0 {
            return *s;
        }
    }
    samples.last().unwrap().0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rpeak::DetectorId;

    fn set(id: DetectorId, peaks: Vec<usize>, w: f64) -> PeakSet {
        PeakSet::uniform(id, peaks, w)
    }

    #[test]
    fn identical_lists_merge_to_themselves() {
        let peaks = vec![100, 500, 900, 1300];
        let sets = vec![
            set(DetectorId::PanTompkins, peaks.clone(), 1.0),
            set(DetectorId::Cwt, peaks.clone(), 1.0),
            set(DetectorId::AdaptiveThreshold, peaks.clone(), 1.0),
        ];
        assert_eq!(ensemble_merge(&sets, 360.0, 0.05).unwrap(), peaks);
    }

    #[test]
    fn near_agreement_within_tolerance_emits_single_peak() {
        // fs=360, tolerance 0.05 s = 18 samples: 1000, 1000, 1010 cluster together.
        let sets = vec![
            set(DetectorId::PanTompkins, vec![1000], 1.0),
            set(DetectorId::Cwt, vec![1000], 1.0),
            set(DetectorId::AdaptiveThreshold, vec![1010], 1.0),
        ];
        let merged = ensemble_merge(&sets, 360.0, 0.05).unwrap();
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0], 1000); // weighted median of {1000,1000,1010}
    }

    #[test]
    fn lone_low_weight_detector_is_rejected() {
        // Weight 0.1 against a total of 1.0: vote 0.1 < 0.5.
        let sets = vec![
            set(DetectorId::PanTompkins, vec![], 0.45),
            set(DetectorId::Cwt, vec![], 0.45),
            set(DetectorId::AdaptiveThreshold, vec![2000], 0.1),
        ];
        assert!(ensemble_merge(&sets, 360.0, 0.05).unwrap().is_empty());
    }

    #[test]
    fn all_empty_detectors_merge_to_empty() {
        let sets = vec![
            set(DetectorId::PanTompkins, vec![], 1.0),
            set(DetectorId::Cwt, vec![], 1.0),
            set(DetectorId::AdaptiveThreshold, vec![], 1.0),
        ];
        assert!(ensemble_merge(&sets, 360.0, 0.05).unwrap().is_empty());
    }

    #[test]
    fn merge_is_permutation_invariant_and_sorted() {
        let a = set(DetectorId::PanTompkins, vec![100, 520, 905], 2.0);
        let b = set(DetectorId::Cwt, vec![102, 510, 900, 1400], 1.0);
        let c = set(DetectorId::AdaptiveThreshold, vec![99, 515], 1.5);
        let fwd = ensemble_merge(&[a.clone(), b.clone(), c.clone()], 360.0, 0.05).unwrap();
        let rev = ensemble_merge(&[c, b, a], 360.0, 0.05).unwrap();
        assert_eq!(fwd, rev);
        let tol = (0.05 * 360.0) as usize;
        for w in fwd.windows(2) {
            assert!(w[1] - w[0] >= tol);
        }
    }

    #[test]
    fn two_of_three_majority_carries() {
        let sets = vec![
            set(DetectorId::PanTompkins, vec![1000], 1.0),
            set(DetectorId::Cwt, vec![1005], 1.0),
            set(DetectorId::AdaptiveThreshold, vec![], 1.0),
        ];
        let merged = ensemble_merge(&sets, 360.0, 0.05).unwrap();
        assert_eq!(merged.len(), 1);
    }
}
