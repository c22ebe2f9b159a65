//! Pan-Tompkins detector: bandpass, derivative, squaring, moving-window
//! integration, dual adaptive thresholds with search-back.

use super::{build_peakset, check_detector_input, is_flat, qrs_bandpass, refine_peaks};
use super::{DetectorId, PeakSet};
use crate::error::Result;

pub fn detect_pan_tompkins(x: &[f64], fs: f64) -> Result<PeakSet> {
    check_detector_input(x, fs)?;
    if is_flat(x) {
        log::warn!("pan-tompkins: flat signal, emitting no peaks");
        return Ok(PeakSet::uniform(DetectorId::PanTompkins, Vec::new(), 0.0));
    }
    let bp = qrs_bandpass(x, fs)?;

    // Five-point derivative, then squaring.
    let n = bp.len();
    let mut sq = vec![0.0; n];
    for i in 4..n {
        let d = (2.0 * bp[i] + bp[i - 1] - bp[i - 3] - 2.0 * bp[i - 4]) / 8.0;
        sq[i] = d * d;
    }

    // 150 ms moving-window integration.
    let w = ((0.150 * fs).round() as usize).max(1);
    let mut mwi = vec![0.0; n];
    let mut acc = 0.0;
    for i in 0..n {
        acc += sq[i];
        if i >= w {
            acc -= sq[i - w];
        }
        mwi[i] = acc / w as f64;
    }

    let candidates = local_maxima(&mwi);

    // Threshold initialization from the first two seconds.
    let init = (2.0 * fs) as usize;
    let init_max = mwi[..init.min(n)].iter().cloned().fold(0.0f64, f64::max);
    let init_mean = mwi[..init.min(n)].iter().sum::<f64>() / init.min(n) as f64;
    let mut spki = 0.25 * init_max;
    let mut npki = 0.5 * init_mean;

    let refractory = (0.2 * fs).round() as usize;
    let mut accepted: Vec<usize> = Vec::new();
    let mut rejected: Vec<usize> = Vec::new();
    let mut rr_history: Vec<usize> = Vec::new();

    let mut i = 0usize;
    while i < candidates.len() {
        let c = candidates[i];
        let peak = mwi[c];
        let thr1 = npki + 0.25 * (spki - npki);
        let since_last = accepted.last().map(|&l| c - l);

        if since_last.is_some_and(|d| d < refractory) {
            i += 1;
            continue;
        }
        if peak > thr1 {
            if let Some(&last) = accepted.last() {
                rr_history.push(c - last);
                if rr_history.len() > 8 {
                    rr_history.remove(0);
                }
            }
            accepted.push(c);
            spki = 0.125 * peak + 0.875 * spki;
        } else {
            rejected.push(c);
            npki = 0.125 * peak + 0.875 * npki;
            // Search-back: if the gap since the last QRS exceeds 1.66x the
            // running RR average, accept the best rejected candidate above
            // the lowered threshold.
            if let (Some(&last), false) = (accepted.last(), rr_history.is_empty()) {
                let rr_avg = rr_history.iter().sum::<usize>() as f64 / rr_history.len() as f64;
                if (c - last) as f64 > 1.66 * rr_avg {
                    let thr2 = 0.5 * thr1;
                    if let Some(&back) = rejected
                        .iter()
                        .filter(|&&r| r > last + refractory && r < c)
                        .max_by(|&&a, &&b| mwi[a].partial_cmp(&mwi[b]).unwrap())
                    {
                        if mwi[back] > thr2 {
                            rr_history.push(back - last);
                            if rr_history.len() > 8 {
                                rr_history.remove(0);
                            }
                            accepted.push(back);
                            accepted.sort_unstable();
                            spki = 0.25 * mwi[back] + 0.75 * spki;
                            rejected.retain(|&r| r > back);
                        }
                    }
                }
            }
        }
        i += 1;
    }

    // The MWI peak trails the R wave by up to the window width; search the
    // preceding window plus the +-50 ms refinement margin on |bp|.
    let coarse: Vec<usize> = accepted.iter().map(|&c| c.saturating_sub(w / 2)).collect();
    let peaks = refine_peaks(&bp, &coarse, fs);
    Ok(build_peakset(DetectorId::PanTompkins, peaks, &bp, fs))
}

fn local_maxima(x: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let n = x.len();
    let mut i = 1usize;
    while i + 1 < n {
        if x[i] > x[i - 1] && x[i] >= x[i + 1] {
            // plateau: skip to its end, keep the first index
            let mut j = i;
            while j + 1 < n && x[j + 1] == x[i] {
                j += 1;
            }
            if j + 1 >= n || x[j + 1] < x[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rpeak::testsig::{bump_train, count_near};

    #[test]
    fn sixty_second_train_yields_sixty_peaks() {
        let fs = 360.0;
        let x = bump_train(fs, 60.0, 1.0, |_| 1.0);
        let set = detect_pan_tompkins(&x, fs).unwrap();
        assert!(
            count_near(60, set.peaks.len(), 1),
            "found {} peaks",
            set.peaks.len()
        );
    }

    #[test]
    fn zero_signal_yields_empty_peaks() {
        let set = detect_pan_tompkins(&vec![0.0; 2000], 360.0).unwrap();
        assert!(set.peaks.is_empty());
        assert_eq!(set.sqi_weight, 0.0);
    }

    #[test]
    fn short_signal_is_an_error() {
        assert!(detect_pan_tompkins(&[0.0; 100], 360.0).is_err());
    }

    #[test]
    fn peaks_strictly_increasing_with_refractory_gap() {
        let fs = 360.0;
        let x = bump_train(fs, 30.0, 1.5, |_| 1.0);
        let set = detect_pan_tompkins(&x, fs).unwrap();
        let refractory = (0.2 * fs) as usize;
        for w in set.peaks.windows(2) {
            assert!(w[1] > w[0] && w[1] - w[0] >= refractory);
        }
    }
}
