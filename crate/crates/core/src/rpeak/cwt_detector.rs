//! CWT detector: Mexican-hat energy maximization over QRS scales.

use super::{build_peakset, check_detector_input, is_flat, qrs_bandpass, refine_peaks};
use super::{DetectorId, PeakSet};
use crate::dsp::cwt_energy_envelope;
use crate::error::Result;

/// QRS scales in samples, scaled from the 360 Hz reference set {4, 8, 16, 32}.
pub(crate) fn qrs_scales(fs: f64) -> Vec<f64> {
    [4.0, 8.0, 16.0, 32.0]
        .iter()
        .map(|s| (s * fs / 360.0).max(2.0))
        .collect()
}

pub fn detect_cwt(x: &[f64], fs: f64) -> Result<PeakSet> {
    check_detector_input(x, fs)?;
    if is_flat(x) {
        log::warn!("cwt detector: flat signal, emitting no peaks");
        return Ok(PeakSet::uniform(DetectorId::Cwt, Vec::new(), 0.0));
    }
    let env = cwt_energy_envelope(x, &qrs_scales(fs));
    let n = env.len() as f64;
    let mean = env.iter().sum::<f64>() / n;
    let std = (env.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
    let thr = mean + 2.0 * std;

    let lockout = (0.2 * fs).round() as usize;
    let mut coarse: Vec<usize> = Vec::new();
    for i in 1..env.len().saturating_sub(1) {
        if env[i] > thr && env[i] > env[i - 1] && env[i] >= env[i + 1] {
            match coarse.last() {
                Some(&prev) if i - prev < lockout => {
                    if env[i] > env[prev] {
                        *coarse.last_mut().unwrap() = i;
                    }
                }
                _ => coarse.push(i),
            }
        }
    }

    let bp = qrs_bandpass(x, fs)?;
    let peaks = refine_peaks(&bp, &coarse, fs);
    Ok(build_peakset(DetectorId::Cwt, peaks, &bp, fs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rpeak::detect_pan_tompkins;
    use crate::rpeak::testsig::{bump_train, count_near};

    #[test]
    fn sixty_second_train_yields_sixty_peaks() {
        let fs = 360.0;
        let x = bump_train(fs, 60.0, 1.0, |_| 1.0);
        let set = detect_cwt(&x, fs).unwrap();
        assert!(
            count_near(60, set.peaks.len(), 1),
            "found {} peaks",
            set.peaks.len()
        );
    }

    #[test]
    fn zero_signal_yields_empty_envelope() {
        let set = detect_cwt(&vec![0.0; 2000], 360.0).unwrap();
        assert!(set.peaks.is_empty());
    }

    #[test]
    fn agrees_with_pan_tompkins_on_clean_data() {
        let fs = 360.0;
        let x = bump_train(fs, 60.0, 1.2, |_| 1.0);
        let cwt = detect_cwt(&x, fs).unwrap().peaks;
        let pt = detect_pan_tompkins(&x, fs).unwrap().peaks;
        let tol = (0.075 * fs) as i64;
        let matched = cwt
            .iter()
            .filter(|&&c| pt.iter().any(|&p| (c as i64 - p as i64).abs() <= tol))
            .count();
        let disagreements = (cwt.len() - matched) + (pt.len() - matched);
        let total = cwt.len() + pt.len();
        assert!(
            (disagreements as f64) / (total as f64) < 0.05,
            "{disagreements} disagreements out of {total}"
        );
    }
}
