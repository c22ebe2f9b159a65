//! Heart-rate-variability metrics over RR-interval sequences.

use crate::dsp::welch_psd;

/// Time-domain HRV of an RR window (seconds in, millisecond stats out):
/// SDNN is the unbiased sample std, pNN50 the fraction of successive
/// differences above 50 ms. `None` when fewer than two intervals.
pub fn hrv_time_domain(rr: &[f64]) -> Option<(f64, f64)> {
    if rr.len() < 2 {
        return None;
    }
    let ms: Vec<f64> = rr.iter().map(|v| v * 1000.0).collect();
    let mean = ms.iter().sum::<f64>() / ms.len() as f64;
    let sdnn = (ms.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (ms.len() - 1) as f64).sqrt();
    let diffs: Vec<f64> = ms.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let pnn50 = diffs.iter().filter(|&&d| d > 50.0).count() as f64 / diffs.len() as f64;
    Some((sdnn, pnn50))
}

/// Root mean square of successive differences, ms.
pub fn rmssd(rr: &[f64]) -> Option<f64> {
    if rr.len() < 2 {
        return None;
    }
    let sq: f64 = rr
        .windows(2)
        .map(|w| ((w[1] - w[0]) * 1000.0).powi(2))
        .sum::<f64>()
        / (rr.len() - 1) as f64;
    Some(sq.sqrt())
}

/// Tachogram resampling rate for spectral HRV.
const TACHOGRAM_FS: f64 = 4.0;
const LF_BAND: (f64, f64) = (0.04, 0.15);
const HF_BAND: (f64, f64) = (0.15, 0.40);

/// LF/HF ratio via Welch PSD of the 4 Hz-interpolated tachogram.
/// Returns `(ratio, degenerate)`: records shorter than 60 s or with
/// degenerate spectra yield `None`; constant RR yields `(0.0, true)`.
pub fn hrv_lf_hf(rr: &[f64]) -> Option<(f64, bool)> {
    let total_s: f64 = rr.iter().sum();
    if rr.len() < 2 || total_s < 60.0 {
        return None;
    }
    // Linear interpolation of (t_i, rr_i) onto the 4 Hz grid.
    let times: Vec<f64> = rr
        .iter()
        .scan(0.0, |acc, &v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    let t0 = times[0];
    let t1 = *times.last().unwrap();
    let n_grid = ((t1 - t0) * TACHOGRAM_FS).floor() as usize;
    if n_grid < 32 {
        return None;
    }
    let mut grid = Vec::with_capacity(n_grid);
    let mut seg = 0usize;
    for i in 0..n_grid {
        let t = t0 + i as f64 / TACHOGRAM_FS;
        while seg + 1 < times.len() && times[seg + 1] < t {
            seg += 1;
        }
        let v = if seg + 1 >= times.len() {
            rr[rr.len() - 1]
        } else {
            let (ta, tb) = (times[seg], times[seg + 1]);
            let (va, vb) = (rr[seg], rr[seg + 1]);
            if tb > ta {
                va + (vb - va) * ((t - ta) / (tb - ta)).clamp(0.0, 1.0)
            } else {
                va
            }
        };
        grid.push(v);
    }

    let window = 256.min(grid.len());
    let psd = welch_psd(&grid, TACHOGRAM_FS, window, 0.5).ok()?;
    let lf = psd.band_power(LF_BAND.0, LF_BAND.1);
    let hf = psd.band_power(HF_BAND.0, HF_BAND.1);
    let total = psd.band_power(0.0, TACHOGRAM_FS / 2.0 + 1.0);
    let guard = f64::EPSILON * total.max(f64::MIN_POSITIVE);
    if hf <= guard {
        if lf <= guard {
            return Some((0.0, true)); // flat tachogram
        }
        return Some((lf / guard, false));
    }
    Some((lf / hf, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_rr_has_zero_variability() {
        let rr = vec![0.8; 20];
        let (sdnn, pnn50) = hrv_time_domain(&rr).unwrap();
        assert_eq!(sdnn, 0.0);
        assert_eq!(pnn50, 0.0);
    }

    #[test]
    fn alternating_rr_forces_pnn50_to_one() {
        let rr: Vec<f64> = (0..30).map(|i| if i % 2 == 0 { 0.7 } else { 0.9 }).collect();
        let (_, pnn50) = hrv_time_domain(&rr).unwrap();
        assert_eq!(pnn50, 1.0);
    }

    #[test]
    fn hand_computed_example() {
        // RR = [800, 810, 790, 860] ms:
        //   mean = 815, squared devs = 225+25+625+2025 = 2900,
        //   sdnn = sqrt(2900/3) = 31.0913...
        //   diffs = |10|, |20|, |70| -> pnn50 = 1/3
        let rr = vec![0.800, 0.810, 0.790, 0.860];
        let (sdnn, pnn50) = hrv_time_domain(&rr).unwrap();
        assert!((sdnn - (2900.0f64 / 3.0).sqrt()).abs() < 1e-9);
        assert!((pnn50 - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_interval_is_missing() {
        assert!(hrv_time_domain(&[0.8]).is_none());
        assert!(rmssd(&[0.8]).is_none());
    }

    fn modulated_rr(mod_freq: f64, seconds: f64) -> Vec<f64> {
        // Mean 0.8 s RR, sinusoidally modulated at mod_freq.
        let mut rr = Vec::new();
        let mut t = 0.0;
        while t < seconds {
            let v = 0.8 + 0.05 * (2.0 * std::f64::consts::PI * mod_freq * t).sin();
            rr.push(v);
            t += v;
        }
        rr
    }

    #[test]
    fn lf_modulation_dominates() {
        let rr = modulated_rr(0.1, 300.0);
        let (ratio, flat) = hrv_lf_hf(&rr).unwrap();
        assert!(!flat);
        assert!(ratio >= 5.0, "ratio {ratio}");
    }

    #[test]
    fn hf_modulation_dominates() {
        let rr = modulated_rr(0.3, 300.0);
        let (ratio, flat) = hrv_lf_hf(&rr).unwrap();
        assert!(!flat);
        assert!(ratio <= 0.2, "ratio {ratio}");
    }

    #[test]
    fn constant_rr_is_flagged_zero() {
        let rr = vec![0.8; 120];
        let (ratio, flat) = hrv_lf_hf(&rr).unwrap();
        assert_eq!(ratio, 0.0);
        assert!(flat);
    }

    #[test]
    fn short_record_is_missing() {
        assert!(hrv_lf_hf(&vec![0.8; 30]).is_none());
    }
}
