//! Polyphase rational-rate resampling with a Kaiser-windowed sinc
//! anti-aliasing filter.

use crate::error::{EcgError, Result};

/// Zeroth-order modified Bessel function, power series.
fn bessel_i0(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let half_sq = (x / 2.0) * (x / 2.0);
    for k in 1..64 {
        term *= half_sq / (k as f64 * k as f64);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

fn kaiser(n: usize, beta: f64) -> Vec<f64> {
    let denom = bessel_i0(beta);
    let m = (n - 1) as f64;
    (0..n)
        .map(|i| {
            let r = 2.0 * i as f64 / m - 1.0;
            bessel_i0(beta * (1.0 - r * r).max(0.0).sqrt()) / denom
        })
        .collect()
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (std::f64::consts::PI * x).sin() / (std::f64::consts::PI * x)
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Core upsample-filter-downsample with factors `l`/`m`, producing exactly
/// `out_len` samples. Edges are zero-extended.
fn resample_rational(x: &[f64], l: usize, m: usize, out_len: usize) -> Vec<f64> {
    if l == m {
        let mut y = x.to_vec();
        y.resize(out_len, *x.last().unwrap_or(&0.0));
        return y;
    }
    let max_lm = l.max(m);
    let half = 10 * max_lm;
    let taps = 2 * half + 1;
    let window = kaiser(taps, 5.0);
    // Cutoff at the tighter of the two Nyquist limits, gain L to undo the
    // zero-stuffing loss.
    let fc = 0.5 / max_lm as f64;
    let h: Vec<f64> = (0..taps)
        .map(|t| {
            let k = t as f64 - half as f64;
            2.0 * fc * l as f64 * sinc(2.0 * fc * k) * window[t]
        })
        .collect();

    let n = x.len() as i64;
    let (li, mi, halfi, tapsi) = (l as i64, m as i64, half as i64, taps as i64);
    (0..out_len as i64)
        .map(|i| {
            let p = i * mi + halfi;
            // h index t = p - s*l must lie in [0, taps)
            let s_min = (p - tapsi + 1).div_euclid(li) + i64::from((p - tapsi + 1).rem_euclid(li) != 0);
            let s_max = p.div_euclid(li);
            let mut acc = 0.0;
            for s in s_min.max(0)..=s_max.min(n - 1) {
                acc += h[(p - s * li) as usize] * x[s as usize];
            }
            acc
        })
        .collect()
}

/// Resample to an explicit output length (used for fixed-length beat windows).
pub fn resample_to_len(x: &[f64], target_len: usize) -> Result<Vec<f64>> {
    if x.is_empty() || target_len == 0 {
        return Err(EcgError::InvalidParameter(
            "resample requires non-empty input and output".into(),
        ));
    }
    if x.len() == target_len {
        return Ok(x.to_vec());
    }
    let g = gcd(target_len, x.len());
    Ok(resample_rational(x, target_len / g, x.len() / g, target_len))
}

/// Rate conversion: output length is `round(len * fs_out / fs_in)` and the
/// anti-aliasing cutoff sits at `min(fs_in, fs_out) / 2`.
pub fn resample_polyphase(x: &[f64], fs_in: f64, fs_out: f64) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(EcgError::InvalidParameter("empty input".into()));
    }
    if fs_in <= 0.0 || fs_out <= 0.0 {
        return Err(EcgError::InvalidParameter(
            "sampling rates must be positive".into(),
        ));
    }
    if (fs_in - fs_out).abs() < 1e-12 * fs_in {
        return Ok(x.to_vec());
    }
    let (l, m) = rationalize(fs_out / fs_in);
    let out_len = ((x.len() as f64 * fs_out / fs_in).round() as usize).max(1);
    Ok(resample_rational(x, l, m, out_len))
}

/// Continued-fraction rational approximation with bounded denominator.
fn rationalize(ratio: f64) -> (usize, usize) {
    let (mut best_n, mut best_d, mut best_err) = (1usize, 1usize, f64::MAX);
    for d in 1..=2048usize {
        let n = (ratio * d as f64).round().max(1.0) as usize;
        let err = (n as f64 / d as f64 - ratio).abs();
        if err < best_err {
            (best_n, best_d, best_err) = (n, d, err);
            if err < 1e-12 {
                break;
            }
        }
    }
    let g = gcd(best_n, best_d);
    (best_n / g, best_d / g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::dft_magnitudes;
    use std::f64::consts::PI;

    #[test]
    fn same_rate_is_identity() {
        let x: Vec<f64> = (0..100).map(|i| (i as f64).sin()).collect();
        assert_eq!(resample_polyphase(&x, 360.0, 360.0).unwrap(), x);
    }

    #[test]
    fn one_second_stays_one_second() {
        let x = vec![0.5; 257];
        let y = resample_polyphase(&x, 257.0, 360.0).unwrap();
        assert_eq!(y.len(), 360);
    }

    #[test]
    fn tone_frequency_preserved_across_257_to_360() {
        let fs_in = 257.0;
        let n = 257 * 4;
        let x: Vec<f64> = (0..n)
            .map(|i| (2.0 * PI * 5.0 * i as f64 / fs_in).sin())
            .collect();
        let y = resample_polyphase(&x, fs_in, 360.0).unwrap();
        let mags = dft_magnitudes(&y).unwrap();
        let half = y.len() / 2;
        let peak_bin = (1..half)
            .max_by(|&a, &b| mags[a].partial_cmp(&mags[b]).unwrap())
            .unwrap();
        let peak_freq = peak_bin as f64 * 360.0 / y.len() as f64;
        assert!((peak_freq - 5.0).abs() <= 0.1, "peak at {peak_freq} Hz");
    }

    #[test]
    fn amplitude_roughly_preserved() {
        let fs_in = 360.0;
        let x: Vec<f64> = (0..3600)
            .map(|i| (2.0 * PI * 8.0 * i as f64 / fs_in).sin())
            .collect();
        let y = resample_polyphase(&x, fs_in, 250.0).unwrap();
        let rms_in = (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt();
        let core = &y[100..y.len() - 100];
        let rms_out = (core.iter().map(|v| v * v).sum::<f64>() / core.len() as f64).sqrt();
        assert!((rms_out / rms_in - 1.0).abs() < 0.02, "rms ratio {}", rms_out / rms_in);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(resample_polyphase(&[], 360.0, 250.0).is_err());
    }

    #[test]
    fn to_len_hits_exact_target() {
        let x: Vec<f64> = (0..324).map(|i| (i as f64 * 0.1).sin()).collect();
        for target in [64usize, 324, 500, 123] {
            assert_eq!(resample_to_len(&x, target).unwrap().len(), target);
        }
    }
}
