//! Per-channel frequency-domain features from the one-sided power spectrum.

use super::time_domain::Feature;
use crate::dsp::one_sided_power;

/// Band powers (fractions of non-DC power over 0-5, 5-15 and 15-40 Hz),
/// spectral entropy in nats, dominant frequency and raw total power.
/// Registry order: low_band_0_5Hz, mid_band_5_15Hz, high_band_15_40Hz,
/// spec_entropy, dominant_freq, total_power.
pub fn frequency_domain_features(x: &[f64], fs: f64) -> Vec<Feature> {
    if x.len() < 64 {
        return vec![(0.0, true); 6];
    }
    let (power, df) = one_sided_power(x, fs);
    let total: f64 = power[1..].iter().sum();
    if total <= 1e-12 * (power[0] + total) {
        return vec![(0.0, true); 6];
    }

    let band = |lo: f64, hi: f64| -> f64 {
        power
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(k, _)| {
                let f = *k as f64 * df;
                f >= lo && f < hi
            })
            .map(|(_, p)| p)
            .sum::<f64>()
            / total
    };
    let low = band(0.0, 5.0);
    let mid = band(5.0, 15.0);
    let high = band(15.0, 40.0);

    let spec_entropy: f64 = power[1..]
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| {
            let q = p / total;
            -q * q.ln()
        })
        .sum();

    let dominant_bin = power
        .iter()
        .enumerate()
        .skip(1)
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(k, _)| k)
        .unwrap_or(1);
    let dominant_freq = dominant_bin as f64 * df;

    vec![
        (low, false),
        (mid, false),
        (high, false),
        (spec_entropy, false),
        (dominant_freq, false),
        (total, false),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;
    use std::f64::consts::PI;

    #[test]
    fn pure_mid_band_tone() {
        let fs = 360.0;
        let x: Vec<f64> = (0..360)
            .map(|i| (2.0 * PI * 10.0 * i as f64 / fs).sin())
            .collect();
        let f = frequency_domain_features(&x, fs);
        assert!(f[1].0 > 0.95, "mid band {}", f[1].0);
        assert!(f[0].0 < 0.05 && f[2].0 < 0.05);
        assert!((f[4].0 - 10.0).abs() <= fs / 360.0 + 1e-9);
    }

    #[test]
    fn bands_partition_unity() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let fs = 360.0;
        let x: Vec<f64> = (0..324).map(|_| rng.random_range(-1.0..1.0)).collect();
        let f = frequency_domain_features(&x, fs);
        let (power, df) = one_sided_power(&x, fs);
        let total: f64 = power[1..].iter().sum();
        let residual: f64 = power
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(k, _)| *k as f64 * df >= 40.0)
            .map(|(_, p)| p)
            .sum::<f64>()
            / total;
        assert!((f[0].0 + f[1].0 + f[2].0 + residual - 1.0).abs() < 1e-9);
    }

    #[test]
    fn white_noise_entropy_is_near_flat_maximum() {
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        let fs = 360.0;
        let n = 1024;
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let f = frequency_domain_features(&x, fs);
        let n_bins = (n / 2) as f64;
        assert!(
            f[3].0 > n_bins.ln() - 0.5,
            "entropy {} vs flat bound {}",
            f[3].0,
            n_bins.ln()
        );
    }

    #[test]
    fn zero_energy_segment_is_flagged() {
        let f = frequency_domain_features(&[0.25; 128], 360.0);
        assert!(f.iter().all(|&(v, m)| v == 0.0 && m));
    }
}
