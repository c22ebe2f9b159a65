//! Continuous wavelet transform with the Mexican-hat (Ricker) wavelet.

/// Ricker wavelet value at t, unit scale: (2 / (sqrt(3) pi^(1/4))) (1 - t^2) e^(-t^2/2).
fn ricker(t: f64) -> f64 {
    let norm = 2.0 / (3.0f64.sqrt() * std::f64::consts::PI.powf(0.25));
    norm * (1.0 - t * t) * (-0.5 * t * t).exp()
}

/// Sampled, L2-normalized kernel at the given scale (in samples).
pub fn mexican_hat_kernel(scale: f64) -> Vec<f64> {
    let half = (5.0 * scale).ceil() as i64;
    (-half..=half)
        .map(|k| ricker(k as f64 / scale) / scale.sqrt())
        .collect()
}

/// CWT coefficients: one row per scale, zero-lag (symmetric) alignment,
/// zero-padded edges. Scales are measured in samples.
pub fn cwt_mexican_hat(x: &[f64], scales: &[f64]) -> Vec<Vec<f64>> {
    scales
        .iter()
        .map(|&s| {
            let kernel = mexican_hat_kernel(s);
            let half = (kernel.len() / 2) as i64;
            let n = x.len() as i64;
            (0..n)
                .map(|i| {
                    let mut acc = 0.0;
                    let lo = (-half).max(-i);
                    let hi = half.min(n - 1 - i);
                    for k in lo..=hi {
                        acc += x[(i + k) as usize] * kernel[(k + half) as usize];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Sum of squared coefficients across scales, per sample.
pub fn cwt_energy_envelope(x: &[f64], scales: &[f64]) -> Vec<f64> {
    let rows = cwt_mexican_hat(x, scales);
    (0..x.len())
        .map(|i| rows.iter().map(|r| r[i] * r[i]).sum())
        .collect()
}
