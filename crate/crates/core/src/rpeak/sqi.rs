//! Kurtosis-based signal quality index.

/// Excess kurtosis mapped to a non-negative weight: `max(0, m4/m2^2 - 3)`.
/// Gaussian noise scores near zero, spiky ECG scores high, zero-variance
/// segments score zero.
pub fn sqi_kurtosis(x: &[f64]) -> f64 {
    if x.len() < 4 {
        return 0.0;
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let m2 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    if m2 <= 0.0 {
        return 0.0;
    }
    let m4 = x.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    (m4 / (m2 * m2) - 3.0).max(0.0)
}
