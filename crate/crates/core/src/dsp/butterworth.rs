//! Butterworth bandpass design (bilinear transform, second-order sections)
//! and zero-phase forward-backward filtering.

use crate::error::{EcgError, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// One normalized biquad: a0 == 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

/// Cascade of second-order sections.
#[derive(Debug, Clone, PartialEq)]
pub struct BiquadCascade {
    pub sections: Vec<Biquad>,
}

impl BiquadCascade {
    /// Pass-through cascade.
    pub fn identity() -> Self {
        BiquadCascade {
            sections: vec![Biquad {
                b0: 1.0,
                b1: 0.0,
                b2: 0.0,
                a1: 0.0,
                a2: 0.0,
            }],
        }
    }

    /// Total IIR order (2 per section).
    pub fn order(&self) -> usize {
        2 * self.sections.len()
    }

    /// Pole moduli of every section.
    pub fn pole_moduli(&self) -> Vec<f64> {
        self.sections
            .iter()
            .flat_map(|s| {
                let disc = Complex64::new(s.a1 * s.a1 - 4.0 * s.a2, 0.0).sqrt();
                let p1 = (-s.a1 + disc.re) * 0.5;
                let q1 = disc.im * 0.5;
                let p2 = (-s.a1 - disc.re) * 0.5;
                let q2 = -disc.im * 0.5;
                [
                    Complex64::new(p1, q1).norm(),
                    Complex64::new(p2, q2).norm(),
                ]
            })
            .collect()
    }

    pub fn is_stable(&self) -> bool {
        self.pole_moduli().iter().all(|&m| m < 1.0)
    }

    /// |H(e^{j 2 pi f / fs})| at one frequency.
    pub fn magnitude_at(&self, freq_hz: f64, fs: f64) -> f64 {
        let w = 2.0 * PI * freq_hz / fs;
        let z1 = Complex64::from_polar(1.0, -w);
        let z2 = z1 * z1;
        let mut h = Complex64::new(1.0, 0.0);
        for s in &self.sections {
            let num = Complex64::new(s.b0, 0.0) + z1 * s.b1 + z2 * s.b2;
            let den = Complex64::new(1.0, 0.0) + z1 * s.a1 + z2 * s.a2;
            h *= num / den;
        }
        h.norm()
    }

    /// Magnitude response sampled on a frequency grid, as `(freq_hz, magnitude)`.
    pub fn frequency_response(&self, fs: f64, n_points: usize) -> Vec<(f64, f64)> {
        (0..n_points)
            .map(|i| {
                let f = 0.5 * fs * i as f64 / (n_points - 1).max(1) as f64;
                (f, self.magnitude_at(f, fs))
            })
            .collect()
    }
}

/// Design an order `2n` digital Butterworth bandpass as `n` biquads from an
/// order-`n` analog lowpass prototype: prewarp band edges, lowpass->bandpass
/// transform, bilinear map, then pair conjugate poles into sections.
pub fn design_butterworth_bandpass(
    order: usize,
    f_low: f64,
    f_high: f64,
    fs: f64,
) -> Result<BiquadCascade> {
    if ![2usize, 4, 6, 8].contains(&order) {
        return Err(EcgError::InvalidParameter(format!(
            "bandpass prototype order must be one of 2/4/6/8, got {order}"
        )));
    }
    if !(0.0 < f_low && f_low < f_high && f_high < fs / 2.0) {
        return Err(EcgError::InvalidParameter(format!(
            "band edges must satisfy 0 < {f_low} < {f_high} < {}",
            fs / 2.0
        )));
    }

    // Prewarped analog edges (rad/s) so the bilinear map lands them exactly.
    let fs2 = 2.0 * fs;
    let w1 = fs2 * (PI * f_low / fs).tan();
    let w2 = fs2 * (PI * f_high / fs).tan();
    let bw = w2 - w1;
    let w0 = (w1 * w2).sqrt();

    // Analog Butterworth lowpass prototype poles on the unit circle.
    let proto: Vec<Complex64> = (1..=order)
        .map(|k| {
            let theta = PI * (2 * k + order - 1) as f64 / (2 * order) as f64;
            Complex64::from_polar(1.0, theta)
        })
        .collect();

    // Lowpass -> bandpass: each prototype pole splits into two.
    let mut analog_poles = Vec::with_capacity(2 * order);
    for p in proto {
        let q = p * (bw / 2.0);
        let disc = (q * q - Complex64::new(w0 * w0, 0.0)).sqrt();
        analog_poles.push(q + disc);
        analog_poles.push(q - disc);
    }
    // Gain: prototype k=1 picks up bw^order from the transform.
    let k_analog = bw.powi(order as i32);

    // Bilinear transform. Analog zeros are `order` copies of s=0, so the
    // numerator product over zeros is fs2^order.
    let mut digital_poles = Vec::with_capacity(2 * order);
    let mut den_prod = Complex64::new(1.0, 0.0);
    for &p in &analog_poles {
        digital_poles.push((Complex64::new(fs2, 0.0) + p) / (Complex64::new(fs2, 0.0) - p));
        den_prod *= Complex64::new(fs2, 0.0) - p;
    }
    let k_digital = k_analog * (Complex64::new(fs2.powi(order as i32), 0.0) / den_prod).re;

    // Group the 2*order digital poles into conjugate pairs.
    let pairs = pair_conjugates(&digital_poles)?;

    // Digital zeros: `order` at z=+1 and `order` at z=-1, one of each per
    // section, so every numerator is g * (1, 0, -1).
    let n_sections = pairs.len();
    let g = k_digital.abs().powf(1.0 / n_sections as f64);
    let mut sections = Vec::with_capacity(n_sections);
    for (i, (p1, p2)) in pairs.into_iter().enumerate() {
        let a1 = -(p1 + p2).re;
        let a2 = (p1 * p2).re;
        let sign = if i == 0 && k_digital < 0.0 { -1.0 } else { 1.0 };
        sections.push(Biquad {
            b0: sign * g,
            b1: 0.0,
            b2: -sign * g,
            a1,
            a2,
        });
    }

    let cascade = BiquadCascade { sections };
    if !cascade.is_stable() {
        return Err(EcgError::InvalidParameter(
            "designed cascade has poles on or outside the unit circle".into(),
        ));
    }
    Ok(cascade)
}

fn pair_conjugates(poles: &[Complex64]) -> Result<Vec<(Complex64, Complex64)>> {
    const TOL: f64 = 1e-9;
    let mut upper: Vec<Complex64> = poles.iter().copied().filter(|p| p.im > TOL).collect();
    let mut lower: Vec<Complex64> = poles.iter().copied().filter(|p| p.im < -TOL).collect();
    let mut real: Vec<Complex64> = poles
        .iter()
        .copied()
        .filter(|p| p.im.abs() <= TOL)
        .collect();
    upper.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    real.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());

    let mut pairs = Vec::new();
    for p in upper {
        let conj = p.conj();
        let idx = lower
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (**a - conj).norm().partial_cmp(&(**b - conj).norm()).unwrap()
            })
            .map(|(i, _)| i)
            .ok_or_else(|| {
                EcgError::InvalidParameter("unmatched complex pole in design".into())
            })?;
        pairs.push((p, lower.swap_remove(idx)));
    }
    if !lower.is_empty() || real.len() % 2 != 0 {
        return Err(EcgError::InvalidParameter(
            "pole set is not closed under conjugation".into(),
        ));
    }
    for chunk in real.chunks(2) {
        pairs.push((chunk[0], chunk[1]));
    }
    Ok(pairs)
}

/// Single-pass cascade filter with per-section initial state (direct form II
/// transposed). `zi` holds two states per section.
fn sosfilt(cascade: &BiquadCascade, x: &[f64], zi: Option<&[f64]>) -> Vec<f64> {
    let n_sec = cascade.sections.len();
    let mut state = match zi {
        Some(z) => z.to_vec(),
        None => vec![0.0; 2 * n_sec],
    };
    let mut y = x.to_vec();
    for (si, s) in cascade.sections.iter().enumerate() {
        let (mut z1, mut z2) = (state[2 * si], state[2 * si + 1]);
        for v in y.iter_mut() {
            let xn = *v;
            let yn = s.b0 * xn + z1;
            z1 = s.b1 * xn - s.a1 * yn + z2;
            z2 = s.b2 * xn - s.a2 * yn;
            *v = yn;
        }
        state[2 * si] = z1;
        state[2 * si + 1] = z2;
    }
    y
}

/// Steady-state initial conditions for a unit-step input, cascaded so each
/// section sees the DC gain of everything upstream.
fn step_steady_state(cascade: &BiquadCascade) -> Vec<f64> {
    let mut zi = Vec::with_capacity(2 * cascade.sections.len());
    let mut dc_in = 1.0;
    for s in &cascade.sections {
        let den = 1.0 + s.a1 + s.a2;
        let y_ss = if den.abs() > 1e-300 {
            (s.b0 + s.b1 + s.b2) / den
        } else {
            0.0
        };
        zi.push((y_ss - s.b0) * dc_in);
        zi.push((s.b2 - s.a2 * y_ss) * dc_in);
        dc_in *= y_ss;
    }
    zi
}

/// Zero-phase filtering: forward pass, reverse, second pass, reverse.
///
/// Edges are extended by odd reflection of length 3x the cascade order and
/// each pass starts from step-matched initial conditions, which suppresses
/// startup transients. The effective magnitude response is |H|^2.
pub fn filtfilt(cascade: &BiquadCascade, x: &[f64]) -> Result<Vec<f64>> {
    let pad = 3 * cascade.order();
    if x.len() <= pad {
        return Err(EcgError::SignalTooShort {
            need: pad + 1,
            got: x.len(),
        });
    }
    let n = x.len();
    let mut ext = Vec::with_capacity(n + 2 * pad);
    for i in 0..pad {
        ext.push(2.0 * x[0] - x[pad - i]);
    }
    ext.extend_from_slice(x);
    for i in 0..pad {
        ext.push(2.0 * x[n - 1] - x[n - 2 - i]);
    }

    let zi = step_steady_state(cascade);
    let scaled: Vec<f64> = zi.iter().map(|z| z * ext[0]).collect();
    let mut y = sosfilt(cascade, &ext, Some(&scaled));
    y.reverse();
    let scaled: Vec<f64> = zi.iter().map(|z| z * y[0]).collect();
    let mut y = sosfilt(cascade, &y, Some(&scaled));
    y.reverse();
    Ok(y[pad..pad + n].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sine(freq: f64, fs: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| (2.0 * PI * freq * i as f64 / fs).sin())
            .collect()
    }

    fn rms(x: &[f64]) -> f64 {
        (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
    }

    #[test]
    fn ecg_band_design_has_four_sections_and_flat_passband() {
        let c = design_butterworth_bandpass(4, 0.5, 40.0, 360.0).unwrap();
        assert_eq!(c.sections.len(), 4);
        let peak = (1..400)
            .map(|i| c.magnitude_at(i as f64 * 0.1, 360.0))
            .fold(0.0f64, f64::max);
        let at20 = c.magnitude_at(20.0, 360.0);
        assert!(at20 / peak >= 0.99 && at20 / peak <= 1.0, "ratio {}", at20 / peak);
    }

    #[test]
    fn dc_is_rejected() {
        let c = design_butterworth_bandpass(4, 0.5, 40.0, 360.0).unwrap();
        assert!(c.magnitude_at(0.0, 360.0) < 1e-3);
    }

    #[test]
    fn all_poles_inside_unit_circle() {
        for order in [2usize, 4, 6, 8] {
            let c = design_butterworth_bandpass(order, 0.5, 40.0, 360.0).unwrap();
            assert!(c.pole_moduli().iter().all(|&m| m < 1.0), "order {order}");
        }
    }

    #[test]
    fn band_edges_out_of_range_rejected() {
        assert!(design_butterworth_bandpass(4, 0.0, 40.0, 360.0).is_err());
        assert!(design_butterworth_bandpass(4, 41.0, 40.0, 360.0).is_err());
        assert!(design_butterworth_bandpass(4, 0.5, 200.0, 360.0).is_err());
        assert!(design_butterworth_bandpass(3, 0.5, 40.0, 360.0).is_err());
    }

    #[test]
    fn filtfilt_identity_is_identity() {
        let x = sine(3.0, 100.0, 256);
        let y = filtfilt(&BiquadCascade::identity(), &x).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert_relative_eq!(a, b, max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn filtfilt_is_zero_phase_on_passband_tone() {
        let fs = 360.0;
        let c = design_butterworth_bandpass(4, 0.5, 40.0, fs).unwrap();
        let x = sine(20.0, fs, 4 * 360);
        let y = filtfilt(&c, &x).unwrap();
        assert_eq!(y.len(), x.len());
        // Cross-correlation argmax over lags -10..=10 must be at 0.
        let center = 2 * 360;
        let best = (-10i64..=10)
            .max_by(|&l1, &l2| {
                let c1: f64 = (0..360)
                    .map(|i| x[center + i] * y[(center as i64 + i as i64 + l1) as usize])
                    .sum();
                let c2: f64 = (0..360)
                    .map(|i| x[center + i] * y[(center as i64 + i as i64 + l2) as usize])
                    .sum();
                c1.partial_cmp(&c2).unwrap()
            })
            .unwrap();
        assert_eq!(best, 0);
    }

    #[test]
    fn baseline_wander_attenuated_by_40_db() {
        let fs = 360.0;
        let c = design_butterworth_bandpass(4, 0.5, 40.0, fs).unwrap();
        let x = sine(0.1, fs, (60.0 * fs) as usize);
        let y = filtfilt(&c, &x).unwrap();
        let ratio = rms(&y) / rms(&x);
        assert!(ratio < 0.01, "attenuation only {:.2} dB", -20.0 * ratio.log10());
    }

    #[test]
    fn too_short_signal_is_an_error() {
        let c = design_butterworth_bandpass(4, 0.5, 40.0, 360.0).unwrap();
        assert!(filtfilt(&c, &[0.0; 24]).is_err());
    }
}
