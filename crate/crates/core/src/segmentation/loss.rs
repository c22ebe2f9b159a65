//! Composite segmentation loss: weighted entropy, band-SNR and energy-ratio
//! terms plus a quadratic length penalty.

use crate::dsp::one_sided_power;
use crate::error::{EcgError, Result};

/// Term weights; the defaults are entropy 0.5, SNR 0.3, energy ratio 0.2.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LossWeights {
    pub entropy: f64,
    pub snr: f64,
    pub energy: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        LossWeights {
            entropy: 0.5,
            snr: 0.3,
            energy: 0.2,
        }
    }
}

/// Decomposed loss value for one candidate window.
#[derive(Debug, Clone, Copy)]
pub struct SegmentLoss {
    /// Shannon entropy of the amplitude histogram, nats.
    pub entropy_term: f64,
    /// 1 - SNR with SNR = r/(1+r), r = band / out-of-band energy.
    pub snr_term: f64,
    /// 1 - E_r with E_r = band / total energy.
    pub energy_term: f64,
    /// Quadratic penalty outside the 250-1500 ms duration envelope.
    pub length_penalty: f64,
    pub total: f64,
    pub degenerate: bool,
}

const HISTOGRAM_BINS: usize = 32;
const MIN_DURATION_MS: f64 = 250.0;
const MAX_DURATION_MS: f64 = 1500.0;

/// Shannon entropy (nats) of a 32-bin equal-width amplitude histogram
/// spanning the segment's min-max range.
fn amplitude_entropy(x: &[f64]) -> f64 {
    let (min, max) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if !(max > min) {
        return 0.0;
    }
    let mut counts = [0usize; HISTOGRAM_BINS];
    let scale = HISTOGRAM_BINS as f64 / (max - min);
    for &v in x {
        let bin = (((v - min) * scale) as usize).min(HISTOGRAM_BINS - 1);
        counts[bin] += 1;
    }
    let n = x.len() as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Evaluate the composite loss of one candidate segment at the record rate.
pub fn composite_loss(
    x: &[f64],
    fs: f64,
    qrs_band: (f64, f64),
    weights: &LossWeights,
) -> Result<SegmentLoss> {
    if x.len() < 32 {
        return Err(EcgError::SignalTooShort {
            need: 32,
            got: x.len(),
        });
    }
    let duration_ms = x.len() as f64 / fs * 1000.0;
    let exceed = if duration_ms < MIN_DURATION_MS {
        (MIN_DURATION_MS - duration_ms) / 100.0
    } else if duration_ms > MAX_DURATION_MS {
        (duration_ms - MAX_DURATION_MS) / 100.0
    } else {
        0.0
    };
    let length_penalty = exceed * exceed;

    let (power, df) = one_sided_power(x, fs);
    // DC carries the arbitrary offset, not signal content. Constant segments
    // leave only FFT rounding noise outside DC, hence the relative guard.
    let total: f64 = power[1..].iter().sum();
    if total <= 1e-12 * (power[0] + total) {
        let total_loss = weights.snr + weights.energy + length_penalty;
        return Ok(SegmentLoss {
            entropy_term: 0.0,
            snr_term: 1.0,
            energy_term: 1.0,
            length_penalty,
            total: total_loss,
            degenerate: true,
        });
    }
    let band: f64 = power
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(k, _)| {
            let f = *k as f64 * df;
            f >= qrs_band.0 && f <= qrs_band.1
        })
        .map(|(_, p)| p)
        .sum();
    let out = total - band;
    let snr = if out <= 0.0 {
        1.0
    } else {
        let r = band / out;
        r / (1.0 + r)
    };
    let e_r = band / total;
    let entropy = amplitude_entropy(x);

    let total_loss = weights.entropy * entropy
        + weights.snr * (1.0 - snr)
        + weights.energy * (1.0 - e_r)
        + length_penalty;
    Ok(SegmentLoss {
        entropy_term: entropy,
        snr_term: 1.0 - snr,
        energy_term: 1.0 - e_r,
        length_penalty,
        total: total_loss,
        degenerate: false,
    })
}
