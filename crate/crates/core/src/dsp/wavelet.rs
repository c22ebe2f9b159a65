//! Daubechies wavelet-packet decomposition over a periodized filter bank.

use crate::error::{EcgError, Result};

/// Daubechies analysis lowpass filters (sum = sqrt(2)). db1 and db2 are the
/// closed-form values; db4 is the standard 8-tap table.
fn daubechies_lowpass(order: usize) -> Result<Vec<f64>> {
    let sqrt2 = std::f64::consts::SQRT_2;
    match order {
        1 => Ok(vec![1.0 / sqrt2, 1.0 / sqrt2]),
        2 => {
            let s3 = 3.0f64.sqrt();
            Ok(vec![
                (1.0 + s3) / (4.0 * sqrt2),
                (3.0 + s3) / (4.0 * sqrt2),
                (3.0 - s3) / (4.0 * sqrt2),
                (1.0 - s3) / (4.0 * sqrt2),
            ])
        }
        4 => Ok(vec![
            0.23037781330885523,
            0.7148465705525415,
            0.6308807679295904,
            -0.02798376941698385,
            -0.18703481171888114,
            0.030841381835986965,
            0.032883011666982945,
            -0.010597401784997278,
        ]),
        other => Err(EcgError::InvalidParameter(format!(
            "unsupported Daubechies order {other} (supported: 1, 2, 4)"
        ))),
    }
}

fn quadrature_mirror(lo: &[f64]) -> Vec<f64> {
    let l = lo.len();
    (0..l)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * lo[l - 1 - k]
        })
        .collect()
}

/// One periodized analysis step: circular correlation with `filter`,
/// downsampled by two. Orthonormal for Daubechies filters when n is even.
fn analysis_step(x: &[f64], filter: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n / 2)
        .map(|i| {
            filter
                .iter()
                .enumerate()
                .map(|(k, &f)| f * x[(2 * i + k) % n])
                .sum()
        })
        .collect()
}

/// Full wavelet-packet tree to the requested depth; returns the 2^levels
/// leaf-node coefficient vectors in natural (lowpass-first) order.
pub fn wavelet_packet_leaves(
    x: &[f64],
    wavelet_order: usize,
    levels: usize,
) -> Result<Vec<Vec<f64>>> {
    let lo = daubechies_lowpass(wavelet_order)?;
    let need = lo.len() << levels;
    if x.len() < need {
        return Err(EcgError::SignalTooShort {
            need,
            got: x.len(),
        });
    }
    let hi = quadrature_mirror(&lo);

    // Zero-pad to a multiple of 2^levels so every split stays even; padding
    // does not change total energy under an orthogonal transform.
    let block = 1usize << levels;
    let padded_len = x.len().div_ceil(block) * block;
    let mut nodes = vec![{
        let mut v = x.to_vec();
        v.resize(padded_len, 0.0);
        v
    }];
    for _ in 0..levels {
        let mut next = Vec::with_capacity(nodes.len() * 2);
        for node in &nodes {
            next.push(analysis_step(node, &lo));
            next.push(analysis_step(node, &hi));
        }
        nodes = next;
    }
    Ok(nodes)
}

/// Leaf energies of the packet tree, normalized to sum to one. A zero signal
/// yields the defined all-zero vector (flagged by the caller).
pub fn wavelet_packet_energies(
    x: &[f64],
    wavelet_order: usize,
    levels: usize,
) -> Result<Vec<f64>> {
    let leaves = wavelet_packet_leaves(x, wavelet_order, levels)?;
    let mut energies: Vec<f64> = leaves
        .iter()
        .map(|leaf| leaf.iter().map(|c| c * c).sum())
        .collect();
    let total: f64 = energies.iter().sum();
    if total > 0.0 {
        for e in energies.iter_mut() {
            *e /= total;
        }
    }
    Ok(energies)
}
