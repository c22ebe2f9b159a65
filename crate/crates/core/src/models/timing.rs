//! Inference latency measurement: single-threaded, warmup excluded, median
//! over repeats.

use super::{predict, TrainedModel};
use crate::error::Result;
use std::time::Instant;

#[derive(Debug, Clone, Copy)]
pub struct LatencyProfile {
    /// Median batch wall time divided by batch rows, ms/sample.
    pub batched_ms_per_sample: f64,
    /// Median single-row latency, microseconds.
    pub single_row_us: f64,
    pub repeats: usize,
}

/// Measure both amortized and single-row latency. `repeats` is clamped to at
/// least 30; one warmup pass per mode is excluded from the medians.
pub fn time_inference(
    model: &TrainedModel,
    rows: &[&[f64]],
    repeats: usize,
) -> Result<LatencyProfile> {
    let repeats = repeats.max(30);
    let _ = predict(model, rows)?; // warmup

    let mut batch_ms = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        let preds = predict(model, rows)?;
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        std::hint::black_box(preds);
        batch_ms.push(elapsed / rows.len() as f64);
    }
    batch_ms.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let single = [rows[0]];
    let _ = predict(model, &single)?;
    let mut single_us = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        let preds = predict(model, &single)?;
        let elapsed = start.elapsed().as_secs_f64() * 1e6;
        std::hint::black_box(preds);
        single_us.push(elapsed);
    }
    single_us.sort_by(|a, b| a.partial_cmp(b).unwrap());

    Ok(LatencyProfile {
        batched_ms_per_sample: batch_ms[batch_ms.len() / 2],
        single_row_us: single_us[single_us.len() / 2],
        repeats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{LinearModel, ModelKind};

    #[test]
    fn latency_is_positive_and_finite() {
        let model = TrainedModel::Linear(LinearModel {
            kind: ModelKind::LinearSvc,
            classes: vec![0, 1, 2, 3, 4],
            weights: vec![vec![0.01; 202]; 5],
            intercepts: vec![0.0; 5],
            n_features: 202,
            converged: true,
        });
        let row = vec![0.5; 202];
        let rows: Vec<&[f64]> = (0..64).map(|_| row.as_slice()).collect();
        let profile = time_inference(&model, &rows, 30).unwrap();
        assert!(profile.batched_ms_per_sample > 0.0);
        assert!(profile.single_row_us > 0.0);
        assert!(profile.batched_ms_per_sample.is_finite());
    }
}
