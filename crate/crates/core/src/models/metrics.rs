//! Evaluation metrics, the efficiency score, and the evaluation report.

use super::{predict, TrainedModel};
use crate::error::Result;
use serde::{Deserialize, Serialize};

pub const EFFICIENCY_EPSILON: f64 = 1e-6;

/// Composite diagnostic-yield-per-resource score:
/// (0.6 F1 + 0.4 Acc) / (0.4 T_train_s + 0.4 T_infer_ms + 0.2 Size_kb + eps).
pub fn efficiency_score(
    f1: f64,
    acc: f64,
    train_s: f64,
    infer_ms_per_sample: f64,
    size_kb: f64,
) -> f64 {
    (0.6 * f1 + 0.4 * acc)
        / (0.4 * train_s + 0.4 * infer_ms_per_sample + 0.2 * size_kb + EFFICIENCY_EPSILON)
}

/// Support-weighted precision/recall/F1 plus per-class recall.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    pub accuracy: f64,
    pub precision_w: f64,
    pub recall_w: f64,
    pub f1_w: f64,
    /// Indexed by class id; `None` when the class is absent from the test set.
    pub per_class_recall: Vec<Option<f64>>,
    pub support: Vec<usize>,
}

/// Confusion-matrix metrics over dense class indices in `0..n_classes`.
pub fn classification_metrics(
    predictions: &[usize],
    truth: &[usize],
    n_classes: usize,
) -> ClassificationMetrics {
    assert_eq!(predictions.len(), truth.len());
    let n = truth.len();
    let mut confusion = vec![vec![0usize; n_classes]; n_classes];
    for (&p, &t) in predictions.iter().zip(truth) {
        confusion[t][p] += 1;
    }
    let support: Vec<usize> = (0..n_classes).map(|c| confusion[c].iter().sum()).collect();
    let correct: usize = (0..n_classes).map(|c| confusion[c][c]).sum();
    let accuracy = correct as f64 / n as f64;

    let mut precision_w = 0.0;
    let mut recall_w = 0.0;
    let mut f1_w = 0.0;
    let mut weighted_n = 0usize;
    let mut per_class_recall = vec![None; n_classes];
    for c in 0..n_classes {
        if support[c] == 0 {
            log::warn!("class {c} absent from the test set; excluded from weighted metrics");
            continue;
        }
        let tp = confusion[c][c] as f64;
        let fp: f64 = (0..n_classes)
            .filter(|&t| t != c)
            .map(|t| confusion[t][c] as f64)
            .sum();
        let precision = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
        let recall = tp / support[c] as f64;
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        per_class_recall[c] = Some(recall);
        precision_w += precision * support[c] as f64;
        recall_w += recall * support[c] as f64;
        f1_w += f1 * support[c] as f64;
        weighted_n += support[c];
    }
    let wn = weighted_n.max(1) as f64;
    ClassificationMetrics {
        accuracy,
        precision_w: precision_w / wn,
        recall_w: recall_w / wn,
        f1_w: f1_w / wn,
        per_class_recall,
        support,
    }
}

/// Full evaluation record, mirroring the resource-profile table columns.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub precision_w: f64,
    pub recall_w: f64,
    pub f1_w: f64,
    pub per_class_recall: Vec<Option<f64>>,
    pub train_time_s: f64,
    /// Batched-amortized inference latency.
    pub infer_time_ms_per_sample: f64,
    /// Single-row latency, microseconds.
    pub infer_single_row_us: f64,
    pub model_size_kb: f64,
    pub efficiency_score: f64,
    pub cv_mean: Option<f64>,
    pub cv_std: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
}

impl EvalReport {
    /// Row for the metrics table: acc, f1_weighted, train_s, infer_ms,
    /// size_kb, efficiency.
    pub fn metrics_row(&self) -> serde_json::Value {
        serde_json::json!({
            "acc": self.accuracy,
            "f1_weighted": self.f1_w,
            "train_s": self.train_time_s,
            "infer_ms": self.infer_time_ms_per_sample,
            "size_kb": self.model_size_kb,
            "efficiency": self.efficiency_score,
        })
    }
}

/// Timing inputs measured by the caller around training and inference.
#[derive(Debug, Clone, Copy, Default)]
pub struct Timings {
    pub train_time_s: f64,
    pub infer_time_ms_per_sample: f64,
    pub infer_single_row_us: f64,
    pub model_size_bytes: usize,
}

/// Score a model on a labeled test set and assemble the report.
pub fn evaluate(
    model: &TrainedModel,
    rows: &[&[f64]],
    truth: &[usize],
    n_classes: usize,
    timings: &Timings,
) -> Result<EvalReport> {
    let predictions = predict(model, rows)?;
    let m = classification_metrics(&predictions, truth, n_classes);
    let size_kb = timings.model_size_bytes as f64 / 1024.0;
    let eff = efficiency_score(
        m.f1_w,
        m.accuracy,
        timings.train_time_s,
        timings.infer_time_ms_per_sample,
        size_kb,
    );
    Ok(EvalReport {
        accuracy: m.accuracy,
        precision_w: m.precision_w,
        recall_w: m.recall_w,
        f1_w: m.f1_w,
        per_class_recall: m.per_class_recall,
        train_time_s: timings.train_time_s,
        infer_time_ms_per_sample: timings.infer_time_ms_per_sample,
        infer_single_row_us: timings.infer_single_row_us,
        model_size_kb: size_kb,
        efficiency_score: eff,
        cv_mean: None,
        cv_std: None,
        ci_low: None,
        ci_high: None,
    })
}
