//! Interpretable classifiers: one-vs-rest logistic regression and linear
//! SVC, and a depth-bounded CART tree — with balanced class weighting,
//! evaluation metrics, cross-validated confidence intervals, a canonical
//! binary serialization, and latency/size profiling.

mod cv;
mod importance;
mod linear;
mod metrics;
mod optimizer;
mod serialize;
mod timing;
mod tree;

pub use cv::{cross_validate_ci, stratified_folds, summarize_scores, CvResult};
pub use importance::{feature_importance_report, raw_importances};
pub use linear::{
    logistic_objective, sample_weights, squared_hinge_objective, train_linear_svc,
    train_logistic_regression, Dataset, LinearModel, LogisticParams, SvcParams,
};
pub use metrics::{
    classification_metrics, efficiency_score, evaluate, ClassificationMetrics, EvalReport,
    Timings, EFFICIENCY_EPSILON,
};
pub use serialize::{deserialize_model, model_sidecar, model_size_bytes, serialize_model};
pub use timing::{time_inference, LatencyProfile};
pub use tree::{best_split, train_decision_tree, TreeModel, TreeNode, TreeParams};

use crate::error::{EcgError, Result};
use serde::{Deserialize, Serialize};

/// Classifier family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    LogisticRegression,
    LinearSvc,
    DecisionTree,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::LogisticRegression => "logistic_regression",
            ModelKind::LinearSvc => "linear_svc",
            ModelKind::DecisionTree => "decision_tree",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "logistic_regression" => Ok(ModelKind::LogisticRegression),
            "linear_svc" => Ok(ModelKind::LinearSvc),
            "decision_tree" => Ok(ModelKind::DecisionTree),
            other => Err(EcgError::Config(format!("unknown model kind '{other}'"))),
        }
    }
}

/// Per-class loss multipliers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassWeights {
    Uniform,
    /// n_samples / (n_present_classes * count_c) per class.
    Balanced,
    Custom(Vec<f64>),
}

/// A trained classifier.
#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Linear(LinearModel),
    Tree(TreeModel),
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            TrainedModel::Linear(m) => m.kind,
            TrainedModel::Tree(_) => ModelKind::DecisionTree,
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            TrainedModel::Linear(m) => m.n_features,
            TrainedModel::Tree(t) => t.n_features,
        }
    }

    pub fn classes(&self) -> Vec<usize> {
        match self {
            TrainedModel::Linear(m) => m.classes.clone(),
            TrainedModel::Tree(t) => (0..t.n_classes).collect(),
        }
    }

    pub fn converged(&self) -> bool {
        match self {
            TrainedModel::Linear(m) => m.converged,
            TrainedModel::Tree(_) => true,
        }
    }
}

/// Training hyperparameters for any model family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainOptions {
    pub logistic: LogisticParams,
    pub svc: SvcParams,
    pub tree: TreeParams,
    pub class_weights: ClassWeights,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            logistic: LogisticParams::default(),
            svc: SvcParams::default(),
            tree: TreeParams::default(),
            class_weights: ClassWeights::Balanced,
        }
    }
}

/// Dispatch training by kind.
pub fn train(kind: ModelKind, data: &Dataset, options: &TrainOptions) -> Result<TrainedModel> {
    match kind {
        ModelKind::LogisticRegression => {
            train_logistic_regression(data, &options.logistic, &options.class_weights)
        }
        ModelKind::LinearSvc => train_linear_svc(data, &options.svc, &options.class_weights),
        ModelKind::DecisionTree => train_decision_tree(data, &options.tree, &options.class_weights),
    }
}

/// Predict dense class indices for a batch of rows. Tie-break: lowest class
/// index. Dimension mismatches are an error.
pub fn predict(model: &TrainedModel, rows: &[&[f64]]) -> Result<Vec<usize>> {
    let d = model.n_features();
    rows.iter()
        .map(|row| {
            if row.len() != d {
                return Err(EcgError::DimensionMismatch {
                    expected: d,
                    actual: row.len(),
                });
            }
            Ok(match model {
                TrainedModel::Linear(m) => {
                    let scores = m.scores(row);
                    let mut best = 0usize;
                    for (h, &s) in scores.iter().enumerate() {
                        // strict > keeps the lowest class index on ties
                        if s > scores[best] {
                            best = h;
                        }
                    }
                    if m.classes.is_empty() {
                        0
                    } else {
                        m.classes[best]
                    }
                }
                TrainedModel::Tree(t) => {
                    let dist = t.leaf_distribution(row);
                    let mut best = 0usize;
                    for (c, &p) in dist.iter().enumerate() {
                        if p > dist[best] {
                            best = c;
                        }
                    }
                    best
                }
            })
        })
        .collect()
}

/// Per-row one-vs-rest scores (linear) or leaf distributions (tree).
pub fn predict_scores(model: &TrainedModel, rows: &[&[f64]]) -> Result<Vec<Vec<f64>>> {
    let d = model.n_features();
    rows.iter()
        .map(|row| {
            if row.len() != d {
                return Err(EcgError::DimensionMismatch {
                    expected: d,
                    actual: row.len(),
                });
            }
            Ok(match model {
                TrainedModel::Linear(m) => m.scores(row),
                TrainedModel::Tree(t) => t.leaf_distribution(row).to_vec(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_weight_model_predicts_lowest_class_index() {
        let model = TrainedModel::Linear(LinearModel {
            kind: ModelKind::LinearSvc,
            classes: vec![0, 1, 2, 3, 4],
            weights: vec![vec![0.0; 3]; 5],
            intercepts: vec![0.0; 5],
            n_features: 3,
            converged: true,
        });
        let row = [1.0, -2.0, 0.5];
        let preds = predict(&model, &[&row, &row]).unwrap();
        assert_eq!(preds, vec![0, 0]);
    }

    #[test]
    fn batch_predict_equals_row_by_row() {
        let model = TrainedModel::Linear(LinearModel {
            kind: ModelKind::LogisticRegression,
            classes: vec![0, 2],
            weights: vec![vec![1.0, -1.0], vec![-0.5, 2.0]],
            intercepts: vec![0.1, -0.2],
            n_features: 2,
            converged: true,
        });
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|i| vec![(i as f64) * 0.3 - 3.0, 1.5 - (i as f64) * 0.2])
            .collect();
        let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let batch = predict(&model, &refs).unwrap();
        for (i, row) in refs.iter().enumerate() {
            assert_eq!(predict(&model, &[row]).unwrap()[0], batch[i]);
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let model = TrainedModel::Linear(LinearModel {
            kind: ModelKind::LinearSvc,
            classes: vec![0, 1],
            weights: vec![vec![1.0, 2.0], vec![0.0, 1.0]],
            intercepts: vec![0.0, 0.0],
            n_features: 2,
            converged: true,
        });
        assert!(predict(&model, &[&[1.0][..]]).is_err());
    }
}
