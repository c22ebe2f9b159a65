//! Per-feature importance reports.

use super::TrainedModel;

/// Ranked (name, importance) list, descending. Linear kinds use the max
/// |coefficient| across one-vs-rest heads; trees use weighted impurity
/// decrease normalized to sum 1.
pub fn feature_importance_report(
    model: &TrainedModel,
    names: &[String],
) -> Vec<(String, f64)> {
    let raw = raw_importances(model, names.len());
    let mut out: Vec<(String, f64)> = names
        .iter()
        .cloned()
        .zip(raw)
        .collect();
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    out
}

pub fn raw_importances(model: &TrainedModel, n_features: usize) -> Vec<f64> {
    match model {
        TrainedModel::Linear(m) => (0..n_features)
            .map(|f| {
                m.weights
                    .iter()
                    .map(|w| w.get(f).copied().unwrap_or(0.0).abs())
                    .fold(0.0, f64::max)
            })
            .collect(),
        TrainedModel::Tree(t) => {
            let mut imp = vec![0.0f64; n_features];
            for node in &t.nodes {
                if let Some(f) = node.feature {
                    imp[f] += node.decrease;
                }
            }
            let total: f64 = imp.iter().sum();
            if total > 0.0 {
                for v in imp.iter_mut() {
                    *v /= total;
                }
            }
            imp
        }
    }
}
