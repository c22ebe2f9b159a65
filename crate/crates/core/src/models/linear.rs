//! One-vs-rest linear classifiers: L2-regularized logistic regression and
//! squared-hinge SVC, trained by deterministic full-batch descent.

use super::optimizer::minimize;
use super::{ClassWeights, ModelKind, TrainedModel};
use crate::error::{EcgError, Result};

/// Dense row-major design matrix view with dense class-index labels.
#[derive(Debug, Clone, Copy)]
pub struct Dataset<'a> {
    pub x: &'a [f64],
    pub n_rows: usize,
    pub n_cols: usize,
    pub labels: &'a [usize],
}

impl<'a> Dataset<'a> {
    pub fn new(x: &'a [f64], n_rows: usize, n_cols: usize, labels: &'a [usize]) -> Result<Self> {
        if x.len() != n_rows * n_cols || labels.len() != n_rows {
            return Err(EcgError::DimensionMismatch {
                expected: n_rows * n_cols,
                actual: x.len(),
            });
        }
        Ok(Dataset {
            x,
            n_rows,
            n_cols,
            labels,
        })
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn present_classes(&self) -> Vec<usize> {
        let mut classes: Vec<usize> = self.labels.to_vec();
        classes.sort_unstable();
        classes.dedup();
        classes
    }
}

/// One-vs-rest linear model: `weights[h]` and `intercepts[h]` score class
/// `classes[h]`. Weights are quantized to f32 precision so the canonical
/// serialization is lossless.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub kind: ModelKind,
    pub classes: Vec<usize>,
    pub weights: Vec<Vec<f64>>,
    pub intercepts: Vec<f64>,
    pub n_features: usize,
    pub converged: bool,
}

impl LinearModel {
    pub fn scores(&self, row: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.intercepts)
            .map(|(w, b)| w.iter().zip(row).map(|(wi, xi)| wi * xi).sum::<f64>() + b)
            .collect()
    }
}

/// Per-sample weights from the class weighting mode, normalized to mean 1 so
/// the regularizer trade-off is invariant to weight rescaling.
pub fn sample_weights(labels: &[usize], mode: &ClassWeights) -> Vec<f64> {
    let n = labels.len();
    let n_classes = labels.iter().max().map(|m| m + 1).unwrap_or(0);
    let mut counts = vec![0usize; n_classes];
    for &l in labels {
        counts[l] += 1;
    }
    let present = counts.iter().filter(|&&c| c > 0).count();
    let per_class: Vec<f64> = match mode {
        ClassWeights::Uniform => vec![1.0; n_classes],
        ClassWeights::Balanced => (0..n_classes)
            .map(|c| {
                if counts[c] == 0 {
                    0.0
                } else {
                    n as f64 / (present as f64 * counts[c] as f64)
                }
            })
            .collect(),
        ClassWeights::Custom(w) => w.clone(),
    };
    let mut s: Vec<f64> = labels.iter().map(|&l| per_class[l]).collect();
    let mean = s.iter().sum::<f64>() / n as f64;
    if mean > 0.0 {
        for v in s.iter_mut() {
            *v /= mean;
        }
    }
    s
}

/// Logistic head objective: (1/N) sum s_i ln(1 + exp(-t_i z_i)) + a/2 |w|^2.
/// Theta layout: [w_0..w_d, b]; the intercept is unregularized.
pub fn logistic_objective<'a>(
    data: Dataset<'a>,
    targets: Vec<f64>,
    sample_w: Vec<f64>,
    l2: f64,
) -> impl Fn(&[f64]) -> (f64, Vec<f64>) + 'a {
    let n = data.n_rows as f64;
    let d = data.n_cols;
    move |theta: &[f64]| {
        let (w, b) = (&theta[..d], theta[d]);
        let mut f = 0.0;
        let mut grad = vec![0.0f64; d + 1];
        for i in 0..data.n_rows {
            let row = data.row(i);
            let z: f64 = w.iter().zip(row).map(|(wi, xi)| wi * xi).sum::<f64>() + b;
            let u = -targets[i] * z;
            // stable ln(1 + e^u)
            f += sample_w[i]
                * if u > 35.0 {
                    u
                } else if u < -35.0 {
                    u.exp()
                } else {
                    u.exp().ln_1p()
                };
            // d/dz = -t * sigmoid(u)
            let sig = if u > 35.0 {
                1.0
            } else if u < -35.0 {
                u.exp()
            } else {
                1.0 / (1.0 + (-u).exp())
            };
            let coef = sample_w[i] * (-targets[i]) * sig;
            for (gj, xj) in grad[..d].iter_mut().zip(row) {
                *gj += coef * xj;
            }
            grad[d] += coef;
        }
        f /= n;
        for g in grad.iter_mut() {
            *g /= n;
        }
        let reg: f64 = w.iter().map(|v| v * v).sum::<f64>();
        f += 0.5 * l2 * reg;
        for (gj, wj) in grad[..d].iter_mut().zip(w) {
            *gj += l2 * wj;
        }
        (f, grad)
    }
}

/// Squared-hinge head objective: C sum s_i max(0, 1 - t_i z_i)^2 + 1/2 |w|^2.
pub fn squared_hinge_objective<'a>(
    data: Dataset<'a>,
    targets: Vec<f64>,
    sample_w: Vec<f64>,
    c: f64,
) -> impl Fn(&[f64]) -> (f64, Vec<f64>) + 'a {
    let d = data.n_cols;
    move |theta: &[f64]| {
        let (w, b) = (&theta[..d], theta[d]);
        let mut f = 0.5 * w.iter().map(|v| v * v).sum::<f64>();
        let mut grad = vec![0.0f64; d + 1];
        for (gj, wj) in grad[..d].iter_mut().zip(w) {
            *gj = *wj;
        }
        for i in 0..data.n_rows {
            let row = data.row(i);
            let z: f64 = w.iter().zip(row).map(|(wi, xi)| wi * xi).sum::<f64>() + b;
            let margin = 1.0 - targets[i] * z;
            if margin > 0.0 {
                f += c * sample_w[i] * margin * margin;
                let coef = c * sample_w[i] * 2.0 * margin * (-targets[i]);
                for (gj, xj) in grad[..d].iter_mut().zip(row) {
                    *gj += coef * xj;
                }
                grad[d] += coef;
            }
        }
        (f, grad)
    }
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct LogisticParams {
    pub l2: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LogisticParams {
    fn default() -> Self {
        LogisticParams {
            l2: 1e-4,
            tol: 1e-4,
            max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct SvcParams {
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SvcParams {
    fn default() -> Self {
        SvcParams {
            c: 0.1,
            tol: 1e-4,
            max_iter: 1000,
        }
    }
}

fn quantize_f32(v: f64) -> f64 {
    v as f32 as f64
}

fn train_ovr<'a, O, F>(
    data: Dataset<'a>,
    kind: ModelKind,
    tol: f64,
    max_iter: usize,
    make_objective: F,
) -> Result<TrainedModel>
where
    O: Fn(&[f64]) -> (f64, Vec<f64>),
    F: Fn(Dataset<'a>, Vec<f64>) -> O,
{
    let classes = data.present_classes();
    if classes.len() < 2 {
        return Err(EcgError::InvalidParameter(
            "training needs at least two classes".into(),
        ));
    }
    let d = data.n_cols;
    let mut weights = Vec::with_capacity(classes.len());
    let mut intercepts = Vec::with_capacity(classes.len());
    let mut converged = true;
    for &cls in &classes {
        let targets: Vec<f64> = data
            .labels
            .iter()
            .map(|&l| if l == cls { 1.0 } else { -1.0 })
            .collect();
        let obj = make_objective(data, targets);
        let res = minimize(|theta| obj(theta), vec![0.0; d + 1], tol, max_iter);
        if !res.converged {
            log::warn!("{kind:?} head for class {cls} did not converge");
            converged = false;
        }
        weights.push(res.x[..d].iter().map(|&v| quantize_f32(v)).collect());
        intercepts.push(quantize_f32(res.x[d]));
    }
    Ok(TrainedModel::Linear(LinearModel {
        kind,
        classes,
        weights,
        intercepts,
        n_features: d,
        converged,
    }))
}

/// Class-weighted one-vs-rest L2 logistic regression.
pub fn train_logistic_regression(
    data: &Dataset,
    params: &LogisticParams,
    class_weights: &ClassWeights,
) -> Result<TrainedModel> {
    let sw = sample_weights(data.labels, class_weights);
    let l2 = params.l2;
    train_ovr(
        *data,
        ModelKind::LogisticRegression,
        params.tol,
        params.max_iter,
        move |d, t| logistic_objective(d, t, sw.clone(), l2),
    )
}

/// Class-weighted one-vs-rest squared-hinge linear SVC.
pub fn train_linear_svc(
    data: &Dataset,
    params: &SvcParams,
    class_weights: &ClassWeights,
) -> Result<TrainedModel> {
    let sw = sample_weights(data.labels, class_weights);
    let c = params.c;
    train_ovr(
        *data,
        ModelKind::LinearSvc,
        params.tol,
        params.max_iter,
        move |d, t| squared_hinge_objective(d, t, sw.clone(), c),
    )
}
