//! Canonical model binary: 16-byte magic+version header followed by
//! little-endian f32 payloads, plus a JSON sidecar for the schema.

use super::linear::LinearModel;
use super::tree::{TreeModel, TreeNode};
use super::{ModelKind, TrainedModel};
use crate::error::{EcgError, Result};

const MAGIC: &[u8; 8] = b"ECGMDL01";
const FORMAT_VERSION: u16 = 1;

fn kind_code(kind: ModelKind) -> u16 {
    match kind {
        ModelKind::LogisticRegression => 1,
        ModelKind::LinearSvc => 2,
        ModelKind::DecisionTree => 3,
    }
}

fn kind_from_code(code: u16) -> Result<ModelKind> {
    match code {
        1 => Ok(ModelKind::LogisticRegression),
        2 => Ok(ModelKind::LinearSvc),
        3 => Ok(ModelKind::DecisionTree),
        other => Err(EcgError::ModelFormat(format!("unknown kind code {other}"))),
    }
}

/// Serialize to the canonical byte layout.
///
/// Header (16 bytes): magic[8], version u16, kind u16, n_classes u16,
/// n_features u16. Linear payload: n_heads u16, class ids u16 each, then
/// per-head f32 weights and one f32 intercept per head. Tree payload:
/// n_nodes u16, then per node feature i32 (-1 = leaf), threshold f32,
/// left/right u16, and the f32 class distribution.
pub fn serialize_model(model: &TrainedModel) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&kind_code(model.kind()).to_le_bytes());
    match model {
        TrainedModel::Linear(m) => {
            out.extend_from_slice(&(m.classes.len() as u16).to_le_bytes());
            out.extend_from_slice(&(m.n_features as u16).to_le_bytes());
            out.extend_from_slice(&(m.classes.len() as u16).to_le_bytes());
            for &c in &m.classes {
                out.extend_from_slice(&(c as u16).to_le_bytes());
            }
            for w in &m.weights {
                for &v in w {
                    out.extend_from_slice(&(v as f32).to_le_bytes());
                }
            }
            for &b in &m.intercepts {
                out.extend_from_slice(&(b as f32).to_le_bytes());
            }
        }
        TrainedModel::Tree(t) => {
            out.extend_from_slice(&(t.n_classes as u16).to_le_bytes());
            out.extend_from_slice(&(t.n_features as u16).to_le_bytes());
            out.extend_from_slice(&(t.nodes.len() as u16).to_le_bytes());
            for node in &t.nodes {
                let feature = node.feature.map(|f| f as i32).unwrap_or(-1);
                out.extend_from_slice(&feature.to_le_bytes());
                out.extend_from_slice(&(node.threshold as f32).to_le_bytes());
                out.extend_from_slice(&(node.left as u16).to_le_bytes());
                out.extend_from_slice(&(node.right as u16).to_le_bytes());
                for &p in &node.distribution {
                    out.extend_from_slice(&(p as f32).to_le_bytes());
                }
            }
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.at + n > self.bytes.len() {
            return Err(EcgError::ModelFormat("truncated model payload".into()));
        }
        let s = &self.bytes[self.at..self.at + n];
        self.at += n;
        Ok(s)
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn i32(&mut self) -> Result<i32> {
        Ok(i32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn f32(&mut self) -> Result<f64> {
        Ok(f32::from_le_bytes(self.take(4)?.try_into().unwrap()) as f64)
    }
}

pub fn deserialize_model(bytes: &[u8]) -> Result<TrainedModel> {
    let mut r = Reader { bytes, at: 0 };
    if r.take(8)? != MAGIC {
        return Err(EcgError::ModelFormat("bad magic".into()));
    }
    let version = r.u16()?;
    if version != FORMAT_VERSION {
        return Err(EcgError::ModelFormat(format!(
            "unsupported format version {version}"
        )));
    }
    let kind = kind_from_code(r.u16()?)?;
    let n_classes = r.u16()? as usize;
    let n_features = r.u16()? as usize;
    match kind {
        ModelKind::LogisticRegression | ModelKind::LinearSvc => {
            let n_heads = r.u16()? as usize;
            let mut classes = Vec::with_capacity(n_heads);
            for _ in 0..n_heads {
                classes.push(r.u16()? as usize);
            }
            let mut weights = Vec::with_capacity(n_heads);
            for _ in 0..n_heads {
                let mut w = Vec::with_capacity(n_features);
                for _ in 0..n_features {
                    w.push(r.f32()?);
                }
                weights.push(w);
            }
            let mut intercepts = Vec::with_capacity(n_heads);
            for _ in 0..n_heads {
                intercepts.push(r.f32()?);
            }
            let _ = n_classes;
            Ok(TrainedModel::Linear(LinearModel {
                kind,
                classes,
                weights,
                intercepts,
                n_features,
                converged: true,
            }))
        }
        ModelKind::DecisionTree => {
            let n_nodes = r.u16()? as usize;
            let mut nodes = Vec::with_capacity(n_nodes);
            for _ in 0..n_nodes {
                let feature_raw = r.i32()?;
                let threshold = r.f32()?;
                let left = r.u16()? as usize;
                let right = r.u16()? as usize;
                let mut distribution = Vec::with_capacity(n_classes);
                for _ in 0..n_classes {
                    distribution.push(r.f32()?);
                }
                nodes.push(TreeNode {
                    feature: (feature_raw >= 0).then_some(feature_raw as usize),
                    threshold,
                    left,
                    right,
                    distribution,
                    decrease: 0.0,
                });
            }
            Ok(TrainedModel::Tree(TreeModel {
                nodes,
                n_features,
                n_classes,
                max_depth: 0,
            }))
        }
    }
}

/// Serialized byte length of the canonical binary.
pub fn model_size_bytes(model: &TrainedModel) -> usize {
    serialize_model(model).len()
}

/// JSON sidecar describing the payload.
pub fn model_sidecar(model: &TrainedModel, feature_names: &[String]) -> serde_json::Value {
    serde_json::json!({
        "format": "ECGMDL01",
        "kind": model.kind().as_str(),
        "n_features": model.n_features(),
        "classes": model.classes(),
        "feature_names": feature_names,
        "weight_dtype": "f32_le",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{
        predict, train_decision_tree, train_linear_svc, ClassWeights, Dataset, SvcParams,
        TreeParams,
    };
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn linear_payload_size_arithmetic() {
        // 202 features x 5 heads as f32 + 5 intercepts = 4060 payload bytes
        // before the 16-byte header and 12-byte head table.
        let m = TrainedModel::Linear(LinearModel {
            kind: ModelKind::LinearSvc,
            classes: vec![0, 1, 2, 3, 4],
            weights: vec![vec![0.1; 202]; 5],
            intercepts: vec![0.0; 5],
            n_features: 202,
            converged: true,
        });
        let bytes = serialize_model(&m);
        assert_eq!(bytes.len(), 16 + 2 + 10 + (202 * 5 + 5) * 4);
        assert_eq!((202 * 5 + 5) * 4, 4060);
        assert!(bytes.len() as f64 / 1024.0 < 16.0);
    }

    #[test]
    fn round_trip_predicts_identically() {
        let mut rng = ChaCha12Rng::seed_from_u64(100);
        let n = 60;
        let d = 8;
        let x: Vec<f64> = (0..n * d).map(|_| rng.random_range(-2.0..2.0)).collect();
        let y: Vec<usize> = (0..n).map(|i| (i % 3) as usize).collect();
        let data = Dataset::new(&x, n, d, &y).unwrap();

        let svc = train_linear_svc(&data, &SvcParams::default(), &ClassWeights::Balanced).unwrap();
        let tree =
            train_decision_tree(&data, &TreeParams::default(), &ClassWeights::Balanced).unwrap();
        for model in [svc, tree] {
            let restored = deserialize_model(&serialize_model(&model)).unwrap();
            let probe: Vec<Vec<f64>> = (0..1000)
                .map(|_| (0..d).map(|_| rng.random_range(-3.0..3.0)).collect())
                .collect();
            let probe_refs: Vec<&[f64]> = probe.iter().map(Vec::as_slice).collect();
            assert_eq!(
                predict(&model, &probe_refs).unwrap(),
                predict(&restored, &probe_refs).unwrap()
            );
            // Round-tripping again is byte-stable.
            assert_eq!(
                serialize_model(&restored),
                serialize_model(&deserialize_model(&serialize_model(&restored)).unwrap())
            );
        }
    }

    #[test]
    fn empty_linear_model_is_header_plus_table_only() {
        let m = TrainedModel::Linear(LinearModel {
            kind: ModelKind::LogisticRegression,
            classes: vec![],
            weights: vec![],
            intercepts: vec![],
            n_features: 0,
            converged: true,
        });
        assert_eq!(serialize_model(&m).len(), 16 + 2);
    }

    #[test]
    fn corrupted_magic_is_rejected() {
        let mut bytes = serialize_model(&TrainedModel::Linear(LinearModel {
            kind: ModelKind::LinearSvc,
            classes: vec![0, 1],
            weights: vec![vec![1.0], vec![2.0]],
            intercepts: vec![0.0, 0.0],
            n_features: 1,
            converged: true,
        }));
        bytes[0] = b'X';
        assert!(deserialize_model(&bytes).is_err());
    }
}
