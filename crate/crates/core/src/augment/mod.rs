//! Inter-beat augmentation: windowed and global HRV, the record-level LF/HF
//! ratio, beat-graph centrality metrics, and lagged context copies of
//! selected base columns. Lifts the 88-column base matrix to 197 columns.

mod graph;
mod hrv;

pub use graph::{
    build_beat_graph, edge_weight, node_strengths, pagerank, weighted_clustering, BeatGraph,
    NodeStrengths,
};
pub use hrv::{hrv_lf_hf, hrv_time_domain, rmssd};

use crate::error::{EcgError, Result};
use crate::features::{FeatureMatrix, FeatureRegistry};

pub const AUGMENT_REGISTRY_VERSION: &str = "aug-v1";
pub const AUGMENTED_FEATURE_COUNT: usize = 197;

/// Graph and HRV-window parameters.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct AugmentParams {
    /// kNN out-degree bound.
    pub k: usize,
    /// Temporal decay constant of the edge weights.
    pub tau: f64,
    /// Half-width (beats) of the windowed HRV statistics.
    pub hrv_window: usize,
    /// PageRank damping factor.
    pub damping: f64,
}

impl Default for AugmentParams {
    fn default() -> Self {
        AugmentParams {
            k: 4,
            tau: 1.0,
            hrv_window: 10,
            damping: 0.85,
        }
    }
}

const HRV_WINDOWED: [&str; 6] = [
    "sdnn",
    "pnn50",
    "rmssd",
    "rr_mean_w",
    "rr_median_w",
    "rr_range_w",
];
const HRV_GLOBAL: [&str; 4] = ["sdnn_global", "pnn50_global", "rmssd_global", "rr_mean_global"];
const RR_DELTAS: [&str; 2] = ["rr_delta_prev", "rr_accel"];
const GRAPH_BLOCK: [&str; 8] = [
    "pagerank",
    "clustering",
    "wdeg",
    "in_strength",
    "out_strength",
    "in_degree",
    "out_degree",
    "mean_out_weight",
];

/// The 109 appended column names, in order: windowed HRV, global HRV, lf_hf,
/// RR deltas, graph metrics, then lag-1/lag-2 copies of 44 base columns.
pub fn augmentation_column_names(base: &FeatureRegistry) -> Vec<String> {
    let mut names: Vec<String> = Vec::with_capacity(AUGMENTED_FEATURE_COUNT - base.len());
    names.extend(HRV_WINDOWED.iter().map(|s| s.to_string()));
    names.extend(HRV_GLOBAL.iter().map(|s| s.to_string()));
    names.push("lf_hf".to_string());
    names.extend(RR_DELTAS.iter().map(|s| s.to_string()));
    names.extend(GRAPH_BLOCK.iter().map(|s| s.to_string()));
    for lag in [1usize, 2] {
        for col in base.lagged_column_names() {
            names.push(format!("{col}_lag{lag}"));
        }
    }
    names
}

/// Stable hash of the full augmented layout for provenance stamps.
pub fn augmented_registry_hash(base: &FeatureRegistry) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(AUGMENT_REGISTRY_VERSION.as_bytes());
    hasher.update(base.hash().as_bytes());
    for n in augmentation_column_names(base) {
        hasher.update([0u8]);
        hasher.update(n.as_bytes());
    }
    hasher
        .finalize()
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Append the augmentation block to one record's base matrix. `rr_prev` and
/// `rr_next` are per-row RR context in seconds, in row order.
pub fn augment_matrix(
    base: &FeatureMatrix,
    rr_prev: &[f64],
    rr_next: &[f64],
    params: &AugmentParams,
) -> Result<FeatureMatrix> {
    let registry = FeatureRegistry::base();
    if base.n_cols() != registry.len() {
        return Err(EcgError::DimensionMismatch {
            expected: registry.len(),
            actual: base.n_cols(),
        });
    }
    let n = base.n_rows();
    if rr_prev.len() != n || rr_next.len() != n {
        return Err(EcgError::DimensionMismatch {
            expected: n,
            actual: rr_prev.len(),
        });
    }

    let mut names = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut missing: Vec<Vec<bool>> = Vec::new();
    let mut push = |name: String, col: Vec<f64>, miss: Vec<bool>| {
        names.push(name);
        columns.push(col);
        missing.push(miss);
    };

    // Windowed HRV over +-hrv_window beats of the rr_prev sequence.
    let w = params.hrv_window;
    let mut windowed: Vec<Vec<(f64, bool)>> = vec![Vec::with_capacity(n); 6];
    for i in 0..n {
        let lo = i.saturating_sub(w);
        let hi = (i + w + 1).min(n);
        let win = &rr_prev[lo..hi];
        let td = hrv_time_domain(win);
        let rm = rmssd(win);
        let mut sorted = win.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let med = sorted[(sorted.len() - 1) / 2];
        let range = sorted[sorted.len() - 1] - sorted[0];
        let mean = win.iter().sum::<f64>() / win.len() as f64;
        windowed[0].push(td.map_or((0.0, true), |(s, _)| (s, false)));
        windowed[1].push(td.map_or((0.0, true), |(_, p)| (p, false)));
        windowed[2].push(rm.map_or((0.0, true), |v| (v, false)));
        windowed[3].push((mean, false));
        windowed[4].push((med, false));
        windowed[5].push((range, false));
    }
    for (name, col) in HRV_WINDOWED.iter().zip(windowed) {
        let (vals, miss) = col.into_iter().unzip();
        push(name.to_string(), vals, miss);
    }

    // Record-global HRV, broadcast.
    let td_g = hrv_time_domain(rr_prev);
    let rm_g = rmssd(rr_prev);
    let mean_g = rr_prev.iter().sum::<f64>() / n.max(1) as f64;
    let broadcast = |v: Option<f64>| -> (Vec<f64>, Vec<bool>) {
        match v {
            Some(v) => (vec![v; n], vec![false; n]),
            None => (vec![0.0; n], vec![true; n]),
        }
    };
    let (vals, miss) = broadcast(td_g.map(|(s, _)| s));
    push("sdnn_global".into(), vals, miss);
    let (vals, miss) = broadcast(td_g.map(|(_, p)| p));
    push("pnn50_global".into(), vals, miss);
    let (vals, miss) = broadcast(rm_g);
    push("rmssd_global".into(), vals, miss);
    push("rr_mean_global".into(), vec![mean_g; n], vec![false; n]);

    // LF/HF of the record tachogram, broadcast; short records are flagged.
    let (vals, miss) = match hrv_lf_hf(rr_prev) {
        Some((ratio, flat)) => (vec![ratio; n], vec![flat; n]),
        None => (vec![0.0; n], vec![true; n]),
    };
    push("lf_hf".into(), vals, miss);

    // RR deltas.
    let mut delta_prev = vec![0.0; n];
    let mut delta_prev_miss = vec![false; n];
    for i in 0..n {
        if i == 0 {
            delta_prev_miss[i] = true;
        } else {
            delta_prev[i] = rr_prev[i] - rr_prev[i - 1];
        }
    }
    push("rr_delta_prev".into(), delta_prev, delta_prev_miss);
    let accel: Vec<f64> = (0..n).map(|i| rr_next[i] - rr_prev[i]).collect();
    push("rr_accel".into(), accel, vec![false; n]);

    // Graph metrics. Single-beat records flag the whole block.
    if n >= 2 {
        let rows: Vec<Vec<f64>> = (0..n).map(|r| base.row(r).to_vec()).collect();
        let miss_rows: Vec<Vec<bool>> = (0..n)
            .map(|r| (0..base.n_cols()).map(|c| base.is_missing(r, c)).collect())
            .collect();
        let graph = build_beat_graph(&rows, &miss_rows, params.k, params.tau)?;
        let pr = pagerank(&graph, params.damping, 1e-8, 200);
        let clu = weighted_clustering(&graph);
        let s = node_strengths(&graph);
        push("pagerank".into(), pr, vec![false; n]);
        push("clustering".into(), clu, vec![false; n]);
        push("wdeg".into(), s.wdeg, vec![false; n]);
        push("in_strength".into(), s.in_strength, vec![false; n]);
        push("out_strength".into(), s.out_strength, vec![false; n]);
        push("in_degree".into(), s.in_degree, vec![false; n]);
        push("out_degree".into(), s.out_degree, vec![false; n]);
        push("mean_out_weight".into(), s.mean_out_weight, vec![false; n]);
    } else {
        for name in GRAPH_BLOCK {
            push(name.to_string(), vec![0.0; n], vec![true; n]);
        }
    }

    // Lagged context copies.
    let lag_sources = registry.lagged_column_names();
    for lag in [1usize, 2] {
        for col_name in &lag_sources {
            let c = base
                .column_index(col_name)
                .expect("lag source is a base column");
            let mut vals = vec![0.0; n];
            let mut miss = vec![false; n];
            for i in 0..n {
                if i < lag {
                    miss[i] = true;
                } else {
                    vals[i] = base.get(i - lag, c);
                    miss[i] = base.is_missing(i - lag, c);
                }
            }
            push(format!("{col_name}_lag{lag}"), vals, miss);
        }
    }

    debug_assert_eq!(names, augmentation_column_names(&registry));
    let mut out = base.clone();
    out.append_columns(&names, &columns, &missing)?;
    Ok(out)
}
