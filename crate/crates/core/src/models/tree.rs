//! Greedy CART classifier with class-weighted Gini impurity and exhaustive
//! threshold search.

use super::linear::Dataset;
use super::{ClassWeights, TrainedModel};
use crate::error::{EcgError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    /// `None` marks a leaf.
    pub feature: Option<usize>,
    pub threshold: f64,
    pub left: usize,
    pub right: usize,
    /// Weighted class distribution at the node (normalized).
    pub distribution: Vec<f64>,
    /// Weighted impurity decrease contributed by this split (0 for leaves).
    pub decrease: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeModel {
    pub nodes: Vec<TreeNode>,
    pub n_features: usize,
    pub n_classes: usize,
    pub max_depth: usize,
}

impl TreeModel {
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], at: usize) -> usize {
            match nodes[at].feature {
                None => 0,
                Some(_) => 1 + walk(nodes, nodes[at].left).max(walk(nodes, nodes[at].right)),
            }
        }
        if self.nodes.is_empty() {
            0
        } else {
            walk(&self.nodes, 0)
        }
    }

    pub fn leaf_distribution(&self, row: &[f64]) -> &[f64] {
        let mut at = 0usize;
        loop {
            let node = &self.nodes[at];
            match node.feature {
                None => return &node.distribution,
                Some(f) => {
                    at = if row[f] <= node.threshold {
                        node.left
                    } else {
                        node.right
                    };
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_samples_split: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: 5,
            min_samples_split: 2,
        }
    }
}

fn gini(counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    1.0 - counts.iter().map(|c| (c / total).powi(2)).sum::<f64>()
}

/// Best (feature, threshold, decrease) over all features and midpoints, or
/// `None` when no split reduces impurity. Ties resolve to the lowest feature
/// index, then the lowest threshold.
pub fn best_split(
    data: &Dataset,
    rows: &[usize],
    sample_w: &[f64],
    n_classes: usize,
) -> Option<(usize, f64, f64)> {
    let total_w: f64 = rows.iter().map(|&r| sample_w[r]).sum();
    let mut parent_counts = vec![0.0f64; n_classes];
    for &r in rows {
        parent_counts[data.labels[r]] += sample_w[r];
    }
    let parent_gini = gini(&parent_counts);
    if parent_gini <= 0.0 {
        return None;
    }

    let mut best: Option<(usize, f64, f64)> = None;
    for feature in 0..data.n_cols {
        let mut order: Vec<usize> = rows.to_vec();
        order.sort_by(|&a, &b| {
            data.row(a)[feature]
                .partial_cmp(&data.row(b)[feature])
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut left_counts = vec![0.0f64; n_classes];
        let mut left_w = 0.0;
        let mut right_counts = parent_counts.clone();
        for i in 0..order.len() - 1 {
            let r = order[i];
            let w = sample_w[r];
            left_counts[data.labels[r]] += w;
            right_counts[data.labels[r]] -= w;
            left_w += w;
            let v = data.row(r)[feature];
            let v_next = data.row(order[i + 1])[feature];
            if v_next <= v {
                continue; // not a boundary between distinct values
            }
            // Thresholds quantize to f32 so serialization is lossless.
            let threshold = ((v + v_next) / 2.0) as f32 as f64;
            let right_w = total_w - left_w;
            if left_w <= 0.0 || right_w <= 0.0 {
                continue;
            }
            let weighted =
                (left_w * gini(&left_counts) + right_w * gini(&right_counts)) / total_w;
            let decrease = parent_gini - weighted;
            let candidate = (feature, threshold, decrease);
            best = match best {
                None => Some(candidate),
                Some((bf, bt, bd)) => {
                    if decrease > bd + 1e-15
                        || ((decrease - bd).abs() <= 1e-15
                            && (feature < bf || (feature == bf && threshold < bt)))
                    {
                        Some(candidate)
                    } else {
                        Some((bf, bt, bd))
                    }
                }
            };
        }
    }
    best.filter(|&(_, _, d)| d > 1e-15)
}

/// Grow a depth-bounded CART tree with class-weighted Gini impurity.
pub fn train_decision_tree(
    data: &Dataset,
    params: &TreeParams,
    class_weights: &ClassWeights,
) -> Result<TrainedModel> {
    if data.n_rows == 0 {
        return Err(EcgError::InvalidParameter("empty training set".into()));
    }
    let n_classes = data.labels.iter().max().map(|m| m + 1).unwrap_or(1);
    let sample_w = super::linear::sample_weights(data.labels, class_weights);

    let mut nodes: Vec<TreeNode> = Vec::new();
    // (node slot, row indices, depth)
    let mut queue: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    nodes.push(TreeNode {
        feature: None,
        threshold: 0.0,
        left: 0,
        right: 0,
        distribution: Vec::new(),
        decrease: 0.0,
    });
    queue.push((0, (0..data.n_rows).collect(), 0));

    while let Some((slot, rows, depth)) = queue.pop() {
        let mut counts = vec![0.0f64; n_classes];
        for &r in &rows {
            counts[data.labels[r]] += sample_w[r];
        }
        let total: f64 = counts.iter().sum();
        let distribution: Vec<f64> = counts
            .iter()
            .map(|c| ((c / total) as f32) as f64)
            .collect();

        let split = if depth < params.max_depth && rows.len() >= params.min_samples_split {
            best_split(data, &rows, &sample_w, n_classes)
        } else {
            None
        };
        match split {
            None => {
                nodes[slot] = TreeNode {
                    feature: None,
                    threshold: 0.0,
                    left: 0,
                    right: 0,
                    distribution,
                    decrease: 0.0,
                };
            }
            Some((feature, threshold, decrease)) => {
                let (mut left_rows, mut right_rows) = (Vec::new(), Vec::new());
                for &r in &rows {
                    if data.row(r)[feature] <= threshold {
                        left_rows.push(r);
                    } else {
                        right_rows.push(r);
                    }
                }
                let left = nodes.len();
                let right = left + 1;
                nodes.push(TreeNode {
                    feature: None,
                    threshold: 0.0,
                    left: 0,
                    right: 0,
                    distribution: Vec::new(),
                    decrease: 0.0,
                });
                nodes.push(TreeNode {
                    feature: None,
                    threshold: 0.0,
                    left: 0,
                    right: 0,
                    distribution: Vec::new(),
                    decrease: 0.0,
                });
                // Weighted decrease scaled by the node's share of total weight.
                let root_share = total / sample_w.iter().sum::<f64>();
                nodes[slot] = TreeNode {
                    feature: Some(feature),
                    threshold,
                    left,
                    right,
                    distribution,
                    decrease: decrease * root_share,
                };
                queue.push((left, left_rows, depth + 1));
                queue.push((right, right_rows, depth + 1));
            }
        }
    }

    Ok(TrainedModel::Tree(TreeModel {
        nodes,
        n_features: data.n_cols,
        n_classes,
        max_depth: params.max_depth,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::predict;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn threshold_separable_data_gives_depth_one_perfect_tree() {
        let x: Vec<f64> = (0..20).map(|i| if i < 10 { i as f64 } else { i as f64 + 100.0 }).collect();
        let y: Vec<usize> = (0..20).map(|i| usize::from(i >= 10)).collect();
        let data = Dataset::new(&x, 20, 1, &y).unwrap();
        let model =
            train_decision_tree(&data, &TreeParams::default(), &ClassWeights::Uniform).unwrap();
        let TrainedModel::Tree(t) = &model else { panic!() };
        assert_eq!(t.depth(), 1);
        let rows: Vec<&[f64]> = (0..20).map(|i| data.row(i)).collect();
        assert_eq!(predict(&model, &rows).unwrap(), y);
    }

    #[test]
    fn root_split_matches_brute_force_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let n = 30;
        let d = 3;
        let x: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<usize> = (0..n).map(|_| rng.random_range(0..3usize)).collect();
        let data = Dataset::new(&x, n, d, &y).unwrap();
        let sw = vec![1.0; n];
        let fast = best_split(&data, &(0..n).collect::<Vec<_>>(), &sw, 3).unwrap();

        // Oracle: literal exhaustive scan over every (feature, midpoint).
        let mut best: Option<(usize, f64, f64)> = None;
        let parent: Vec<f64> = {
            let mut c = vec![0.0; 3];
            for &l in &y {
                c[l] += 1.0;
            }
            c
        };
        let g_parent = gini(&parent);
        for f in 0..d {
            let mut vals: Vec<f64> = (0..n).map(|r| data.row(r)[f]).collect();
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            vals.dedup();
            for w in vals.windows(2) {
                let thr = ((w[0] + w[1]) / 2.0) as f32 as f64;
                let mut lc = vec![0.0; 3];
                let mut rc = vec![0.0; 3];
                let (mut lw, mut rw) = (0.0, 0.0);
                for r in 0..n {
                    if data.row(r)[f] <= thr {
                        lc[y[r]] += 1.0;
                        lw += 1.0;
                    } else {
                        rc[y[r]] += 1.0;
                        rw += 1.0;
                    }
                }
                let dec = g_parent - (lw * gini(&lc) + rw * gini(&rc)) / n as f64;
                if best.map_or(true, |(_, _, bd)| dec > bd + 1e-15) {
                    best = Some((f, thr, dec));
                }
            }
        }
        let oracle = best.unwrap();
        assert_eq!(fast.0, oracle.0);
        assert!((fast.1 - oracle.1).abs() < 1e-12);
        assert!((fast.2 - oracle.2).abs() < 1e-12);
    }

    #[test]
    fn depth_never_exceeds_limit() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let n = 200;
        let d = 4;
        let x: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<usize> = (0..n).map(|_| rng.random_range(0..5usize)).collect();
        let data = Dataset::new(&x, n, d, &y).unwrap();
        let model =
            train_decision_tree(&data, &TreeParams::default(), &ClassWeights::Balanced).unwrap();
        let TrainedModel::Tree(t) = &model else { panic!() };
        assert!(t.depth() <= 5, "depth {}", t.depth());
    }

    #[test]
    fn pure_node_becomes_leaf() {
        let x = vec![1.0, 2.0, 3.0, 4.0];
        let y = vec![1usize, 1, 1, 1];
        let data = Dataset::new(&x, 4, 1, &y).unwrap();
        let model =
            train_decision_tree(&data, &TreeParams::default(), &ClassWeights::Uniform).unwrap();
        let TrainedModel::Tree(t) = &model else { panic!() };
        assert_eq!(t.nodes.len(), 1);
        assert!(t.nodes[0].feature.is_none());
    }
}
