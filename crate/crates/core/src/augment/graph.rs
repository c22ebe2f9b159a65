//! Beat-similarity graph: cosine-times-temporal-decay edges, PageRank
//! centrality and Barrat weighted clustering.

use crate::error::{EcgError, Result};

/// Edge weights smaller than this are numerically zero and dropped; with
/// tau = 1 the decay alone reaches it within ~28 beats, which bounds the
/// neighbor search horizon.
const MIN_EDGE_WEIGHT: f64 = 1e-12;

/// Weighted directed kNN graph over the beats of one record.
#[derive(Debug, Clone)]
pub struct BeatGraph {
    pub n: usize,
    /// (src, dst, weight), weight in (0, 1].
    pub edges: Vec<(usize, usize, f64)>,
    pub k: usize,
    pub tau: f64,
}

impl BeatGraph {
    pub fn out_edges(&self, node: usize) -> impl Iterator<Item = &(usize, usize, f64)> {
        self.edges.iter().filter(move |(s, _, _)| *s == node)
    }

    /// Edge list CSV (`src, dst, weight`) for debugging.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("src,dst,weight\n");
        for (s, d, w) in &self.edges {
            out.push_str(&format!("{s},{d},{w:.12}\n"));
        }
        out
    }
}

/// Column z-score with record-median fill for missing cells. Returns the
/// standardized rows used for cosine similarity.
fn standardize_rows(rows: &[Vec<f64>], missing: &[Vec<bool>]) -> Vec<Vec<f64>> {
    let n = rows.len();
    let d = rows.first().map(Vec::len).unwrap_or(0);
    let mut filled: Vec<Vec<f64>> = rows.to_vec();
    for c in 0..d {
        let mut present: Vec<f64> = (0..n)
            .filter(|&r| !missing[r][c])
            .map(|r| rows[r][c])
            .collect();
        let fill = if present.is_empty() {
            0.0
        } else {
            present.sort_by(|a, b| a.partial_cmp(b).unwrap());
            present[(present.len() - 1) / 2]
        };
        for r in 0..n {
            if missing[r][c] {
                filled[r][c] = fill;
            }
        }
        let mean = filled.iter().map(|row| row[c]).sum::<f64>() / n as f64;
        let var = filled.iter().map(|row| (row[c] - mean).powi(2)).sum::<f64>() / n as f64;
        let std = var.sqrt();
        for row in filled.iter_mut() {
            row[c] = if std > 0.0 { (row[c] - mean) / std } else { 0.0 };
        }
    }
    filled
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na <= 0.0 || nb <= 0.0 {
        return 0.0;
    }
    dot / (na * nb)
}

/// Eq-style edge weight between standardized rows i and j.
pub fn edge_weight(fi: &[f64], fj: &[f64], i: usize, j: usize, tau: f64) -> f64 {
    let cos = cosine(fi, fj).max(0.0);
    cos * (-((i as f64 - j as f64).abs()) / tau).exp()
}

/// Build the kNN graph: each node keeps edges to the k nodes maximizing
/// cosine-similarity x temporal decay; non-positive weights are dropped.
pub fn build_beat_graph(
    rows: &[Vec<f64>],
    missing: &[Vec<bool>],
    k: usize,
    tau: f64,
) -> Result<BeatGraph> {
    let n = rows.len();
    if n < 2 {
        return Err(EcgError::InvalidParameter(
            "beat graph needs at least two beats".into(),
        ));
    }
    if k == 0 || tau <= 0.0 {
        return Err(EcgError::InvalidParameter(
            "graph parameters must satisfy k >= 1, tau > 0".into(),
        ));
    }
    let feats = standardize_rows(rows, missing);

    // Beyond this distance the decay term alone is below MIN_EDGE_WEIGHT.
    let horizon = ((-(MIN_EDGE_WEIGHT.ln())) * tau).ceil() as usize;

    let mut edges = Vec::with_capacity(n * k);
    for i in 0..n {
        let lo = i.saturating_sub(horizon);
        let hi = (i + horizon + 1).min(n);
        let mut cand: Vec<(f64, usize)> = (lo..hi)
            .filter(|&j| j != i)
            .map(|j| (edge_weight(&feats[i], &feats[j], i, j, tau), j))
            .filter(|&(w, _)| w >= MIN_EDGE_WEIGHT)
            .collect();
        // Highest weight first; break ties toward temporal proximity then index.
        cand.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .unwrap()
                .then_with(|| {
                    let da = a.1.abs_diff(i);
                    let db = b.1.abs_diff(i);
                    da.cmp(&db)
                })
                .then_with(|| a.1.cmp(&b.1))
        });
        for &(w, j) in cand.iter().take(k) {
            edges.push((i, j, w));
        }
    }
    Ok(BeatGraph { n, edges, k, tau })
}

/// PageRank per the fixed-point `PR = (1-d) 1 + d A D^{-1} PR`: power
/// iteration on the out-weight-normalized transition matrix with dangling
/// mass redistributed uniformly. The converged vector sums to n.
pub fn pagerank(graph: &BeatGraph, damping: f64, tol: f64, max_iter: usize) -> Vec<f64> {
    let n = graph.n;
    if n == 0 {
        return Vec::new();
    }
    let mut out_weight = vec![0.0f64; n];
    for &(s, _, w) in &graph.edges {
        out_weight[s] += w;
    }
    let mut pr = vec![1.0f64; n];
    for _ in 0..max_iter {
        let mut next = vec![1.0 - damping; n];
        let dangling: f64 = (0..n)
            .filter(|&u| out_weight[u] <= 0.0)
            .map(|u| pr[u])
            .sum();
        let dangling_share = damping * dangling / n as f64;
        for v in next.iter_mut() {
            *v += dangling_share;
        }
        for &(s, d, w) in &graph.edges {
            next[d] += damping * pr[s] * w / out_weight[s];
        }
        let l1: f64 = pr.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        pr = next;
        if l1 < tol {
            break;
        }
    }
    pr
}

/// Barrat weighted clustering coefficient on the max-symmetrized graph;
/// nodes with fewer than two neighbors score zero.
pub fn weighted_clustering(graph: &BeatGraph) -> Vec<f64> {
    let n = graph.n;
    let sym = symmetrized(graph);
    let mut coeff = vec![0.0f64; n];
    for i in 0..n {
        let nbrs = &sym[i];
        let k_i = nbrs.len();
        if k_i < 2 {
            continue;
        }
        let s_i: f64 = nbrs.iter().map(|&(_, w)| w).sum();
        if s_i <= 0.0 {
            continue;
        }
        let mut acc = 0.0;
        for (a, &(j, w_ij)) in nbrs.iter().enumerate() {
            for (b, &(h, w_ih)) in nbrs.iter().enumerate() {
                if a == b {
                    continue;
                }
                if sym[j].iter().any(|&(x, _)| x == h) {
                    acc += (w_ij + w_ih) / 2.0;
                }
            }
        }
        coeff[i] = acc / (s_i * (k_i - 1) as f64);
    }
    coeff
}

/// Symmetrized adjacency: weight = max(w_ij, w_ji), sorted neighbor lists.
pub(crate) fn symmetrized(graph: &BeatGraph) -> Vec<Vec<(usize, f64)>> {
    let mut sym: Vec<Vec<(usize, f64)>> = vec![Vec::new(); graph.n];
    let mut upsert = |i: usize, j: usize, w: f64| match sym[i].iter_mut().find(|(x, _)| *x == j) {
        Some(entry) => entry.1 = entry.1.max(w),
        None => sym[i].push((j, w)),
    };
    for &(s, d, w) in &graph.edges {
        upsert(s, d, w);
        upsert(d, s, w);
    }
    for nbrs in sym.iter_mut() {
        nbrs.sort_by_key(|&(j, _)| j);
    }
    sym
}

/// Per-node degree/strength summary of the directed graph plus the
/// symmetrized weighted degree. Order: pagerank is computed separately.
#[derive(Debug, Clone, Default)]
pub struct NodeStrengths {
    pub wdeg: Vec<f64>,
    pub in_strength: Vec<f64>,
    pub out_strength: Vec<f64>,
    pub in_degree: Vec<f64>,
    pub out_degree: Vec<f64>,
    pub mean_out_weight: Vec<f64>,
}

pub fn node_strengths(graph: &BeatGraph) -> NodeStrengths {
    let n = graph.n;
    let mut s = NodeStrengths {
        wdeg: vec![0.0; n],
        in_strength: vec![0.0; n],
        out_strength: vec![0.0; n],
        in_degree: vec![0.0; n],
        out_degree: vec![0.0; n],
        mean_out_weight: vec![0.0; n],
    };
    for &(src, dst, w) in &graph.edges {
        s.out_strength[src] += w;
        s.in_strength[dst] += w;
        s.out_degree[src] += 1.0;
        s.in_degree[dst] += 1.0;
    }
    for i in 0..n {
        if s.out_degree[i] > 0.0 {
            s.mean_out_weight[i] = s.out_strength[i] / s.out_degree[i];
        }
    }
    for (i, nbrs) in symmetrized(graph).iter().enumerate() {
        s.wdeg[i] = nbrs.iter().map(|&(_, w)| w).sum();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn no_missing(rows: &[Vec<f64>]) -> Vec<Vec<bool>> {
        rows.iter().map(|r| vec![false; r.len()]).collect()
    }

    #[test]
    fn identical_adjacent_beats_weight_is_exp_minus_one() {
        // Standardization needs some column variance: use 3 rows where rows
        // 0 and 1 are identical and row 2 differs.
        let rows = vec![
            vec![1.0, 2.0, 3.0],
            vec![1.0, 2.0, 3.0],
            vec![-1.0, -2.0, -3.0],
        ];
        let g = build_beat_graph(&rows, &no_missing(&rows), 2, 1.0).unwrap();
        let w01 = g
            .edges
            .iter()
            .find(|&&(s, d, _)| s == 0 && d == 1)
            .map(|&(_, _, w)| w)
            .unwrap();
        assert!((w01 - (-1.0f64).exp()).abs() < 1e-9, "w01 = {w01}");
    }

    #[test]
    fn orthogonal_rows_make_no_edge() {
        // After z-scoring, row 0 and row 1 are exact negatives: cosine -1,
        // clamped to 0 and hence dropped.
        let rows = vec![vec![1.0, 0.0], vec![-1.0, 0.0]];
        let g = build_beat_graph(&rows, &no_missing(&rows), 2, 1.0).unwrap();
        assert!(g.edges.is_empty());
    }

    #[test]
    fn knn_keeps_top_k_by_exhaustive_check() {
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|_| (0..6).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let missing = no_missing(&rows);
        let k = 4;
        let g = build_beat_graph(&rows, &missing, k, 1.0).unwrap();

        let feats = super::standardize_rows(&rows, &missing);
        for i in 0..rows.len() {
            let out: Vec<(usize, f64)> = g
                .out_edges(i)
                .map(|&(_, d, w)| (d, w))
                .collect();
            assert!(out.len() <= k);
            // Every retained weight matches Eq-recomputation and belongs to
            // the node's top-k.
            let mut all: Vec<(f64, usize)> = (0..rows.len())
                .filter(|&j| j != i)
                .map(|j| (edge_weight(&feats[i], &feats[j], i, j, 1.0), j))
                .collect();
            all.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
            let kth = all.get(k - 1).map(|&(w, _)| w).unwrap_or(0.0);
            for (d, w) in out {
                let direct = edge_weight(&feats[i], &feats[d], i, d, 1.0);
                assert!((w - direct).abs() < 1e-12);
                assert!(w >= kth - 1e-12, "kept weight below the top-{k} cut");
            }
        }
    }

    #[test]
    fn pagerank_uniform_on_symmetric_complete_graph() {
        let n = 5;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    edges.push((i, j, 0.5));
                }
            }
        }
        let g = BeatGraph { n, edges, k: n - 1, tau: 1.0 };
        let pr = pagerank(&g, 0.85, 1e-10, 500);
        for &v in &pr {
            assert!((v - 1.0).abs() < 1e-6, "pr {v}");
        }
        assert!((pr.iter().sum::<f64>() - n as f64).abs() < 1e-6);
    }

    /// Dense Gaussian-elimination solve of (I - d M) pr = (1-d) 1.
    fn pagerank_dense_oracle(g: &BeatGraph, d: f64) -> Vec<f64> {
        let n = g.n;
        let mut out_weight = vec![0.0f64; n];
        for &(s, _, w) in &g.edges {
            out_weight[s] += w;
        }
        let mut m = vec![vec![0.0f64; n]; n];
        for &(s, t, w) in &g.edges {
            m[t][s] += w / out_weight[s];
        }
        for u in 0..n {
            if out_weight[u] <= 0.0 {
                for row in m.iter_mut() {
                    row[u] += 1.0 / n as f64;
                }
            }
        }
        // A = I - d*M, b = (1-d) 1
        let mut a = vec![vec![0.0f64; n + 1]; n];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = if i == j { 1.0 } else { 0.0 } - d * m[i][j];
            }
            a[i][n] = 1.0 - d;
        }
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&r1, &r2| a[r1][col].abs().partial_cmp(&a[r2][col].abs()).unwrap())
                .unwrap();
            a.swap(col, piv);
            for r in 0..n {
                if r != col && a[r][col] != 0.0 {
                    let f = a[r][col] / a[col][col];
                    for c in col..=n {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
        (0..n).map(|i| a[i][n] / a[i][i]).collect()
    }

    #[test]
    fn three_node_chain_matches_dense_solve() {
        let g = BeatGraph {
            n: 3,
            edges: vec![(0, 1, 0.8), (1, 2, 0.5), (2, 0, 0.3), (1, 0, 0.2)],
            k: 2,
            tau: 1.0,
        };
        let pr = pagerank(&g, 0.85, 1e-12, 1000);
        let oracle = pagerank_dense_oracle(&g, 0.85);
        for (a, b) in pr.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn power_iteration_matches_dense_solve_on_random_graphs() {
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for n in 2..=10usize {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j && rng.random_range(0.0..1.0) < 0.4 {
                        edges.push((i, j, rng.random_range(0.05..1.0)));
                    }
                }
            }
            let g = BeatGraph { n, edges, k: n, tau: 1.0 };
            let pr = pagerank(&g, 0.85, 1e-12, 2000);
            let oracle = pagerank_dense_oracle(&g, 0.85);
            for (a, b) in pr.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-8, "n={n}: {a} vs {b}");
            }
            assert!((pr.iter().sum::<f64>() - n as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn single_node_pagerank_is_one() {
        let g = BeatGraph { n: 1, edges: vec![], k: 1, tau: 1.0 };
        assert_eq!(pagerank(&g, 0.85, 1e-10, 100), vec![1.0]);
    }

    #[test]
    fn unit_triangle_clusters_fully() {
        let edges = vec![
            (0, 1, 1.0),
            (1, 2, 1.0),
            (2, 0, 1.0),
        ];
        let g = BeatGraph { n: 3, edges, k: 2, tau: 1.0 };
        for &c in &weighted_clustering(&g) {
            assert!((c - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn star_center_has_zero_clustering() {
        let edges = vec![(0, 1, 0.9), (0, 2, 0.8), (0, 3, 0.7)];
        let g = BeatGraph { n: 4, edges, k: 3, tau: 1.0 };
        let c = weighted_clustering(&g);
        assert_eq!(c[0], 0.0);
    }

    /// Literal triple-loop evaluation of the Barrat formula.
    fn clustering_brute_force(g: &BeatGraph) -> Vec<f64> {
        let sym = symmetrized(g);
        let n = g.n;
        let w = |i: usize, j: usize| -> f64 {
            sym[i]
                .iter()
                .find(|&&(x, _)| x == j)
                .map(|&(_, w)| w)
                .unwrap_or(0.0)
        };
        let adj = |i: usize, j: usize| -> f64 {
            if w(i, j) > 0.0 {
                1.0
            } else {
                0.0
            }
        };
        (0..n)
            .map(|i| {
                let k_i: f64 = (0..n).map(|j| adj(i, j)).sum();
                let s_i: f64 = (0..n).map(|j| w(i, j)).sum();
                if k_i < 2.0 || s_i <= 0.0 {
                    return 0.0;
                }
                let mut acc = 0.0;
                for j in 0..n {
                    for h in 0..n {
                        if j != h {
                            acc += (w(i, j) + w(i, h)) / 2.0 * adj(i, j) * adj(i, h) * adj(j, h);
                        }
                    }
                }
                acc / (s_i * (k_i - 1.0))
            })
            .collect()
    }

    #[test]
    fn clustering_matches_brute_force_on_random_graphs() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for n in 3..=8usize {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j && rng.random_range(0.0..1.0) < 0.5 {
                        edges.push((i, j, rng.random_range(0.1..1.0)));
                    }
                }
            }
            let g = BeatGraph { n, edges, k: n, tau: 1.0 };
            let fast = weighted_clustering(&g);
            let brute = clustering_brute_force(&g);
            for (a, b) in fast.iter().zip(&brute) {
                assert!((a - b).abs() < 1e-12, "n={n}: {a} vs {b}");
            }
            // weights in (0,1] keep the coefficient in [0,1]
            assert!(fast.iter().all(|&c| (0.0..=1.0 + 1e-12).contains(&c)));
        }
    }
}
