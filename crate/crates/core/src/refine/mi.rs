//! Plug-in mutual information between a continuous column and class labels.

/// Number of equal-frequency bins for the continuous variable.
const MI_BINS: usize = 16;

/// Discretize into up to 16 equal-frequency bins (duplicate quantile edges
/// merged) and compute the plug-in MI estimate in nats from the joint
/// histogram. Constant columns score zero.
pub fn mutual_information(column: &[f64], labels: &[usize]) -> f64 {
    assert_eq!(column.len(), labels.len());
    let n = column.len();
    if n == 0 {
        return 0.0;
    }

    // Equal-frequency bin edges from sorted values.
    let mut sorted = column.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut edges: Vec<f64> = (1..MI_BINS)
        .map(|k| sorted[(k * n / MI_BINS).min(n - 1)])
        .collect();
    edges.dedup_by(|a, b| a == b);
    // bin of v = count of edges <= v
    let bin_of = |v: f64| -> usize { edges.iter().filter(|&&e| e <= v).count() };
    let n_bins = edges.len() + 1;
    if n_bins < 2 {
        return 0.0;
    }

    let n_classes = labels.iter().max().map(|m| m + 1).unwrap_or(1);
    let mut joint = vec![vec![0usize; n_classes]; n_bins];
    for (&v, &y) in column.iter().zip(labels) {
        joint[bin_of(v)][y] += 1;
    }
    let nf = n as f64;
    let bin_totals: Vec<f64> = joint.iter().map(|row| row.iter().sum::<usize>() as f64).collect();
    let class_totals: Vec<f64> = (0..n_classes)
        .map(|c| joint.iter().map(|row| row[c]).sum::<usize>() as f64)
        .collect();
    let mut mi = 0.0;
    for (b, row) in joint.iter().enumerate() {
        for (c, &count) in row.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let p_xy = count as f64 / nf;
            mi += p_xy * (p_xy * nf * nf / (bin_totals[b] * class_totals[c])).ln();
        }
    }
    mi.max(0.0)
}
