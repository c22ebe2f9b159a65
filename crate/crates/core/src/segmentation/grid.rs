//! Grid search over (alpha, beta) window fractions.

use super::loss::{composite_loss, LossWeights};
use super::{rr_context, WindowParams};
use crate::error::{EcgError, Result};

/// Mean loss over beats for one grid cell.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct GridCell {
    pub alpha: f64,
    pub beta: f64,
    pub mean_loss: f64,
}

/// Loss-minimizing cell for one beat.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PerBeatOptimum {
    pub beat_index: usize,
    pub r_peak: usize,
    pub alpha: f64,
    pub beta: f64,
    pub loss: f64,
}

#[derive(Debug, Clone)]
pub struct GridSearchResult {
    pub per_beat: Vec<PerBeatOptimum>,
    pub surface: Vec<GridCell>,
    /// Median parameter set of the lowest-loss 5% of all (beat, cell) samples.
    pub robust: WindowParams,
    /// Global minimum over all samples, with the beat that achieved it.
    pub exact: PerBeatOptimum,
}

/// Evaluate the composite loss for every (beat, alpha, beta) sample on one
/// channel and derive per-beat optima, the mean-loss surface, the exact
/// global minimum, and the robust (top-5% median) optimum.
pub fn grid_search_window(
    channel: &[f64],
    fs: f64,
    r_peaks: &[usize],
    alpha_grid: &[f64],
    beta_grid: &[f64],
    weights: &LossWeights,
) -> Result<GridSearchResult> {
    if alpha_grid.is_empty() || beta_grid.is_empty() {
        return Err(EcgError::InvalidParameter("empty parameter grid".into()));
    }
    if r_peaks.is_empty() {
        return Err(EcgError::InvalidParameter(
            "grid search needs at least one beat".into(),
        ));
    }
    let rr = rr_context(r_peaks, fs);

    // losses[beat][cell], iteration order alpha-major.
    let n_cells = alpha_grid.len() * beta_grid.len();
    let mut losses = vec![vec![f64::INFINITY; n_cells]; r_peaks.len()];
    for (bi, (&r, &(rr_prev, rr_next))) in r_peaks.iter().zip(&rr).enumerate() {
        for (ai, &alpha) in alpha_grid.iter().enumerate() {
            for (bj, &beta) in beta_grid.iter().enumerate() {
                let start = r.saturating_sub((alpha * rr_prev).round() as usize);
                let end = (r + (beta * rr_next).round() as usize).min(channel.len());
                let cell = ai * beta_grid.len() + bj;
                if end > start && end - start >= 32 {
                    if let Ok(loss) =
                        composite_loss(&channel[start..end], fs, (5.0, 15.0), weights)
                    {
                        losses[bi][cell] = loss.total;
                    }
                }
            }
        }
    }

    let cell_params = |cell: usize| -> (f64, f64) {
        (
            alpha_grid[cell / beta_grid.len()],
            beta_grid[cell % beta_grid.len()],
        )
    };

    let per_beat: Vec<PerBeatOptimum> = losses
        .iter()
        .enumerate()
        .map(|(bi, row)| {
            let (cell, &loss) = row
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap())
                .unwrap();
            let (alpha, beta) = cell_params(cell);
            PerBeatOptimum {
                beat_index: bi,
                r_peak: r_peaks[bi],
                alpha,
                beta,
                loss,
            }
        })
        .collect();

    let surface: Vec<GridCell> = (0..n_cells)
        .map(|cell| {
            let finite: Vec<f64> = losses
                .iter()
                .map(|row| row[cell])
                .filter(|l| l.is_finite())
                .collect();
            let mean_loss = if finite.is_empty() {
                f64::INFINITY
            } else {
                finite.iter().sum::<f64>() / finite.len() as f64
            };
            let (alpha, beta) = cell_params(cell);
            GridCell {
                alpha,
                beta,
                mean_loss,
            }
        })
        .collect();

    // Flatten all finite samples for the exact minimum and the robust set.
    let mut samples: Vec<(f64, usize, usize)> = Vec::with_capacity(r_peaks.len() * n_cells);
    for (bi, row) in losses.iter().enumerate() {
        for (cell, &l) in row.iter().enumerate() {
            if l.is_finite() {
                samples.push((l, bi, cell));
            }
        }
    }
    if samples.is_empty() {
        return Err(EcgError::InvalidParameter(
            "no finite loss sample on the grid (windows too short?)".into(),
        ));
    }
    samples.sort_by(|a, b| (a.0, a.1, a.2).partial_cmp(&(b.0, b.1, b.2)).unwrap());

    let (exact_loss, exact_beat, exact_cell) = samples[0];
    let (ea, eb) = cell_params(exact_cell);
    let exact = PerBeatOptimum {
        beat_index: exact_beat,
        r_peak: r_peaks[exact_beat],
        alpha: ea,
        beta: eb,
        loss: exact_loss,
    };

    let robust = robust_optimum_from_samples(
        &samples
            .iter()
            .map(|&(l, _, cell)| {
                let (a, b) = cell_params(cell);
                (l, a, b)
            })
            .collect::<Vec<_>>(),
    );

    Ok(GridSearchResult {
        per_beat,
        surface,
        robust,
        exact,
    })
}

/// Median (alpha, beta) of the samples whose loss is at or below the 5th
/// percentile value. Ties at the threshold are all included, so a constant
/// surface degrades gracefully to the grid median.
pub fn robust_optimum_from_samples(samples: &[(f64, f64, f64)]) -> WindowParams {
    let mut sorted: Vec<(f64, f64, f64)> = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = ((0.05 * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    let threshold = sorted[k - 1].0;
    let top: Vec<&(f64, f64, f64)> = sorted.iter().filter(|s| s.0 <= threshold).collect();
    let mut alphas: Vec<f64> = top.iter().map(|s| s.1).collect();
    let mut betas: Vec<f64> = top.iter().map(|s| s.2).collect();
    alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    betas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    WindowParams {
        alpha: alphas[(alphas.len() - 1) / 2],
        beta: betas[(betas.len() - 1) / 2],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rpeak::testsig::bump_train;
    use crate::segmentation::{DEFAULT_ALPHA_GRID, DEFAULT_BETA_GRID};

    fn synthetic_record() -> (Vec<f64>, Vec<usize>) {
        let fs = 360.0;
        let x = bump_train(fs, 30.0, 1.25, |_| 1.0);
        let period = fs / 1.25;
        let peaks: Vec<usize> = (1..36)
            .map(|k| (k as f64 * period).round() as usize)
            .filter(|&p| p < x.len())
            .collect();
        (x, peaks)
    }

    #[test]
    fn constant_surface_robust_optimum_is_grid_median() {
        // All-equal losses: every sample ties at the 5% threshold, so the
        // robust optimum is the grid median of both axes.
        let mut samples = Vec::new();
        for &a in &[0.1, 0.2, 0.3] {
            for &b in &[0.4, 0.5, 0.6] {
                samples.push((1.0, a, b));
            }
        }
        let robust = robust_optimum_from_samples(&samples);
        assert_eq!((robust.alpha, robust.beta), (0.2, 0.5));
    }

    #[test]
    fn argmin_matches_exhaustive_recomputation() {
        let (x, peaks) = synthetic_record();
        let fs = 360.0;
        let grid_a = [0.2, 0.35, 0.5];
        let grid_b = [0.35, 0.5, 0.65];
        let weights = LossWeights::default();
        let res = grid_search_window(&x, fs, &peaks, &grid_a, &grid_b, &weights).unwrap();

        // Brute-force oracle: recompute the loss of every cell directly.
        let rr = super::super::rr_context(&peaks, fs);
        for opt in &res.per_beat {
            let (rr_prev, rr_next) = rr[opt.beat_index];
            let r = peaks[opt.beat_index];
            let mut best = (f64::INFINITY, 0.0, 0.0);
            for &a in &grid_a {
                for &b in &grid_b {
                    let start = r.saturating_sub((a * rr_prev).round() as usize);
                    let end = (r + (b * rr_next).round() as usize).min(x.len());
                    if end > start && end - start >= 32 {
                        let l = composite_loss(&x[start..end], fs, (5.0, 15.0), &weights)
                            .unwrap()
                            .total;
                        if l < best.0 {
                            best = (l, a, b);
                        }
                    }
                }
            }
            assert!((best.0 - opt.loss).abs() < 1e-12);
            assert_eq!((best.1, best.2), (opt.alpha, opt.beta));
        }
    }

    #[test]
    fn surface_has_one_row_per_cell_and_default_grids_hold_the_reported_point() {
        let (x, peaks) = synthetic_record();
        let res = grid_search_window(
            &x,
            360.0,
            &peaks,
            &DEFAULT_ALPHA_GRID,
            &DEFAULT_BETA_GRID,
            &LossWeights::default(),
        )
        .unwrap();
        assert_eq!(res.surface.len(), 81);
        assert!(res
            .surface
            .iter()
            .any(|c| c.alpha == 0.233 && c.beta == 0.367));
    }

    #[test]
    fn one_by_one_grid_is_its_own_optimum() {
        let (x, peaks) = synthetic_record();
        let res = grid_search_window(
            &x,
            360.0,
            &peaks,
            &[0.25],
            &[0.45],
            &LossWeights::default(),
        )
        .unwrap();
        assert_eq!((res.robust.alpha, res.robust.beta), (0.25, 0.45));
        assert_eq!((res.exact.alpha, res.exact.beta), (0.25, 0.45));
    }

    #[test]
    fn entropy_only_weights_minimize_entropy() {
        // With weights (1,0,0) and all windows inside the penalty-free
        // envelope, the argmin must agree with brute-force entropy
        // minimization on a 5x5 grid.
        let (x, peaks) = synthetic_record();
        let fs = 360.0;
        let grid: Vec<f64> = vec![0.30, 0.35, 0.40, 0.45, 0.50];
        let w = LossWeights { entropy: 1.0, snr: 0.0, energy: 0.0 };
        let res = grid_search_window(&x, fs, &peaks, &grid, &grid, &w).unwrap();
        let rr = super::super::rr_context(&peaks, fs);
        for opt in res.per_beat.iter().take(5) {
            let (rr_prev, rr_next) = rr[opt.beat_index];
            let r = peaks[opt.beat_index];
            let mut best = (f64::INFINITY, 0.0, 0.0);
            for &a in &grid {
                for &b in &grid {
                    let start = r.saturating_sub((a * rr_prev).round() as usize);
                    let end = (r + (b * rr_next).round() as usize).min(x.len());
                    let l = composite_loss(&x[start..end], fs, (5.0, 15.0), &w)
                        .unwrap();
                    assert_eq!(l.length_penalty, 0.0, "window escaped the envelope");
                    if l.total < best.0 {
                        best = (l.total, a, b);
                    }
                }
            }
            assert_eq!((best.1, best.2), (opt.alpha, opt.beta));
        }
    }
}
