//! Adaptive beat segmentation: per-beat windows from (alpha, beta) RR
//! fractions chosen by minimizing a composite loss, IQR outlier pruning, and
//! fixed-length resampling.

mod grid;
mod loss;
mod segmenter;

pub use grid::{grid_search_window, GridCell, GridSearchResult, PerBeatOptimum};
pub use loss::{composite_loss, LossWeights, SegmentLoss};
pub use segmenter::{segment_record, BeatSegment};

use crate::error::{EcgError, Result};

/// Pre-RR / post-RR window fractions.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct WindowParams {
    pub alpha: f64,
    pub beta: f64,
}

impl WindowParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0 < alpha && alpha <= 1.0 && 0.0 < beta && beta <= 1.0) {
            return Err(EcgError::InvalidParameter(format!(
                "window fractions must lie in (0, 1], got alpha={alpha} beta={beta}"
            )));
        }
        Ok(WindowParams { alpha, beta })
    }
}

/// Production default: the robust grid-search optimum.
pub const DEFAULT_WINDOW: WindowParams = WindowParams {
    alpha: 0.233,
    beta: 0.367,
};

/// Default fixed segment length (~0.9 s at 360 Hz).
pub const DEFAULT_TARGET_LEN: usize = 324;

/// Search grids: step 1/15 rounded to three decimals, covering both the
/// nominal ranges and the reported optima.
pub const DEFAULT_ALPHA_GRID: [f64; 9] = [
    0.100, 0.167, 0.233, 0.300, 0.367, 0.433, 0.500, 0.567, 0.633,
];
pub const DEFAULT_BETA_GRID: [f64; 9] = [
    0.300, 0.367, 0.433, 0.500, 0.567, 0.633, 0.700, 0.767, 0.833,
];

/// RR context for one beat, in samples; missing neighbors use the record
/// median (or a 0.8 s fallback on single-beat records).
pub(crate) fn rr_context(r_peaks: &[usize], fs: f64) -> Vec<(f64, f64)> {
    let mut diffs: Vec<f64> = r_peaks.windows(2).map(|w| (w[1] - w[0]) as f64).collect();
    let median = if diffs.is_empty() {
        0.8 * fs
    } else {
        diffs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        diffs[(diffs.len() - 1) / 2]
    };
    (0..r_peaks.len())
        .map(|i| {
            let prev = if i > 0 {
                (r_peaks[i] - r_peaks[i - 1]) as f64
            } else {
                median
            };
            let next = if i + 1 < r_peaks.len() {
                (r_peaks[i + 1] - r_peaks[i]) as f64
            } else {
                median
            };
            (prev, next)
        })
        .collect()
}
