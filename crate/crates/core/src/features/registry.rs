//! Canonical base-feature registry: 88 named columns in a fixed order.

use sha2::{Digest, Sha256};

pub const BASE_REGISTRY_VERSION: &str = "base-v1";
pub const BASE_FEATURE_COUNT: usize = 88;

pub const TIME_STATS: [&str; 10] = [
    "mean", "std", "skew", "kurt", "rms", "zcr", "max", "min", "ptp", "mad",
];
pub const FREQ_STATS: [&str; 6] = [
    "low_band_0_5Hz",
    "mid_band_5_15Hz",
    "high_band_15_40Hz",
    "spec_entropy",
    "dominant_freq",
    "total_power",
];
pub const WPE_LEAVES: usize = 8;
pub const CWT_SCALES: [u32; 4] = [4, 8, 16, 32];
pub const EXTRA_STATS: [&str; 7] = [
    "q25",
    "q75",
    "iqr",
    "hjorth_mobility",
    "hjorth_complexity",
    "line_length",
    "energy",
];
pub const MORPH_FEATURES: [&str; 14] = [
    "qrs_dur_ms",
    "r_amp_mV",
    "q_amp_mV",
    "s_amp_mV",
    "p_amp_mV",
    "t_amp_mV",
    "st_dev_mV",
    "qt_ms",
    "pr_ms",
    "p_peak_ms",
    "t_peak_ms",
    "qrs_onset_ms",
    "qrs_offset_ms",
    "qrs_area",
];
pub const RR_FEATURES: [&str; 4] = ["rr_prev", "rr_next", "rr_ratio", "local_rr_mean"];

/// Versioned, ordered column layout. The order here IS the canonical column
/// order of the base feature matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureRegistry {
    pub version: String,
    pub names: Vec<String>,
}

impl FeatureRegistry {
    /// The 88-column base layout over two channels: per-channel time stats,
    /// band powers/spectral entropy, wavelet-packet energies, CWT-scale
    /// energies and extra shape stats; lead-II morphology; RR context.
    /// Primary-lead frequency and CWT columns keep their bare names, channel
    /// 1 gets a `_ch1` suffix.
    pub fn base() -> Self {
        let mut names = Vec::with_capacity(BASE_FEATURE_COUNT);
        for ch in 0..2 {
            for stat in TIME_STATS {
                names.push(format!("{stat}_ch{ch}"));
            }
        }
        for ch in 0..2 {
            for stat in FREQ_STATS {
                names.push(suffixed(stat, ch));
            }
        }
        for ch in 0..2 {
            for leaf in 0..WPE_LEAVES {
                names.push(format!("wpe{leaf}_ch{ch}"));
            }
        }
        for ch in 0..2 {
            for scale in CWT_SCALES {
                names.push(suffixed(&format!("cwt_energy_s{scale}"), ch));
            }
        }
        for ch in 0..2 {
            for stat in EXTRA_STATS {
                names.push(format!("{stat}_ch{ch}"));
            }
        }
        for name in MORPH_FEATURES {
            names.push(name.to_string());
        }
        for name in RR_FEATURES {
            names.push(name.to_string());
        }
        debug_assert_eq!(names.len(), BASE_FEATURE_COUNT);
        FeatureRegistry {
            version: BASE_REGISTRY_VERSION.to_string(),
            names,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Stable content hash for provenance stamps.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.version.as_bytes());
        for n in &self.names {
            hasher.update([0u8]);
            hasher.update(n.as_bytes());
        }
        hex_prefix(&hasher.finalize())
    }

    /// Base columns that receive lag-1/lag-2 context copies during
    /// augmentation: both channels' time stats, primary-lead band powers,
    /// morphology, and RR context (44 columns).
    pub fn lagged_column_names(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(44);
        for ch in 0..2 {
            for stat in TIME_STATS {
                out.push(format!("{stat}_ch{ch}"));
            }
        }
        for stat in FREQ_STATS {
            out.push(stat.to_string());
        }
        for name in MORPH_FEATURES {
            out.push(name.to_string());
        }
        for name in RR_FEATURES {
            out.push(name.to_string());
        }
        debug_assert_eq!(out.len(), 44);
        out
    }
}

fn suffixed(stat: &str, ch: usize) -> String {
    if ch == 0 {
        stat.to_string()
    } else {
        format!("{stat}_ch{ch}")
    }
}

pub(crate) fn hex_prefix(digest: &[u8]) -> String {
    digest
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect::<String>()
}
