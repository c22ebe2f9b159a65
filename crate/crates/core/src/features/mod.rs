//! Per-beat base feature extraction: time-domain statistics, band powers and
//! spectral entropy, wavelet-packet energies, CWT-scale energies, lead-II
//! morphology and RR context — 88 named columns in registry order.

mod extract;
mod frequency;
mod matrix;
mod morphology;
mod registry;
mod time_domain;

pub use extract::{beat_contexts, extract_base_features, BeatContext, FeatureRow};
pub use frequency::frequency_domain_features;
pub use matrix::{BeatRef, FeatureMatrix};
pub use morphology::morphological_features;
pub use registry::{FeatureRegistry, BASE_FEATURE_COUNT, BASE_REGISTRY_VERSION};
pub use time_domain::{
    energy, excess_kurtosis, extra_shape_features, hjorth_complexity, hjorth_mobility,
    line_length, mean, median, median_abs_dev, quantile, rms, sample_std, skewness,
    time_domain_features, zero_crossing_rate,
};

use crate::segmentation::BeatSegment;

/// Extract base rows for one record's ordered segments into a matrix.
pub fn extract_record_features(segments: &[BeatSegment]) -> crate::Result<FeatureMatrix> {
    let registry = FeatureRegistry::base();
    let contexts = beat_contexts(segments);
    let mut matrix = FeatureMatrix::empty(registry.names.clone());
    for (seg, ctx) in segments.iter().zip(&contexts) {
        let row = extract_base_features(seg, ctx);
        matrix.push_row(
            row.values,
            row.missing,
            seg.label,
            BeatRef {
                record_id: seg.record_id.clone(),
                r_peak: seg.r_peak,
            },
        )?;
    }
    Ok(matrix)
}
