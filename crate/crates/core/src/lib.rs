//! End-to-end ECG arrhythmia detection at desk scale: WFDB ingestion,
//! filtering, ensemble R-peak detection, adaptive beat segmentation, hybrid
//! feature engineering (time/frequency/wavelet/morphology plus HRV and
//! graph descriptors), feature refinement, class balancing, and lightweight
//! interpretable classifiers with resource profiling.

pub mod augment;
pub mod dsp;
pub mod rpeak;
pub mod segmentation;
pub mod error;
pub mod features;
pub mod models;
pub mod wfdb;

pub use error::{EcgError, Result};
