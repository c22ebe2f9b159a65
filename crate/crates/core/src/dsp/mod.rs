//! Shared signal-processing kernels: IIR bandpass design and zero-phase
//! filtering, polyphase resampling, DFT/Welch spectra, Mexican-hat CWT and
//! Daubechies wavelet packets.
//!
//! Everything here is a pure function over immutable slices; callers are free
//! to run kernels concurrently over independent signals.

mod butterworth;
mod cwt;
mod fourier;
mod resample;
mod wavelet;

pub use butterworth::{design_butterworth_bandpass, filtfilt, Biquad, BiquadCascade};
pub use cwt::{cwt_energy_envelope, cwt_mexican_hat, mexican_hat_kernel};
pub use fourier::{dft_complex, dft_magnitudes, one_sided_power, welch_psd, PsdEstimate};
pub use resample::{resample_polyphase, resample_to_len};
pub use wavelet::{wavelet_packet_energies, wavelet_packet_leaves};
