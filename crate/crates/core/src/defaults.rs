//! Default parameter values used when a caller leaves a setting unspecified.

use crate::types::BandSpec;

/// Post-trigger span kept by trigger synchronization, seconds.
pub const DURATION_S: f64 = 2.0;
/// Reference period relative to the trigger, seconds.
pub const REF_PER_S: (f64, f64) = (-1.3, -0.3);
/// Confidence-band multiplier for ERD/ERS detection.
pub const COF_INTV: f64 = 3.0;
/// Perturbation repetitions for phase estimation.
pub const PERTNUM: usize = 100;
/// Connectivity band edges, Hz.
pub const CONNECTIVITY_BAND_HZ: (f64, f64) = (12.0, 32.0);
/// Connectivity analysis span relative to the trigger, seconds.
pub const CONNECTIVITY_SPAN_S: (f64, f64) = (-3.0, 2.0);
/// Connectivity window length, seconds.
pub const CONNECTIVITY_WINDOW_S: f64 = 1.0;
/// Hamming segments per coherence window.
pub const MSC_SEGMENTS: usize = 4;
/// EMG onset threshold multiplier.
pub const TH_COEFF: f64 = 1.0;
/// EMG onset standard-deviation window, seconds.
pub const ONSET_WINDOW_S: f64 = 0.05;
/// Quiet prefix used for EMG baseline statistics, seconds.
pub const ONSET_BASELINE_S: f64 = 0.5;
/// CIC band-pass order.
pub const CIC_ORDER: usize = 4;
/// Drift-rejection window, seconds (both stages).
pub const DRIFT_WINDOW_S: f64 = 1.5;
/// ERP trend smoother length, seconds.
pub const ERP_TREND_S: f64 = 0.25;
/// EMG curve smoother length, seconds.
pub const EMG_TREND_S: f64 = 0.1;
/// Interval for the immediate post-onset EMG slope, seconds.
pub const EMG_IMMEDIATE_S: f64 = 0.2;
/// Median window of the ECG extractor, seconds.
pub const ECG_MEDIAN_S: f64 = 0.05;
/// Reference channel label for all-vs-reference PLV.
pub const REFERENCE_CHANNEL: &str = "C3";
/// Seed for perturbation draws.
pub const SEED: u64 = 0x5EED_0001;

pub fn connectivity_band() -> BandSpec {
    BandSpec::from_edges(CONNECTIVITY_BAND_HZ.0, CONNECTIVITY_BAND_HZ.1)
}
