//! EMG onset detection, ECG artifact extraction and trigger-averaged EMG
//! quantification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::dsp;
use crate::elliptic;
use crate::erp::{smooth, trigger_synch, SynchronizedTrials};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnsetParams {
    /// Standard-deviation window in samples; `None` means 0.05 s.
    pub window: Option<usize>,
    pub th_coeff: f64,
    /// Quiet prefix used for the baseline statistics, seconds.
    pub baseline_s: f64,
}

impl Default for OnsetParams {
    fn default() -> Self {
        OnsetParams {
            window: None,
            th_coeff: defaults::TH_COEFF,
            baseline_s: defaults::ONSET_BASELINE_S,
        }
    }
}

impl OnsetParams {
    pub fn window_samples(&self, fs: f64) -> usize {
        self.window.unwrap_or_else(|| (defaults::ONSET_WINDOW_S * fs).round() as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnsetResult {
    pub onset_sample: usize,
    pub onset_time: f64,
    pub std_vector: Vec<f64>,
    pub threshold: f64,
}

/// Population standard deviation over the `w` samples ending at each index.
/// The first `w - 1` entries repeat the first full-window value.
pub fn std_vector(x: &[f64], w: usize) -> Vec<f64> {
    let n = x.len();
    if n < w || w == 0 {
        return Vec::new();
    }
    let mut out = vec![0.0; n];
    for t in w - 1..n {
        out[t] = dsp::mean_std(&x[t + 1 - w..=t]).1;
    }
    let first = out[w - 1];
    out[..w - 1].iter_mut().for_each(|v| *v = first);
    out
}

/// Two-stage onset detection on the windowed standard deviation.
///
/// Stage one finds the first run of at least `W/2` samples above
/// `mean + th_coeff * std` of the baseline STD values. Stage two walks back
/// from the run start, up to `W` samples, to the last point where the
/// smoothed STD trend was still at the baseline mean; the onset is the
/// sample after it.
pub fn emg_onset(x: &[f64], fs: f64, params: &OnsetParams) -> Result<OnsetResult> {
    let w = params.window_samples(fs);
    if w < 2 {
        return Err(Error::InvalidParameter(format!("onset window must be at least 2 samples, got {w}")));
    }
    if !(params.th_coeff > 0.0) {
        return Err(Error::InvalidParameter(format!("th_coeff must be positive, got {}", params.th_coeff)));
    }
    let base_len = ((params.baseline_s * fs).round() as usize).max(w);
    let needed = base_len + w;
    if x.len() < needed {
        return Err(Error::SignalTooShort { needed, actual: x.len() });
    }
    let sv = std_vector(x, w);
    let (base_mean, base_std) = dsp::mean_std(&sv[..base_len]);
    let threshold = base_mean + params.th_coeff * base_std;

    let persist = w.div_ceil(2);
    let mut run_start = None;
    let mut count = 0;
    for (t, &v) in sv.iter().enumerate().skip(base_len) {
        if v > threshold {
            count += 1;
            if count >= persist {
                run_start = Some(t + 1 - count);
                break;
            }
        } else {
            count = 0;
        }
    }
    let Some(r) = run_start else {
        return Err(Error::NoOnsetDetected { threshold });
    };

    let trend = dsp::trailing_mean(&sv, (w / 4).max(1));
    let floor = r.saturating_sub(w).max(base_len);
    let onset_sample = (floor..r).rev().find(|&s| trend[s] <= base_mean).map_or(r, |s| s + 1);
    Ok(OnsetResult {
        onset_sample,
        onset_time: onset_sample as f64 / fs,
        std_vector: sv,
        threshold,
    })
}

/// ECG pattern estimate: zero-phase 4th-order elliptic low-pass at 30 Hz
/// (0.1 dB ripple, 50 dB stopband) followed by a 0.05 s running median.
pub fn ecg_extract(x: &[f64], fs: f64) -> Result<Vec<f64>> {
    const MIN_FS: f64 = 60.0;
    if !(fs > MIN_FS) {
        return Err(Error::SamplingTooLow { fs, min: MIN_FS });
    }
    if x.is_empty() {
        return Err(Error::EmptySignal);
    }
    let sos = elliptic::ellip_lowpass(4, 0.1, 50.0, 30.0, fs)?;
    let low = elliptic::sosfiltfilt(&sos, x);
    let len = ((defaults::ECG_MEDIAN_S * fs).round() as usize).clamp(1, x.len());
    Ok(dsp::moving_median(&low, len))
}

/// Trigger-averaged, rectified EMG and its summary metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantifiedEmg {
    pub curve: Vec<f64>,
    pub time_vec: Vec<f64>,
    pub trigger_time_sec: f64,
    /// Largest post-trigger value of the curve.
    pub peak_magnitude: f64,
    pub peak_time_sec: f64,
    /// Least-squares slope from the trigger to the peak, per second.
    pub activation_slope: f64,
    /// Least-squares slope over the first 0.2 s after the trigger.
    pub immediate_post_onset_slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmgQuantOptions {
    pub trend_s: f64,
    pub immediate_s: f64,
}

impl Default for EmgQuantOptions {
    fn default() -> Self {
        EmgQuantOptions {
            trend_s: defaults::EMG_TREND_S,
            immediate_s: defaults::EMG_IMMEDIATE_S,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmgQuantification {
    pub quantified: QuantifiedEmg,
    /// Rectified, ECG-free trials after synchronization.
    pub synchronized: SynchronizedTrials,
    /// Per-trial ECG estimates over the full trial.
    pub ecg_estimates: Vec<Vec<f64>>,
}

/// Removes the ECG estimate, rectifies, synchronizes, averages and smooths.
pub fn emg_quantification<T: AsRef<[f64]> + Sync>(
    trials: &[T],
    fs: f64,
    onset_times: &[f64],
    duration: f64,
    opts: &EmgQuantOptions,
) -> Result<EmgQuantification> {
    if trials.is_empty() {
        return Err(Error::EmptyTrialSet);
    }
    let per_trial: Vec<(Vec<f64>, Vec<f64>)> = trials
        .par_iter()
        .map(|t| {
            let x = t.as_ref();
            let ecg = ecg_extract(x, fs)?;
            let rect = x.iter().zip(&ecg).map(|(v, e)| (v - e).abs()).collect();
            Ok((rect, ecg))
        })
        .collect::<Result<_>>()?;
    let (rectified, ecg_estimates): (Vec<_>, Vec<_>) = per_trial.into_iter().unzip();
    let synchronized = trigger_synch(&rectified, fs, onset_times, duration)?;
    let curve = smooth(&synchronized.mean(), fs, opts.trend_s);

    let trig = synchronized.trigger_sample.min(curve.len().saturating_sub(1));
    let t = &synchronized.time_vec;
    let (mut peak_idx, mut peak) = (trig, curve.get(trig).copied().unwrap_or(0.0));
    for (i, &v) in curve.iter().enumerate().skip(trig) {
        if v > peak {
            peak = v;
            peak_idx = i;
        }
    }
    let activation_slope = dsp::ls_slope(&t[trig..=peak_idx], &curve[trig..=peak_idx]);
    let imm_end = (trig + (opts.immediate_s * fs).round() as usize).min(curve.len() - 1);
    let immediate_post_onset_slope = dsp::ls_slope(&t[trig..=imm_end], &curve[trig..=imm_end]);

    Ok(EmgQuantification {
        quantified: QuantifiedEmg {
            time_vec: t.clone(),
            trigger_time_sec: synchronized.trigger_time_sec,
            peak_magnitude: peak,
            peak_time_sec: t[peak_idx],
            activation_slope,
            immediate_post_onset_slope,
            curve,
        },
        synchronized,
        ecg_estimates,
    })
}
