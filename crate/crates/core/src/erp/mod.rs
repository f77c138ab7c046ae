//! Trigger synchronization, the band-power ERP pipeline, ERD/ERS
//! quantification and time-frequency ERP maps.

mod tf;

pub use tf::{trigger_avg_tf_erp, TfMap, TfMethod, TfOptions};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::dsp;
use crate::error::{Error, Result};
use crate::precondition::cic_bandpass;
use crate::types::BandSpec;

/// Trials aligned on a common trigger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynchronizedTrials {
    pub ensemble: Vec<Vec<f64>>,
    pub trigger_time_sec: f64,
    pub trigger_sample: usize,
    pub time_vec: Vec<f64>,
    pub fs: f64,
}

impl SynchronizedTrials {
    pub fn len(&self) -> usize {
        self.time_vec.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time_vec.is_empty()
    }

    /// Sample-wise mean over trials, summed in trial order.
    pub fn mean(&self) -> Vec<f64> {
        ensemble_mean(&self.ensemble)
    }
}

pub(crate) fn ensemble_mean(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.first().map_or(0, Vec::len);
    let mut acc = vec![0.0; n];
    for row in rows {
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v;
        }
    }
    let inv = 1.0 / rows.len().max(1) as f64;
    acc.iter_mut().for_each(|a| *a *= inv);
    acc
}

/// Aligns trials so every onset lands on the earliest onset, keeping
/// `duration` seconds after it.
pub fn trigger_synch<T: AsRef<[f64]>>(
    trials: &[T],
    fs: f64,
    onset_times: &[f64],
    duration: f64,
) -> Result<SynchronizedTrials> {
    if trials.is_empty() {
        return Err(Error::EmptyTrialSet);
    }
    if onset_times.len() != trials.len() {
        return Err(Error::InconsistentTrials(format!(
            "{} onsets for {} trials",
            onset_times.len(),
            trials.len()
        )));
    }
    if !(duration > 0.0) {
        return Err(Error::InvalidParameter(format!("duration must be positive, got {duration}")));
    }
    if let Some(bad) = onset_times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::InvalidParameter(format!("onset time {bad} must be finite and non-negative")));
    }
    let trigger_time_sec = onset_times.iter().copied().fold(f64::INFINITY, f64::min);
    let trigger_sample = (trigger_time_sec * fs).round() as usize;
    let len = ((trigger_time_sec + duration) * fs).round() as usize;

    let mut ensemble = Vec::with_capacity(trials.len());
    for (i, (trial, &onset)) in trials.iter().zip(onset_times).enumerate() {
        let trial = trial.as_ref();
        let shift = (onset * fs).round() as usize - trigger_sample;
        let too_short = onset + duration > trial.len() as f64 / fs + 1e-9 || shift + len > trial.len();
        if too_short {
            return Err(Error::TrialTooShort { trial: i });
        }
        ensemble.push(trial[shift..shift + len].to_vec());
    }
    Ok(SynchronizedTrials {
        ensemble,
        trigger_time_sec,
        trigger_sample,
        time_vec: (0..len).map(|i| i as f64 / fs).collect(),
        fs,
    })
}

/// Trigger-averaged band power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErpCurve {
    pub values: Vec<f64>,
    pub time_vec: Vec<f64>,
    pub trigger_time_sec: f64,
    pub band: BandSpec,
    pub n_trials: usize,
}

/// Knobs of the band-power pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErpOptions {
    pub cic_order: usize,
    /// Length of the final moving-average smoother, seconds.
    pub trend_s: f64,
}

impl Default for ErpOptions {
    fn default() -> Self {
        ErpOptions {
            cic_order: defaults::CIC_ORDER,
            trend_s: defaults::ERP_TREND_S,
        }
    }
}

/// Band-pass, square, synchronize, average and smooth.
pub fn trigger_avg_erp<T: AsRef<[f64]> + Sync>(
    trials: &[T],
    fs: f64,
    onset_times: &[f64],
    band: &BandSpec,
    duration: f64,
) -> Result<ErpCurve> {
    trigger_avg_erp_with(trials, fs, onset_times, band, duration, &ErpOptions::default())
}

pub fn trigger_avg_erp_with<T: AsRef<[f64]> + Sync>(
    trials: &[T],
    fs: f64,
    onset_times: &[f64],
    band: &BandSpec,
    duration: f64,
    opts: &ErpOptions,
) -> Result<ErpCurve> {
    if trials.is_empty() {
        return Err(Error::EmptyTrialSet);
    }
    band.validate(fs)?;
    let power: Vec<Vec<f64>> = trials
        .par_iter()
        .map(|t| {
            let y = cic_bandpass(t.as_ref(), fs, band, opts.cic_order)?;
            Ok(y.into_iter().map(|v| v * v).collect())
        })
        .collect::<Result<_>>()?;
    let synced = trigger_synch(&power, fs, onset_times, duration)?;
    let mean = synced.mean();
    let values = smooth(&mean, fs, opts.trend_s);
    Ok(ErpCurve {
        values,
        time_vec: synced.time_vec,
        trigger_time_sec: synced.trigger_time_sec,
        band: *band,
        n_trials: trials.len(),
    })
}

/// Centered moving average of `seconds` length, clamped to the signal.
pub(crate) fn smooth(x: &[f64], fs: f64, seconds: f64) -> Vec<f64> {
    let len = ((seconds * fs).round() as usize).clamp(1, x.len().max(1));
    dsp::moving_average(x, len)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentKind {
    Erd,
    Ers,
}

impl SegmentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SegmentKind::Erd => "ERD",
            SegmentKind::Ers => "ERS",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub start_s: f64,
    pub end_s: f64,
    /// Mean distance (percent of reference) between the curve and the
    /// confidence edge over the segment.
    pub area: f64,
}

impl Segment {
    pub fn length_s(&self) -> f64 {
        self.end_s - self.start_s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErdErsReport {
    pub reference_value: f64,
    pub reference_std: f64,
    pub cof_intv: f64,
    /// Lower and upper confidence edges, percent of reference.
    pub lower_edge: f64,
    pub upper_edge: f64,
    pub segments: Vec<Segment>,
    pub quant_erp: Vec<f64>,
    pub time_vec: Vec<f64>,
    pub trigger_time_sec: f64,
}

impl ErdErsReport {
    pub fn erd(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(|s| s.kind == SegmentKind::Erd)
    }

    pub fn ers(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(|s| s.kind == SegmentKind::Ers)
    }
}

/// Quantifies ERD/ERS against a pre-trigger reference period.
///
/// `ref_per` is relative to the trigger. The curve is expressed in percent
/// of the reference mean; post-trigger excursions beyond
/// `100 -/+ cof_intv * 100 * std / mean` form ERD/ERS segments, whose
/// boundaries are linearly interpolated between samples.
pub fn erp_quantification(erp: &ErpCurve, ref_per: (f64, f64), cof_intv: f64) -> Result<ErdErsReport> {
    if !(cof_intv >= 0.0) {
        return Err(Error::InvalidParameter(format!("cof_intv must be non-negative, got {cof_intv}")));
    }
    let t = &erp.time_vec;
    let (a, b) = ref_per;
    let lo = erp.trigger_time_sec + a;
    let hi = erp.trigger_time_sec + b;
    let tol = 1e-9;
    let inside = !t.is_empty() && a < b && b <= tol && lo >= t[0] - tol && hi <= t[t.len() - 1] + tol;
    let idx: Vec<usize> = if inside {
        (0..t.len()).filter(|&i| t[i] >= lo - tol && t[i] <= hi + tol).collect()
    } else {
        Vec::new()
    };
    if idx.is_empty() {
        return Err(Error::ReferenceOutsideSignal { lo: a, hi: b });
    }
    let reference: Vec<f64> = idx.iter().map(|&i| erp.values[i]).collect();
    let (reference_value, reference_std) = dsp::mean_std(&reference);
    if !(reference_value > 0.0) {
        return Err(Error::ZeroReference);
    }
    let quant_erp: Vec<f64> = erp.values.iter().map(|v| 100.0 * (v / reference_value)).collect();
    let spread = cof_intv * 100.0 * (reference_std / reference_value);
    let lower_edge = 100.0 - spread;
    let upper_edge = 100.0 + spread;

    let first = t.partition_point(|&x| x < erp.trigger_time_sec - tol);
    let mut segments = excursions(&t[first..], &quant_erp[first..], lower_edge, SegmentKind::Erd);
    segments.extend(excursions(&t[first..], &quant_erp[first..], upper_edge, SegmentKind::Ers));
    segments.sort_by(|x, y| x.start_s.total_cmp(&y.start_s));

    Ok(ErdErsReport {
        reference_value,
        reference_std,
        cof_intv,
        lower_edge,
        upper_edge,
        segments,
        quant_erp,
        time_vec: t.clone(),
        trigger_time_sec: erp.trigger_time_sec,
    })
}

/// Runs of `q` beyond `edge` (below for ERD, above for ERS).
fn excursions(t: &[f64], q: &[f64], edge: f64, kind: SegmentKind) -> Vec<Segment> {
    let eps = 1e-9 * edge.abs().max(1.0);
    // depth beyond the edge; positive inside a segment
    let depth: Vec<f64> = match kind {
        SegmentKind::Erd => q.iter().map(|v| edge - v).collect(),
        SegmentKind::Ers => q.iter().map(|v| v - edge).collect(),
    };
    let beyond = |i: usize| depth[i] > eps;
    let cross = |i: usize, j: usize| {
        // time where depth passes through eps between samples i and j
        let (di, dj) = (depth[i] - eps, depth[j] - eps);
        t[i] + (t[j] - t[i]) * di / (di - dj)
    };

    let mut out = Vec::new();
    let n = q.len();
    let mut i = 0;
    while i < n {
        if !beyond(i) {
            i += 1;
            continue;
        }
        let s = i;
        while i < n && beyond(i) {
            i += 1;
        }
        let e = i - 1;
        let start_s = if s == 0 { t[0] } else { cross(s - 1, s) };
        let end_s = if e + 1 == n { t[e] } else { cross(e, e + 1) };

        // trapezoid integral of the interpolated depth over [start_s, end_s]
        let mut pts = Vec::with_capacity(e - s + 3);
        pts.push((start_s, if s == 0 { depth[0] } else { eps }));
        pts.extend((s..=e).map(|k| (t[k], depth[k])));
        pts.push((end_s, if e + 1 == n { depth[e] } else { eps }));
        let integral: f64 = pts.windows(2).map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0)).sum();
        let len = end_s - start_s;
        let area = if len > 0.0 { integral / len } else { depth[s] };
        out.push(Segment { kind, start_s, end_s, area });
    }
    out
}
