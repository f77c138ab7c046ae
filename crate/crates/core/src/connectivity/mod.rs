//! Phase estimation, phase-locking value and magnitude-squared coherence,
//! computed over consecutive one-second windows around the trigger.

mod msc;
mod phase;
mod plv;

pub use msc::{band_bins, msc, segment_spectra, CrossSpectra};
pub use phase::{inst_freq, perturbed_band, phase_est, single_run, PhaseOptions, PhaseSequence, Perturbation};
pub use plv::{plv, plv_matrix};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::erp::{trigger_synch, SynchronizedTrials};
use crate::error::{Error, Result};
use crate::rng;
use crate::types::{BandSpec, TrialSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measure {
    Plv,
    Msc,
}

impl Measure {
    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Plv => "PLV",
            Measure::Msc => "MSC",
        }
    }
}

/// How per-trial statistics are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialAggregation {
    /// Compute the statistic per trial, then average.
    Mean,
    /// Pool samples (PLV) or segments (MSC) of all trials into one sum.
    Pooled,
}

/// Analysis window relative to the trigger, seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub start_s: f64,
    pub end_s: f64,
}

/// Consecutive windows of `width` seconds covering `span`.
pub fn windows(span: (f64, f64), width: f64) -> Result<Vec<Window>> {
    let (a, b) = span;
    if !(b > a && width > 0.0) {
        return Err(Error::InvalidParameter(format!("bad analysis span [{a}, {b}] s with {width} s windows")));
    }
    let count = ((b - a) / width + 1e-9).floor() as usize;
    if count == 0 {
        return Err(Error::InvalidParameter(format!("span [{a}, {b}] s is shorter than one {width} s window")));
    }
    Ok((0..count)
        .map(|i| Window {
            start_s: a + i as f64 * width,
            end_s: a + (i + 1) as f64 * width,
        })
        .collect())
}

/// Per-window channel×channel connectivity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityMap {
    pub windows: Vec<Window>,
    /// `values[window][a][b]`.
    pub values: Vec<Vec<Vec<f64>>>,
    pub measure: Measure,
    pub band: BandSpec,
    pub channel_labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityOptions {
    pub band: BandSpec,
    /// Analysis span relative to the trigger, seconds.
    pub span: (f64, f64),
    pub window_s: f64,
    pub phase: PhaseOptions,
    pub plv_aggregation: TrialAggregation,
    pub msc_aggregation: TrialAggregation,
    pub msc_segments: usize,
}

impl Default for ConnectivityOptions {
    fn default() -> Self {
        ConnectivityOptions {
            band: defaults::connectivity_band(),
            span: defaults::CONNECTIVITY_SPAN_S,
            window_s: defaults::CONNECTIVITY_WINDOW_S,
            phase: PhaseOptions::default(),
            plv_aggregation: TrialAggregation::Mean,
            msc_aggregation: TrialAggregation::Pooled,
            msc_segments: defaults::MSC_SEGMENTS,
        }
    }
}

/// Trials synchronized for connectivity, with window sample ranges.
struct Prepared {
    /// `synced[ch]` holds that channel's aligned trials.
    synced: Vec<SynchronizedTrials>,
    windows: Vec<Window>,
    ranges: Vec<(usize, usize)>,
}

fn prepare(ts: &TrialSet, onset_times: &[f64], channels: &[usize], opts: &ConnectivityOptions) -> Result<Prepared> {
    if ts.n_trials() == 0 {
        return Err(Error::EmptyTrialSet);
    }
    opts.band.validate(ts.fs())?;
    let windows = windows(opts.span, opts.window_s)?;
    let (a, b) = (windows[0].start_s, windows[windows.len() - 1].end_s);
    let outside = Error::WindowOutsideTrials { start: a, end: b };
    if b <= 0.0 {
        return Err(outside);
    }
    let fs = ts.fs();
    let mut synced = Vec::with_capacity(channels.len());
    for &ch in channels {
        let view = ts.channel_view(ch)?;
        match trigger_synch(&view, fs, onset_times, b) {
            Ok(s) => synced.push(s),
            Err(Error::TrialTooShort { .. }) => return Err(outside),
            Err(e) => return Err(e),
        }
    }
    let trig = synced[0].trigger_sample as i64;
    let len = synced[0].len() as i64;
    let mut ranges = Vec::with_capacity(windows.len());
    for w in &windows {
        let s = trig + (w.start_s * fs).round() as i64;
        let e = trig + (w.end_s * fs).round() as i64;
        if s < 0 || e > len || e <= s {
            return Err(outside);
        }
        ranges.push((s as usize, e as usize));
    }
    Ok(Prepared { synced, windows, ranges })
}

fn check_channels(ts: &TrialSet, channels: &[usize]) -> Result<()> {
    for &c in channels {
        if c >= ts.n_channels() {
            return Err(Error::ChannelIndexOutOfRange { index: c, available: ts.n_channels() });
        }
    }
    Ok(())
}

/// Phases for every (channel, window, trial). All channels of one trial and
/// window share the perturbation draws, so identical channels give identical
/// phases and the phase difference is not biased by mismatched filters.
fn window_phases(p: &Prepared, channels: &[usize], ts: &TrialSet, opts: &ConnectivityOptions) -> Result<Vec<Vec<Vec<Vec<f64>>>>> {
    let n_trials = ts.n_trials();
    let jobs: Vec<(usize, usize, usize)> = (0..channels.len())
        .flat_map(|c| (0..p.windows.len()).flat_map(move |w| (0..n_trials).map(move |t| (c, w, t))))
        .collect();
    let flat = jobs
        .par_iter()
        .map(|&(c, w, t)| {
            let (s, e) = p.ranges[w];
            let x = &p.synced[c].ensemble[t][s..e];
            let seed = rng::derive_seed(opts.phase.seed, &[t as u64, w as u64]);
            let po = PhaseOptions { seed, ..opts.phase };
            phase_est(x, ts.fs(), &opts.band, &po).map(|ps| ps.phase)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut it = flat.into_iter();
    Ok((0..channels.len())
        .map(|_| (0..p.windows.len()).map(|_| it.by_ref().take(n_trials).collect()).collect())
        .collect())
}

/// PLV between two channels' per-trial phases in one window.
fn combine_plv(x: &[Vec<f64>], y: &[Vec<f64>], agg: TrialAggregation) -> Result<f64> {
    match agg {
        TrialAggregation::Mean => {
            let mut acc = 0.0;
            for (a, b) in x.iter().zip(y) {
                acc += plv(a, b)?;
            }
            Ok(acc / x.len() as f64)
        }
        TrialAggregation::Pooled => {
            let reference = y[0][0] - x[0][0];
            let mut s = num_complex::Complex64::new(0.0, 0.0);
            let mut count = 0;
            for (a, b) in x.iter().zip(y) {
                if a.len() != b.len() {
                    return Err(Error::LengthMismatch(a.len(), b.len()));
                }
                s += plv::phasor_sum(a, b, reference);
                count += a.len();
            }
            Ok((s.norm() / count as f64).min(1.0))
        }
    }
}

/// Which channel pairs a time-course PLV run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairSpec {
    Pair(usize, usize),
    /// Reference channel against every channel.
    VsReference(usize),
}

/// Per-window PLV values for the requested pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeCourse {
    pub windows: Vec<Window>,
    /// `(a, b)` channel index pairs, one per column of `values`.
    pub pairs: Vec<(usize, usize)>,
    /// `values[window][pair]`.
    pub values: Vec<Vec<f64>>,
    pub band: BandSpec,
}

/// Time-course PLV over one-second windows around the trigger.
pub fn tcplv(ts: &TrialSet, onset_times: &[f64], pairs: PairSpec, opts: &ConnectivityOptions) -> Result<TimeCourse> {
    let (channels, pair_list): (Vec<usize>, Vec<(usize, usize)>) = match pairs {
        PairSpec::Pair(a, b) => {
            if a == b {
                return Err(Error::BadPair(format!("pair ({a}, {b}) repeats a channel")));
            }
            (vec![a, b], vec![(a, b)])
        }
        PairSpec::VsReference(r) => {
            let chans: Vec<usize> = (0..ts.n_channels()).collect();
            (chans, (0..ts.n_channels()).map(|c| (r, c)).collect())
        }
    };
    let bad = |e: Error| match e {
        Error::ChannelIndexOutOfRange { index, available } => {
            Error::BadPair(format!("channel {index} out of range ({available} channels)"))
        }
        e => e,
    };
    check_channels(ts, &channels).map_err(bad)?;
    if let PairSpec::VsReference(r) = pairs {
        check_channels(ts, &[r]).map_err(bad)?;
    }
    let p = prepare(ts, onset_times, &channels, opts)?;
    let phases = window_phases(&p, &channels, ts, opts)?;
    let pos = |ch: usize| channels.iter().position(|&c| c == ch).unwrap();

    let mut values = Vec::with_capacity(p.windows.len());
    for w in 0..p.windows.len() {
        let row = pair_list
            .iter()
            .map(|&(a, b)| {
                if a == b {
                    Ok(1.0)
                } else {
                    let (lo, hi) = (a.min(b), a.max(b));
                    combine_plv(&phases[pos(lo)][w], &phases[pos(hi)][w], opts.plv_aggregation)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        values.push(row);
    }
    Ok(TimeCourse {
        windows: p.windows,
        pairs: pair_list,
        values,
        band: opts.band,
    })
}

/// PLV matrices over all channel pairs, one per window.
pub fn pwplv(ts: &TrialSet, onset_times: &[f64], opts: &ConnectivityOptions) -> Result<ConnectivityMap> {
    let channels: Vec<usize> = (0..ts.n_channels()).collect();
    let p = prepare(ts, onset_times, &channels, opts)?;
    let phases = window_phases(&p, &channels, ts, opts)?;
    let n = channels.len();
    let values = (0..p.windows.len())
        .map(|w| {
            let mut m = vec![vec![1.0; n]; n];
            for a in 0..n {
                for b in a + 1..n {
                    let v = combine_plv(&phases[a][w], &phases[b][w], opts.plv_aggregation)?;
                    m[a][b] = v;
                    m[b][a] = v;
                }
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConnectivityMap {
        windows: p.windows,
        values,
        measure: Measure::Plv,
        band: opts.band,
        channel_labels: ts.channel_labels().to_vec(),
    })
}

/// Magnitude-squared coherence matrices, band-averaged, one per window.
pub fn pwcoherence(ts: &TrialSet, onset_times: &[f64], opts: &ConnectivityOptions) -> Result<ConnectivityMap> {
    let segments = opts.msc_segments;
    if segments == 0 {
        return Err(Error::InvalidParameter("msc_segments must be at least 1".into()));
    }
    if segments < 2 && ts.n_trials() < 2 {
        return Err(Error::WindowTooShortForSegments { segments, trials: ts.n_trials() });
    }
    let channels: Vec<usize> = (0..ts.n_channels()).collect();
    let p = prepare(ts, onset_times, &channels, opts)?;
    let fs = ts.fs();
    let n = channels.len();
    let n_trials = ts.n_trials();

    let values = p
        .ranges
        .par_iter()
        .map(|&(s, e)| {
            let seg_len = (e - s) / segments;
            if seg_len < 2 {
                return Err(Error::WindowTooShortForSegments { segments, trials: n_trials });
            }
            let bins = band_bins(&opts.band, seg_len, fs);
            if bins.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "band {} holds no {:.3} Hz coherence bin",
                    opts.band,
                    fs / seg_len as f64
                )));
            }
            // spectra[ch][trial][segment][bin]
            let spectra: Vec<Vec<_>> = (0..n)
                .map(|c| (0..n_trials).map(|t| segment_spectra(&p.synced[c].ensemble[t][s..e], segments)).collect())
                .collect();
            let mut m = vec![vec![0.0; n]; n];
            for a in 0..n {
                for b in a..n {
                    let coh = match opts.msc_aggregation {
                        TrialAggregation::Pooled => {
                            let mut cs = CrossSpectra::new(seg_len);
                            for t in 0..n_trials {
                                cs.accumulate(&spectra[a][t], &spectra[b][t]);
                            }
                            cs.coherence()
                        }
                        TrialAggregation::Mean => {
                            let mut acc = vec![0.0; seg_len];
                            for t in 0..n_trials {
                                for (x, v) in acc.iter_mut().zip(msc(&spectra[a][t], &spectra[b][t])) {
                                    *x += v;
                                }
                            }
                            acc.iter().map(|v| v / n_trials as f64).collect()
                        }
                    };
                    let v = bins.iter().map(|&k| coh[k]).sum::<f64>() / bins.len() as f64;
                    m[a][b] = v;
                    m[b][a] = v;
                }
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConnectivityMap {
        windows: p.windows,
        values,
        measure: Measure::Msc,
        band: opts.band,
        channel_labels: ts.channel_labels().to_vec(),
    })
}

/// Index of the channel labeled with the default reference name.
pub fn default_reference(ts: &TrialSet) -> Option<usize> {
    ts.channel_index(defaults::REFERENCE_CHANNEL)
}
