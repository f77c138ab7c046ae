//! Seeded synthetic EEG/EMG trial sets with ground truth.
//!
//! Every trial draws from its own stream, `rng::stream(seed, [trial, part,
//! channel])`, so output is bit-identical for a given seed whatever the
//! thread count.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::bdf::{self, BdfChannel, BdfHeader};
use crate::error::{Error, Result};
use crate::rng;
use crate::types::{BandSpec, TrialSet};

/// 10-20 labels in generator order; C3 sits at index 5.
pub const LABELS_10_20: [&str; 21] = [
    "Fp1", "Fp2", "F3", "Fz", "F4", "C3", "Cz", "C4", "P3", "Pz", "P4", "O1", "O2", "F7", "F8", "T7", "T8", "P7",
    "P8", "Fpz", "Oz",
];

pub const EMG_LABEL: &str = "EMG";

/// Phase-jitter kernel width, seconds (Gaussian standard deviation).
const JITTER_KERNEL_S: f64 = 0.005;
/// Frequency-drift kernel width for band-limited phase processes, seconds.
const DRIFT_KERNEL_S: f64 = 0.05;

/// Mean PLV over 1 s windows between a phase process and itself plus
/// `sigma * g(t)`, with `g` unit-variance Gaussian-smoothed white noise.
/// Produced by `tests::calibrate_jitter_table` (fs 1 kHz, 400 windows per
/// row) and frozen here. Beyond 2.8 the mean sits on the finite-window floor.
const JITTER_PLV_TABLE: [(f64, f64); 29] = [
    (0.0, 1.0), (0.1, 0.9951), (0.2, 0.9806), (0.3, 0.9568), (0.4, 0.9249), (0.5, 0.8843), (0.6, 0.8375),
    (0.7, 0.7855), (0.8, 0.7297), (0.9, 0.6684), (1.0, 0.6122), (1.1, 0.5489), (1.2, 0.4972), (1.3, 0.4391),
    (1.4, 0.3814), (1.5, 0.3318), (1.6, 0.2876), (1.7, 0.2503), (1.8, 0.2191), (1.9, 0.1825), (2.0, 0.1535),
    (2.1, 0.1348), (2.2, 0.1172), (2.3, 0.1081), (2.4, 0.0949), (2.5, 0.0826), (2.6, 0.0817), (2.7, 0.0782),
    (2.8, 0.0735),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NoiseKind {
    Pink,
    White,
}

/// An oscillation whose instantaneous frequency wanders around `freq_hz`
/// with standard deviation `drift_hz`. Zero drift gives a pure tone with a
/// random initial phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Oscillation {
    pub freq_hz: f64,
    pub amplitude: f64,
    pub drift_hz: f64,
}

/// Movement onset law: `mean_s` plus a uniform offset in `[-jitter_s, jitter_s]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnsetLaw {
    pub mean_s: f64,
    pub jitter_s: f64,
}

/// In-band power inside `[start_s, end_s)` relative to onset becomes
/// `drop_fraction` times its reference level; amplitude scales by its root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErdSpec {
    pub band: BandSpec,
    pub drop_fraction: f64,
    pub start_s: f64,
    pub end_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingSpec {
    pub pair: (usize, usize),
    pub band: BandSpec,
    pub amplitude: f64,
    pub pre_onset_plv: f64,
    pub post_onset_plv: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EcgSpec {
    pub rate_bpm: f64,
    pub amplitude: f64,
}

/// Burst envelope `amplitude * (1 - exp(-(t - onset) / rise_s))` after onset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmgSpec {
    pub amplitude: f64,
    pub rise_s: f64,
    /// Standard deviation of the broadband floor present throughout.
    pub quiet_std: f64,
    pub ecg: Option<EcgSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub n_trials: usize,
    /// EEG channels; the EMG channel, if any, is appended after them.
    pub n_channels: usize,
    pub fs: f64,
    pub trial_length_s: f64,
    pub onset: OnsetLaw,
    /// Background rhythm on every EEG channel, independent phases.
    pub rhythm: Option<Oscillation>,
    pub erd: Option<ErdSpec>,
    pub coupling: Option<CouplingSpec>,
    pub emg: Option<EmgSpec>,
    pub noise_power: f64,
    pub noise: NoiseKind,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            n_trials: 20,
            n_channels: 8,
            fs: 500.0,
            trial_length_s: 6.0,
            onset: OnsetLaw { mean_s: 3.5, jitter_s: 0.0 },
            rhythm: Some(Oscillation { freq_hz: 10.0, amplitude: 10.0, drift_hz: 0.0 }),
            erd: None,
            coupling: None,
            emg: None,
            noise_power: 0.0,
            noise: NoiseKind::Pink,
            seed: crate::defaults::SEED,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.n_trials == 0 || self.n_channels == 0 {
            return bad("need at least one trial and one channel".into());
        }
        if !(self.fs > 0.0 && self.fs.is_finite()) || !(self.trial_length_s > 0.0) {
            return bad(format!("fs {} and trial length {} must be positive", self.fs, self.trial_length_s));
        }
        if self.n_samples() < 2 {
            return bad("trial shorter than two samples".into());
        }
        if !(self.noise_power >= 0.0) {
            return bad(format!("noise_power {} must be non-negative", self.noise_power));
        }
        let (lo, hi) = self.onset_range();
        if self.onset.jitter_s < 0.0 || lo <= 0.0 || hi >= self.trial_length_s {
            return bad(format!("onsets [{lo}, {hi}] s not inside the trial"));
        }
        let nyq = self.fs / 2.0;
        if let Some(r) = &self.rhythm {
            if !(r.freq_hz > 0.0 && r.freq_hz < nyq) || r.amplitude < 0.0 || r.drift_hz < 0.0 {
                return bad(format!("rhythm {r:?} invalid at fs {}", self.fs));
            }
        }
        if let Some(e) = &self.erd {
            if !(e.drop_fraction > 0.0 && e.drop_fraction <= 1.0) {
                return bad(format!("drop_fraction {} not in (0, 1]", e.drop_fraction));
            }
            if !(e.start_s < e.end_s) || lo + e.start_s < 0.0 || hi + e.end_s > self.trial_length_s {
                return bad(format!("ERD interval [{}, {}] s leaves the trial", e.start_s, e.end_s));
            }
            if self.rhythm.is_none_or(|r| r.freq_hz < e.band.lo() || r.freq_hz > e.band.hi()) {
                return bad("ERD needs a rhythm inside its band".into());
            }
        }
        if let Some(c) = &self.coupling {
            let (a, b) = c.pair;
            if a == b || a >= self.n_channels || b >= self.n_channels {
                return bad(format!("coupled pair {:?} invalid for {} channels", c.pair, self.n_channels));
            }
            for t in [c.pre_onset_plv, c.post_onset_plv] {
                if !(0.0..=1.0).contains(&t) {
                    return bad(format!("PLV target {t} not in [0, 1]"));
                }
            }
            if !(c.band.hi() < nyq) || c.amplitude < 0.0 {
                return bad(format!("coupling band {} invalid at fs {}", c.band, self.fs));
            }
        }
        if let Some(m) = &self.emg {
            if m.amplitude < 0.0 || m.quiet_std < 0.0 || !(m.rise_s > 0.0) {
                return bad(format!("EMG spec {m:?} invalid"));
            }
            if let Some(e) = &m.ecg {
                if !(e.rate_bpm > 0.0) {
                    return bad(format!("ECG rate {} must be positive", e.rate_bpm));
                }
            }
        }
        Ok(())
    }

    pub fn n_samples(&self) -> usize {
        (self.trial_length_s * self.fs).round() as usize
    }

    fn onset_range(&self) -> (f64, f64) {
        (self.onset.mean_s - self.onset.jitter_s, self.onset.mean_s + self.onset.jitter_s)
    }

    pub fn channel_labels(&self) -> Vec<String> {
        let mut l: Vec<String> = (0..self.n_channels)
            .map(|i| LABELS_10_20.get(i).map_or_else(|| format!("E{}", i + 1), |s| s.to_string()))
            .collect();
        if self.emg.is_some() {
            l.push(EMG_LABEL.into());
        }
        l
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub onset_samples: Vec<usize>,
    pub onset_times: Vec<f64>,
    /// ERD interval relative to onset, seconds, and its power ratio.
    pub erd_interval_s: Option<(f64, f64)>,
    pub erd_power_ratio: Option<f64>,
    pub coupled_pair: Option<(usize, usize)>,
    /// Jitter scales used before and after onset.
    pub coupling_sigma: Option<(f64, f64)>,
    /// Noise-free EEG per trial and channel.
    pub clean_eeg: Vec<Vec<Vec<f64>>>,
    /// Phases of the coupled pair per trial, `(a, b)`.
    pub coupled_phases: Vec<(Vec<f64>, Vec<f64>)>,
    pub emg_burst: Vec<Vec<f64>>,
    pub ecg: Vec<Vec<f64>>,
}

/// Parts of a trial, used as the second element of the seed path.
#[derive(Clone, Copy)]
enum Part {
    Onset = 0,
    Rhythm = 1,
    Coupling = 2,
    Noise = 3,
    Emg = 4,
    Ecg = 5,
}

fn part_rng(seed: u64, trial: usize, part: Part, ch: usize) -> SplitMix64 {
    rng::stream(seed, &[trial as u64, part as u64, ch as u64])
}

fn normal(g: &mut SplitMix64) -> f64 {
    StandardNormal.sample(g)
}

/// White noise smoothed by a Gaussian of `kernel_s` seconds, scaled to unit
/// variance.
pub fn smoothed_noise(n: usize, fs: f64, kernel_s: f64, g: &mut SplitMix64) -> Vec<f64> {
    let sd = (kernel_s * fs).max(1e-3);
    let half = (4.0 * sd).ceil() as usize;
    let k: Vec<f64> = (0..=2 * half)
        .map(|i| (-0.5 * ((i as f64 - half as f64) / sd).powi(2)).exp())
        .collect();
    let norm = k.iter().map(|v| v * v).sum::<f64>().sqrt();
    let w: Vec<f64> = (0..n + 2 * half).map(|_| normal(g)).collect();
    (0..n)
        .map(|t| w[t..t + k.len()].iter().zip(&k).map(|(a, b)| a * b).sum::<f64>() / norm)
        .collect()
}

/// Phase of an oscillation with Gaussian frequency drift.
fn phase_process(n: usize, fs: f64, osc: &Oscillation, g: &mut SplitMix64) -> Vec<f64> {
    let theta = g.random_range(-PI..PI);
    if osc.drift_hz == 0.0 {
        return (0..n).map(|t| theta + 2.0 * PI * osc.freq_hz * t as f64 / fs).collect();
    }
    let df = smoothed_noise(n, fs, DRIFT_KERNEL_S, g);
    let mut phi = theta;
    df.iter()
        .map(|d| {
            let p = phi;
            phi += 2.0 * PI * (osc.freq_hz + osc.drift_hz * d) / fs;
            p
        })
        .collect()
}

/// Jitter scale whose calibrated mean 1 s window PLV equals `target`.
/// Targets below the table floor map to the largest tabulated scale.
pub fn jitter_for_plv(target: f64) -> f64 {
    let t = &JITTER_PLV_TABLE;
    if target >= t[0].1 {
        return 0.0;
    }
    for w in t.windows(2) {
        let ((s0, p0), (s1, p1)) = (w[0], w[1]);
        if target <= p0 && target >= p1 {
            return s0 + (s1 - s0) * (p0 - target) / (p0 - p1);
        }
    }
    t[t.len() - 1].0
}

/// 1/f noise shaped in the frequency domain. Returns unit-variance output.
fn pink(n: usize, g: &mut SplitMix64) -> Vec<f64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..=n / 2 {
        let a = 1.0 / (k as f64).sqrt();
        let z = if 2 * k == n {
            Complex64::new(a * normal(g), 0.0)
        } else {
            Complex64::new(a * normal(g), a * normal(g))
        };
        buf[k] = z;
        if 2 * k != n {
            buf[n - k] = z.conj();
        }
    }
    FftPlanner::<f64>::new().plan_fft_inverse(n).process(&mut buf);
    let x: Vec<f64> = buf.iter().map(|c| c.re).collect();
    normalize(x)
}

fn normalize(mut x: Vec<f64>) -> Vec<f64> {
    let (m, s) = crate::dsp::mean_std(&x);
    if s > 0.0 {
        x.iter_mut().for_each(|v| *v = (*v - m) / s);
    }
    x
}

/// Expected share of pink-noise power with frequency inside `[lo, hi]` for
/// an `n`-sample trial. Divide a desired in-band noise power by this to get
/// `noise_power`.
pub fn pink_band_fraction(n: usize, fs: f64, lo: f64, hi: f64) -> f64 {
    let mut inside = 0.0;
    let mut total = 0.0;
    for k in 1..=n / 2 {
        // one-sided weight; Nyquist bin is real and counts once
        let w = if 2 * k == n { 0.5 } else { 1.0 } / k as f64;
        let f = k as f64 * fs / n as f64;
        total += w;
        if f >= lo && f <= hi {
            inside += w;
        }
    }
    inside / total
}

/// Band-limited Gaussian noise (brick-wall FFT mask), unit variance.
fn band_noise(n: usize, fs: f64, lo: f64, hi: f64, g: &mut SplitMix64) -> Vec<f64> {
    let mut buf: Vec<Complex64> = (0..n).map(|_| Complex64::new(normal(g), 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let f = k.min(n - k) as f64 * fs / n as f64;
        if f < lo || f > hi {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    normalize(buf.iter().map(|c| c.re).collect())
}

/// Gaussian QRS-like pulses at `rate_bpm` with a random first beat.
fn ecg_train(n: usize, fs: f64, e: &EcgSpec, g: &mut SplitMix64) -> Vec<f64> {
    let period = 60.0 / e.rate_bpm;
    let first = g.random_range(0.0..period);
    let width = 0.015;
    let mut x = vec![0.0; n];
    let mut beat = first;
    let end = n as f64 / fs + period;
    while beat < end {
        let c = (beat * fs) as isize;
        let span = (5.0 * width * fs) as isize;
        for i in (c - span).max(0)..(c + span + 1).min(n as isize) {
            let dt = i as f64 / fs - beat;
            x[i as usize] += e.amplitude * (-0.5 * (dt / width).powi(2)).exp();
        }
        beat += period;
    }
    x
}

struct TrialOut {
    onset: usize,
    data: Vec<Vec<f64>>,
    clean: Vec<Vec<f64>>,
    coupled: Option<(Vec<f64>, Vec<f64>)>,
    burst: Vec<f64>,
    ecg: Vec<f64>,
}

fn gen_trial(spec: &SynthSpec, trial: usize, sigma: Option<(f64, f64)>) -> TrialOut {
    let (n, fs, seed) = (spec.n_samples(), spec.fs, spec.seed);
    let mut og = part_rng(seed, trial, Part::Onset, 0);
    let jitter = if spec.onset.jitter_s > 0.0 {
        og.random_range(-spec.onset.jitter_s..=spec.onset.jitter_s)
    } else {
        0.0
    };
    let onset = ((spec.onset.mean_s + jitter) * fs).round() as usize;

    let mut clean = vec![vec![0.0; n]; spec.n_channels];
    if let Some(r) = &spec.rhythm {
        let gain = |t: usize| match &spec.erd {
            Some(e) => {
                let rel = (t as f64 - onset as f64) / fs;
                if rel >= e.start_s && rel < e.end_s {
                    e.drop_fraction.sqrt()
                } else {
                    1.0
                }
            }
            None => 1.0,
        };
        for (ch, x) in clean.iter_mut().enumerate() {
            let phi = phase_process(n, fs, r, &mut part_rng(seed, trial, Part::Rhythm, ch));
            x.iter_mut()
                .zip(&phi)
                .enumerate()
                .for_each(|(t, (v, p))| *v += r.amplitude * gain(t) * p.cos());
        }
    }
    let mut coupled = None;
    if let (Some(c), Some((s_pre, s_post))) = (&spec.coupling, sigma) {
        let osc = Oscillation {
            freq_hz: c.band.f0,
            amplitude: c.amplitude,
            drift_hz: c.band.bw / 8.0,
        };
        let (a, b) = c.pair;
        for (ch, x) in clean.iter_mut().enumerate() {
            if ch == b {
                continue;
            }
            let phi = phase_process(n, fs, &osc, &mut part_rng(seed, trial, Part::Coupling, ch));
            x.iter_mut().zip(&phi).for_each(|(v, p)| *v += c.amplitude * p.cos());
            if ch == a {
                let g = smoothed_noise(n, fs, JITTER_KERNEL_S, &mut part_rng(seed, trial, Part::Coupling, b));
                let pb: Vec<f64> = phi
                    .iter()
                    .zip(&g)
                    .enumerate()
                    .map(|(t, (p, j))| p + if t < onset { s_pre } else { s_post } * j)
                    .collect();
                coupled = Some((phi, pb));
            }
        }
        if let Some((_, pb)) = &coupled {
            clean[b].iter_mut().zip(pb).for_each(|(v, p)| *v += c.amplitude * p.cos());
        }
    }

    let mut data = clean.clone();
    if spec.noise_power > 0.0 {
        let s = spec.noise_power.sqrt();
        for (ch, x) in data.iter_mut().enumerate() {
            let mut g = part_rng(seed, trial, Part::Noise, ch);
            let w = match spec.noise {
                NoiseKind::Pink => pink(n, &mut g),
                NoiseKind::White => (0..n).map(|_| normal(&mut g)).collect(),
            };
            x.iter_mut().zip(&w).for_each(|(v, e)| *v += s * e);
        }
    }

    let (mut burst, mut ecg) = (Vec::new(), Vec::new());
    if let Some(m) = &spec.emg {
        let mut g = part_rng(seed, trial, Part::Emg, 0);
        let (lo, hi) = (80.0_f64.min(0.4 * fs), 200.0_f64.min(0.45 * fs));
        let carrier = band_noise(n, fs, lo, hi, &mut g);
        burst = carrier
            .iter()
            .enumerate()
            .map(|(t, c)| {
                if t < onset {
                    0.0
                } else {
                    let dt = (t - onset) as f64 / fs;
                    m.amplitude * (1.0 - (-dt / m.rise_s).exp()) * c
                }
            })
            .collect();
        ecg = match &m.ecg {
            Some(e) => ecg_train(n, fs, e, &mut part_rng(seed, trial, Part::Ecg, 0)),
            None => vec![0.0; n],
        };
        let floor: Vec<f64> = (0..n).map(|_| m.quiet_std * normal(&mut g)).collect();
        data.push((0..n).map(|t| burst[t] + ecg[t] + floor[t]).collect());
    }
    TrialOut { onset, data, clean, coupled, burst, ecg }
}

/// Generates a trial set and its ground truth. Onsets are attached to the
/// trial set.
pub fn gen_trial_set(spec: &SynthSpec) -> Result<(TrialSet, GroundTruth)> {
    spec.validate()?;
    let sigma = spec
        .coupling
        .map(|c| (jitter_for_plv(c.pre_onset_plv), jitter_for_plv(c.post_onset_plv)));
    let out: Vec<TrialOut> = (0..spec.n_trials).into_par_iter().map(|i| gen_trial(spec, i, sigma)).collect();

    let mut truth = GroundTruth {
        onset_samples: Vec::with_capacity(out.len()),
        onset_times: Vec::with_capacity(out.len()),
        erd_interval_s: spec.erd.map(|e| (e.start_s, e.end_s)),
        erd_power_ratio: spec.erd.map(|e| e.drop_fraction),
        coupled_pair: spec.coupling.map(|c| c.pair),
        coupling_sigma: sigma,
        clean_eeg: Vec::with_capacity(out.len()),
        coupled_phases: Vec::new(),
        emg_burst: Vec::new(),
        ecg: Vec::new(),
    };
    let mut trials = Vec::with_capacity(out.len());
    for t in out {
        truth.onset_samples.push(t.onset);
        truth.onset_times.push(t.onset as f64 / spec.fs);
        truth.clean_eeg.push(t.clean);
        truth.coupled_phases.extend(t.coupled);
        if spec.emg.is_some() {
            truth.emg_burst.push(t.burst);
            truth.ecg.push(t.ecg);
        }
        trials.push(t.data);
    }
    let ts = TrialSet::new(trials, spec.fs, spec.channel_labels())?.with_onsets(truth.onset_samples.clone())?;
    Ok((ts, truth))
}

/// Encodes one trial as a BDF file. Integer sampling rates with whole-second
/// trials use 1 s records; anything else becomes a single record.
pub fn trial_to_bdf(ts: &TrialSet, trial: usize) -> Result<Vec<u8>> {
    let data = ts.trial(trial);
    let n = data[0].len();
    let fs = ts.fs();
    let (spr, records, dur) = if fs.fract() == 0.0 && n % fs as usize == 0 {
        (fs as usize, n / fs as usize, 1.0)
    } else {
        (n, 1, n as f64 / fs)
    };
    let channels = ts
        .channel_labels()
        .iter()
        .zip(data)
        .map(|(label, x)| {
            let peak = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let range = (peak * 1.01).ceil().max(1.0);
            let mut c = BdfChannel::new(label.clone(), spr);
            c.physical_dim = "uV".into();
            c.physical_min = -range;
            c.physical_max = range;
            c
        })
        .collect();
    bdf::write_bdf(&BdfHeader::new(channels, records, dur), data)
}
