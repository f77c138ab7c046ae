use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{ensemble_mean, trigger_avg_erp_with, trigger_synch, ErpOptions};
use crate::dsp;
use crate::error::{Error, Result};
use crate::types::BandSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TfMethod {
    #[default]
    Stft,
    Cwt,
    Nbch,
}

impl TfMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            TfMethod::Stft => "STFT",
            TfMethod::Cwt => "CWT",
            TfMethod::Nbch => "NBCH",
        }
    }
}

impl fmt::Display for TfMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TfMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "STFT" => Ok(TfMethod::Stft),
            "CWT" => Ok(TfMethod::Cwt),
            "NBCH" => Ok(TfMethod::Nbch),
            _ => Err(Error::UnknownMethod(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TfOptions {
    pub stft_window_s: f64,
    pub stft_overlap: f64,
    pub cwt_omega0: f64,
    pub cwt_range_hz: (f64, f64),
    pub cwt_scales: usize,
    pub nbch_range_hz: (f64, f64),
    pub nbch_bin_hz: f64,
    pub erp: ErpOptions,
}

impl Default for TfOptions {
    fn default() -> Self {
        TfOptions {
            stft_window_s: 0.25,
            stft_overlap: 0.5,
            cwt_omega0: 6.0,
            cwt_range_hz: (4.0, 40.0),
            cwt_scales: 48,
            nbch_range_hz: (4.0, 40.0),
            nbch_bin_hz: 2.0,
            erp: ErpOptions::default(),
        }
    }
}

/// Frequency × time power map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfMap {
    /// `power[f][t]`.
    pub power: Vec<Vec<f64>>,
    pub freq_vec: Vec<f64>,
    pub time_vec: Vec<f64>,
    pub trigger_time_sec: f64,
    pub method: TfMethod,
}

impl TfMap {
    pub fn total_energy(&self) -> f64 {
        self.power.iter().flatten().sum()
    }
}

/// Trigger-averaged time-frequency map.
pub fn trigger_avg_tf_erp<T: AsRef<[f64]> + Sync>(
    trials: &[T],
    fs: f64,
    onset_times: &[f64],
    duration: f64,
    method: TfMethod,
    opts: &TfOptions,
) -> Result<TfMap> {
    if method == TfMethod::Nbch {
        return nbch(trials, fs, onset_times, duration, opts);
    }
    let synced = trigger_synch(trials, fs, onset_times, duration)?;
    let (freq_vec, time_vec, maps) = match method {
        TfMethod::Stft => {
            let len = ((opts.stft_window_s * fs).round() as usize).clamp(2, synced.len());
            let hop = ((len as f64 * (1.0 - opts.stft_overlap)).round() as usize).max(1);
            let maps: Vec<Vec<Vec<f64>>> = synced.ensemble.par_iter().map(|x| stft_psd(x, fs, len, hop)).collect();
            let frames = maps.first().map_or(0, |m| m.first().map_or(0, Vec::len));
            let freq_vec = (0..=len / 2).map(|k| k as f64 * fs / len as f64).collect();
            let time_vec = (0..frames).map(|j| (j * hop) as f64 / fs + 0.5 * len as f64 / fs).collect();
            (freq_vec, time_vec, maps)
        }
        TfMethod::Cwt => {
            let (lo, hi) = opts.cwt_range_hz;
            if !(lo > 0.0 && hi > lo && hi < 0.5 * fs) || opts.cwt_scales < 2 {
                return Err(Error::InvalidParameter(format!("bad CWT range {lo}-{hi} Hz for fs {fs}")));
            }
            let freq_vec: Vec<f64> = (0..opts.cwt_scales)
                .map(|i| lo * (hi / lo).powf(i as f64 / (opts.cwt_scales - 1) as f64))
                .collect();
            let maps = synced
                .ensemble
                .par_iter()
                .map(|x| morlet_scalogram(x, fs, &freq_vec, opts.cwt_omega0))
                .collect();
            (freq_vec, synced.time_vec.clone(), maps)
        }
        TfMethod::Nbch => unreachable!(),
    };
    Ok(TfMap {
        power: average_maps(&maps),
        freq_vec,
        time_vec,
        trigger_time_sec: synced.trigger_time_sec,
        method,
    })
}

fn average_maps(maps: &[Vec<Vec<f64>>]) -> Vec<Vec<f64>> {
    let rows = maps.first().map_or(0, Vec::len);
    (0..rows)
        .map(|r| ensemble_mean(&maps.iter().map(|m| m[r].clone()).collect::<Vec<_>>()))
        .collect()
}

/// One-sided power spectral density frames, `[freq][frame]`.
fn stft_psd(x: &[f64], fs: f64, len: usize, hop: usize) -> Vec<Vec<f64>> {
    let w = dsp::hamming(len);
    let wss: f64 = w.iter().map(|v| v * v).sum();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(len);
    let nbins = len / 2 + 1;
    let frames = if x.len() >= len { (x.len() - len) / hop + 1 } else { 0 };
    let mut out = vec![Vec::with_capacity(frames); nbins];
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for j in 0..frames {
        let s = j * hop;
        for (b, (v, wk)) in buf.iter_mut().zip(x[s..s + len].iter().zip(&w)) {
            *b = Complex64::new(v * wk, 0.0);
        }
        fft.process(&mut buf);
        for (k, row) in out.iter_mut().enumerate() {
            let one_sided = if k == 0 || (len % 2 == 0 && k == len / 2) { 1.0 } else { 2.0 };
            row.push(one_sided * buf[k].norm_sqr() / (fs * wss));
        }
    }
    out
}

/// Morlet scalogram `|W(s, t)|^2` evaluated in the frequency domain.
fn morlet_scalogram(x: &[f64], fs: f64, freqs: &[f64], omega0: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let nfft = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(nfft);
    let inv = planner.plan_fft_inverse(nfft);
    let mut xf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    xf.resize(nfft, Complex64::new(0.0, 0.0));
    fwd.process(&mut xf);

    let dt = 1.0 / fs;
    let fourier_factor = 4.0 * PI / (omega0 + (2.0 + omega0 * omega0).sqrt());
    let norm0 = PI.powf(-0.25);
    let mut buf = vec![Complex64::new(0.0, 0.0); nfft];
    freqs
        .iter()
        .map(|&f| {
            let scale = 1.0 / (fourier_factor * f);
            let amp = norm0 * (2.0 * PI * scale / dt).sqrt();
            for (k, b) in buf.iter_mut().enumerate() {
                let omega = if k <= nfft / 2 {
                    2.0 * PI * k as f64 / (nfft as f64 * dt)
                } else {
                    0.0
                };
                let psi = if k > 0 && k <= nfft / 2 {
                    amp * (-0.5 * (scale * omega - omega0).powi(2)).exp()
                } else {
                    0.0
                };
                *b = xf[k] * psi;
            }
            inv.process(&mut buf);
            let s = 1.0 / nfft as f64;
            buf[..n].iter().map(|c| (c * s).norm_sqr()).collect()
        })
        .collect()
}

/// Stacks band-power ERPs of adjacent narrow bins.
fn nbch<T: AsRef<[f64]> + Sync>(
    trials: &[T],
    fs: f64,
    onset_times: &[f64],
    duration: f64,
    opts: &TfOptions,
) -> Result<TfMap> {
    let (lo, hi) = opts.nbch_range_hz;
    let width = opts.nbch_bin_hz;
    if !(width > 0.0 && lo > 0.0 && hi > lo) {
        return Err(Error::InvalidParameter(format!("bad NBCH bins {lo}-{hi} Hz by {width} Hz")));
    }
    let nbins = ((hi - lo) / width - 1e-9).ceil() as usize;
    let bands: Vec<BandSpec> = (0..nbins)
        .map(|i| {
            let a = lo + i as f64 * width;
            BandSpec::from_edges(a, (a + width).min(hi))
        })
        .collect();
    let curves = bands
        .par_iter()
        .map(|b| trigger_avg_erp_with(trials, fs, onset_times, b, duration, &opts.erp))
        .collect::<Result<Vec<_>>>()?;
    let time_vec = curves[0].time_vec.clone();
    let trigger_time_sec = curves[0].trigger_time_sec;
    Ok(TfMap {
        power: curves.into_iter().map(|c| c.values).collect(),
        freq_vec: bands.iter().map(|b| b.f0).collect(),
        time_vec,
        trigger_time_sec,
        method: TfMethod::Nbch,
    })
}
