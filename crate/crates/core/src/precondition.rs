//! Signal conditioning: baseline estimation, drift rejection, local-minima
//! trend and zero-phase CIC band-pass filtering.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::dsp;
use crate::error::{Error, Result};
use crate::types::BandSpec;

/// Central tendency used by the sliding baseline estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineApproach {
    Median,
    #[default]
    Mean,
}

impl FromStr for BaselineApproach {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "md" | "median" => Ok(BaselineApproach::Median),
            "mn" | "mean" => Ok(BaselineApproach::Mean),
            other => Err(Error::InvalidParameter(format!("unknown baseline approach {other:?}"))),
        }
    }
}

/// Sliding median or mean over a window of `len` samples centered on each
/// sample. Edge windows are truncated to the available samples.
pub fn baseline_estimate(x: &[f64], len: usize, approach: BaselineApproach) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(Error::EmptySignal);
    }
    if len == 0 {
        return Err(Error::InvalidParameter("window length must be at least 1".into()));
    }
    if len > x.len() {
        return Err(Error::WindowTooLarge { window: len, len: x.len() });
    }
    Ok(match approach {
        BaselineApproach::Mean => dsp::moving_average(x, len),
        BaselineApproach::Median => dsp::moving_median(x, len),
    })
}

/// Removes baseline wander with two cascaded baseline estimators:
/// `raw - baseline(baseline(raw, l1), l2)`. `l2` defaults to `l1`.
pub fn drift_reject(raw: &[f64], l1: usize, l2: Option<usize>, approach: BaselineApproach) -> Result<Vec<f64>> {
    let stage1 = baseline_estimate(raw, l1, approach)?;
    let stage2 = baseline_estimate(&stage1, l2.unwrap_or(l1), approach)?;
    Ok(raw.iter().zip(&stage2).map(|(r, b)| r - b).collect())
}

/// Drift rejection with the default window, `round(1.5 s * fs)` for both
/// stages (clamped to the signal length), mean approach.
pub fn drift_reject_default(raw: &[f64], fs: f64) -> Result<Vec<f64>> {
    let len = ((defaults::DRIFT_WINDOW_S * fs).round() as usize).clamp(1, raw.len().max(1));
    drift_reject(raw, len, None, BaselineApproach::Mean)
}

/// Trend through the strict local minima (plus both endpoints), linearly
/// interpolated at every sample. Returns the trend and the knot indices.
pub fn sig_trend(x: &[f64]) -> Result<(Vec<f64>, Vec<usize>)> {
    let n = x.len();
    if n < 3 {
        return Err(Error::SignalTooShort { needed: 3, actual: n });
    }
    let mut knots = vec![0];
    knots.extend((1..n - 1).filter(|&i| x[i] < x[i - 1] && x[i] < x[i + 1]));
    knots.push(n - 1);

    let mut trend = vec![0.0; n];
    for pair in knots.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (ya, yb) = (x[a], x[b]);
        let span = (b - a) as f64;
        for (i, slot) in trend[a..=b].iter_mut().enumerate() {
            *slot = ya + (yb - ya) * i as f64 / span;
        }
    }
    Ok((trend, knots))
}

/// Moving-average length of each comb–integrator stage so that the cascaded
/// response `D_N(f)^order` stays above -3 dB out to `bw/2` from the center.
pub fn cic_stage_length(fs: f64, bw: f64, order: usize) -> usize {
    let edge = 0.5 * bw;
    let target = std::f64::consts::FRAC_1_SQRT_2;
    let mut n = 1usize;
    loop {
        let next = n + 1;
        if dirichlet(edge, next, fs).powi(order as i32) < target || next as f64 * edge >= fs {
            return n;
        }
        n = next;
    }
}

/// Normalized moving-average (Dirichlet) gain of an `n`-tap stage at `f` Hz.
fn dirichlet(f: f64, n: usize, fs: f64) -> f64 {
    let w = PI * f / fs;
    let den = n as f64 * w.sin();
    if den.abs() < 1e-300 {
        1.0
    } else {
        (n as f64 * w).sin() / den
    }
}

/// Zero-phase band-pass built from comb–integrator (moving-average) stages.
///
/// The band `[f0 - bw/2, f0 + bw/2]` is shifted to DC by complex demodulation,
/// low-passed by `order/2` forward and `order/2` backward comb–integrator
/// passes, and modulated back. The combined response is
/// `D(f - f0)^order + D(f + f0)^order`, real and non-negative for even orders,
/// so the output has exactly zero phase. Gain at `f0` is normalized to one.
/// The input is odd-extended at both ends to tame start-up transients.
pub fn cic_bandpass(x: &[f64], fs: f64, band: &BandSpec, order: usize) -> Result<Vec<f64>> {
    if order < 2 || order % 2 == 1 {
        return Err(Error::OddOrder(order));
    }
    band.validate(fs)?;
    if x.is_empty() {
        return Err(Error::EmptySignal);
    }
    let passes = order / 2;
    let taps = cic_stage_length(fs, band.bw, order);
    let pad = (passes * taps).min(x.len() - 1);
    let ext = if pad > 0 { dsp::odd_extend(x, pad) } else { x.to_vec() };

    let w0 = 2.0 * PI * band.f0 / fs;
    let mut z: Vec<Complex64> = ext
        .iter()
        .enumerate()
        .map(|(n, &v)| Complex64::from_polar(v, -w0 * n as f64))
        .collect();
    for _ in 0..passes {
        comb_integrator_forward(&mut z, taps);
    }
    for _ in 0..passes {
        comb_integrator_backward(&mut z, taps);
    }
    let gain = 1.0 + dirichlet(2.0 * band.f0, taps, fs).powi(order as i32);
    let scale = 2.0 / gain;
    Ok(z[pad..pad + x.len()]
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let n = (i + pad) as f64;
            scale * (v * Complex64::from_polar(1.0, w0 * n)).re
        })
        .collect())
}

/// Causal `taps`-sample moving average as integrator followed by comb.
fn comb_integrator_forward(z: &mut [Complex64], taps: usize) {
    let inv = 1.0 / taps as f64;
    let src = z.to_vec();
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..z.len() {
        acc += src[n];
        if n >= taps {
            acc -= src[n - taps];
        }
        z[n] = acc * inv;
    }
}

/// Anti-causal mirror of [`comb_integrator_forward`].
fn comb_integrator_backward(z: &mut [Complex64], taps: usize) {
    z.reverse();
    comb_integrator_forward(z, taps);
    z.reverse();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::NamedBand;

    fn tone(f: f64, fs: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| (2.0 * PI * f * i as f64 / fs).sin()).collect()
    }

    /// Lag (in samples) of the cross-correlation peak of `y` against `x`.
    fn xcorr_peak_lag(x: &[f64], y: &[f64], max_lag: isize) -> isize {
        let n = x.len() as isize;
        (-max_lag..=max_lag)
            .map(|lag| {
                let mut s = 0.0;
                for i in 0..n {
                    let j = i + lag;
                    if j >= 0 && j < n {
                        s += x[i as usize] * y[j as usize];
                    }
                }
                (lag, s)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap()
            .0
    }

    #[test]
    fn baseline_of_constant_is_constant() {
        let x = vec![4.2; 40];
        for len in [1, 3, 8, 40] {
            for approach in [BaselineApproach::Mean, BaselineApproach::Median] {
                assert_eq!(baseline_estimate(&x, len, approach).unwrap(), x);
            }
        }
    }

    #[test]
    fn baseline_window_one_is_identity() {
        let x: Vec<f64> = (0..20).map(|i| (i as f64).sin()).collect();
        assert_eq!(baseline_estimate(&x, 1, BaselineApproach::Mean).unwrap(), x);
        assert_eq!(baseline_estimate(&x, 1, BaselineApproach::Median).unwrap(), x);
    }

    #[test]
    fn baseline_ramp_matches_truncated_window_means() {
        // brute force: mean over [t-1, t+1] clipped to [0, 9]
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let want: Vec<f64> = (0..10i32)
            .map(|t| {
                let w: Vec<f64> = (t - 1..=t + 1).filter(|&i| (0..10).contains(&i)).map(|i| i as f64).collect();
                w.iter().sum::<f64>() / w.len() as f64
            })
            .collect();
        assert_eq!(want[0], 0.5);
        assert_eq!(want[9], 8.5);
        let got = baseline_estimate(&x, 3, BaselineApproach::Mean).unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn baseline_errors() {
        assert!(matches!(baseline_estimate(&[], 1, BaselineApproach::Mean), Err(Error::EmptySignal)));
        assert!(matches!(
            baseline_estimate(&[1.0, 2.0], 3, BaselineApproach::Mean),
            Err(Error::WindowTooLarge { window: 3, len: 2 })
        ));
    }

    #[test]
    fn drift_reject_constant_and_zero() {
        let c = vec![7.0; 100];
        assert!(drift_reject(&c, 10, None, BaselineApproach::Mean).unwrap().iter().all(|v| *v == 0.0));
        assert!(drift_reject(&c, 10, Some(5), BaselineApproach::Median).unwrap().iter().all(|v| *v == 0.0));
        let z = vec![0.0; 50];
        assert_eq!(drift_reject(&z, 7, None, BaselineApproach::Mean).unwrap(), z);
    }

    #[test]
    fn drift_reject_removes_ramp_keeps_sinusoid() {
        let fs = 250.0;
        let n = 2500;
        let ramp: Vec<f64> = (0..n).map(|i| 50.0 * i as f64 / n as f64).collect();
        let sine = tone(10.0, fs, n);
        let raw: Vec<f64> = ramp.iter().zip(&sine).map(|(a, b)| a + b).collect();
        let out = drift_reject(&raw, 250, Some(250), BaselineApproach::Mean).unwrap();
        let resid_ramp: f64 = out.iter().zip(&sine).map(|(o, s)| (o - s).powi(2)).sum();
        let ramp_energy: f64 = ramp.iter().map(|v| v * v).sum();
        assert!(resid_ramp < 0.05 * ramp_energy, "{resid_ramp} vs {ramp_energy}");
        // interior sinusoid is intact; an even window sits half a sample off
        // center per stage, leaving one sample of ramp slope (0.02) behind
        let interior_err = dsp::rms(
            &out[500..2000].iter().zip(&sine[500..2000]).map(|(o, s)| o - s).collect::<Vec<_>>(),
        );
        assert!(interior_err < 0.021, "{interior_err}");
    }

    #[test]
    fn sig_trend_cases() {
        let (t, loc) = sig_trend(&[10.0, 5.0, 0.0, 5.0, 10.0]).unwrap();
        assert_eq!(loc, vec![0, 2, 4]);
        assert_eq!(t, vec![10.0, 5.0, 0.0, 5.0, 10.0]);

        let x: Vec<f64> = (0..6).map(|i| (i * i) as f64).collect();
        let (t, loc) = sig_trend(&x).unwrap();
        assert_eq!(loc, vec![0, 5]);
        for (i, v) in t.iter().enumerate() {
            assert!((v - 5.0 * i as f64).abs() < 1e-12);
        }

        let c = vec![3.0; 8];
        assert_eq!(sig_trend(&c).unwrap().0, c);
        assert!(matches!(sig_trend(&[1.0, 2.0]), Err(Error::SignalTooShort { .. })));
    }

    #[test]
    fn cic_rejects_odd_orders() {
        let x = vec![0.0; 100];
        let band = BandSpec::named(NamedBand::Alpha);
        for order in [0, 1, 3, 5] {
            assert!(matches!(cic_bandpass(&x, 256.0, &band, order), Err(Error::OddOrder(o)) if o == order));
        }
        assert!(matches!(
            cic_bandpass(&x, 20.0, &band, 4),
            Err(Error::BandOutOfNyquist { .. })
        ));
    }

    #[test]
    fn cic_blocks_dc() {
        let x = vec![1.0; 1024];
        let y = cic_bandpass(&x, 256.0, &BandSpec::named(NamedBand::Alpha), 4).unwrap();
        assert!(y.iter().all(|v| v.abs() < 0.01), "max {}", y.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }

    #[test]
    fn cic_tone_at_center_has_zero_lag_and_unit_gain() {
        let fs = 256.0;
        let x = tone(10.0, fs, 2048);
        let band = BandSpec::from_edges(8.0, 12.0);
        let y = cic_bandpass(&x, fs, &band, 4).unwrap();
        assert!(xcorr_peak_lag(&x, &y, 20).abs() <= 1);
        let g = dsp::rms(&y[256..1792]) / dsp::rms(&x[256..1792]);
        assert!((20.0 * g.log10()).abs() < 0.1, "gain {g}");
    }

    #[test]
    fn cic_attenuates_out_of_band_tone() {
        let fs = 256.0;
        let x = tone(40.0, fs, 2048);
        let y = cic_bandpass(&x, fs, &BandSpec::from_edges(8.0, 12.0), 4).unwrap();
        let db = 20.0 * (dsp::rms(&y) / dsp::rms(&x)).log10();
        assert!(db <= -20.0, "{db} dB");
    }

    #[test]
    fn cic_band_edges_near_minus_3db() {
        let fs = 512.0;
        let band = BandSpec::from_edges(16.0, 24.0);
        for f in [16.0, 24.0] {
            let x = tone(f, fs, 8192);
            let y = cic_bandpass(&x, fs, &band, 4).unwrap();
            let db = 20.0 * (dsp::rms(&y[1024..7168]) / dsp::rms(&x[1024..7168])).log10();
            assert!((-4.5..=-1.0).contains(&db), "edge {f} Hz at {db} dB");
        }
    }
}
