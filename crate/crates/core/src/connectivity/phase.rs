use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::dsp;
use crate::error::{Error, Result};
use crate::precondition::cic_bandpass;
use crate::rng;
use crate::types::BandSpec;

/// Instantaneous phase of one channel in one band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSequence {
    /// Radians in `(-pi, pi]`.
    pub phase: Vec<f64>,
    /// Hz.
    pub inst_freq: Vec<f64>,
    pub envelope: Vec<f64>,
    #[serde(skip)]
    pub analytic: Vec<Complex64>,
    pub fs: f64,
    pub band: BandSpec,
}

impl PhaseSequence {
    pub fn len(&self) -> usize {
        self.phase.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phase.is_empty()
    }
}

/// Relative size of the filter perturbations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    /// Center shift, as a fraction of the bandwidth (uniform, +/-).
    pub center_frac: f64,
    /// Relative bandwidth change (uniform, +/-).
    pub width_frac: f64,
}

impl Default for Perturbation {
    fn default() -> Self {
        Perturbation {
            center_frac: 0.01,
            width_frac: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseOptions {
    pub pertnum: usize,
    pub seed: u64,
    pub cic_order: usize,
    pub perturbation: Perturbation,
}

impl Default for PhaseOptions {
    fn default() -> Self {
        PhaseOptions {
            pertnum: defaults::PERTNUM,
            seed: defaults::SEED,
            cic_order: defaults::CIC_ORDER,
            perturbation: Perturbation::default(),
        }
    }
}

/// Band used by repetition `rep`: `f0 + U(+/- c bw)`, `bw (1 + U(+/- w))`.
pub fn perturbed_band(band: &BandSpec, seed: u64, rep: usize, p: &Perturbation) -> BandSpec {
    let mut g = rng::stream(seed, &[rep as u64]);
    let u1: f64 = g.random_range(-1.0..=1.0);
    let u2: f64 = g.random_range(-1.0..=1.0);
    BandSpec::from_center(band.f0 + u1 * p.center_frac * band.bw, band.bw * (1.0 + u2 * p.width_frac))
}

/// One filter-and-analytic-signal run.
pub fn single_run(x: &[f64], fs: f64, band: &BandSpec, order: usize) -> Result<Vec<Complex64>> {
    Ok(dsp::analytic_signal(&cic_bandpass(x, fs, band, order)?))
}

/// Phase estimation by averaging over slightly perturbed band-pass filters.
///
/// Phases are combined by circular mean, taken relative to the first run so
/// that identical runs reproduce that run's phase exactly. The envelope is
/// the mean run magnitude, and the analytic signal is envelope times the
/// unit phasor of the averaged phase.
pub fn phase_est(x: &[f64], fs: f64, band: &BandSpec, opts: &PhaseOptions) -> Result<PhaseSequence> {
    if opts.pertnum == 0 {
        return Err(Error::InvalidParameter("pertnum must be at least 1".into()));
    }
    band.validate(fs)?;
    let needed = (4.0 * fs / band.f0).ceil() as usize;
    if x.len() < needed {
        return Err(Error::SignalTooShort { needed, actual: x.len() });
    }
    let n = x.len();
    // repetition 0 is the nominal filter, so pertnum = 1 is the plain pipeline
    let run = |rep: usize| -> Result<Vec<Complex64>> {
        let b = if rep == 0 { *band } else { perturbed_band(band, opts.seed, rep, &opts.perturbation) };
        single_run(x, fs, &b, opts.cic_order)
    };

    let first = run(0)?;
    let unit = |z: Complex64| {
        let m = z.norm();
        if m > 0.0 { z / m } else { Complex64::new(0.0, 0.0) }
    };
    let ref_unit: Vec<Complex64> = first.iter().map(|&z| unit(z)).collect();
    let mut rel: Vec<Complex64> = ref_unit.iter().map(|u| u * u.conj()).collect();
    let mut raw: Vec<Complex64> = ref_unit.clone();
    let mut mag: Vec<f64> = first.iter().map(|z| z.norm()).collect();

    // repetitions run in parallel chunks and are folded in index order
    const CHUNK: usize = 16;
    let mut rep = 1;
    while rep < opts.pertnum {
        let end = (rep + CHUNK).min(opts.pertnum);
        let runs = (rep..end).into_par_iter().map(run).collect::<Result<Vec<_>>>()?;
        for a in runs {
            for t in 0..n {
                let u = unit(a[t]);
                rel[t] += u * ref_unit[t].conj();
                raw[t] += u;
                mag[t] += a[t].norm();
            }
        }
        rep = end;
    }

    let k = opts.pertnum as f64;
    let phase: Vec<f64> = (0..n)
        .map(|t| {
            let p = if ref_unit[t].norm_sqr() > 0.0 {
                first[t].arg() + rel[t].arg()
            } else {
                raw[t].arg()
            };
            dsp::wrap_phase(p)
        })
        .collect();
    let envelope: Vec<f64> = mag.iter().map(|m| m / k).collect();
    let analytic = phase.iter().zip(&envelope).map(|(&p, &e)| Complex64::from_polar(e, p)).collect();
    let inst_freq = inst_freq(&phase, fs);
    Ok(PhaseSequence {
        phase,
        inst_freq,
        envelope,
        analytic,
        fs,
        band: *band,
    })
}

/// Forward difference of the unwrapped phase in Hz; the last value repeats.
pub fn inst_freq(phase: &[f64], fs: f64) -> Vec<f64> {
    let un = dsp::unwrap_phase(phase);
    let mut f: Vec<f64> = un.windows(2).map(|w| (w[1] - w[0]) * fs / (2.0 * PI)).collect();
    if let Some(&last) = f.last() {
        f.push(last);
    } else if !un.is_empty() {
        f.push(0.0);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cosine(f: f64, fs: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| (2.0 * PI * f * i as f64 / fs).cos()).collect()
    }

    #[test]
    fn tone_phase_matches_analytic_phase() {
        let fs = 256.0;
        let n = 1024;
        let x = cosine(10.0, fs, n);
        let opts = PhaseOptions { pertnum: 20, ..Default::default() };
        let p = phase_est(&x, fs, &BandSpec::from_edges(8.0, 12.0), &opts).unwrap();
        let edge = n / 10;
        let err: Vec<f64> = (edge..n - edge)
            .map(|i| dsp::wrap_phase(p.phase[i] - 2.0 * PI * 10.0 * i as f64 / fs))
            .collect();
        assert!(dsp::rms(&err) < 0.05, "{}", dsp::rms(&err));
        for (z, e) in p.analytic.iter().zip(&p.envelope) {
            assert!((z.norm() - e).abs() <= 1e-12 * e.max(1.0));
        }
        assert!(p.phase.iter().all(|v| *v > -PI && *v <= PI));
    }

    #[test]
    fn pertnum_one_is_single_run() {
        let fs = 200.0;
        let x: Vec<f64> = (0..600).map(|i| (i as f64 * 0.31).sin() + 0.3 * (i as f64 * 0.05).cos()).collect();
        let band = BandSpec::from_edges(8.0, 12.0);
        let opts = PhaseOptions { pertnum: 1, seed: 99, ..Default::default() };
        let p = phase_est(&x, fs, &band, &opts).unwrap();
        let a = single_run(&x, fs, &band, 4).unwrap();
        for t in 0..x.len() {
            assert_eq!(p.phase[t], dsp::wrap_phase(a[t].arg()));
            assert_eq!(p.envelope[t], a[t].norm());
        }
    }

    #[test]
    fn identical_runs_aggregate_exactly() {
        let fs = 200.0;
        let x: Vec<f64> = (0..500).map(|i| (i as f64 * 0.4).sin()).collect();
        let band = BandSpec::from_edges(10.0, 16.0);
        let frozen = PhaseOptions {
            pertnum: 7,
            perturbation: Perturbation { center_frac: 0.0, width_frac: 0.0 },
            ..Default::default()
        };
        let p = phase_est(&x, fs, &band, &frozen).unwrap();
        let a = single_run(&x, fs, &band, 4).unwrap();
        for t in 0..x.len() {
            assert_eq!(p.phase[t], dsp::wrap_phase(a[t].arg()));
        }
    }

    #[test]
    fn in_band_tone_dominates_inst_freq() {
        let fs = 256.0;
        let n = 2048;
        let x: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / fs;
                (2.0 * PI * 10.0 * t).sin() + (2.0 * PI * 45.0 * t).sin()
            })
            .collect();
        let opts = PhaseOptions { pertnum: 10, ..Default::default() };
        let p = phase_est(&x, fs, &BandSpec::named(crate::types::NamedBand::Alpha), &opts).unwrap();
        let mut f = p.inst_freq[n / 10..n - n / 10].to_vec();
        f.sort_by(f64::total_cmp);
        let median = f[f.len() / 2];
        assert!((median / 10.0 - 1.0).abs() < 0.02, "{median}");
    }

    #[test]
    fn reproducible_and_checks_length() {
        let fs = 128.0;
        let x: Vec<f64> = (0..400).map(|i| ((i * 31) % 17) as f64).collect();
        let band = BandSpec::from_edges(12.0, 20.0);
        let opts = PhaseOptions { pertnum: 33, seed: 5, ..Default::default() };
        let a = phase_est(&x, fs, &band, &opts).unwrap();
        let b = phase_est(&x, fs, &band, &opts).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            phase_est(&x[..20], fs, &band, &opts),
            Err(Error::SignalTooShort { needed: 32, actual: 20 })
        ));
    }
}
