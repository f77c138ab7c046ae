use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::dsp;
use crate::types::BandSpec;

/// Hamming-tapered spectra of `segments` equal, non-overlapping pieces of
/// `x`. Trailing samples that do not fill a segment are dropped.
pub fn segment_spectra(x: &[f64], segments: usize) -> Vec<Vec<Complex64>> {
    let len = x.len() / segments.max(1);
    if len == 0 {
        return Vec::new();
    }
    let w = dsp::hamming(len);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(len);
    (0..segments)
        .map(|i| {
            let mut buf: Vec<Complex64> = x[i * len..(i + 1) * len]
                .iter()
                .zip(&w)
                .map(|(v, wk)| Complex64::new(v * wk, 0.0))
                .collect();
            fft.process(&mut buf);
            buf
        })
        .collect()
}

/// Running sums of cross and auto spectra over an ensemble of segments.
#[derive(Debug, Clone)]
pub struct CrossSpectra {
    pub sxy: Vec<Complex64>,
    pub sxx: Vec<f64>,
    pub syy: Vec<f64>,
}

impl CrossSpectra {
    pub fn new(bins: usize) -> Self {
        CrossSpectra {
            sxy: vec![Complex64::new(0.0, 0.0); bins],
            sxx: vec![0.0; bins],
            syy: vec![0.0; bins],
        }
    }

    pub fn accumulate(&mut self, xs: &[Vec<Complex64>], ys: &[Vec<Complex64>]) {
        for (x, y) in xs.iter().zip(ys) {
            for k in 0..self.sxy.len() {
                self.sxy[k] += x[k] * y[k].conj();
                self.sxx[k] += x[k].norm_sqr();
                self.syy[k] += y[k].norm_sqr();
            }
        }
    }

    /// `|Sxy|^2 / (Sxx Syy)` per bin; zero where either auto term vanishes.
    pub fn coherence(&self) -> Vec<f64> {
        (0..self.sxy.len())
            .map(|k| {
                let den = self.sxx[k] * self.syy[k];
                if den > 0.0 {
                    (self.sxy[k].norm_sqr() / den).min(1.0)
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// Magnitude-squared coherence per FFT bin from paired segment spectra.
pub fn msc(xs: &[Vec<Complex64>], ys: &[Vec<Complex64>]) -> Vec<f64> {
    let bins = xs.first().map_or(0, Vec::len);
    let mut c = CrossSpectra::new(bins);
    c.accumulate(xs, ys);
    c.coherence()
}

/// FFT bin indices whose center frequencies lie in the band.
pub fn band_bins(band: &BandSpec, seg_len: usize, fs: f64) -> Vec<usize> {
    let df = fs / seg_len as f64;
    (0..=seg_len / 2)
        .filter(|&k| {
            let f = k as f64 * df;
            f >= band.lo() - 1e-9 && f <= band.hi() + 1e-9
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    use rand_xoshiro::SplitMix64;

    #[test]
    fn identical_signals_are_fully_coherent() {
        let x: Vec<f64> = (0..256).map(|i| ((i * 37) % 23) as f64 - 11.0).collect();
        for segs in [1, 2, 4, 8] {
            let s = segment_spectra(&x, segs);
            let c = msc(&s, &s);
            assert!(c.iter().all(|v| *v == 1.0), "{segs}: {c:?}");
        }
    }

    #[test]
    fn single_segment_is_degenerate() {
        let x: Vec<f64> = (0..64).map(|i| (i as f64).sin()).collect();
        let y: Vec<f64> = (0..64).map(|i| ((i * 7) % 5) as f64).collect();
        let c = msc(&segment_spectra(&x, 1), &segment_spectra(&y, 1));
        assert!(c.iter().all(|v| (v - 1.0).abs() < 1e-12 || *v == 0.0));
    }

    #[test]
    fn brute_force_dft_agrees() {
        let x: Vec<f64> = (0..32).map(|i| (i as f64 * 0.3).cos() + 0.1 * i as f64).collect();
        let s = segment_spectra(&x, 2);
        let w = dsp::hamming(16);
        for k in 0..16 {
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..16 {
                let ang = -2.0 * std::f64::consts::PI * (k * n) as f64 / 16.0;
                acc += Complex64::from_polar(x[16 + n] * w[n], ang);
            }
            assert!((acc - s[1][k]).norm() < 1e-9);
        }
    }

    #[test]
    fn independent_noise_is_incoherent() {
        // E[MSC] ~ 1/N for N independent segments
        let mut g = SplitMix64::seed_from_u64(7);
        let mut c = CrossSpectra::new(64);
        for _ in 0..50 {
            let x: Vec<f64> = (0..256).map(|_| StandardNormal.sample(&mut g)).collect();
            let y: Vec<f64> = (0..256).map(|_| StandardNormal.sample(&mut g)).collect();
            c.accumulate(&segment_spectra(&x, 4), &segment_spectra(&y, 4));
        }
        let m = c.coherence();
        let mean = m[1..32].iter().sum::<f64>() / 31.0;
        assert!(mean < 0.02, "{mean}");
    }

    #[test]
    fn bins_inside_band() {
        let b = BandSpec::from_edges(12.0, 32.0);
        assert_eq!(band_bins(&b, 64, 256.0), vec![3, 4, 5, 6, 7, 8]);
    }
}
