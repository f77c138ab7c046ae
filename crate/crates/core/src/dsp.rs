//! Small numeric building blocks shared by the analysis modules.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// FFT-based analytic signal: negative-frequency bins zeroed, positive bins
/// doubled, DC (and Nyquist for even lengths) kept.
pub fn analytic_signal(x: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fwd.process(&mut buf);
    let half = n / 2;
    for (k, b) in buf.iter_mut().enumerate() {
        let h = if k == 0 || (n % 2 == 0 && k == half) {
            1.0
        } else if k <= (n - 1) / 2 {
            2.0
        } else {
            0.0
        };
        *b *= h;
    }
    inv.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|b| *b *= scale);
    buf
}

/// Symmetric Hamming taper.
pub fn hamming(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![1.0],
        _ => (0..n)
            .map(|k| 0.54 - 0.46 * (2.0 * PI * k as f64 / (n - 1) as f64).cos())
            .collect(),
    }
}

/// Bounds of the length-`len` window centered on `t`, truncated to `[0, n)`.
/// For even lengths the extra sample sits on the right.
#[inline]
pub fn centered_window(t: usize, len: usize, n: usize) -> (usize, usize) {
    let left = (len - 1) / 2;
    (t.saturating_sub(left), (t + len - left).min(n))
}

/// Centered moving average with truncated edge windows.
pub fn moving_average(x: &[f64], len: usize) -> Vec<f64> {
    if len <= 1 {
        return x.to_vec();
    }
    let n = x.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    // Shifting by x[0] keeps constant inputs exact.
    let shift = x.first().copied().unwrap_or(0.0);
    let mut acc = 0.0;
    for &v in x {
        acc += v - shift;
        prefix.push(acc);
    }
    (0..n)
        .map(|t| {
            let (s, e) = centered_window(t, len, n);
            shift + (prefix[e] - prefix[s]) / (e - s) as f64
        })
        .collect()
}

/// Centered running median with truncated edge windows.
pub fn moving_median(x: &[f64], len: usize) -> Vec<f64> {
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    let mut sorted: Vec<f64> = Vec::with_capacity(len + 1);
    let (mut cur_s, mut cur_e) = (0usize, 0usize);
    for t in 0..n {
        let (s, e) = centered_window(t, len, n);
        while cur_e < e {
            let v = x[cur_e];
            let pos = sorted.partition_point(|&a| a < v);
            sorted.insert(pos, v);
            cur_e += 1;
        }
        while cur_s < s {
            let v = x[cur_s];
            let pos = sorted.partition_point(|&a| a < v);
            sorted.remove(pos);
            cur_s += 1;
        }
        let m = sorted.len();
        out.push(if m % 2 == 1 {
            sorted[m / 2]
        } else {
            0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
        });
    }
    out
}

/// Trailing moving average: mean of the (at most) `len` samples ending at `t`.
pub fn trailing_mean(x: &[f64], len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len());
    let mut acc = 0.0;
    for t in 0..x.len() {
        acc += x[t];
        if t >= len {
            acc -= x[t - len];
        }
        out.push(acc / (t + 1).min(len) as f64);
    }
    out
}

/// Odd (point-symmetric) extension by `pad` samples on both ends.
pub fn odd_extend(x: &[f64], pad: usize) -> Vec<f64> {
    let n = x.len();
    debug_assert!(pad < n.max(1));
    let mut out = Vec::with_capacity(n + 2 * pad);
    let first = x[0];
    let last = x[n - 1];
    for i in (1..=pad).rev() {
        out.push(2.0 * first - x[i]);
    }
    out.extend_from_slice(x);
    for i in 1..=pad {
        out.push(2.0 * last - x[n - 1 - i]);
    }
    out
}

/// Mean and population standard deviation, computed about the first sample
/// so constant inputs give exactly `(c, 0)`.
pub fn mean_std(x: &[f64]) -> (f64, f64) {
    if x.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let shift = x[0];
    let n = x.len() as f64;
    let m = x.iter().map(|v| v - shift).sum::<f64>() / n;
    let var = x.iter().map(|v| (v - shift - m).powi(2)).sum::<f64>() / n;
    (shift + m, var.sqrt())
}

/// Least-squares slope of `y` against `t`. Zero for fewer than two points.
pub fn ls_slope(t: &[f64], y: &[f64]) -> f64 {
    let n = t.len().min(y.len());
    if n < 2 {
        return 0.0;
    }
    let mt = t[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for i in 0..n {
        sxy += (t[i] - mt) * (y[i] - my);
        sxx += (t[i] - mt).powi(2);
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Wraps an angle into `(-pi, pi]`.
#[inline]
pub fn wrap_phase(x: f64) -> f64 {
    let mut y = x - 2.0 * PI * (x / (2.0 * PI)).round();
    if y <= -PI {
        y += 2.0 * PI;
    } else if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// Removes 2*pi jumps from a wrapped phase sequence.
pub fn unwrap_phase(phase: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phase.len());
    let mut offset = 0.0;
    for (i, &p) in phase.iter().enumerate() {
        if i > 0 {
            let d = p - phase[i - 1];
            if d > PI {
                offset -= 2.0 * PI;
            } else if d < -PI {
                offset += 2.0 * PI;
            }
        }
        out.push(p + offset);
    }
    out
}

pub fn rms(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_window(t: usize, len: usize, n: usize) -> (usize, usize) {
        let left = ((len - 1) / 2) as isize;
        let s = t as isize - left;
        let e = s + len as isize;
        (s.max(0) as usize, (e.min(n as isize)) as usize)
    }

    #[test]
    fn centered_window_matches_brute_force() {
        for n in 1..20 {
            for len in 1..=n {
                for t in 0..n {
                    assert_eq!(centered_window(t, len, n), brute_window(t, len, n), "n={n} len={len} t={t}");
                }
            }
        }
    }

    #[test]
    fn running_median_matches_sorting() {
        let x: Vec<f64> = (0..50).map(|i| ((i * 37) % 17) as f64 - 3.0).collect();
        for len in [1, 2, 3, 6, 11, 50] {
            let got = moving_median(&x, len);
            for t in 0..x.len() {
                let (s, e) = brute_window(t, len, x.len());
                let mut w = x[s..e].to_vec();
                w.sort_by(f64::total_cmp);
                let m = w.len();
                let want = if m % 2 == 1 { w[m / 2] } else { 0.5 * (w[m / 2 - 1] + w[m / 2]) };
                assert_eq!(got[t], want);
            }
        }
    }

    #[test]
    fn analytic_signal_of_cosine_is_phasor() {
        let n = 256;
        let x: Vec<f64> = (0..n).map(|i| (2.0 * PI * 8.0 * i as f64 / n as f64).cos()).collect();
        let a = analytic_signal(&x);
        for (i, z) in a.iter().enumerate() {
            let ph = 2.0 * PI * 8.0 * i as f64 / n as f64;
            assert!((z.re - ph.cos()).abs() < 1e-12);
            assert!((z.im - ph.sin()).abs() < 1e-12);
        }
        // odd length keeps the real part
        let x: Vec<f64> = (0..101).map(|i| (i as f64 * 0.3).sin()).collect();
        let a = analytic_signal(&x);
        for (z, v) in a.iter().zip(&x) {
            assert!((z.re - v).abs() < 1e-12);
        }
    }

    #[test]
    fn wrap_and_unwrap() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        let ramp: Vec<f64> = (0..100).map(|i| i as f64 * 0.7).collect();
        let wrapped: Vec<f64> = ramp.iter().map(|&p| wrap_phase(p)).collect();
        let un = unwrap_phase(&wrapped);
        for (a, b) in un.iter().zip(&ramp) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn odd_extension_continues_lines() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(odd_extend(&x, 2), vec![-1.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }

    #[test]
    fn mean_std_exact_on_constants() {
        let x = vec![0.1; 37];
        assert_eq!(mean_std(&x), (0.1, 0.0));
        assert_eq!(moving_average(&x, 5), x);
    }

    #[test]
    fn slope_of_line() {
        let t: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = t.iter().map(|v| 3.0 * v - 1.0).collect();
        assert!((ls_slope(&t, &y) - 3.0).abs() < 1e-12);
        assert_eq!(ls_slope(&t[..1], &y[..1]), 0.0);
    }
}
