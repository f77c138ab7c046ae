//! Elliptic (Cauer) low-pass design via Jacobi elliptic functions computed
//! with descending Landen transformations, plus second-order-section
//! filtering and zero-phase forward-backward application.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dsp;
use crate::error::{Error, Result};

/// One biquad: `[b0, b1, b2, a0, a1, a2]` with `a0 = 1`.
pub type Sos = [f64; 6];

/// Descending Landen sequence of moduli, stopping once the modulus is
/// negligible.
fn landen(k: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut k = k;
    while k > 1e-16 && v.len() < 32 {
        let kp = (1.0 - k * k).sqrt();
        k = (k / (1.0 + kp)).powi(2);
        v.push(k);
    }
    v
}

/// Complete elliptic integral of the first kind, `K(k)`.
fn ellipk(k: f64) -> f64 {
    if k >= 1.0 {
        return f64::INFINITY;
    }
    let kp = (1.0 - k * k).sqrt();
    if kp < 1e-6 {
        let l = -(kp / 4.0).ln();
        return l + (l - 1.0) * kp * kp / 4.0;
    }
    landen(k).iter().map(|v| 1.0 + v).product::<f64>() * PI / 2.0
}

/// `cd(u K, k)` for complex `u`.
fn cde(u: Complex64, k: f64) -> Complex64 {
    let v = landen(k);
    let mut w = (u * (PI / 2.0)).cos();
    for &vn in v.iter().rev() {
        w = (1.0 + vn) * w / (1.0 + vn * w * w);
    }
    w
}

/// `sn(u K, k)` for real `u`.
#[cfg(test)]
fn sne(u: f64, k: f64) -> f64 {
    let v = landen(k);
    let mut w = (u * PI / 2.0).sin();
    for &vn in v.iter().rev() {
        w = (1.0 + vn) * w / (1.0 + vn * w * w);
    }
    w
}

/// Inverse of `cde`: the `u` with `cd(u K, k) = w`.
fn acde(w: Complex64, k: f64) -> Complex64 {
    let v = landen(k);
    let mut w = w;
    let mut prev = k;
    for &vn in &v {
        w = w / (1.0 + (1.0 - w * w * prev * prev).sqrt()) * 2.0 / (1.0 + vn);
        prev = vn;
    }
    w.acos() * (2.0 / PI)
}

fn asne(w: Complex64, k: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) - acde(w, k)
}

/// Solves the elliptic degree equation for the selectivity modulus `k`
/// given the order and discrimination modulus `k1`, via nome series.
fn ellipdeg(n: usize, k1: f64) -> f64 {
    let k1p = (1.0 - k1 * k1).sqrt();
    let q1 = (-PI * ellipk(k1p) / ellipk(k1)).exp();
    let q = q1.powf(1.0 / n as f64);
    let (mut num, mut den) = (0.0, 0.0);
    for m in 1..=10 {
        let m = m as f64;
        num += q.powf(m * (m + 1.0));
        den += q.powf(m * m);
    }
    4.0 * q.sqrt() * ((1.0 + num) / (1.0 + 2.0 * den)).powi(2)
}

/// Complementary check used in tests: degree via the product formula.
#[cfg(test)]
fn ellipdeg_product(n: usize, k1: f64) -> f64 {
    let k1p = (1.0 - k1 * k1).sqrt();
    let mut kp = k1p.powi(n as i32);
    for i in 1..=n / 2 {
        let ui = (2 * i - 1) as f64 / n as f64;
        kp *= sne(ui, k1p).powi(4);
    }
    (1.0 - kp * kp).sqrt()
}

/// Designs an even-order elliptic low-pass with passband ripple `rp_db`,
/// stopband attenuation `rs_db` and passband edge `fc` Hz. The response is
/// `-rp_db` at `fc` and at DC, and at most `-rs_db` in the stopband.
pub fn ellip_lowpass(order: usize, rp_db: f64, rs_db: f64, fc: f64, fs: f64) -> Result<Vec<Sos>> {
    if order == 0 || order % 2 == 1 {
        return Err(Error::InvalidParameter(format!("elliptic order {order} must be even and positive")));
    }
    if !(rp_db > 0.0 && rs_db > rp_db) {
        return Err(Error::InvalidParameter(format!("bad ripple spec rp={rp_db} dB, rs={rs_db} dB")));
    }
    if !(fc > 0.0 && fc < 0.5 * fs) {
        return Err(Error::SamplingTooLow { fs, min: 2.0 * fc });
    }
    let ep = (10f64.powf(rp_db / 10.0) - 1.0).sqrt();
    let es = (10f64.powf(rs_db / 10.0) - 1.0).sqrt();
    let k1 = ep / es;
    let k = ellipdeg(order, k1);
    let v0 = (Complex64::new(0.0, -1.0) * asne(Complex64::new(0.0, 1.0 / ep), k1) / order as f64).re;

    let c = 1.0 / (PI * fc / fs).tan();
    let mut sections = Vec::with_capacity(order / 2);
    for i in 1..=order / 2 {
        let ui = (2 * i - 1) as f64 / order as f64;
        let za = Complex64::new(0.0, 1.0) / (k * cde(Complex64::new(ui, 0.0), k));
        let pa = Complex64::new(0.0, 1.0) * cde(Complex64::new(ui, -v0), k);
        // analog biquad (s^2 + |za|^2) / (s^2 - 2 Re(pa) s + |pa|^2), unit DC gain
        let zz = za.norm_sqr();
        let pp = pa.norm_sqr();
        let g = pp / zz;
        let num = [g * zz, 0.0, g];
        let den = [pp, -2.0 * pa.re, 1.0];
        sections.push(bilinear_biquad(num, den, c));
    }
    let h0 = 10f64.powf(-rp_db / 20.0);
    for v in &mut sections[0][..3] {
        *v *= h0;
    }
    Ok(sections)
}

/// Maps `q0 + q1 s + q2 s^2` over `p0 + p1 s + p2 s^2` to z with
/// `s = c (1 - z^-1)/(1 + z^-1)`.
fn bilinear_biquad(q: [f64; 3], p: [f64; 3], c: f64) -> Sos {
    let map = |q: [f64; 3]| {
        [
            q[0] + q[1] * c + q[2] * c * c,
            2.0 * q[0] - 2.0 * q[2] * c * c,
            q[0] - q[1] * c + q[2] * c * c,
        ]
    };
    let b = map(q);
    let a = map(p);
    [b[0] / a[0], b[1] / a[0], b[2] / a[0], 1.0, a[1] / a[0], a[2] / a[0]]
}

/// Complex frequency response of the cascade at `f` Hz.
pub fn sos_response(sos: &[Sos], f: f64, fs: f64) -> Complex64 {
    let z1 = Complex64::from_polar(1.0, -2.0 * PI * f / fs);
    let z2 = z1 * z1;
    sos.iter()
        .map(|s| (s[0] + s[1] * z1 + s[2] * z2) / (s[3] + s[4] * z1 + s[5] * z2))
        .product()
}

/// Causal cascade filtering (transposed direct form II), with optional
/// per-section initial states.
pub fn sosfilt(sos: &[Sos], x: &[f64], zi: Option<&[[f64; 2]]>) -> Vec<f64> {
    let mut y = x.to_vec();
    for (i, s) in sos.iter().enumerate() {
        let [mut z1, mut z2] = zi.map_or([0.0, 0.0], |z| z[i]);
        for v in y.iter_mut() {
            let xin = *v;
            let out = s[0] * xin + z1;
            z1 = s[1] * xin - s[4] * out + z2;
            z2 = s[2] * xin - s[5] * out;
            *v = out;
        }
    }
    y
}

/// Steady-state section states for a unit step input.
pub fn sosfilt_zi(sos: &[Sos]) -> Vec<[f64; 2]> {
    let mut scale = 1.0;
    sos.iter()
        .map(|s| {
            let g = (s[0] + s[1] + s[2]) / (s[3] + s[4] + s[5]);
            let z2 = s[2] - s[5] * g;
            let z1 = s[1] - s[4] * g + z2;
            let out = [scale * z1, scale * z2];
            scale *= g;
            out
        })
        .collect()
}

/// Zero-phase forward-backward filtering with odd extension of
/// `3 (2 sections + 1)` samples and steady-state initial conditions.
pub fn sosfiltfilt(sos: &[Sos], x: &[f64]) -> Vec<f64> {
    if x.is_empty() {
        return Vec::new();
    }
    let pad = (3 * (2 * sos.len() + 1)).min(x.len() - 1);
    let ext = if pad > 0 { dsp::odd_extend(x, pad) } else { x.to_vec() };
    let zi = sosfilt_zi(sos);
    let scaled = |v: f64| zi.iter().map(|z| [z[0] * v, z[1] * v]).collect::<Vec<_>>();

    let mut y = sosfilt(sos, &ext, Some(&scaled(ext[0])));
    y.reverse();
    let mut y = sosfilt(sos, &y, Some(&scaled(y[0])));
    y.reverse();
    y[pad..pad + x.len()].to_vec()
}
