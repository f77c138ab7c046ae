//! Static SVG figures from polylines and rectangles.

use std::fmt::Write;

use crate::output::fmt9;

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn px(v: f64) -> String {
    format!("{v:.2}")
}

fn extent(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = v.filter(|x| x.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x), h.max(x)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 * lo.abs().max(1.0) {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn sx(&self, v: f64) -> f64 {
        LEFT + (v - self.x.0) / (self.x.1 - self.x.0) * (W - LEFT - RIGHT)
    }

    fn sy(&self, v: f64) -> f64 {
        H - BOTTOM - (v - self.y.0) / (self.y.1 - self.y.0) * (H - TOP - BOTTOM)
    }
}

fn open(out: &mut String, title: &str, x_label: &str, y_label: &str) {
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n\
         <text transform=\"translate(16 {}) rotate(-90)\" text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        escape(title),
        (LEFT + W - RIGHT) / 2.0,
        H - 12.0,
        escape(x_label),
        (TOP + H - BOTTOM) / 2.0,
        escape(y_label),
    );
}

fn axes(out: &mut String, f: &Frame) {
    let _ = writeln!(
        out,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        W - LEFT - RIGHT,
        H - TOP - BOTTOM
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = f.x.0 + t * (f.x.1 - f.x.0);
        let yv = f.y.0 + t * (f.y.1 - f.y.0);
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            px(f.sx(xv)),
            H - BOTTOM + 16.0,
            escape(&fmt_tick(xv))
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
            LEFT - 6.0,
            px(f.sy(yv) + 4.0),
            escape(&fmt_tick(yv))
        );
    }
}

fn fmt_tick(v: f64) -> String {
    let s = fmt9((v * 1e3).round() / 1e3);
    if s.len() > 8 {
        format!("{v:.2e}")
    } else {
        s
    }
}

pub struct Series<'a> {
    pub x: &'a [f64],
    pub y: &'a [f64],
    pub color: &'a str,
}

/// A horizontal reference line, e.g. a confidence edge.
pub struct HLine<'a> {
    pub y: f64,
    pub color: &'a str,
}

pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series], hlines: &[HLine], vline: Option<f64>) -> String {
    let f = Frame {
        x: extent(series.iter().flat_map(|s| s.x.iter().copied())),
        y: extent(series.iter().flat_map(|s| s.y.iter().copied()).chain(hlines.iter().map(|h| h.y))),
    };
    let mut out = String::new();
    open(&mut out, title, x_label, y_label);
    axes(&mut out, &f);
    for h in hlines {
        let _ = writeln!(
            out,
            "<line x1=\"{LEFT}\" x2=\"{}\" y1=\"{y}\" y2=\"{y}\" stroke=\"{}\" stroke-dasharray=\"6 4\"/>",
            W - RIGHT,
            escape(h.color),
            y = px(f.sy(h.y))
        );
    }
    if let Some(v) = vline.filter(|v| *v >= f.x.0 && *v <= f.x.1) {
        let _ = writeln!(
            out,
            "<line x1=\"{x}\" x2=\"{x}\" y1=\"{TOP}\" y2=\"{}\" stroke=\"gray\"/>",
            H - BOTTOM,
            x = px(f.sx(v))
        );
    }
    for s in series {
        let pts: Vec<String> = s
            .x
            .iter()
            .zip(s.y)
            .filter(|(_, y)| y.is_finite())
            .map(|(x, y)| format!("{},{}", px(f.sx(*x)), px(f.sy(*y))))
            .collect();
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>",
            escape(s.color),
            pts.join(" ")
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Blue to yellow ramp over `t` in [0, 1].
fn ramp(t: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] =
        [(68.0, 1.0, 84.0), (59.0, 82.0, 139.0), (33.0, 145.0, 140.0), (94.0, 201.0, 98.0), (253.0, 231.0, 37.0)];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let pos = t * (STOPS.len() - 1) as f64;
    let i = (pos.floor() as usize).min(STOPS.len() - 2);
    let u = pos - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let c = |p: f64, q: f64| (p + u * (q - p)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", c(a.0, b.0), c(a.1, b.1), c(a.2, b.2))
}

/// `values[row][col]`; rows run bottom to top. Color range is `range` or the
/// data extent.
pub fn heat_map(
    title: &str,
    x_label: &str,
    y_label: &str,
    x: (f64, f64),
    y: (f64, f64),
    values: &[Vec<f64>],
    range: Option<(f64, f64)>,
) -> String {
    let f = Frame { x, y };
    let (lo, hi) = range.unwrap_or_else(|| extent(values.iter().flatten().copied()));
    let mut out = String::new();
    open(&mut out, title, x_label, y_label);
    let rows = values.len().max(1);
    let cell_h = (H - TOP - BOTTOM) / rows as f64;
    for (r, row) in values.iter().enumerate() {
        let cell_w = (W - LEFT - RIGHT) / row.len().max(1) as f64;
        for (c, v) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                px(LEFT + c as f64 * cell_w),
                px(H - BOTTOM - (r + 1) as f64 * cell_h),
                px(cell_w + 0.05),
                px(cell_h + 0.05),
                ramp((v - lo) / (hi - lo))
            );
        }
    }
    axes(&mut out, &f);
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"10\">color {} to {}</text>",
        W - RIGHT,
        TOP - 6.0,
        escape(&fmt_tick(lo)),
        escape(&fmt_tick(hi))
    );
    out.push_str("</svg>\n");
    out
}

/// Channel-by-channel matrix with labelled rows and columns.
pub fn matrix_map(title: &str, labels: &[String], values: &[Vec<f64>], range: (f64, f64)) -> String {
    let n = labels.len().max(1);
    let side = (H - TOP - BOTTOM).min(W - LEFT - RIGHT);
    let cell = side / n as f64;
    let mut out = String::new();
    open(&mut out, title, "channel", "channel");
    for (a, row) in values.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                px(LEFT + b as f64 * cell),
                px(TOP + a as f64 * cell),
                px(cell + 0.05),
                px(cell + 0.05),
                ramp((v - range.0) / (range.1 - range.0))
            );
        }
    }
    for (i, l) in labels.iter().enumerate() {
        let c = px(TOP + (i as f64 + 0.5) * cell + 4.0);
        let _ = writeln!(out, "<text x=\"{}\" y=\"{c}\" text-anchor=\"end\">{}</text>", LEFT - 6.0, escape(l));
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            px(LEFT + (i as f64 + 0.5) * cell),
            px(TOP + side + 16.0),
            escape(l)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"10\">color {} to {}</text>",
        W - RIGHT,
        TOP - 6.0,
        fmt_tick(range.0),
        fmt_tick(range.1)
    );
    out.push_str("</svg>\n");
    out
}
