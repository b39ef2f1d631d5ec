//! CSV and SVG writers for sampled series.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// One named curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(label: impl Into<String>, times: Vec<f64>, values: Vec<f64>) -> Self {
        Self { label: label.into(), times, values }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// CSV body: `t,value` header, one row per sample, shortest round-trip
/// decimals, LF endings.
pub fn csv_string(times: &[f64], values: &[f64]) -> Result<String> {
    if times.is_empty() {
        return Err(Error::InvalidParameter("cannot write an empty series".into()));
    }
    if times.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: times.len(), found: values.len() });
    }
    let mut s = String::with_capacity(48 * times.len());
    s.push_str("t,value\n");
    for (t, v) in times.iter().zip(values) {
        let _ = writeln!(s, "{t},{v}");
    }
    Ok(s)
}

pub fn emit_csv(path: &Path, times: &[f64], values: &[f64]) -> Result<()> {
    let body = csv_string(times, values)?;
    fs::write(path, body)?;
    Ok(())
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];
const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 50.0;

fn pi_label(k: i64) -> String {
    match k {
        0 => "0".into(),
        1 => "π".into(),
        k => format!("{k}π"),
    }
}

/// Renders a line plot with t-axis ticks at multiples of π.
pub fn svg_string(series: &[Series], y_label: &str) -> Result<String> {
    if series.is_empty() || series.iter().all(Series::is_empty) {
        return Err(Error::InvalidParameter("nothing to plot".into()));
    }
    let points = series.iter().flat_map(|s| s.times.iter().zip(&s.values));
    let (mut t_min, mut t_max, mut y_min, mut y_max) = (f64::MAX, f64::MIN, 0.0f64, 1.0f64);
    for (&t, &v) in points {
        t_min = t_min.min(t);
        t_max = t_max.max(t);
        y_min = y_min.min(v);
        y_max = y_max.max(v);
    }
    if t_max <= t_min {
        t_max = t_min + 1.0;
    }
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x = |t: f64| MARGIN_LEFT + (t - t_min) / (t_max - t_min) * plot_w;
    let y = |v: f64| MARGIN_TOP + (y_max - v) / (y_max - y_min) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, x1, y0, y1) = (MARGIN_LEFT, MARGIN_LEFT + plot_w, MARGIN_TOP + plot_h, MARGIN_TOP);
    let _ = writeln!(s, r#"<g class="axes" stroke="black">"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#);
    let _ = writeln!(s, "</g>");

    // A tick every π, thinned so at most ~16 are drawn.
    let k_lo = (t_min / PI).ceil() as i64;
    let k_hi = (t_max / PI).floor() as i64;
    let stride = ((k_hi - k_lo) / 16 + 1).max(1);
    let mut k = k_lo;
    while k <= k_hi {
        let tx = x(k as f64 * PI);
        let _ = writeln!(s, r#"<line x1="{tx:.2}" y1="{y0}" x2="{tx:.2}" y2="{:.2}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(s, r#"<text x="{tx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, y0 + 18.0, pi_label(k));
        k += stride;
    }
    for i in 0..=4 {
        let v = y_min + (y_max - y_min) * i as f64 / 4.0;
        let ty = y(v);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{ty:.2}" x2="{x0}" y2="{ty:.2}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#, x0 - 8.0, ty + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">t</text>"#, (x0 + x1) / 2.0, HEIGHT - 10.0);
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">{y_label}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts = String::with_capacity(16 * ser.len());
        for (&t, &v) in ser.times.iter().zip(&ser.values) {
            let _ = write!(pts, "{:.2},{:.2} ", x(t), y(v));
        }
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.trim_end());
    }

    let _ = writeln!(s, r#"<g class="legend">"#);
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let ly = MARGIN_TOP + 15.0 + 18.0 * i as f64;
        let lx = x1 - 160.0;
        let _ = writeln!(s, r#"<rect x="{lx}" y="{:.2}" width="12" height="12" fill="{color}"/>"#, ly - 10.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#, lx + 18.0, escape(&ser.label));
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn emit_svg(path: &Path, series: &[Series], y_label: &str) -> Result<()> {
    let body = svg_string(series, y_label)?;
    fs::write(path, body)?;
    Ok(())
}
