//! Minimal self-contained SVG line plots.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const PANEL_HEIGHT: f64 = 320.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 48.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log10,
}

impl Scale {
    fn map(self, v: f64) -> f64 {
        match self {
            Scale::Linear => v,
            Scale::Log10 => v.log10(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Draw circles at each point.
    pub markers: bool,
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_scale: Scale,
    pub series: Vec<Series>,
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    mag * if f < 1.5 {
        1.0
    } else if f < 3.5 {
        2.0
    } else if f < 7.5 {
        5.0
    } else {
        10.0
    }
}

fn linear_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) =
        values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 * (1.0 + lo.abs()) {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn tick_label(v: f64) -> String {
    let r = (v * 1e6).round() / 1e6;
    format!("{r}")
}

fn render_panel(out: &mut String, panel: &Panel, top: f64) {
    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (top + PANEL_HEIGHT - MARGIN_BOTTOM, top + MARGIN_TOP);
    let visible = |p: &&(f64, f64)| p.1.is_finite() && p.0.is_finite() && (panel.x_scale == Scale::Linear || p.0 > 0.0);
    let xs = panel.series.iter().flat_map(|s| s.points.iter().filter(visible).map(|p| panel.x_scale.map(p.0)));
    let (xlo, xhi) = bounds(xs);
    let (ylo, yhi) = bounds(panel.series.iter().flat_map(|s| s.points.iter().filter(visible).map(|p| p.1)));
    let pad = 0.05 * (yhi - ylo);
    let (ylo, yhi) = (ylo - pad, yhi + pad);
    let px = |x: f64| x0 + (panel.x_scale.map(x) - xlo) / (xhi - xlo) * (x1 - x0);
    let py = |y: f64| y0 + (y - ylo) / (yhi - ylo) * (y1 - y0);

    let _ = writeln!(
        out,
        r##"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">{}</text>"##,
        (x0 + x1) / 2.0,
        top + 20.0,
        escape(&panel.title)
    );
    let _ = writeln!(
        out,
        r##"<rect x="{x0:.1}" y="{y1:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#000"/>"##,
        x1 - x0,
        y0 - y1
    );

    let x_ticks: Vec<(f64, String)> = match panel.x_scale {
        Scale::Log10 => {
            let (a, b) = (xlo.ceil() as i32, xhi.floor() as i32);
            (a..=b).map(|k| (10f64.powi(k), format!("1e{k}"))).collect()
        }
        Scale::Linear => linear_ticks(xlo, xhi).into_iter().map(|t| (t, tick_label(t))).collect(),
    };
    for (t, label) in x_ticks {
        let x = px(t);
        let _ = writeln!(out, r##"<line x1="{x:.1}" y1="{y0:.1}" x2="{x:.1}" y2="{:.1}" stroke="#000"/>"##, y0 + 5.0);
        let _ = writeln!(
            out,
            r##"<text x="{x:.1}" y="{:.1}" text-anchor="middle" font-size="11">{label}</text>"##,
            y0 + 18.0
        );
    }
    for t in linear_ticks(ylo, yhi) {
        let y = py(t);
        let _ = writeln!(out, r##"<line x1="{:.1}" y1="{y:.1}" x2="{x0:.1}" y2="{y:.1}" stroke="#000"/>"##, x0 - 5.0);
        let _ = writeln!(
            out,
            r##"<text x="{:.1}" y="{:.1}" text-anchor="end" font-size="11">{}</text>"##,
            x0 - 8.0,
            y + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        out,
        r##"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{}</text>"##,
        (x0 + x1) / 2.0,
        y0 + 38.0,
        escape(&panel.x_label)
    );
    let _ = writeln!(
        out,
        r##"<text x="16" y="{:.1}" text-anchor="middle" font-size="12" transform="rotate(-90 16 {:.1})">{}</text>"##,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(&panel.y_label)
    );

    for (i, s) in panel.series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> =
            s.points.iter().filter(visible).map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(
            out,
            r##"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"##,
            pts.join(" ")
        );
        if s.markers {
            for &(x, y) in s.points.iter().filter(visible) {
                let _ = writeln!(out, r##"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{color}"/>"##, px(x), py(y));
            }
        }
        if panel.series.len() > 1 {
            let ly = y1 + 14.0 + 14.0 * i as f64;
            let _ = writeln!(
                out,
                r##"<text x="{:.1}" y="{ly:.1}" text-anchor="end" font-size="11" fill="{color}">{}</text>"##,
                x1 - 6.0,
                escape(&s.label)
            );
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders panels stacked vertically into one SVG document.
pub fn render(panels: &[Panel]) -> String {
    let height = PANEL_HEIGHT * panels.len() as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#fff"/>"##);
    for (i, p) in panels.iter().enumerate() {
        render_panel(&mut out, p, PANEL_HEIGHT * i as f64);
    }
    out.push_str("</svg>\n");
    out
}
