//! Minimal deterministic SVG line plots.
//!
//! Same input, same bytes: coordinates are printed with fixed precision and
//! nothing depends on time, locale or hash order.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

/// Named polylines drawn in one colour.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub id: String,
    pub color: &'static str,
    pub dashed: bool,
    pub lines: Vec<Vec<(f64, f64)>>,
}

impl Group {
    pub fn new(id: &str, color: &'static str) -> Self {
        Group {
            id: id.into(),
            color,
            dashed: false,
            lines: Vec::new(),
        }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }

    pub fn with_line(mut self, line: Vec<(f64, f64)>) -> Self {
        self.lines.push(line);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Marker {
    pub x: f64,
    pub y: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub groups: Vec<Group>,
    pub markers: Vec<Marker>,
    /// Fixed x limits; otherwise fitted to the data.
    pub x_range: Option<(f64, f64)>,
    /// Fixed y limits; otherwise fitted to the data.
    pub y_range: Option<(f64, f64)>,
    /// Points are x-ordered, so per-pixel min/max decimation keeps every peak.
    pub monotone_x: bool,
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { 0.04 * (hi - lo) } else { 0.5 * lo.abs().max(1e-3) };
    (lo - pad, hi + pad)
}

fn tick_label(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-3..1e4).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".into() } else { s.into() }
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }
    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

/// Keep the first, minimum, maximum and last point of each pixel column.
fn decimate_columns(frame: &Frame, line: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < line.len() {
        let col = frame.px(line[i].0).floor();
        let mut j = i;
        let (mut lo, mut hi) = (i, i);
        while j < line.len() && frame.px(line[j].0).floor() == col {
            if line[j].1 < line[lo].1 {
                lo = j;
            }
            if line[j].1 > line[hi].1 {
                hi = j;
            }
            j += 1;
        }
        let mut keep = vec![i, lo, hi, j - 1];
        keep.sort_unstable();
        keep.dedup();
        out.extend(keep.into_iter().map(|k| line[k]));
        i = j;
    }
    out
}

/// Drop points closer than half a pixel to the last kept one.
fn decimate_distance(frame: &Frame, line: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (k, &p) in line.iter().enumerate() {
        let keep = match out.last() {
            None => true,
            Some(&q) => {
                k + 1 == line.len()
                    || (frame.px(p.0) - frame.px(q.0)).hypot(frame.py(p.1) - frame.py(q.1)) >= 0.5
            }
        };
        if keep {
            out.push(p);
        }
    }
    out
}

impl Plot {
    pub fn render(&self) -> String {
        let all = || self.groups.iter().flat_map(|g| g.lines.iter().flatten());
        let frame = Frame {
            x: self
                .x_range
                .unwrap_or_else(|| bounds(all().map(|p| p.0).chain(self.markers.iter().map(|m| m.x)))),
            y: self
                .y_range
                .unwrap_or_else(|| bounds(all().map(|p| p.1).chain(self.markers.iter().map(|m| m.y)))),
        };
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (TOP, HEIGHT - BOTTOM);
        let _ = writeln!(
            s,
            r#"<defs><clipPath id="plot-area"><rect x="{x0}" y="{y0}" width="{}" height="{}"/></clipPath></defs>"#,
            x1 - x0,
            y1 - y0
        );
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        s.push_str("<g class=\"axes\" stroke=\"black\" fill=\"none\">\n");
        let _ = writeln!(
            s,
            r#"<rect x="{x0}" y="{y0}" width="{}" height="{}"/>"#,
            x1 - x0,
            y1 - y0
        );
        s.push_str("</g>\n<g class=\"ticks\" fill=\"black\">\n");
        for k in 0..=4 {
            let f = k as f64 / 4.0;
            let xv = frame.x.0 + f * (frame.x.1 - frame.x.0);
            let yv = frame.y.0 + f * (frame.y.1 - frame.y.0);
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                frame.px(xv),
                y1 + 18.0,
                tick_label(xv)
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                x0 - 6.0,
                frame.py(yv) + 4.0,
                tick_label(yv)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 10.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(&self.y_label)
        );
        s.push_str("</g>\n");

        for g in &self.groups {
            let dash = if g.dashed { r#" stroke-dasharray="6 4""# } else { "" };
            let _ = writeln!(
                s,
                r#"<g id="{}" class="polyline-group" stroke="{}" stroke-width="1.5" fill="none" clip-path="url(#plot-area)"{dash}>"#,
                escape(&g.id),
                g.color
            );
            for line in &g.lines {
                let finite: Vec<(f64, f64)> = line.iter().copied().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
                if finite.len() < 2 {
                    continue;
                }
                let pts = if self.monotone_x {
                    decimate_columns(&frame, &finite)
                } else {
                    decimate_distance(&frame, &finite)
                };
                s.push_str("<polyline points=\"");
                for (k, (x, y)) in pts.iter().enumerate() {
                    if k > 0 {
                        s.push(' ');
                    }
                    let _ = write!(s, "{:.2},{:.2}", frame.px(*x), frame.py(*y));
                }
                s.push_str("\"/>\n");
            }
            s.push_str("</g>\n");
        }
        if !self.markers.is_empty() {
            s.push_str("<g class=\"markers\" fill=\"black\">\n");
            for m in &self.markers {
                let (cx, cy) = (frame.px(m.x), frame.py(m.y));
                let _ = writeln!(s, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="3"/>"#);
                let _ = writeln!(
                    s,
                    r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
                    cx + 5.0,
                    cy - 5.0,
                    escape(&m.label)
                );
            }
            s.push_str("</g>\n");
        }
        s.push_str("</svg>\n");
        s
    }
}
