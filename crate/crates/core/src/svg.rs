//! Static SVG figures: gasket renderings, the harmonic projection, and line
//! plots (optionally log-log). Coordinates are printed with fixed precision so
//! identical inputs give identical bytes.

use std::fmt::Write;

use crate::gasket::PrefractalComplex;
use crate::harmonic::{project_to_plane, HarmonicGasket};

const SIZE: f64 = 640.0;
const MARGIN: f64 = 48.0;
const PALETTE: [&str; 6] = ["#1f4e79", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#2e4053"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn header(out: &mut String, comment: &str, height: f64) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    if !comment.is_empty() {
        let _ = writeln!(out, "<!-- {} -->", comment.replace("--", "- -"));
    }
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{height}" viewBox="0 0 {SIZE} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

/// Maps a bounding box onto the canvas, preserving aspect ratio, y up.
struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = [f64; 2]>) -> Frame {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let w = (hi[0] - lo[0]).max(1e-12);
        let h = (hi[1] - lo[1]).max(1e-12);
        let scale = (SIZE - 2.0 * MARGIN) / w.max(h);
        Frame { x0: lo[0], y0: lo[1], scale, height: h * scale + 2.0 * MARGIN }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (MARGIN + (p[0] - self.x0) * self.scale, self.height - MARGIN - (p[1] - self.y0) * self.scale)
    }
}

fn segments_svg(comment: &str, segments: &[([f64; 2], [f64; 2])], stroke_width: f64) -> String {
    let frame = Frame::fit(segments.iter().flat_map(|(a, b)| [*a, *b]));
    let mut out = String::new();
    header(&mut out, comment, frame.height);
    let _ = write!(out, r#"<path fill="none" stroke="{}" stroke-width="{stroke_width:.3}" d=""#, PALETTE[0]);
    for (a, b) in segments {
        let (x1, y1) = frame.map(*a);
        let (x2, y2) = frame.map(*b);
        let _ = write!(out, "M{x1:.3} {y1:.3}L{x2:.3} {y2:.3}");
    }
    let _ = writeln!(out, r#""/>"#);
    out.push_str("</svg>\n");
    out
}

/// Level-`level` edges of `SG_level` in the plane.
pub fn gasket_svg(complex: &PrefractalComplex, level: u32, comment: &str) -> String {
    let v = complex.vertices();
    let segs: Vec<_> = complex
        .curves_at_level(level.min(complex.max_level()))
        .iter()
        .map(|c| (v[c.endpoints[0]].euclidean(), v[c.endpoints[1]].euclidean()))
        .collect();
    segments_svg(comment, &segs, 1.0)
}

/// Finest edges of `HG_n` drawn between the images `Φ(v)`, projected onto
/// the plane that contains them.
pub fn harmonic_svg(g: &HarmonicGasket, comment: &str) -> String {
    let pts: Vec<[f64; 2]> = g.points().into_iter().map(project_to_plane).collect();
    let segs: Vec<_> = g
        .complex
        .curves_at_level(g.level())
        .iter()
        .map(|c| (pts[c.endpoints[0]], pts[c.endpoints[1]]))
        .collect();
    segments_svg(comment, &segs, 1.0)
}

#[derive(Clone, Debug)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    /// Draw markers only, without the connecting polyline.
    pub markers_only: bool,
}

#[derive(Clone, Debug)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

impl Plot {
    pub fn to_svg(&self, comment: &str) -> String {
        let tx = |x: f64| if self.log_x { x.log10() } else { x };
        let ty = |y: f64| if self.log_y { y.log10() } else { y };
        let pts: Vec<(f64, f64)> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().copied())
            .filter(|&(x, y)| (!self.log_x || x > 0.0) && (!self.log_y || y > 0.0))
            .map(|(x, y)| (tx(x), ty(y)))
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .collect();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in &pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if pts.is_empty() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if x1 - x0 < 1e-12 {
            x1 = x0 + 1.0;
        }
        if y1 - y0 < 1e-12 {
            y1 = y0 + 1.0;
        }
        let height = SIZE * 0.75;
        let (left, right, top, bottom) = (MARGIN * 1.5, SIZE - MARGIN, MARGIN, height - MARGIN);
        let px = |x: f64| left + (x - x0) / (x1 - x0) * (right - left);
        let py = |y: f64| bottom - (y - y0) / (y1 - y0) * (bottom - top);

        let mut out = String::new();
        header(&mut out, comment, height);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
            SIZE / 2.0,
            top - 16.0,
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r##"<rect x="{left:.1}" y="{top:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#888"/>"##,
            right - left,
            bottom - top
        );
        for (val, anchor_x) in [(x0, left), (x1, right)] {
            let label = if self.log_x { format!("1e{val:.2}") } else { format!("{val:.4}") };
            let _ = writeln!(
                out,
                r#"<text x="{anchor_x:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{label}</text>"#,
                bottom + 14.0
            );
        }
        for (val, anchor_y) in [(y0, bottom), (y1, top)] {
            let label = if self.log_y { format!("1e{val:.2}") } else { format!("{val:.4}") };
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{label}</text>"#,
                left - 4.0,
                anchor_y + 4.0
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            (left + right) / 2.0,
            height - 10.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="14" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text>"#,
            (top + bottom) / 2.0,
            (top + bottom) / 2.0,
            escape(&self.y_label)
        );
        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let mapped: Vec<(f64, f64)> = s
                .points
                .iter()
                .filter(|&&(x, y)| (!self.log_x || x > 0.0) && (!self.log_y || y > 0.0))
                .map(|&(x, y)| (px(tx(x)), py(ty(y))))
                .collect();
            if !s.markers_only && mapped.len() > 1 {
                let _ = write!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points=""#);
                for (k, (x, y)) in mapped.iter().enumerate() {
                    let sep = if k == 0 { "" } else { " " };
                    let _ = write!(out, "{sep}{x:.2},{y:.2}");
                }
                let _ = writeln!(out, r#""/>"#);
            }
            for (x, y) in &mapped {
                let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{color}"/>"#);
            }
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" fill="{color}">{}</text>"#,
                left + 8.0,
                top + 16.0 + 14.0 * i as f64,
                escape(&s.name)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}
