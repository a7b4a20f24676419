//! Minimal SVG emission: heatmaps, scatter plots, line panels, and leg
//! profile renders. Output is plain well-formed SVG with class-tagged
//! geometry so tests can locate elements.

use std::fmt::Write;

pub struct Svg {
    body: String,
    width: f64,
    height: f64,
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Self {
        Svg {
            body: String::new(),
            width,
            height,
        }
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="{fill}"/>"#
        );
    }

    pub fn circle(&mut self, cx: f64, cy: f64, r: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.2}" fill="{fill}"/>"#
        );
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], stroke: &str, width: f64, class: &str) {
        let mut pts = String::new();
        for (x, y) in points {
            let _ = write!(pts, "{x:.3},{y:.3} ");
        }
        let _ = writeln!(
            self.body,
            r#"<polyline class="{class}" points="{}" fill="none" stroke="{stroke}" stroke-width="{width:.2}"/>"#,
            pts.trim_end()
        );
    }

    pub fn text(&mut self, x: f64, y: f64, size: f64, content: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" font-size="{size:.1}" font-family="sans-serif">{}</text>"#,
            escape(content)
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Affine map from data space to pixel space.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub px: f64,
    pub py: f64,
    pub pw: f64,
    pub ph: f64,
}

impl Frame {
    pub fn x(&self, v: f64) -> f64 {
        self.px + (v - self.x0) / (self.x1 - self.x0) * self.pw
    }

    pub fn y(&self, v: f64) -> f64 {
        // SVG y grows downward.
        self.py + self.ph - (v - self.y0) / (self.y1 - self.y0) * self.ph
    }
}

/// Blue-to-red diverging color for a value in [-1, 1].
pub fn diverging_color(v: f64) -> String {
    let v = v.clamp(-1.0, 1.0);
    let (r, g, b) = if v < 0.0 {
        let t = -v;
        (
            (230.0 * (1.0 - t) + 20.0 * t) as u8,
            (230.0 * (1.0 - t) + 40.0 * t) as u8,
            (230.0 * (1.0 - t) + 160.0 * t) as u8,
        )
    } else {
        let t = v;
        (
            (230.0 * (1.0 - t) + 180.0 * t) as u8,
            (230.0 * (1.0 - t) + 40.0 * t) as u8,
            (230.0 * (1.0 - t) + 30.0 * t) as u8,
        )
    };
    format!("rgb({r},{g},{b})")
}
