//! Minimal deterministic SVG writer.

use std::fmt::Write as _;

/// Version of the layout written into every figure's metadata.
pub const SVG_SCHEMA_VERSION: u32 = 1;

pub struct Svg {
    width: f64,
    height: f64,
    body: String,
    title: String,
    clip: Option<(f64, f64, f64, f64)>,
}

impl Svg {
    pub fn new(width: f64, height: f64, title: &str) -> Self {
        Svg {
            width,
            height,
            body: String::new(),
            title: title.to_string(),
            clip: None,
        }
    }

    /// Clips all drawing to the rectangle `(x, y, w, h)`.
    pub fn clip(&mut self, x: f64, y: f64, w: f64, h: f64) {
        self.clip = Some((x, y, w, h));
    }

    pub fn line(&mut self, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.4}" y1="{:.4}" x2="{:.4}" y2="{:.4}" stroke="{}" stroke-width="{:.3}"/>"#,
            a.0, a.1, b.0, b.1, stroke, width
        );
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64) {
        if pts.len() < 2 {
            return;
        }
        let coords: Vec<String> = pts.iter().map(|p| format!("{:.4},{:.4}", p.0, p.1)).collect();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="{:.3}"/>"#,
            coords.join(" "),
            stroke,
            width
        );
    }

    pub fn polygon(&mut self, pts: &[(f64, f64)], fill: &str, opacity: f64) {
        let coords: Vec<String> = pts.iter().map(|p| format!("{:.4},{:.4}", p.0, p.1)).collect();
        let _ = writeln!(
            self.body,
            r#"<polygon points="{}" fill="{}" fill-opacity="{:.3}" stroke="none"/>"#,
            coords.join(" "),
            fill,
            opacity
        );
    }

    pub fn circle(&mut self, c: (f64, f64), r: f64, fill: &str, stroke: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.4}" cy="{:.4}" r="{:.3}" fill="{}" stroke="{}"/>"#,
            c.0, c.1, r, fill, stroke
        );
    }

    pub fn text(&mut self, at: (f64, f64), size: f64, s: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{:.4}" y="{:.4}" font-size="{:.2}" font-family="sans-serif">{}</text>"#,
            at.0,
            at.1,
            size,
            escape(s)
        );
    }

    pub fn render(&self) -> String {
        let body = match self.clip {
            Some((x, y, w, h)) => format!(
                "<defs><clipPath id=\"frame\"><rect x=\"{x:.4}\" y=\"{y:.4}\" width=\"{w:.4}\" height=\"{h:.4}\"/></clipPath></defs>\n<g clip-path=\"url(#frame)\">\n{}</g>\n",
                self.body
            ),
            None => self.body.clone(),
        };
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<title>{t}</title>\n<metadata>schema {v}; {t}</metadata>\n<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n{b}</svg>\n",
            w = self.width,
            h = self.height,
            t = escape(&self.title),
            v = SVG_SCHEMA_VERSION,
            b = body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Affine map from a data window onto pixel coordinates (y axis up).
#[derive(Debug, Clone, Copy)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub size: f64,
    pub margin: f64,
}

impl Viewport {
    pub fn unit_torus(size: f64) -> Self {
        Viewport {
            xmin: 0.0,
            xmax: 1.0,
            ymin: 0.0,
            ymax: 1.0,
            size,
            margin: 20.0,
        }
    }

    pub fn map(&self, p: (f64, f64)) -> (f64, f64) {
        let inner = self.size - 2.0 * self.margin;
        (
            self.margin + (p.0 - self.xmin) / (self.xmax - self.xmin) * inner,
            self.margin + (self.ymax - p.1) / (self.ymax - self.ymin) * inner,
        )
    }

    /// A square canvas clipped to the data window.
    pub fn canvas(&self, title: &str) -> Svg {
        let mut s = Svg::new(self.size, self.size, title);
        let inner = self.size - 2.0 * self.margin;
        s.clip(self.margin, self.margin, inner, inner);
        s
    }
}
