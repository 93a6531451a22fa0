//! Deterministic SVG snapshots: droplets, limit shapes, and offset bands
//! layered on a fixed canvas mapping from `[-1.2, 1.2]^2`.

use crate::geometry::PlanarShape;

const CANVAS: f64 = 720.0;
const WORLD: f64 = 1.2;

/// Stroke/fill styling of one rendered layer.
#[derive(Clone, Debug)]
pub struct Style {
    pub stroke: &'static str,
    pub fill: &'static str,
    pub stroke_width: f64,
    pub dashed: bool,
}

impl Style {
    pub fn droplet() -> Self {
        Style { stroke: "#1f3b73", fill: "#9db8e8", stroke_width: 1.5, dashed: false }
    }

    pub fn limit() -> Self {
        Style { stroke: "#b03030", fill: "none", stroke_width: 2.0, dashed: false }
    }

    pub fn band() -> Self {
        Style { stroke: "#888888", fill: "none", stroke_width: 1.0, dashed: true }
    }
}

pub struct Layer<'a> {
    pub shape: &'a PlanarShape,
    pub style: Style,
}

fn map(v: f64) -> f64 {
    (v + WORLD) / (2.0 * WORLD) * CANVAS
}

fn path_of(shape: &PlanarShape) -> String {
    let mut d = String::new();
    for (k, p) in shape.vertices().iter().enumerate() {
        let cmd = if k == 0 { 'M' } else { 'L' };
        d.push_str(&format!("{cmd}{:.3},{:.3} ", map(p.x), CANVAS - map(p.y)));
    }
    d.push('Z');
    d
}

/// Renders layers back-to-front into an SVG document. Shapes are drawn in
/// rescaled units on the fixed `[-1.2, 1.2]^2` canvas; an empty shape
/// renders as an annotated marker instead of a path.
pub fn render_snapshot(layers: &[Layer<'_>]) -> String {
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{c}\" \
         viewBox=\"0 0 {c} {c}\">\n",
        c = CANVAS
    ));
    svg.push_str(&format!(
        "  <rect width=\"{c}\" height=\"{c}\" fill=\"white\"/>\n",
        c = CANVAS
    ));
    // light frame at the unit square for orientation
    let u0 = map(-1.0);
    let u1 = map(1.0);
    svg.push_str(&format!(
        "  <rect x=\"{u0:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"none\" \
         stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
        CANVAS - u1,
        u1 - u0,
        u1 - u0
    ));
    for layer in layers {
        if layer.shape.is_empty() {
            let c = CANVAS / 2.0;
            svg.push_str(&format!(
                "  <g stroke=\"{s}\" stroke-width=\"2\"><line x1=\"{a:.3}\" y1=\"{a:.3}\" \
                 x2=\"{b:.3}\" y2=\"{b:.3}\"/><line x1=\"{a:.3}\" y1=\"{b:.3}\" x2=\"{b:.3}\" \
                 y2=\"{a:.3}\"/></g>\n  <text x=\"{c:.1}\" y=\"{t:.1}\" \
                 text-anchor=\"middle\" font-size=\"16\">empty</text>\n",
                s = layer.style.stroke,
                a = c - 12.0,
                b = c + 12.0,
                t = c + 32.0,
            ));
            continue;
        }
        let dash = if layer.style.dashed { " stroke-dasharray=\"6,4\"" } else { "" };
        svg.push_str(&format!(
            "  <path d=\"{}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"{}\"{} \
             fill-opacity=\"0.6\"/>\n",
            path_of(layer.shape),
            layer.style.fill,
            layer.style.stroke,
            layer.style.stroke_width,
            dash
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
