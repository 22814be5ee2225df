use crate::svg::Viewport;

use super::{Color, DimerModel};

/// Straight-line drawing of a dimer model over the unit square, with the
/// neighbouring translates so edges leaving the square stay visible.
pub fn render_svg(g: &DimerModel, title: &str) -> String {
    let vp = Viewport::unit_torus(400.0);
    let mut svg = vp.canvas(title);
    let shifts: Vec<(f64, f64)> = (-1..=1).flat_map(|a| (-1..=1).map(move |b| (a as f64, b as f64))).collect();
    for (e, edge) in g.edges.iter().enumerate() {
        let w = g.nodes[edge.white].position;
        let v = g.edge_vector(e, true);
        for &(sx, sy) in &shifts {
            svg.line(vp.map((w.0 + sx, w.1 + sy)), vp.map((w.0 + v.0 + sx, w.1 + v.1 + sy)), "#222222", 2.0);
        }
    }
    for n in &g.nodes {
        let (fill, stroke) = match n.color {
            Color::White => ("white", "black"),
            Color::Black => ("black", "black"),
        };
        for &(sx, sy) in &shifts {
            svg.circle(vp.map((n.position.0 + sx, n.position.1 + sy)), 7.0, fill, stroke);
        }
    }
    svg.render()
}
