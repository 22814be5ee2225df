//! Dimer models transcribed from the worked examples.

use super::{Color, DimerModel, PerfectMatching};
use crate::lattice::LatticePoint;

fn build(name: &str, nodes: &[(&str, Color, (f64, f64))], edges: &[(&str, &str, &str, (i64, i64))]) -> DimerModel {
    let idx = |id: &str| nodes.iter().position(|n| n.0 == id).expect("known node");
    DimerModel::from_geometry(
        name,
        nodes.iter().map(|&(id, c, p)| (id.to_string(), c, p)).collect(),
        edges
            .iter()
            .map(|&(id, w, b, o)| (id.to_string(), idx(w), idx(b), LatticePoint::from(o)))
            .collect(),
    )
    .expect("fixture is valid")
}

/// One white and one black node joined by four edges: the dimer of the unit
/// square. Nodes sit at the centers of the two colored cells.
pub fn square_dimer() -> DimerModel {
    let mut g = build(
        "square",
        &[("w", Color::White, (0.75, 0.75)), ("b", Color::Black, (0.25, 0.25))],
        &[
            ("e00", "w", "b", (0, 0)),
            ("e10", "w", "b", (1, 0)),
            ("e01", "w", "b", (0, 1)),
            ("e11", "w", "b", (1, 1)),
        ],
    );
    g.metadata.insert("figure".into(), "Fig. 4".into());
    g
}

/// Square-lattice dimer with a 2×2 fundamental domain: two white and two
/// black four-valent nodes, four quadrilateral faces.
pub fn fig11_dimer() -> DimerModel {
    let mut g = build(
        "fig11",
        &[
            ("w0", Color::White, (0.25, 0.25)),
            ("w1", Color::White, (0.75, 0.75)),
            ("b0", Color::Black, (0.25, 0.75)),
            ("b1", Color::Black, (0.75, 0.25)),
        ],
        &[
            ("e0", "w0", "b1", (0, 0)),
            ("e1", "w0", "b1", (-1, 0)),
            ("e2", "w0", "b0", (0, 0)),
            ("e3", "w0", "b0", (0, -1)),
            ("e4", "w1", "b0", (1, 0)),
            ("e5", "w1", "b0", (0, 0)),
            ("e6", "w1", "b1", (0, 1)),
            ("e7", "w1", "b1", (0, 0)),
        ],
    );
    g.metadata.insert("figure".into(), "Fig. 11".into());
    g.metadata.insert("cell.b0".into(), "U1".into());
    g.metadata.insert("collection".into(), "(0,0) (1,0) (1,1) (2,1)".into());
    g
}

/// The distinguished perfect matching on [`fig11_dimer`]: the corner
/// matching `{e0, e4}` of class (1,0).
pub fn fig11_matching_d() -> PerfectMatching {
    PerfectMatching { edges: vec![0, 4] }
}

/// The dimer obtained from [`fig11_dimer`] by urban renewal of one square
/// face: eight trivalent nodes, two octagonal and two quadrilateral faces.
pub fn fig24_dimer() -> DimerModel {
    let mut g = build(
        "fig24",
        &[
            ("w0", Color::White, (0.25, 0.25)),
            ("w1", Color::White, (0.75, 0.75)),
            ("w2", Color::White, (0.625, 0.375)),
            ("w3", Color::White, (0.375, 0.625)),
            ("b0", Color::Black, (0.25, 0.75)),
            ("b1", Color::Black, (0.75, 0.25)),
            ("b2", Color::Black, (0.375, 0.375)),
            ("b3", Color::Black, (0.625, 0.625)),
        ],
        &[
            ("f0", "w0", "b1", (-1, 0)),
            ("f1", "w0", "b0", (0, -1)),
            ("f2", "w1", "b0", (1, 0)),
            ("f3", "w1", "b1", (0, 1)),
            ("f4", "w0", "b2", (0, 0)),
            ("f5", "w2", "b1", (0, 0)),
            ("f6", "w1", "b3", (0, 0)),
            ("f7", "w3", "b0", (0, 0)),
            ("f8", "w2", "b2", (0, 0)),
            ("f9", "w2", "b3", (0, 0)),
            ("f10", "w3", "b3", (0, 0)),
            ("f11", "w3", "b2", (0, 0)),
        ],
    );
    g.metadata.insert("figure".into(), "Fig. 24".into());
    g.metadata.insert("collection".into(), "(0,0) (1,0) (0,1) (1,1)".into());
    g
}
