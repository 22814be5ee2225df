//! Pictures of the fibration data: `s`-plane images, branch-point motion,
//! and the contracted graph under the argument map.

use num_complex::Complex64;

use crate::dimer::Color;
use crate::svg::{Svg, Viewport};

use super::branch::{BranchKind, Collision, FiberModel, Trajectory};
use super::contract::ContractedGraph;
use super::cycles::{CycleSystem, PreimageComplex};
use super::surface::RibbonSurface;

const PALETTE: [&str; 6] = ["#c0392b", "#1f4e9c", "#2e7d32", "#8e44ad", "#d35400", "#16a085"];

fn s_plane(radius: f64) -> Viewport {
    Viewport { xmin: -radius, xmax: radius, ymin: -radius, ymax: radius, size: 480.0, margin: 20.0 }
}

fn pt(z: Complex64) -> (f64, f64) {
    (z.re, z.im)
}

fn draw_axes(svg: &mut Svg, vp: &Viewport) {
    svg.line(vp.map((vp.xmin, 0.0)), vp.map((vp.xmax, 0.0)), "#cccccc", 1.0);
    svg.line(vp.map((0.0, vp.ymin)), vp.map((0.0, vp.ymax)), "#cccccc", 1.0);
}

fn draw_branch_points(svg: &mut Svg, vp: &Viewport, model: &FiberModel) {
    for p in model.branch_points(Complex64::new(0.0, 0.0)).points {
        let fill = match p.kind {
            BranchKind::X => "black",
            BranchKind::Y => "#555555",
        };
        svg.circle(vp.map(pt(p.at)), 5.0, fill, "black");
    }
}

fn draw_cuts(svg: &mut Svg, vp: &Viewport, surface: &RibbonSurface) {
    let far = 2.0 * (vp.xmax - vp.xmin);
    for cut in &surface.cuts {
        let end = cut.branch.at + cut.direction * far;
        svg.line(vp.map(pt(cut.branch.at)), vp.map(pt(end)), "#999999", 1.5);
    }
}

/// Branch points moving along each vanishing path, with the paths
/// themselves drawn from the origin.
pub fn render_branch_motion(collisions: &[Collision], title: &str) -> String {
    let vp = s_plane(5.0);
    let mut svg = vp.canvas(title);
    draw_axes(&mut svg, &vp);
    for (k, col) in collisions.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        svg.line(vp.map((0.0, 0.0)), vp.map(pt(col.path.end)), "#bbbbbb", 1.0);
        for b in 0..4 {
            let track: Vec<(f64, f64)> = col.trajectory.track(b).into_iter().map(|z| vp.map(pt(z))).collect();
            svg.polyline(&track, color, if b == col.moving { 2.5 } else { 1.0 });
        }
        svg.circle(vp.map(pt(col.meet)), 4.0, color, "black");
        svg.text(vp.map(pt(col.path.end)), 12.0, &format!("c{}", k + 1));
    }
    if let Some(first) = collisions.first() {
        for p in first.trajectory.samples[0] {
            svg.circle(vp.map(pt(p.at)), 5.0, "black", "black");
        }
    }
    svg.render()
}

/// Branch points over `t` while the potential moves through the
/// deformation family.
pub fn render_deformation(trajectory: &Trajectory, title: &str) -> String {
    let vp = s_plane(4.0);
    let mut svg = vp.canvas(title);
    draw_axes(&mut svg, &vp);
    for b in 0..4 {
        let track: Vec<(f64, f64)> = trajectory.track(b).into_iter().map(|z| vp.map(pt(z))).collect();
        svg.polyline(&track, PALETTE[b], 2.0);
        if let (Some(first), Some(last)) = (track.first(), track.last()) {
            svg.circle(*first, 4.0, "white", "black");
            svg.circle(*last, 4.0, "black", "black");
        }
    }
    svg.render()
}

/// Matching arcs in the `s`-plane over the branch points and cuts.
pub fn render_cycle_images(system: &CycleSystem, title: &str) -> String {
    let vp = s_plane(4.0);
    let mut svg = vp.canvas(title);
    draw_axes(&mut svg, &vp);
    draw_cuts(&mut svg, &vp, &RibbonSurface::new(system.model));
    for (k, arc) in system.arcs.iter().enumerate() {
        let pts: Vec<(f64, f64)> = arc.polyline.iter().map(|&z| vp.map(pt(z))).collect();
        svg.polyline(&pts, PALETTE[k % PALETTE.len()], 2.5);
        let mid = arc.polyline[arc.polyline.len() / 2 - usize::from(arc.polyline.len() % 2 == 0)];
        let next = arc.polyline[arc.polyline.len() / 2];
        let label = (mid + next) / 2.0 + Complex64::new(0.1, 0.1);
        svg.text(vp.map(pt(label)), 13.0, &format!("C{}", k + 1));
    }
    draw_branch_points(&mut svg, &vp, &system.model);
    svg.render()
}

/// The contracted graph seen in the `s`-plane: node anchors as white dots,
/// edges through their corner points, branch points black.
pub fn render_s_plane_graph(complex: &PreimageComplex, graph: &ContractedGraph, title: &str) -> String {
    let vp = s_plane(4.0);
    let mut svg = vp.canvas(title);
    draw_axes(&mut svg, &vp);
    for arc in &complex.system.arcs {
        let pts: Vec<(f64, f64)> = arc.polyline.iter().map(|&z| vp.map(pt(z))).collect();
        svg.polyline(&pts, "#dddddd", 1.5);
    }
    for (k, &v) in graph.edge_vertices.iter().enumerate() {
        let corner = complex.planar_vertices[complex.vertices[v].base].at;
        let e = &graph.dimer.edges[k];
        for n in [e.white, e.black] {
            svg.line(vp.map(pt(graph.nodes[n].s)), vp.map(pt(corner)), "#222222", 1.5);
        }
    }
    draw_branch_points(&mut svg, &vp, &complex.system.model);
    for n in &graph.nodes {
        svg.circle(vp.map(pt(n.s)), 6.0, "white", "black");
    }
    svg.render()
}

/// Argument-map image of the contracted graph on the unit torus.
pub fn render_torus_graph(graph: &ContractedGraph, title: &str) -> String {
    let vp = Viewport::unit_torus(400.0);
    let mut svg = vp.canvas(title);
    let shifts: Vec<(f64, f64)> = (-2..=2).flat_map(|a| (-2..=2).map(move |b| (a as f64, b as f64))).collect();
    for (k, path) in graph.edge_paths.iter().enumerate() {
        let base = graph.dimer.nodes[graph.dimer.edges[k].white].position;
        let (fx, fy) = ((path[0].0 - base.0).round(), (path[0].1 - base.1).round());
        for &(sx, sy) in &shifts {
            let pts: Vec<(f64, f64)> = path.iter().map(|p| vp.map((p.0 - fx + sx, p.1 - fy + sy))).collect();
            svg.polyline(&pts, "#222222", 1.5);
        }
    }
    for n in &graph.dimer.nodes {
        let (fill, stroke) = match n.color {
            Color::White => ("white", "black"),
            Color::Black => ("black", "black"),
        };
        for &(sx, sy) in &shifts {
            svg.circle(vp.map((n.position.0 + sx, n.position.1 + sy)), 6.0, fill, stroke);
        }
    }
    svg.render()
}
