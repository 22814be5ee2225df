//! Contraction of the polygonal faces cut out by the vanishing cycles to a
//! bicolored graph, and its image under the argument map.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coamoeba::jacobian;
use crate::dimer::{euler_check, Color, DimerModel, Edge, Node};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;

use super::cycles::{arrive, continue_fiber, FaceCensus, LiftedDart, PreimageComplex};

/// One contracted polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractedNode {
    /// Index into the complex's faces.
    pub face: usize,
    /// Point of the face's projection seeing every corner (the centroid when
    /// possible) and its lift to the fiber.
    pub s: Complex64,
    pub x: Complex64,
    pub y: Complex64,
    /// Sign of the argument map's Jacobian at the lifted centroid.
    pub jacobian: f64,
    /// Corner vertices in boundary order.
    pub corners: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractedGraph {
    pub polygon_size: usize,
    pub nodes: Vec<ContractedNode>,
    /// Lifted vertex behind each edge.
    pub edge_vertices: Vec<usize>,
    /// Argument-map image of each edge (white centroid, corner, black
    /// centroid), unwrapped, in turns.
    pub edge_paths: Vec<Vec<(f64, f64)>>,
    pub dimer: DimerModel,
}

fn face_of_darts(complex: &PreimageComplex) -> BTreeMap<LiftedDart, usize> {
    let mut out = BTreeMap::new();
    for (f, face) in complex.faces.iter().enumerate() {
        for &d in &face.darts {
            out.insert(d, f);
        }
    }
    out
}

fn polygon_centroid(pts: &[Complex64]) -> Complex64 {
    let n = pts.len();
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for k in 0..n {
        let (p, q) = (pts[k], pts[(k + 1) % n]);
        let cr = p.re * q.im - q.re * p.im;
        a += cr;
        cx += (p.re + q.re) * cr;
        cy += (p.im + q.im) * cr;
    }
    if a.abs() < 1e-300 {
        return pts.iter().sum::<Complex64>() / n as f64;
    }
    Complex64::new(cx / (3.0 * a), cy / (3.0 * a))
}

fn seg_cross(p0: Complex64, p1: Complex64, q0: Complex64, q1: Complex64) -> bool {
    segments_cross((p0.re, p0.im), (p1.re, p1.im), (q0.re, q0.im), (q1.re, q1.im))
}

fn inside(poly: &[Complex64], z: Complex64) -> bool {
    let n = poly.len();
    let mut wind = 0.0;
    for k in 0..n {
        wind += ((poly[(k + 1) % n] - z) / (poly[k] - z)).arg();
    }
    wind.abs() > std::f64::consts::PI
}

fn boundary_distance(poly: &[Complex64], z: Complex64) -> f64 {
    let n = poly.len();
    (0..n).map(|k| super::branch::point_segment_distance(z, poly[k], poly[(k + 1) % n])).fold(f64::INFINITY, f64::min)
}

/// Whether the open segment `pq` stays off the polygon boundary.
fn visible(poly: &[Complex64], p: Complex64, q: Complex64) -> bool {
    let n = poly.len();
    let shrunk = q + (p - q) * 1e-9;
    (0..n).all(|k| !seg_cross(p, shrunk, poly[k], poly[(k + 1) % n]))
        && (1..16).all(|k| inside(poly, p + (q - p) * (k as f64 / 16.0)))
}

/// A point of the face from which every corner is visible: the centroid when
/// it qualifies, otherwise the grid point farthest from the boundary.
fn anchor_point(poly: &[Complex64], corners: &[Complex64]) -> Option<Complex64> {
    let ok = |z: Complex64| inside(poly, z) && corners.iter().all(|&c| visible(poly, z, c));
    let centroid = polygon_centroid(poly);
    if ok(centroid) {
        return Some(centroid);
    }
    let (mut lo, mut hi) = (poly[0], poly[0]);
    for z in poly {
        lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let n = 48;
    let mut best: Option<(f64, Complex64)> = None;
    for i in 1..n {
        for j in 1..n {
            let z = Complex64::new(
                lo.re + (hi.re - lo.re) * i as f64 / n as f64,
                lo.im + (hi.im - lo.im) * j as f64 / n as f64,
            );
            if ok(z) {
                let d = boundary_distance(poly, z);
                if best.is_none_or(|b| d > b.0) {
                    best = Some((d, z));
                }
            }
        }
    }
    best.map(|b| b.1)
}

fn turns(z: Complex64) -> f64 {
    (z.arg() / TAU).rem_euclid(1.0)
}

/// Unwrapped argument image of the straight segment from a node's centroid
/// to a corner, in turns, starting at the node's position.
fn arg_path(complex: &PreimageComplex, node: &ContractedNode, corner: usize, samples: usize) -> Result<Vec<(f64, f64)>> {
    let model = complex.system.model;
    let v = &complex.vertices[corner];
    let pv = &complex.planar_vertices[v.base];
    let mut pos = (turns(node.x), turns(node.y));
    let mut out = vec![pos];
    let (mut x, mut y) = (node.x, node.y);
    for k in 0..samples {
        let a = node.s + (pv.at - node.s) * (k as f64 / samples as f64);
        let b = node.s + (pv.at - node.s) * ((k + 1) as f64 / samples as f64);
        let (dx, dy, nx, ny) = if k + 1 == samples {
            let end = arrive(&model, pv, &[a, b], (x, y));
            (end.shift.0, end.shift.1, end.key.0, end.key.1)
        } else {
            let fp = continue_fiber(&model, &[a, b], (x, y), 0.0);
            (fp.arg_shift.0, fp.arg_shift.1, fp.x, fp.y)
        };
        pos = (pos.0 + dx / TAU, pos.1 + dy / TAU);
        out.push(pos);
        x = nx;
        y = ny;
    }
    if (x - v.x).norm() + (y - v.y).norm() > 1e-4 {
        return Err(Error::Contraction(format!("centroid path does not reach corner vertex {corner}")));
    }
    Ok(out)
}

/// Colors polygons by whether the oriented cycles run along their boundary
/// all with it (white) or all against it (black). Cycle orientations are
/// searched for one making every polygon coherent; the overall swap is fixed
/// so that colors agree with the sign of the argument map's Jacobian as
/// often as possible.
fn coherent_colors(complex: &PreimageComplex, chosen: &[usize], nodes: &[ContractedNode]) -> Result<Vec<Color>> {
    let arcs = complex.system.arcs.len();
    let mut along = vec![true; complex.edges.len()];
    for k in 0..arcs {
        for step in complex.cycle(k)?.steps {
            along[step.edge] = step.forward;
        }
    }
    let mut best: Option<(usize, Vec<Color>)> = None;
    for mask in 0u32..(1 << arcs) {
        let mut colors = Vec::with_capacity(chosen.len());
        for &f in chosen {
            let signs: BTreeSet<bool> = complex.faces[f]
                .darts
                .iter()
                .map(|&(e, side)| {
                    let flip = mask >> complex.edges[e].arc & 1 == 1;
                    ((side == 0) == along[e]) != flip
                })
                .collect();
            if signs.len() != 1 {
                break;
            }
            colors.push(if signs.contains(&true) { Color::White } else { Color::Black });
        }
        if colors.len() != chosen.len() {
            continue;
        }
        let agree = colors.iter().zip(nodes).filter(|(c, n)| (**c == Color::White) == (n.jacobian > 0.0)).count();
        let (agree, colors) = if 2 * agree < chosen.len() {
            (chosen.len() - agree, colors.into_iter().map(Color::flip).collect())
        } else {
            (agree, colors)
        };
        if best.as_ref().is_none_or(|b| agree > b.0) {
            best = Some((agree, colors));
        }
    }
    best.map(|b| b.1).ok_or_else(|| Error::Contraction("no cycle orientation makes every polygon coherent".into()))
}

/// Contracts every compact face with the most common corner count.
pub fn contract_to_graph(complex: &PreimageComplex, census: &FaceCensus) -> Result<ContractedGraph> {
    let size = census
        .polygons
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(&k, _)| k)
        .ok_or_else(|| Error::Contraction("no polygonal faces".into()))?;
    contract_polygons(complex, size)
}

/// Contracts every compact face with `size` corners to a node. Vertices
/// whose opposite sectors are both contracted faces become edges; nodes are
/// white where the argument map preserves orientation.
pub fn contract_polygons(complex: &PreimageComplex, size: usize) -> Result<ContractedGraph> {
    let model = complex.system.model;
    let w = model.potential();
    let (wx, wy) = (w.d_dx(), w.d_dy());
    let chosen: Vec<usize> =
        (0..complex.faces.len()).filter(|&f| complex.faces[f].compact && complex.faces[f].corners == size).collect();
    if chosen.is_empty() {
        return Err(Error::Contraction(format!("no compact {size}-gons")));
    }
    let face_of = face_of_darts(complex);
    let node_of: BTreeMap<usize, usize> = chosen.iter().enumerate().map(|(n, &f)| (f, n)).collect();
    for e in 0..complex.edges.len() {
        if node_of.contains_key(&face_of[&(e, 0)]) && node_of.contains_key(&face_of[&(e, 1)]) {
            return Err(Error::Contraction(format!("contracted faces share lifted edge {e}")));
        }
    }

    let mut nodes = Vec::new();
    for &f in &chosen {
        let face = &complex.faces[f];
        let poly = complex.projected_boundary(&face.darts);
        let corners: Vec<usize> =
            face.darts.iter().map(|&d| complex.dart_head(d)).filter(|&v| complex.degree(v) > 2).collect();
        let corner_points: Vec<Complex64> =
            corners.iter().map(|&v| complex.planar_vertices[complex.vertices[v].base].at).collect();
        let s = anchor_point(&poly, &corner_points)
            .ok_or_else(|| Error::Contraction(format!("face {f} has no point seeing all its corners")))?;
        let (m, xm, ym) = face
            .darts
            .iter()
            .map(|d| complex.edges[d.0].mid)
            .find(|mid| visible(&poly, s, mid.0))
            .ok_or_else(|| Error::Contraction(format!("face {f} has no boundary midpoint visible from its anchor")))?;
        let fp = continue_fiber(&model, &[m, s], (xm, ym), 0.0);
        nodes.push(ContractedNode { face: f, s, x: fp.x, y: fp.y, jacobian: jacobian(&wx, &wy, fp.x, fp.y), corners });
    }

    // edges: corners whose two opposite sectors are contracted faces
    let mut edge_vertices = Vec::new();
    let mut edge_ends = Vec::new();
    for v in 0..complex.vertices.len() {
        let rot = &complex.rotation[v];
        if rot.len() <= 2 {
            continue;
        }
        let sectors: Vec<Option<usize>> = rot.iter().map(|d| node_of.get(&face_of[d]).copied()).collect();
        if rot.len() != 4 {
            if sectors.iter().any(|s| s.is_some()) {
                return Err(Error::Contraction(format!("corner {v} has degree {}", rot.len())));
            }
            continue;
        }
        let pairs = [(sectors[0], sectors[2]), (sectors[1], sectors[3])];
        let full: Vec<(usize, usize)> = pairs.iter().filter_map(|p| Some((p.0?, p.1?))).collect();
        match full.len() {
            0 => {}
            1 => {
                edge_vertices.push(v);
                edge_ends.push(full[0]);
            }
            _ => return Err(Error::Contraction(format!("corner {v} is surrounded by contracted faces"))),
        }
    }

    let colors = coherent_colors(complex, &chosen, &nodes)?;
    let color = |n: usize| colors[n];
    let mut dimer_edges = Vec::new();
    let mut edge_paths = Vec::new();
    for (k, (&v, &(a, b))) in edge_vertices.iter().zip(&edge_ends).enumerate() {
        let (wn, bn) = match (color(a), color(b)) {
            (Color::White, Color::Black) => (a, b),
            (Color::Black, Color::White) => (b, a),
            _ => return Err(Error::Contraction(format!("edge at corner {v} joins nodes of one color"))),
        };
        let to_w = arg_path(complex, &nodes[wn], v, 32)?;
        let to_b = arg_path(complex, &nodes[bn], v, 32)?;
        let (cw, cb) = (*to_w.last().unwrap(), *to_b.last().unwrap());
        let pb = to_b[0];
        // black node reached from white: pw + (cw − pw) − (cb − pb)
        let reach = (cw.0 - cb.0 + pb.0, cw.1 - cb.1 + pb.1);
        let off = ((reach.0 - pb.0).round(), (reach.1 - pb.1).round());
        if (reach.0 - pb.0 - off.0).abs() > 1e-6 || (reach.1 - pb.1 - off.1).abs() > 1e-6 {
            return Err(Error::Contraction(format!("edge at corner {v} has non-integral offset")));
        }
        let mut path = to_w.clone();
        let shift = (cw.0 - cb.0, cw.1 - cb.1);
        path.extend(to_b.iter().rev().skip(1).map(|p| (p.0 + shift.0, p.1 + shift.1)));
        edge_paths.push(path);
        dimer_edges.push(Edge {
            id: format!("e{k}"),
            white: wn,
            black: bn,
            offset: LatticePoint::new(off.0 as i64, off.1 as i64),
        });
    }

    // rotation: boundary order of corners, reversed where Arg flips orientation
    let edge_at: BTreeMap<usize, usize> = edge_vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut dimer_nodes = Vec::new();
    let (mut nw, mut nb) = (0, 0);
    for (n, node) in nodes.iter().enumerate() {
        let mut rotation: Vec<usize> = node.corners.iter().filter_map(|v| edge_at.get(v).copied()).collect();
        let col = color(n);
        if col == Color::Black {
            rotation.reverse();
        }
        let id = match col {
            Color::White => {
                nw += 1;
                format!("w{}", nw - 1)
            }
            Color::Black => {
                nb += 1;
                format!("b{}", nb - 1)
            }
        };
        dimer_nodes.push(Node { id, color: col, position: (turns(node.x), turns(node.y)), rotation });
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("collection".into(), complex.system.name.clone());
    metadata.insert("polygon_size".into(), size.to_string());
    let dimer =
        DimerModel { name: format!("{}-contracted", complex.system.name), nodes: dimer_nodes, edges: dimer_edges, metadata };
    dimer.validate()?;
    euler_check(&dimer)?;
    Ok(ContractedGraph { polygon_size: size, nodes, edge_vertices, edge_paths, dimer })
}

/// How the argument map treats the contracted graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub nodes: usize,
    /// Distinct `s`-plane images of the node centroids.
    pub base_points: usize,
    /// Distinct argument-map images of the nodes.
    pub torus_points: usize,
    /// Node pairs landing on the same torus point.
    pub node_collisions: Vec<(usize, usize)>,
    /// Pairs of edges whose argument images cross away from the nodes.
    pub edge_crossings: Vec<(usize, usize)>,
    pub injective: bool,
    /// Nodes where the argument map reverses the orientation their color
    /// calls for (white nodes must be mapped preserving it).
    pub orientation_mismatches: Vec<usize>,
    /// Injective with every node correctly oriented.
    pub gives_dimer_model: bool,
}

fn torus_close(a: (f64, f64), b: (f64, f64), tol: f64) -> bool {
    let d = |u: f64| {
        let r = u.rem_euclid(1.0);
        r.min(1.0 - r)
    };
    d(a.0 - b.0) < tol && d(a.1 - b.1) < tol
}

fn distinct_count<T: Copy>(items: &[T], same: impl Fn(T, T) -> bool) -> usize {
    let mut reps: Vec<T> = Vec::new();
    for &x in items {
        if !reps.iter().any(|&r| same(r, x)) {
            reps.push(x);
        }
    }
    reps.len()
}

fn segments_cross(p0: (f64, f64), p1: (f64, f64), q0: (f64, f64), q1: (f64, f64)) -> bool {
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let (d1, d2) = (cross(q0, q1, p0), cross(q0, q1, p1));
    let (d3, d4) = (cross(p0, p1, q0), cross(p0, p1, q1));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Maps nodes and edges to the torus by the argument map and reports where
/// the result fails to be an embedding.
pub fn argument_projection_diagnostic(graph: &ContractedGraph) -> ProjectionReport {
    let tol = 1e-6;
    let positions: Vec<(f64, f64)> = graph.dimer.nodes.iter().map(|n| n.position).collect();
    let mut node_collisions = Vec::new();
    for a in 0..positions.len() {
        for b in a + 1..positions.len() {
            if torus_close(positions[a], positions[b], tol) {
                node_collisions.push((a, b));
            }
        }
    }
    let bases: Vec<Complex64> = graph.nodes.iter().map(|n| n.s).collect();
    let base_points = distinct_count(&bases, |a, b| (a - b).norm() < tol);
    let torus_points = distinct_count(&positions, |a, b| torus_close(a, b, tol));

    // drop a little at each end so edges meeting at a node do not count
    let trimmed: Vec<Vec<(f64, f64)>> = graph
        .edge_paths
        .iter()
        .map(|p| {
            let n = p.len();
            let cut = (n / 16).max(1);
            p[cut..n - cut].to_vec()
        })
        .collect();
    let mut crossings = BTreeSet::new();
    for a in 0..trimmed.len() {
        for b in a + 1..trimmed.len() {
            'shift: for du in -2..=2 {
                for dv in -2..=2 {
                    let q: Vec<(f64, f64)> = trimmed[b].iter().map(|p| (p.0 + du as f64, p.1 + dv as f64)).collect();
                    for s in trimmed[a].windows(2) {
                        for t in q.windows(2) {
                            if segments_cross(s[0], s[1], t[0], t[1]) {
                                crossings.insert((a, b));
                                break 'shift;
                            }
                        }
                    }
                }
            }
        }
    }
    let edge_crossings: Vec<(usize, usize)> = crossings.into_iter().collect();
    let injective = node_collisions.is_empty() && edge_crossings.is_empty();
    let orientation_mismatches: Vec<usize> = (0..graph.nodes.len())
        .filter(|&n| (graph.dimer.nodes[n].color == Color::White) != (graph.nodes[n].jacobian > 0.0))
        .collect();
    let gives_dimer_model = injective && orientation_mismatches.is_empty();
    ProjectionReport {
        nodes: positions.len(),
        base_points,
        torus_points,
        node_collisions,
        edge_crossings,
        injective,
        orientation_mismatches,
        gives_dimer_model,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimer::{characteristic_polynomial, enumerate_matchings, fig11_dimer, rotation_isomorphism};
    use crate::fibration::cycles::{face_census, CycleSystem};

    fn contracted(system: CycleSystem) -> ContractedGraph {
        let cx = PreimageComplex::build(&system).unwrap();
        let census = face_census(&cx);
        contract_to_graph(&cx, &census).unwrap()
    }

    #[test]
    fn ec_contracts_to_the_square_lattice_dimer() {
        let g = contracted(CycleSystem::ec());
        assert_eq!(g.dimer.nodes.len(), 4);
        assert_eq!(g.dimer.edges.len(), 8);
        assert_eq!(g.dimer.whites().len(), 2);
        let fig = fig11_dimer();
        assert!(
            rotation_isomorphism(&g.dimer, &fig, false).is_some(),
            "{:#?}",
            g.dimer
        );
        let e = euler_check(&g.dimer).unwrap();
        assert_eq!((e.vertices, e.edges, e.faces), (4, 8, 4));
        let m = enumerate_matchings(&g.dimer);
        assert_eq!(m.len(), 8);
        let poly = characteristic_polynomial(&g.dimer, &m[0]).unwrap().newton_polygon();
        assert_eq!(poly.vertices().len(), 4);
        assert_eq!(poly.area2(), 4);
    }

    #[test]
    fn ec_projection_is_injective() {
        let g = contracted(CycleSystem::ec());
        let r = argument_projection_diagnostic(&g);
        assert_eq!(r.base_points, 1);
        assert_eq!(r.torus_points, 4);
        assert!(r.injective, "{r:?}");
        assert!(r.gives_dimer_model);
    }

    #[test]
    fn ec2_contracts_to_eight_trivalent_nodes() {
        let g = contracted(CycleSystem::ec2());
        assert_eq!(g.polygon_size, 3);
        assert_eq!(g.dimer.nodes.len(), 8);
        assert_eq!(g.dimer.edges.len(), 12);
        assert!(rotation_isomorphism(&g.dimer, &crate::dimer::fig24_dimer(), false).is_some());
        assert!(!crate::dimer::is_isoradial_feasible(&g.dimer).unwrap());
        let r = argument_projection_diagnostic(&g);
        assert_eq!((r.nodes, r.base_points), (8, 2));
        assert_eq!(r.orientation_mismatches.len(), 4);
        assert!(!r.gives_dimer_model);
    }

    #[test]
    fn empty_census_is_an_error() {
        let cx = PreimageComplex::build(&CycleSystem::ec().select(&[0])).unwrap();
        let census = face_census(&cx);
        assert!(matches!(contract_to_graph(&cx, &census), Err(Error::Contraction(_))));
    }
}
