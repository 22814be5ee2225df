//! Vanishing cycles as preimages of matching arcs, and the cell structure
//! they cut out of the fiber over `t = 0`.
//!
//! A matching arc joins an `x` branch point to a `y` branch point. Over its
//! interior all four fiber points lie on the cycle; at the ends two of them
//! merge, so the preimage is a single circle made of four lifted arcs.
//!
//! The arcs form a planar graph in the `s`-plane (branch points and arc
//! crossings as vertices). Its preimage is a graph on the fiber whose
//! rotation system is read in holomorphic charts: `s` at crossings, `x` at
//! `x` branch points, `y` at `y` branch points.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::branch::{BranchKind, BranchPoint, FiberModel};
use super::surface::{nearest, RibbonSurface, Sheet};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Continuation stops this close to a branch point.
const BRANCH_STOP: f64 = 1e-7;
const KEY_TOLERANCE: f64 = 1e-4;
const GEOMETRY_TOLERANCE: f64 = 1e-9;

/// Planar path joining an `x` branch point to a `y` branch point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingArc {
    pub polyline: Vec<Complex64>,
    pub ends: [BranchPoint; 2],
}

impl MatchingArc {
    pub fn new(model: &FiberModel, polyline: Vec<Complex64>) -> Result<Self> {
        if polyline.len() < 2 {
            return Err(Error::Degenerate);
        }
        let branch = model.branch_points(ZERO).points;
        let find = |z: Complex64| {
            branch.iter().copied().find(|p| (p.at - z).norm() < GEOMETRY_TOLERANCE).ok_or(Error::Degenerate)
        };
        let ends = [find(polyline[0])?, find(*polyline.last().unwrap())?];
        if ends[0].kind == ends[1].kind {
            return Err(Error::SameBranchType);
        }
        Ok(Self { polyline, ends })
    }

    pub fn segment(model: &FiberModel, a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(model, vec![a, b])
    }
}

/// Matching arcs over the fiber `t = 0` of a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleSystem {
    pub name: String,
    pub model: FiberModel,
    pub arcs: Vec<MatchingArc>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl CycleSystem {
    pub fn new(name: &str, model: FiberModel, polylines: Vec<Vec<Complex64>>) -> Result<Self> {
        let arcs = polylines.into_iter().map(|p| MatchingArc::new(&model, p)).collect::<Result<_>>()?;
        Ok(Self { name: name.to_string(), model, arcs })
    }

    /// The four straight segments swept by the colliding branch points of
    /// `x − 1/x + y + 1/y`, in vanishing-path order.
    pub fn ec() -> Self {
        Self::new(
            "ec",
            FiberModel::mirror(),
            vec![
                vec![c(2.0, 0.0), c(0.0, -2.0)],
                vec![c(2.0, 0.0), c(0.0, 2.0)],
                vec![c(-2.0, 0.0), c(0.0, 2.0)],
                vec![c(-2.0, 0.0), c(0.0, -2.0)],
            ],
        )
        .expect("fixture")
    }

    /// The mutated system: the last arc is replaced by one from `−2` to `2i`
    /// that passes below `−2i` and crosses the first arc once.
    pub fn ec2() -> Self {
        Self::new(
            "ec2",
            FiberModel::mirror(),
            vec![
                vec![c(2.0, 0.0), c(0.0, -2.0)],
                vec![c(2.0, 0.0), c(0.0, 2.0)],
                vec![c(-2.0, 0.0), c(0.0, -2.0)],
                vec![c(-2.0, 0.0), c(0.0, -3.0), c(1.5, -1.0), c(0.5, 0.5), c(0.0, 2.0)],
            ],
        )
        .expect("fixture")
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "ec" => Some(Self::ec()),
            "ec2" => Some(Self::ec2()),
            _ => None,
        }
    }

    /// Subsystem with the listed arcs, in that order.
    pub fn select(&self, arcs: &[usize]) -> Self {
        Self { name: self.name.clone(), model: self.model, arcs: arcs.iter().map(|&k| self.arcs[k].clone()).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PlanarVertexKind {
    Branch(BranchKind),
    Crossing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarVertex {
    pub at: Complex64,
    pub kind: PlanarVertexKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarEdge {
    pub arc: usize,
    pub tail: usize,
    pub head: usize,
    pub polyline: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftedVertex {
    pub base: usize,
    pub x: Complex64,
    pub y: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedEdge {
    pub base: usize,
    pub arc: usize,
    pub tail: usize,
    pub head: usize,
    /// Sheet containing the lift of the edge's midpoint.
    pub sheet: Sheet,
    /// Fiber point over the midpoint.
    pub mid: (Complex64, Complex64, Complex64),
    /// Direction of the edge leaving each endpoint, in that endpoint's chart.
    pub tail_angle: f64,
    pub head_angle: f64,
    /// Unwrapped change of `(arg x, arg y)` from tail to head.
    pub arg_shift: (f64, f64),
}

/// `(lifted edge, 0)` runs tail to head, `(lifted edge, 1)` back.
pub type LiftedDart = (usize, u8);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedFace {
    /// Boundary walk with the face on the left.
    pub darts: Vec<LiftedDart>,
    /// Vertices of degree above two met along the walk.
    pub corners: usize,
    /// Signed area of the projected boundary; positive exactly for faces
    /// lying over bounded regions of the arc graph.
    pub signed_area: f64,
    pub compact: bool,
}

/// Preimage of a cycle system with its cell structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreimageComplex {
    pub system: CycleSystem,
    pub planar_vertices: Vec<PlanarVertex>,
    pub planar_edges: Vec<PlanarEdge>,
    pub vertices: Vec<LiftedVertex>,
    pub edges: Vec<LiftedEdge>,
    /// Whether every branch point lies on the arcs. Only then are all faces
    /// discs with at most one puncture.
    pub covers_branch_points: bool,
    /// Darts leaving each lifted vertex, counterclockwise.
    pub rotation: Vec<Vec<LiftedDart>>,
    pub faces: Vec<LiftedFace>,
}

/// Result of continuing a fiber point along a planar path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberPath {
    pub x: Complex64,
    pub y: Complex64,
    pub arg_shift: (f64, f64),
    /// Last sample before the end.
    pub last_s: Complex64,
}

fn arg_step(from: Complex64, to: Complex64) -> f64 {
    (to / from).arg()
}

/// Continues `(x, y)` over the polyline, stopping `stop_short` before its end.
/// Steps shrink near branch points so root matching stays unambiguous.
pub fn continue_fiber(model: &FiberModel, path: &[Complex64], start: (Complex64, Complex64), stop_short: f64) -> FiberPath {
    let branch = model.branch_points(ZERO).positions();
    let dist = |s: Complex64| branch.iter().map(|b| (s - b).norm()).fold(f64::INFINITY, f64::min);
    let (mut x, mut y) = start;
    let mut shift = (0.0, 0.0);
    let mut s = path[0];
    let end = *path.last().unwrap();
    let n = path.len() - 1;
    for k in 0..n {
        let target = path[k + 1];
        loop {
            let remaining = (target - s).norm();
            let last = k + 1 == n;
            if last && (end - s).norm() <= stop_short.max(0.0) {
                break;
            }
            if remaining <= 0.0 {
                break;
            }
            let mut h = 0.05 * dist(s).min(1.0);
            h = h.max(1e-13);
            let mut step = remaining.min(h);
            if last && stop_short > 0.0 {
                step = step.min(remaining - stop_short * 0.5).max(1e-13);
            }
            let next = if step >= remaining { target } else { s + (target - s) / remaining * step };
            let nx = nearest(model.x_roots(next), x);
            let ny = nearest(model.y_roots(next, ZERO), y);
            shift.0 += arg_step(x, nx);
            shift.1 += arg_step(y, ny);
            x = nx;
            y = ny;
            s = next;
            if step >= remaining {
                break;
            }
        }
    }
    FiberPath { x, y, arg_shift: shift, last_s: s }
}

fn polyline_length(p: &[Complex64]) -> f64 {
    p.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
}

/// Splits a polyline at half its length; both halves start at the midpoint.
fn split_half(p: &[Complex64]) -> (Complex64, Vec<Complex64>, Vec<Complex64>) {
    let half = polyline_length(p) / 2.0;
    let mut acc = 0.0;
    for k in 0..p.len() - 1 {
        let l = (p[k + 1] - p[k]).norm();
        if acc + l >= half && l > 0.0 {
            let m = p[k] + (p[k + 1] - p[k]) * ((half - acc) / l);
            let mut back = vec![m];
            back.extend(p[..=k].iter().rev());
            let mut fwd = vec![m];
            fwd.extend(&p[k + 1..]);
            return (m, back, fwd);
        }
        acc += l;
    }
    (p[0], vec![p[0]], p.to_vec())
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Proper intersection parameters of segments `p0p1` and `q0q1`.
fn segment_intersection(p0: Complex64, p1: Complex64, q0: Complex64, q1: Complex64) -> Option<(f64, f64)> {
    let (r, s) = (p1 - p0, q1 - q0);
    let den = cross(r, s);
    if den.abs() < 1e-14 {
        return None;
    }
    let u = cross(q0 - p0, s) / den;
    let v = cross(q0 - p0, r) / den;
    ((-1e-12..=1.0 + 1e-12).contains(&u) && (-1e-12..=1.0 + 1e-12).contains(&v)).then_some((u, v))
}

fn point_on_polyline(z: Complex64, p: &[Complex64]) -> bool {
    p.windows(2).any(|w| super::branch::point_segment_distance(z, w[0], w[1]) < GEOMETRY_TOLERANCE)
}

fn build_planar(system: &CycleSystem) -> Result<(Vec<PlanarVertex>, Vec<PlanarEdge>)> {
    let model = &system.model;
    let branch = model.branch_points(ZERO).points;
    let mut vertices: Vec<PlanarVertex> =
        branch.iter().map(|p| PlanarVertex { at: p.at, kind: PlanarVertexKind::Branch(p.kind) }).collect();
    let branch_vertex = |z: Complex64| branch.iter().position(|p| (p.at - z).norm() < GEOMETRY_TOLERANCE).unwrap();
    // cut points along each arc: (global parameter, vertex)
    let mut marks: Vec<Vec<(f64, usize)>> = system
        .arcs
        .iter()
        .map(|a| vec![(0.0, branch_vertex(a.polyline[0])), ((a.polyline.len() - 1) as f64, branch_vertex(*a.polyline.last().unwrap()))])
        .collect();
    for (k, arc) in system.arcs.iter().enumerate() {
        let interior = &arc.polyline;
        for p in &branch {
            let at_end = arc.ends.iter().any(|e| (e.at - p.at).norm() < GEOMETRY_TOLERANCE);
            if !at_end && point_on_polyline(p.at, interior) {
                return Err(Error::Degenerate);
            }
        }
        for w in interior.windows(3) {
            if (w[1] - w[0]).norm() < GEOMETRY_TOLERANCE || (w[2] - w[1]).norm() < GEOMETRY_TOLERANCE {
                return Err(Error::Degenerate);
            }
        }
        let _ = k;
    }
    for a in 0..system.arcs.len() {
        for b in a + 1..system.arcs.len() {
            let (pa, pb) = (&system.arcs[a].polyline, &system.arcs[b].polyline);
            for i in 0..pa.len() - 1 {
                for j in 0..pb.len() - 1 {
                    let Some((u, v)) = segment_intersection(pa[i], pa[i + 1], pb[j], pb[j + 1]) else {
                        continue;
                    };
                    let z = pa[i] + (pa[i + 1] - pa[i]) * u;
                    let end_a = (z - pa[0]).norm() < GEOMETRY_TOLERANCE || (z - *pa.last().unwrap()).norm() < GEOMETRY_TOLERANCE;
                    let end_b = (z - pb[0]).norm() < GEOMETRY_TOLERANCE || (z - *pb.last().unwrap()).norm() < GEOMETRY_TOLERANCE;
                    if end_a && end_b {
                        continue;
                    }
                    if end_a || end_b {
                        return Err(Error::Degenerate);
                    }
                    // a crossing at a polyline corner would be found twice
                    if vertices.iter().any(|q| q.kind == PlanarVertexKind::Crossing && (q.at - z).norm() < GEOMETRY_TOLERANCE) {
                        continue;
                    }
                    let id = vertices.len();
                    vertices.push(PlanarVertex { at: z, kind: PlanarVertexKind::Crossing });
                    marks[a].push((i as f64 + u, id));
                    marks[b].push((j as f64 + v, id));
                }
            }
        }
    }
    let mut edges = Vec::new();
    for (k, arc) in system.arcs.iter().enumerate() {
        let m = &mut marks[k];
        m.sort_by(|x, y| x.0.total_cmp(&y.0));
        let point_at = |t: f64| {
            let i = (t.floor() as usize).min(arc.polyline.len() - 2);
            arc.polyline[i] + (arc.polyline[i + 1] - arc.polyline[i]) * (t - i as f64)
        };
        for w in m.windows(2) {
            let (t0, t1) = (w[0].0, w[1].0);
            let mut poly = vec![point_at(t0)];
            let first = t0.floor() as usize + 1;
            for i in first..arc.polyline.len() {
                if (i as f64) < t1 {
                    poly.push(arc.polyline[i]);
                }
            }
            poly.push(point_at(t1));
            poly.dedup_by(|a, b| (*a - *b).norm() < GEOMETRY_TOLERANCE);
            edges.push(PlanarEdge { arc: k, tail: w[0].1, head: w[1].1, polyline: poly });
        }
    }
    // the arc graph must be connected
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(p: &mut [usize], v: usize) -> usize {
        if p[v] != v {
            let r = find(p, p[v]);
            p[v] = r;
        }
        p[v]
    }
    for e in &edges {
        let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
        parent[a] = b;
    }
    let used: Vec<usize> = (0..vertices.len()).filter(|&v| edges.iter().any(|e| e.tail == v || e.head == v)).collect();
    let root = find(&mut parent, used[0]);
    if used.iter().any(|&v| find(&mut parent, v) != root) {
        return Err(Error::Degenerate);
    }
    Ok((vertices, edges))
}

/// Arrival of a lifted edge at a planar vertex.
pub(crate) struct EndData {
    pub(crate) key: (Complex64, Complex64),
    pub(crate) angle: f64,
    pub(crate) shift: (f64, f64),
}

pub(crate) fn arrive(model: &FiberModel, v: &PlanarVertex, path: &[Complex64], start: (Complex64, Complex64)) -> EndData {
    match v.kind {
        PlanarVertexKind::Crossing => {
            let fp = continue_fiber(model, path, start, 0.0);
            let prev = path[path.len() - 2];
            EndData { key: (fp.x, fp.y), angle: (prev - v.at).arg(), shift: fp.arg_shift }
        }
        PlanarVertexKind::Branch(kind) => {
            let fp = continue_fiber(model, path, start, BRANCH_STOP);
            let (key, angle) = match kind {
                BranchKind::X => {
                    let x0 = v.at / 2.0;
                    ((x0, fp.y), (fp.x - x0).arg())
                }
                BranchKind::Y => {
                    let y0 = -v.at / 2.0;
                    ((fp.x, y0), (fp.y - y0).arg())
                }
            };
            let shift = (fp.arg_shift.0 + arg_step(fp.x, key.0), fp.arg_shift.1 + arg_step(fp.y, key.1));
            EndData { key, angle, shift }
        }
    }
}

fn shoelace(points: &[Complex64]) -> f64 {
    let n = points.len();
    (0..n).map(|k| cross(points[k], points[(k + 1) % n])).sum::<f64>() / 2.0
}

impl PreimageComplex {
    pub fn build(system: &CycleSystem) -> Result<Self> {
        let model = system.model;
        let surface = RibbonSurface::new(model);
        let (planar_vertices, planar_edges) = build_planar(system)?;
        let mut vertices: Vec<LiftedVertex> = Vec::new();
        let mut vertex_of = |base: usize, key: (Complex64, Complex64)| -> usize {
            if let Some(k) = vertices
                .iter()
                .position(|v| v.base == base && (v.x - key.0).norm() + (v.y - key.1).norm() < KEY_TOLERANCE)
            {
                return k;
            }
            vertices.push(LiftedVertex { base, x: key.0, y: key.1 });
            vertices.len() - 1
        };
        let mut edges = Vec::new();
        for (b, pe) in planar_edges.iter().enumerate() {
            let (m, back, fwd) = split_half(&pe.polyline);
            for &xm in &model.x_roots(m) {
                for &ym in &model.y_roots(m, ZERO) {
                    let t = arrive(&model, &planar_vertices[pe.tail], &back, (xm, ym));
                    let h = arrive(&model, &planar_vertices[pe.head], &fwd, (xm, ym));
                    let tail = vertex_of(pe.tail, t.key);
                    let head = vertex_of(pe.head, h.key);
                    edges.push(LiftedEdge {
                        base: b,
                        arc: pe.arc,
                        tail,
                        head,
                        sheet: surface.sheet_of(m, xm, ym),
                        mid: (m, xm, ym),
                        tail_angle: t.angle,
                        head_angle: h.angle,
                        arg_shift: (h.shift.0 - t.shift.0, h.shift.1 - t.shift.1),
                    });
                }
            }
        }
        let mut rotation: Vec<Vec<(f64, LiftedDart)>> = vec![Vec::new(); vertices.len()];
        for (k, e) in edges.iter().enumerate() {
            rotation[e.tail].push((e.tail_angle, (k, 0)));
            rotation[e.head].push((e.head_angle, (k, 1)));
        }
        let rotation: Vec<Vec<LiftedDart>> = rotation
            .into_iter()
            .map(|mut r| {
                r.sort_by(|a, b| a.0.total_cmp(&b.0));
                r.into_iter().map(|(_, d)| d).collect()
            })
            .collect();
        let covers_branch_points = (0..planar_vertices.len())
            .filter(|&v| matches!(planar_vertices[v].kind, PlanarVertexKind::Branch(_)))
            .all(|v| planar_edges.iter().any(|e| e.tail == v || e.head == v));
        let mut complex = Self {
            system: system.clone(),
            planar_vertices,
            planar_edges,
            vertices,
            edges,
            covers_branch_points,
            rotation,
            faces: Vec::new(),
        };
        complex.faces = complex.trace_faces()?;
        Ok(complex)
    }

    pub fn dart_tail(&self, d: LiftedDart) -> usize {
        let e = &self.edges[d.0];
        if d.1 == 0 {
            e.tail
        } else {
            e.head
        }
    }

    pub fn dart_head(&self, d: LiftedDart) -> usize {
        self.dart_tail((d.0, 1 - d.1))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// Next dart along the face on the left of `d`.
    pub fn face_successor(&self, d: LiftedDart) -> LiftedDart {
        let twin = (d.0, 1 - d.1);
        let rot = &self.rotation[self.dart_tail(twin)];
        let k = rot.iter().position(|&x| x == twin).expect("rotation contains dart");
        rot[(k + rot.len() - 1) % rot.len()]
    }

    /// Planar polyline of a dart, in its direction of travel.
    pub fn dart_polyline(&self, d: LiftedDart) -> Vec<Complex64> {
        let mut p = self.planar_edges[self.edges[d.0].base].polyline.clone();
        if d.1 == 1 {
            p.reverse();
        }
        p
    }

    /// Closed planar polygon traced by a boundary walk.
    pub fn projected_boundary(&self, darts: &[LiftedDart]) -> Vec<Complex64> {
        let mut pts = Vec::new();
        for &d in darts {
            let p = self.dart_polyline(d);
            pts.extend(&p[..p.len() - 1]);
        }
        pts
    }

    fn trace_faces(&self) -> Result<Vec<LiftedFace>> {
        let mut seen = vec![[false; 2]; self.edges.len()];
        let mut faces = Vec::new();
        for e in 0..self.edges.len() {
            for s in 0..2u8 {
                if seen[e][s as usize] {
                    continue;
                }
                let mut darts = Vec::new();
                let mut d = (e, s);
                while !seen[d.0][d.1 as usize] {
                    seen[d.0][d.1 as usize] = true;
                    darts.push(d);
                    d = self.face_successor(d);
                }
                if d != (e, s) {
                    return Err(Error::RotationSystem("lifted face walk did not close".into()));
                }
                let corners = darts.iter().filter(|&&d| self.degree(self.dart_head(d)) > 2).count();
                let signed_area = shoelace(&self.projected_boundary(&darts));
                faces.push(LiftedFace { darts, corners, signed_area, compact: signed_area > 0.0 });
            }
        }
        Ok(faces)
    }

    /// `V − E + F` of the cell structure with punctures filled in.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Faces lying over the unbounded region; each holds one puncture.
    pub fn punctured_faces(&self) -> usize {
        self.faces.iter().filter(|f| !f.compact).count()
    }

    /// Darts of arc `k` at vertex `v`, as positions in its rotation.
    fn arc_positions(&self, v: usize, k: usize) -> Vec<usize> {
        self.rotation[v].iter().enumerate().filter(|(_, d)| self.edges[d.0].arc == k).map(|(i, _)| i).collect()
    }

    /// Vertices where the cycles over arcs `a` and `b` cross transversally.
    pub fn crossing_vertices(&self, a: usize, b: usize) -> Vec<usize> {
        if a == b {
            return Vec::new();
        }
        (0..self.vertices.len())
            .filter(|&v| {
                let (pa, pb) = (self.arc_positions(v, a), self.arc_positions(v, b));
                if pa.len() != 2 || pb.len() != 2 {
                    return false;
                }
                let inside = |p: usize| pa[0] < p && p < pa[1];
                inside(pb[0]) != inside(pb[1])
            })
            .collect()
    }

    /// Compact faces with at most two corners bounded by the given arcs only.
    fn small_faces(&self, arcs: &[usize]) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&f| {
                let face = &self.faces[f];
                face.compact && face.corners <= 2 && face.darts.iter().all(|d| arcs.contains(&self.edges[d.0].arc))
            })
            .collect()
    }

    /// Whether the two cycles bound no bigon (or monogon) between them.
    pub fn is_reduced(&self, a: usize, b: usize) -> bool {
        self.small_faces(&[a, b]).is_empty()
    }

    /// The closed curve lying over arc `k`.
    pub fn cycle(&self, k: usize) -> Result<CyclePath> {
        let mine: Vec<usize> = (0..self.edges.len()).filter(|&e| self.edges[e].arc == k).collect();
        let Some(&first) = mine.first() else {
            return Err(Error::Degenerate);
        };
        let mut steps = Vec::new();
        let mut d: LiftedDart = (first, 0);
        let mut shift = (0.0, 0.0);
        loop {
            let e = &self.edges[d.0];
            steps.push(CycleStep { edge: d.0, forward: d.1 == 0, sheet: e.sheet, base: e.base });
            let sign = if d.1 == 0 { 1.0 } else { -1.0 };
            shift.0 += sign * e.arg_shift.0;
            shift.1 += sign * e.arg_shift.1;
            let v = self.dart_head(d);
            // continue along the other dart of this arc at v
            let next = self.rotation[v]
                .iter()
                .copied()
                .find(|&o| self.edges[o.0].arc == k && o.0 != d.0)
                .ok_or(Error::Degenerate)?;
            d = next;
            if d == (first, 0) || steps.len() > mine.len() {
                break;
            }
        }
        let closed = d == (first, 0) && steps.len() == mine.len();
        let tau = std::f64::consts::TAU;
        Ok(CyclePath {
            arc: k,
            steps,
            closed,
            winding: ((shift.0 / tau).round() as i64, (shift.1 / tau).round() as i64),
        })
    }

    pub fn cycles(&self) -> Result<Vec<CyclePath>> {
        (0..self.system.arcs.len()).map(|k| self.cycle(k)).collect()
    }

    /// Whether two disjoint cycles cobound an annulus free of punctures.
    pub fn cobound_annulus(&self, a: usize, b: usize) -> bool {
        let on = |e: usize| self.edges[e].arc == a || self.edges[e].arc == b;
        let mut face_of = vec![[0usize; 2]; self.edges.len()];
        for (f, face) in self.faces.iter().enumerate() {
            for d in &face.darts {
                face_of[d.0][d.1 as usize] = f;
            }
        }
        let mut parent: Vec<usize> = (0..self.faces.len()).collect();
        fn find(p: &mut [usize], v: usize) -> usize {
            if p[v] != v {
                let r = find(p, p[v]);
                p[v] = r;
            }
            p[v]
        }
        for e in 0..self.edges.len() {
            if !on(e) {
                let (x, y) = (find(&mut parent, face_of[e][0]), find(&mut parent, face_of[e][1]));
                parent[x] = y;
            }
        }
        let mut chi: BTreeMap<usize, (i64, usize)> = BTreeMap::new();
        for f in 0..self.faces.len() {
            let r = find(&mut parent, f);
            let entry = chi.entry(r).or_default();
            entry.0 += 1;
            if !self.faces[f].compact {
                entry.1 += 1;
            }
        }
        for e in 0..self.edges.len() {
            if !on(e) {
                let r = find(&mut parent, face_of[e][0]);
                chi.get_mut(&r).unwrap().0 -= 1;
            }
        }
        for v in 0..self.vertices.len() {
            if let Some(&d) = self.rotation[v].first() {
                if self.rotation[v].iter().all(|d| !on(d.0)) {
                    let r = find(&mut parent, face_of[d.0][d.1 as usize]);
                    chi.get_mut(&r).unwrap().0 += 1;
                }
            }
        }
        chi.values().any(|&(x, punctures)| x == 0 && punctures == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleStep {
    pub edge: usize,
    pub forward: bool,
    pub sheet: Sheet,
    /// Planar edge underneath.
    pub base: usize,
}

/// Closed curve on the fiber, as the lifted edges it runs through.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclePath {
    pub arc: usize,
    pub steps: Vec<CycleStep>,
    pub closed: bool,
    /// Winding of `x` and `y` around zero along the curve.
    pub winding: (i64, i64),
}

impl CyclePath {
    pub fn sheets(&self) -> Vec<Sheet> {
        self.steps.iter().map(|s| s.sheet).collect()
    }
}

/// Lifts a single arc on its own.
pub fn lift_cycle(model: &FiberModel, polyline: Vec<Complex64>) -> Result<CyclePath> {
    let system = CycleSystem::new("single", *model, vec![polyline])?;
    PreimageComplex::build(&system)?.cycle(0)
}

/// Polygonal faces by corner count, and the number of punctured faces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceCensus {
    pub polygons: BTreeMap<usize, usize>,
    pub punctured: usize,
}

impl FaceCensus {
    pub fn count(&self, k: usize) -> usize {
        self.polygons.get(&k).copied().unwrap_or(0)
    }
}

pub fn face_census(complex: &PreimageComplex) -> FaceCensus {
    let mut polygons = BTreeMap::new();
    for f in complex.faces.iter().filter(|f| f.compact && f.corners > 0) {
        *polygons.entry(f.corners).or_insert(0) += 1;
    }
    FaceCensus { polygons, punctured: complex.punctured_faces() }
}

/// Transverse intersections of the cycles over arcs `a` and `b`.
pub fn intersection_count(complex: &PreimageComplex, a: usize, b: usize) -> Result<usize> {
    if a != b && !complex.is_reduced(a, b) {
        return Err(Error::NotReduced(format!("cycles {} and {} bound a bigon", a + 1, b + 1)));
    }
    Ok(complex.crossing_vertices(a, b).len())
}

/// Intersection counts for all pairs `i < j`, keyed by 1-based indices.
pub fn intersection_table(complex: &PreimageComplex) -> Result<BTreeMap<(usize, usize), usize>> {
    let n = complex.system.arcs.len();
    let mut out = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            out.insert((i + 1, j + 1), intersection_count(complex, i, j)?);
        }
    }
    Ok(out)
}

/// Whether the cycles over arcs `a` and `b` are freely homotopic on the
/// punctured fiber. Both must be in minimal position.
pub fn homotopic(complex: &PreimageComplex, a: usize, b: usize) -> Result<bool> {
    if a == b {
        return Ok(true);
    }
    if intersection_count(complex, a, b)? > 0 {
        return Ok(false);
    }
    Ok(complex.cobound_annulus(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc_lifts_to_one_circle_through_all_sheets() {
        let cyc = lift_cycle(&FiberModel::mirror(), vec![c(2.0, 0.0), c(0.0, -2.0)]).unwrap();
        assert!(cyc.closed);
        assert_eq!(cyc.steps.len(), 4);
        let mut sheets = cyc.sheets();
        sheets.sort();
        assert_eq!(sheets, vec![0, 1, 2, 3]);
        // vanishing cycles bound thimbles, so they are null in the torus
        assert_eq!(cyc.winding, (0, 0));
    }

    #[test]
    fn same_type_endpoints_rejected() {
        let m = FiberModel::mirror();
        assert!(matches!(MatchingArc::segment(&m, c(0.0, 2.0), c(0.0, -2.0)), Err(Error::SameBranchType)));
        assert!(matches!(MatchingArc::segment(&m, c(2.0, 0.0), c(1.0, 1.0)), Err(Error::Degenerate)));
    }

    #[test]
    fn single_cycle_has_no_polygons() {
        let sys = CycleSystem::ec().select(&[0]);
        let cx = PreimageComplex::build(&sys).unwrap();
        let census = face_census(&cx);
        assert!(census.polygons.is_empty());
        assert_eq!(intersection_count(&cx, 0, 0).unwrap(), 0);
    }

    #[test]
    fn ec_cell_structure() {
        let cx = PreimageComplex::build(&CycleSystem::ec()).unwrap();
        assert_eq!(cx.vertices.len(), 8);
        assert_eq!(cx.edges.len(), 16);
        assert_eq!(cx.euler_characteristic(), 0);
        let census = face_census(&cx);
        assert_eq!(census.count(4), 4);
        assert_eq!(census.polygons.len(), 1);
        assert_eq!(census.punctured, 4);
        for cyc in cx.cycles().unwrap() {
            assert!(cyc.closed);
        }
    }

    #[test]
    fn ec_intersections() {
        let cx = PreimageComplex::build(&CycleSystem::ec()).unwrap();
        let table = intersection_table(&cx).unwrap();
        let want = [((1, 2), 2), ((1, 3), 0), ((1, 4), 2), ((2, 3), 2), ((2, 4), 0), ((3, 4), 2)];
        for (k, v) in want {
            assert_eq!(table[&k], v, "{k:?}");
        }
    }

    #[test]
    fn ec_cycles_pairwise_distinct() {
        let cx = PreimageComplex::build(&CycleSystem::ec()).unwrap();
        for a in 0..4 {
            for b in a + 1..4 {
                assert!(!homotopic(&cx, a, b).unwrap(), "{a} {b}");
            }
        }
    }

    #[test]
    fn ec2_cell_structure() {
        let cx = PreimageComplex::build(&CycleSystem::ec2()).unwrap();
        assert_eq!(cx.euler_characteristic(), 0);
        let census = face_census(&cx);
        assert_eq!(census.count(3), 8, "{census:?}");
        let table = intersection_table(&cx).unwrap();
        let want = [((1, 2), 2), ((1, 3), 2), ((1, 4), 4), ((2, 3), 0), ((2, 4), 2), ((3, 4), 2)];
        for (k, v) in want {
            assert_eq!(table[&k], v, "{k:?}");
        }
        assert_eq!(table.values().sum::<usize>(), 12);
    }

    #[test]
    fn census_ignores_labels() {
        let base = face_census(&PreimageComplex::build(&CycleSystem::ec2()).unwrap());
        let shuffled = CycleSystem::ec2().select(&[2, 0, 3, 1]);
        assert_eq!(face_census(&PreimageComplex::build(&shuffled).unwrap()), base);
        let mut reversed = CycleSystem::ec2();
        for arc in &mut reversed.arcs {
            arc.polyline.reverse();
            arc.ends.swap(0, 1);
        }
        assert_eq!(face_census(&PreimageComplex::build(&reversed).unwrap()), base);
    }

    #[test]
    fn parallel_arcs_are_homotopic_or_bound_bigons() {
        // two arcs joining the same pair of branch points cobound bigons
        let m = FiberModel::mirror();
        let sys = CycleSystem::new(
            "twins",
            m,
            vec![
                vec![c(2.0, 0.0), c(0.0, -2.0)],
                vec![c(2.0, 0.0), c(1.5, -1.5), c(0.0, -2.0)],
                vec![c(-2.0, 0.0), c(0.0, 2.0)],
                vec![c(-2.0, 0.0), c(0.0, -2.0)],
                vec![c(2.0, 0.0), c(0.0, 2.0)],
            ],
        )
        .unwrap();
        let cx = PreimageComplex::build(&sys).unwrap();
        assert!(matches!(intersection_count(&cx, 0, 1), Err(Error::NotReduced(_))));
    }
}
