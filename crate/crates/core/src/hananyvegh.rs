//! Linear Hanany-Vegh algorithm: oriented line arrangements on the unit
//! torus, coherent cell coloring, admissibility and dimer extraction.
//!
//! A line is `{p : ⟨n, p⟩ ≡ c mod 1}` where the normal `n` is the
//! counterclockwise rotation of the oriented direction `d`; the left side of
//! the line is where `⟨n, p⟩` increases. The side `m → m'` of a polygon
//! (counterclockwise) contributes the line with normal `m' − m`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dimer::{euler_check, Color, DimerModel, Edge, Node};
use crate::error::{Error, Result};
use crate::lattice::{is_lattice_parallelogram, LatticePoint, LatticePolygon};
use crate::svg::{Svg, Viewport};

pub type Q = Rational64;
type Pt = (Q, Q);

fn frac(x: Q) -> Q {
    x - x.floor()
}

fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

fn frac_pt(p: Pt) -> Pt {
    (frac(p.0), frac(p.1))
}

fn to_f(p: Pt) -> (f64, f64) {
    (p.0.to_f64().unwrap_or(f64::NAN), p.1.to_f64().unwrap_or(f64::NAN))
}

fn cross_q(a: Pt, b: Pt) -> Q {
    a.0 * b.1 - a.1 * b.0
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusLine {
    /// Oriented primitive direction.
    pub direction: LatticePoint,
    /// Value of `⟨normal, p⟩` on the line, in `[0, 1)`.
    pub offset: Q,
}

impl TorusLine {
    pub fn new(direction: LatticePoint, offset: Q) -> Result<Self> {
        if direction.u.gcd(&direction.v) != 1 {
            return Err(Error::InvalidPolygon(format!("line direction {direction} is not primitive")));
        }
        Ok(TorusLine {
            direction,
            offset: frac(offset),
        })
    }

    /// The line whose normal is `normal`, i.e. the one attached to a polygon
    /// side with edge vector `normal`.
    pub fn with_normal(normal: LatticePoint, offset: Q) -> Result<Self> {
        TorusLine::new(LatticePoint::new(normal.v, -normal.u), offset)
    }

    pub fn normal(&self) -> LatticePoint {
        LatticePoint::new(-self.direction.v, self.direction.u)
    }

    /// `+1` when the direction is the lexicographically positive
    /// representative of its unoriented class.
    pub fn orientation(&self) -> i8 {
        let d = self.direction;
        if d.u > 0 || (d.u == 0 && d.v > 0) {
            1
        } else {
            -1
        }
    }

    /// Same geodesic, opposite orientation.
    pub fn reversed(&self) -> TorusLine {
        TorusLine {
            direction: -self.direction,
            offset: frac(-self.offset),
        }
    }

    pub fn same_geodesic(&self, other: &TorusLine) -> bool {
        (self.direction == other.direction && self.offset == other.offset)
            || (self.direction == -other.direction && frac(self.offset + other.offset).is_zero())
    }

    /// An integer vector `w` with `⟨n, w⟩ = 1`.
    fn transversal(&self) -> LatticePoint {
        let n = self.normal();
        let g = n.u.extended_gcd(&n.v);
        let s = g.gcd.signum();
        LatticePoint::new(g.x * s, g.y * s)
    }

    fn base_point(&self) -> Pt {
        let w = self.transversal();
        (self.offset * w.u, self.offset * w.v)
    }

    /// Lifted point at parameter `s`; `s ∈ [0,1)` covers the line once.
    pub fn point_at(&self, s: Q) -> Pt {
        let p0 = self.base_point();
        (p0.0 + s * self.direction.u, p0.1 + s * self.direction.v)
    }

    /// Parameter in `[0,1)` of a torus point assumed to lie on the line.
    fn parameter_of(&self, p: Pt) -> Q {
        let p0 = self.base_point();
        let x = (p.0 - p0.0, p.1 - p0.1);
        let w = self.transversal();
        let wq = (qi(w.u), qi(w.v));
        let dq = (qi(self.direction.u), qi(self.direction.v));
        frac(cross_q(x, wq) / cross_q(dq, wq))
    }

    fn side_value(&self, p: Pt) -> Q {
        let n = self.normal();
        p.0 * n.u + p.1 * n.v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusArrangement {
    pub lines: Vec<TorusLine>,
}

/// A crossing of two lines, as a point of `[0,1)²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementVertex {
    pub point: Pt,
    pub lines: (usize, usize),
}

impl ArrangementVertex {
    pub fn point_f64(&self) -> (f64, f64) {
        to_f(self.point)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellColor {
    White,
    Black,
    None,
}

/// One side of a cell: a stretch of `line` between consecutive crossings,
/// traversed with the cell on the left.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSide {
    pub line: usize,
    pub forward: bool,
    pub segment: usize,
    /// Vertex at the end of this side; absent for vertex-free arrangements.
    pub head: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub sides: Vec<CellSide>,
    /// Lifted corners in boundary order; the cell is their convex hull.
    pub corners: Vec<Pt>,
    pub centroid: Pt,
    pub color: CellColor,
}

impl Cell {
    pub fn centroid_f64(&self) -> (f64, f64) {
        to_f(frac_pt(self.centroid))
    }

    /// Lifted corner at which `side` ends.
    fn corner_after(&self, side: usize) -> Pt {
        self.corners[(side + 1) % self.corners.len()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub line: usize,
    /// Crossings at the ends; absent on lines without crossings.
    pub tail: Option<usize>,
    pub head: Option<usize>,
    /// Parameter length along the line.
    pub length: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredCellComplex {
    pub lines: Vec<TorusLine>,
    pub vertices: Vec<ArrangementVertex>,
    pub segments: Vec<Segment>,
    pub cells: Vec<Cell>,
}

struct Crossings {
    vertices: Vec<ArrangementVertex>,
    /// Per line: `(parameter, vertex)` sorted by parameter.
    along: Vec<Vec<(Q, usize)>>,
}

impl TorusArrangement {
    pub fn new(lines: Vec<TorusLine>) -> Self {
        TorusArrangement { lines }
    }

    fn crossings(&self) -> Result<Crossings> {
        let n = self.lines.len();
        let mut vertices = Vec::new();
        let mut along = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                let (li, lj) = (&self.lines[i], &self.lines[j]);
                if li.same_geodesic(lj) {
                    return Err(Error::Inadmissible(format!("lines {i} and {j} coincide")));
                }
                let k = lj.normal().dot(li.direction);
                if k == 0 {
                    continue;
                }
                let base = lj.offset - lj.side_value(li.point_at(Q::zero()));
                for m in 0..k.abs() {
                    let si = frac((base + m) / k);
                    let p = frac_pt(li.point_at(si));
                    let sj = lj.parameter_of(p);
                    along[i].push((si, vertices.len()));
                    along[j].push((sj, vertices.len()));
                    vertices.push(ArrangementVertex { point: p, lines: (i, j) });
                }
            }
        }
        let mut pts: Vec<Pt> = vertices.iter().map(|v| v.point).collect();
        pts.sort();
        if pts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Inadmissible("three or more lines meet at a point".into()));
        }
        for a in &mut along {
            a.sort();
        }
        Ok(Crossings { vertices, along })
    }

    /// True iff no two lines coincide and no three meet at a point.
    pub fn is_simple(&self) -> bool {
        self.crossings().is_ok()
    }

    pub fn vertices(&self) -> Result<Vec<ArrangementVertex>> {
        Ok(self.crossings()?.vertices)
    }
}

/// Cell complex of a simple arrangement, colored white where every bounding
/// line keeps the cell on its left and black where every one keeps it on
/// its right. Errors on non-simple input.
pub fn color_cells(a: &TorusArrangement) -> Result<ColoredCellComplex> {
    let cr = a.crossings()?;
    if cr.vertices.is_empty() {
        return Ok(parallel_complex(a));
    }
    let lines = &a.lines;
    let mut segments = Vec::new();
    let mut start_of: Vec<Vec<usize>> = Vec::new();
    for (li, list) in cr.along.iter().enumerate() {
        let r = list.len();
        let mut starts = Vec::with_capacity(r);
        for k in 0..r {
            let (s0, v0) = list[k];
            let (s1, v1) = list[(k + 1) % r];
            let mut length = s1 - s0;
            if length <= Q::zero() {
                length += 1;
            }
            starts.push(segments.len());
            segments.push(Segment {
                line: li,
                tail: Some(v0),
                head: Some(v1),
                length,
            });
        }
        start_of.push(starts);
    }
    // position of each vertex on each of its two lines
    let mut pos: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); cr.vertices.len()];
    for (li, list) in cr.along.iter().enumerate() {
        for (k, &(_, v)) in list.iter().enumerate() {
            pos[v].insert(li, k);
        }
    }
    let dir = |l: usize, forward: bool| {
        let d = lines[l].direction;
        if forward {
            d
        } else {
            -d
        }
    };
    let successor = |(sg, fw): (usize, bool)| -> (usize, bool) {
        let seg = &segments[sg];
        let v = if fw { seg.head } else { seg.tail }.expect("crossing");
        let (i, j) = cr.vertices[v].lines;
        let other = if seg.line == i { j } else { i };
        let u = dir(seg.line, fw);
        let d = lines[other].direction;
        let p = pos[v][&other];
        let r = cr.along[other].len();
        if u.cross(d) > 0 {
            (start_of[other][p], true)
        } else {
            (start_of[other][(p + r - 1) % r], false)
        }
    };
    let mut seen = vec![[false; 2]; segments.len()];
    let mut cells = Vec::new();
    for sg in 0..segments.len() {
        for fw in [true, false] {
            if seen[sg][fw as usize] {
                continue;
            }
            let mut darts = Vec::new();
            let mut d = (sg, fw);
            while !seen[d.0][d.1 as usize] {
                seen[d.0][d.1 as usize] = true;
                darts.push(d);
                d = successor(d);
            }
            cells.push(trace_cell(&darts, &segments, &cr.vertices, lines)?);
        }
    }
    Ok(ColoredCellComplex {
        lines: lines.clone(),
        vertices: cr.vertices,
        segments,
        cells,
    })
}

fn trace_cell(darts: &[(usize, bool)], segments: &[Segment], vertices: &[ArrangementVertex], lines: &[TorusLine]) -> Result<Cell> {
    let first = &segments[darts[0].0];
    let start_v = if darts[0].1 { first.tail } else { first.head }.expect("crossing");
    let start = vertices[start_v].point;
    let mut cur = start;
    let mut corners = Vec::with_capacity(darts.len());
    let mut sides = Vec::with_capacity(darts.len());
    for &(sg, fw) in darts {
        corners.push(cur);
        let seg = &segments[sg];
        let d = lines[seg.line].direction;
        let len = if fw { seg.length } else { -seg.length };
        cur = (cur.0 + len * d.u, cur.1 + len * d.v);
        sides.push(CellSide {
            line: seg.line,
            forward: fw,
            segment: sg,
            head: if fw { seg.head } else { seg.tail },
        });
    }
    if cur != start {
        return Err(Error::Inadmissible("cell is not a disc".into()));
    }
    // exact twice-area in big rationals; corner products outgrow i64
    let big = |q: Q| BigRational::new((*q.numer()).into(), (*q.denom()).into());
    let m = corners.len();
    let mut a2 = BigRational::zero();
    let (mut cx, mut cy) = (BigRational::zero(), BigRational::zero());
    for k in 0..m {
        let (p, q) = (corners[k], corners[(k + 1) % m]);
        a2 += big(p.0) * big(q.1) - big(q.0) * big(p.1);
        cx += big(p.0);
        cy += big(p.1);
    }
    if a2 <= BigRational::zero() {
        return Err(Error::Inadmissible("cell boundary is not counterclockwise".into()));
    }
    // cells are convex, so the corner average is interior
    let small = |b: BigRational| -> Result<Q> {
        let b = b / BigInt::from(m);
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) => Ok(Q::new(n, d)),
            _ => Err(Error::Inadmissible("cell centroid exceeds 64-bit rationals".into())),
        }
    };
    let centroid = (small(cx)?, small(cy)?);
    let color = if sides.iter().all(|s| s.forward) {
        CellColor::White
    } else if sides.iter().all(|s| !s.forward) {
        CellColor::Black
    } else {
        CellColor::None
    };
    Ok(Cell {
        sides,
        corners,
        centroid,
        color,
    })
}

/// Strips between parallel lines; a strip is colored when both bounding
/// lines agree.
fn parallel_complex(a: &TorusArrangement) -> ColoredCellComplex {
    let lines = a.lines.clone();
    let segments: Vec<Segment> = (0..lines.len())
        .map(|l| Segment {
            line: l,
            tail: None,
            head: None,
            length: qi(1),
        })
        .collect();
    if lines.is_empty() {
        return ColoredCellComplex {
            lines,
            vertices: Vec::new(),
            segments,
            cells: vec![Cell {
                sides: Vec::new(),
                corners: Vec::new(),
                centroid: (Q::new(1, 2), Q::new(1, 2)),
                color: CellColor::None,
            }],
        };
    }
    let n0 = lines[0].normal();
    let height = |l: &TorusLine| if l.normal() == n0 { l.offset } else { frac(-l.offset) };
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by_key(|&l| height(&lines[l]));
    let w = lines[0].transversal();
    let mut cells = Vec::new();
    for k in 0..order.len() {
        let (lo, hi) = (order[k], order[(k + 1) % order.len()]);
        let (t0, mut t1) = (height(&lines[lo]), height(&lines[hi]));
        if t1 <= t0 {
            t1 += 1;
        }
        let lo_fw = lines[lo].normal() == n0;
        let hi_fw = lines[hi].normal() != n0;
        let color = match (lo_fw, hi_fw) {
            (true, true) => CellColor::White,
            (false, false) => CellColor::Black,
            _ => CellColor::None,
        };
        let mid = (t0 + t1) / 2;
        cells.push(Cell {
            sides: vec![
                CellSide {
                    line: lo,
                    forward: lo_fw,
                    segment: lo,
                    head: None,
                },
                CellSide {
                    line: hi,
                    forward: hi_fw,
                    segment: hi,
                    head: None,
                },
            ],
            corners: Vec::new(),
            centroid: (mid * w.u, mid * w.v),
            color,
        });
    }
    ColoredCellComplex {
        lines,
        vertices: Vec::new(),
        segments,
        cells,
    }
}

/// Every vertex meets exactly one white and one black cell, and no segment
/// borders two colored cells.
pub fn is_admissible(c: &ColoredCellComplex) -> bool {
    if c.vertices.is_empty() {
        return false;
    }
    let mut at_vertex = vec![(0usize, 0usize); c.vertices.len()];
    let mut on_segment = vec![0usize; c.segments.len()];
    for cell in &c.cells {
        if cell.color == CellColor::None {
            continue;
        }
        for side in &cell.sides {
            on_segment[side.segment] += 1;
            if let Some(v) = side.head {
                match cell.color {
                    CellColor::White => at_vertex[v].0 += 1,
                    _ => at_vertex[v].1 += 1,
                }
            }
        }
    }
    at_vertex.iter().all(|&x| x == (1, 1)) && on_segment.iter().all(|&k| k <= 1)
}

/// One node per colored cell at its centroid, one edge per vertex.
pub fn extract_dimer(c: &ColoredCellComplex) -> Result<DimerModel> {
    if !is_admissible(c) {
        return Err(Error::Inadmissible("extraction needs an admissible complex".into()));
    }
    let mut node_of = vec![usize::MAX; c.cells.len()];
    let mut nodes = Vec::new();
    for (want, prefix, color) in [(CellColor::White, "w", Color::White), (CellColor::Black, "b", Color::Black)] {
        let mut k = 0;
        for (ci, cell) in c.cells.iter().enumerate() {
            if cell.color == want {
                node_of[ci] = nodes.len();
                nodes.push(Node {
                    id: format!("{prefix}{k}"),
                    color,
                    position: cell.centroid_f64(),
                    rotation: cell.sides.iter().map(|s| s.head.expect("crossing")).collect(),
                });
                k += 1;
            }
        }
    }
    // (cell, side index) of the white and black corner at each vertex
    let mut white_at = vec![None; c.vertices.len()];
    let mut black_at = vec![None; c.vertices.len()];
    for (ci, cell) in c.cells.iter().enumerate() {
        for (k, side) in cell.sides.iter().enumerate() {
            let v = side.head.expect("crossing");
            match cell.color {
                CellColor::White => white_at[v] = Some((ci, k)),
                CellColor::Black => black_at[v] = Some((ci, k)),
                CellColor::None => {}
            }
        }
    }
    let mut edges = Vec::with_capacity(c.vertices.len());
    for v in 0..c.vertices.len() {
        let (cw, kw) = white_at[v].expect("admissible");
        let (cb, kb) = black_at[v].expect("admissible");
        let (wc, bc) = (&c.cells[cw], &c.cells[cb]);
        let (lw, lb) = (wc.corner_after(kw), bc.corner_after(kb));
        let (pw, pb) = (frac_pt(wc.centroid), frac_pt(bc.centroid));
        let off = (
            pw.0 - pb.0 + lw.0 - wc.centroid.0 + bc.centroid.0 - lb.0,
            pw.1 - pb.1 + lw.1 - wc.centroid.1 + bc.centroid.1 - lb.1,
        );
        if !off.0.is_integer() || !off.1.is_integer() {
            return Err(Error::Inadmissible("non-integral edge offset".into()));
        }
        edges.push(Edge {
            id: format!("e{v}"),
            white: node_of[cw],
            black: node_of[cb],
            offset: LatticePoint::new(off.0.to_integer(), off.1.to_integer()),
        });
    }
    let g = DimerModel {
        name: "hanany-vegh".into(),
        nodes,
        edges,
        metadata: BTreeMap::new(),
    };
    g.validate()?;
    euler_check(&g)?;
    Ok(g)
}

fn min_rotation<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    (0..seq.len().max(1))
        .map(|r| seq[r.min(seq.len())..].iter().chain(&seq[..r.min(seq.len())]).cloned().collect::<Vec<T>>())
        .min()
        .unwrap_or_default()
}

/// Translation-invariant description of the labeled incidence structure:
/// the cyclic sequence of crossing partners along every line, and every
/// cell's cyclic boundary word with its color.
pub fn canonical_form(c: &ColoredCellComplex) -> String {
    let mut out = String::new();
    for l in 0..c.lines.len() {
        let partners: Vec<usize> = c
            .segments
            .iter()
            .filter(|s| s.line == l)
            .filter_map(|s| s.tail)
            .map(|v| {
                let (i, j) = c.vertices[v].lines;
                if i == l {
                    j
                } else {
                    i
                }
            })
            .collect();
        out.push_str(&format!("L{l}{:?};", min_rotation(&partners)));
    }
    let mut cells: Vec<String> = c
        .cells
        .iter()
        .map(|cell| {
            let word: Vec<(usize, bool)> = cell.sides.iter().map(|s| (s.line, s.forward)).collect();
            format!("{:?}{:?}", cell.color, min_rotation(&word))
        })
        .collect();
    cells.sort();
    out.push_str(&cells.join(";"));
    out
}

fn torus_gap(a: Q, b: Q) -> Q {
    let d = frac(a - b);
    d.min(qi(1) - d)
}

/// Smallest squared torus distance between two vertices; larger is more
/// evenly spread.
fn spread(c: &ColoredCellComplex) -> Q {
    let mut best: Option<Q> = None;
    for (k, a) in c.vertices.iter().enumerate() {
        for b in &c.vertices[k + 1..] {
            let dx = torus_gap(a.point.0, b.point.0);
            let dy = torus_gap(a.point.1, b.point.1);
            let d = dx * dx + dy * dy;
            best = Some(best.map_or(d, |x: Q| x.min(d)));
        }
    }
    best.unwrap_or_else(|| qi(1))
}

/// One combinatorial class of simple arrangements found by the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrangementClass {
    pub key: String,
    /// The most evenly spread sample of the class.
    pub representative: TorusArrangement,
    pub complex: ColoredCellComplex,
    pub admissible: bool,
    /// Number of grid samples that fell into the class.
    pub samples: usize,
}

pub const DEFAULT_GRID: usize = 8;

fn side_normals(p: &LatticePolygon) -> Result<Vec<LatticePoint>> {
    if !is_lattice_parallelogram(p) {
        return Err(Error::NotParallelogram(format!("{:?}", p.vertices())));
    }
    p.edges()
        .into_iter()
        .map(|(a, b)| {
            if (b - a).lattice_length() != 1 {
                Err(Error::NonPrimitiveEdge((a.u, a.v), (b.u, b.v)))
            } else {
                Ok(b - a)
            }
        })
        .collect()
}

/// Sweeps the line offsets over the grid `(k/grid)` and groups the simple
/// arrangements into combinatorial classes, ordered by canonical form.
pub fn sweep_classes(p: &LatticePolygon, grid: usize) -> Result<Vec<ArrangementClass>> {
    let normals = side_normals(p)?;
    if grid == 0 {
        return Err(Error::EmptyGrid);
    }
    let nl = normals.len() as u32;
    let total = grid.pow(nl);
    let samples: Vec<Option<(String, Q, TorusArrangement, ColoredCellComplex)>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut rest = idx;
            let mut offs = vec![0usize; normals.len()];
            for o in offs.iter_mut().rev() {
                *o = rest % grid;
                rest /= grid;
            }
            let lines: Vec<TorusLine> = normals
                .iter()
                .zip(&offs)
                .map(|(&n, &k)| TorusLine::with_normal(n, Q::new(k as i64, grid as i64)).expect("primitive"))
                .collect();
            let a = TorusArrangement::new(lines);
            let c = color_cells(&a).ok()?;
            Some((canonical_form(&c), spread(&c), a, c))
        })
        .collect();
    let mut classes: BTreeMap<String, (Q, TorusArrangement, ColoredCellComplex, usize)> = BTreeMap::new();
    for (key, sc, a, c) in samples.into_iter().flatten() {
        match classes.get_mut(&key) {
            Some(entry) => {
                entry.3 += 1;
                if sc > entry.0 {
                    *entry = (sc, a, c, entry.3);
                }
            }
            None => {
                classes.insert(key, (sc, a, c, 1));
            }
        }
    }
    Ok(classes
        .into_iter()
        .map(|(key, (_, representative, complex, samples))| ArrangementClass {
            key,
            admissible: is_admissible(&complex),
            representative,
            complex,
            samples,
        })
        .collect())
}

/// One representative per combinatorial class of simple arrangements with
/// one oriented line per side of `p`.
pub fn arrangement_from_parallelogram(p: &LatticePolygon) -> Result<Vec<TorusArrangement>> {
    Ok(sweep_classes(p, DEFAULT_GRID)?.into_iter().map(|c| c.representative).collect())
}

/// The admissible class of `p`, which must be unique.
pub fn unique_admissible_class(p: &LatticePolygon) -> Result<ArrangementClass> {
    unique_admissible_class_on(p, DEFAULT_GRID)
}

/// [`unique_admissible_class`] with an explicit offset grid.
pub fn unique_admissible_class_on(p: &LatticePolygon, grid: usize) -> Result<ArrangementClass> {
    let mut adm: Vec<ArrangementClass> = sweep_classes(p, grid)?.into_iter().filter(|c| c.admissible).collect();
    if adm.len() != 1 {
        return Err(Error::Uniqueness(adm.len()));
    }
    Ok(adm.remove(0))
}

pub fn unique_admissible(p: &LatticePolygon) -> Result<DimerModel> {
    extract_dimer(&unique_admissible_class(p)?.complex)
}

/// The arrangement with colored cells drawn over the unit square.
pub fn render_svg(c: &ColoredCellComplex, title: &str) -> String {
    let vp = Viewport::unit_torus(400.0);
    let mut svg = vp.canvas(title);
    draw_complex(&mut svg, &vp, c);
    svg.render()
}

/// Shaded colored cells, oriented lines and vertices.
pub fn draw_complex(svg: &mut Svg, vp: &Viewport, c: &ColoredCellComplex) {
    let shifts: Vec<(f64, f64)> = (-1..=1).flat_map(|a| (-1..=1).map(move |b| (a as f64, b as f64))).collect();
    for cell in &c.cells {
        let fill = match cell.color {
            CellColor::White => "#f4e7b0",
            CellColor::Black => "#555555",
            CellColor::None => continue,
        };
        let base: Vec<(f64, f64)> = cell.corners.iter().map(|&p| to_f(p)).collect();
        let (fx, fy) = (cell.centroid.0.floor(), cell.centroid.1.floor());
        let (fx, fy) = (fx.to_f64().unwrap_or(0.0), fy.to_f64().unwrap_or(0.0));
        for &(sx, sy) in &shifts {
            let pts: Vec<(f64, f64)> = base.iter().map(|p| vp.map((p.0 - fx + sx, p.1 - fy + sy))).collect();
            svg.polygon(&pts, fill, 0.9);
        }
    }
    for seg in &c.segments {
        let line = &c.lines[seg.line];
        let start = match seg.tail {
            Some(v) => c.vertices[v].point,
            None => frac_pt(line.point_at(Q::zero())),
        };
        let d = line.direction;
        let end = (start.0 + seg.length * d.u, start.1 + seg.length * d.v);
        let mid = (start.0 + seg.length * d.u / 2, start.1 + seg.length * d.v / 2);
        let (a, b, m) = (to_f(start), to_f(end), to_f(mid));
        let len = ((d.u * d.u + d.v * d.v) as f64).sqrt();
        let (ux, uy) = (d.u as f64 / len * 0.02, d.v as f64 / len * 0.02);
        for &(sx, sy) in &shifts {
            svg.line(vp.map((a.0 + sx, a.1 + sy)), vp.map((b.0 + sx, b.1 + sy)), "#1f4e9c", 2.0);
            let tip = (m.0 + sx + ux, m.1 + sy + uy);
            let l = (m.0 + sx - ux - uy * 0.7, m.1 + sy - uy + ux * 0.7);
            let r = (m.0 + sx - ux + uy * 0.7, m.1 + sy - uy - ux * 0.7);
            svg.polygon(&[vp.map(tip), vp.map(l), vp.map(r)], "#1f4e9c", 1.0);
        }
    }
    for v in &c.vertices {
        let p = v.point_f64();
        for &(sx, sy) in &shifts {
            svg.circle(vp.map((p.0 + sx, p.1 + sy)), 4.0, "#c0392b", "none");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimer::{characteristic_polynomial, enumerate_matchings, rotation_isomorphism, square_dimer};
    use crate::lattice::{unit_square, AffineMap};

    fn q(a: i64, b: i64) -> Q {
        Q::new(a, b)
    }

    fn line(n: (i64, i64), c: Q) -> TorusLine {
        TorusLine::with_normal(n.into(), c).unwrap()
    }

    /// Lines of the asymptotic boundary of `xy + x − y + 1`.
    fn fig4() -> TorusArrangement {
        TorusArrangement::new(vec![
            line((1, 0), q(1, 2)),
            line((0, 1), q(1, 2)),
            line((-1, 0), q(0, 1)),
            line((0, -1), q(0, 1)),
        ])
    }

    fn cell_containing(c: &ColoredCellComplex, p: (f64, f64)) -> CellColor {
        c.cells
            .iter()
            .find(|cell| {
                let (x, y) = cell.centroid_f64();
                (x - p.0).abs() < 1e-12 && (y - p.1).abs() < 1e-12
            })
            .map(|cell| cell.color)
            .expect("cell")
    }

    #[test]
    fn crossing_points_and_parameters() {
        let a = TorusArrangement::new(vec![line((1, 1), q(1, 3)), line((1, -1), q(0, 1))]);
        let vs = a.vertices().unwrap();
        assert_eq!(vs.len(), 2);
        for v in &vs {
            for l in [&a.lines[0], &a.lines[1]] {
                assert!(frac(l.side_value(v.point) - l.offset).is_zero());
                assert_eq!(frac_pt(l.point_at(l.parameter_of(v.point))), v.point);
            }
        }
    }

    #[test]
    fn fig4_coloring() {
        let c = color_cells(&fig4()).unwrap();
        assert_eq!(c.vertices.len(), 4);
        assert_eq!(c.cells.len(), 4);
        assert_eq!(cell_containing(&c, (0.25, 0.25)), CellColor::Black);
        assert_eq!(cell_containing(&c, (0.75, 0.75)), CellColor::White);
        assert_eq!(cell_containing(&c, (0.25, 0.75)), CellColor::None);
        assert_eq!(cell_containing(&c, (0.75, 0.25)), CellColor::None);
        let mut pts: Vec<Pt> = c.vertices.iter().map(|v| v.point).collect();
        pts.sort();
        assert_eq!(pts, vec![(q(0, 1), q(0, 1)), (q(0, 1), q(1, 2)), (q(1, 2), q(0, 1)), (q(1, 2), q(1, 2))]);
        assert!(is_admissible(&c));
    }

    #[test]
    fn reversing_all_lines_swaps_colors() {
        let a = fig4();
        let r = TorusArrangement::new(a.lines.iter().map(|l| l.reversed()).collect());
        let (c, d) = (color_cells(&a).unwrap(), color_cells(&r).unwrap());
        for p in [(0.25, 0.25), (0.75, 0.75), (0.25, 0.75)] {
            let swapped = match cell_containing(&c, p) {
                CellColor::White => CellColor::Black,
                CellColor::Black => CellColor::White,
                CellColor::None => CellColor::None,
            };
            assert_eq!(cell_containing(&d, p), swapped);
        }
    }

    #[test]
    fn inadmissible_variants() {
        // one line reversed: colored cells disappear
        let mut a = fig4();
        a.lines[0] = a.lines[0].reversed();
        assert!(!is_admissible(&color_cells(&a).unwrap()));
        // two parallel lines moved onto each other
        let mut b = fig4();
        b.lines[2] = b.lines[0].reversed();
        assert!(!b.is_simple());
        assert!(color_cells(&b).is_err());
        assert!(!is_admissible(&color_cells(&TorusArrangement::new(vec![])).unwrap()));
    }

    #[test]
    fn parallel_lines_form_strips() {
        let a = TorusArrangement::new(vec![line((1, 0), q(1, 4)), line((-1, 0), q(1, 4))]);
        let c = color_cells(&a).unwrap();
        assert!(c.vertices.is_empty());
        let mut colors: Vec<CellColor> = c.cells.iter().map(|x| x.color).collect();
        colors.sort();
        // θ ∈ (1/4, 3/4) lies left of both lines
        assert_eq!(colors, vec![CellColor::White, CellColor::Black]);
        let same = TorusArrangement::new(vec![line((1, 0), q(1, 4)), line((1, 0), q(3, 4))]);
        assert!(color_cells(&same).unwrap().cells.iter().all(|x| x.color == CellColor::None));
        assert!(!is_admissible(&c));
    }

    #[test]
    fn fig4_dimer_is_square_dimer() {
        let g = extract_dimer(&color_cells(&fig4()).unwrap()).unwrap();
        assert_eq!((g.whites().len(), g.blacks().len(), g.edges.len()), (1, 1, 4));
        let mut offs: Vec<(i64, i64)> = g.edges.iter().map(|e| (e.offset.u, e.offset.v)).collect();
        offs.sort();
        assert_eq!(offs, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert!(rotation_isomorphism(&g, &square_dimer(), false).is_some());
        let ms = enumerate_matchings(&g);
        assert_eq!(ms.len(), 4);
        let np = characteristic_polynomial(&g, &ms[0]).unwrap().newton_polygon();
        assert!(np.translation_equivalent(&unit_square()));
    }

    #[test]
    fn unit_square_has_unique_admissible_class() {
        let classes = sweep_classes(&unit_square(), DEFAULT_GRID).unwrap();
        assert!(classes.iter().all(|c| c.complex.vertices.len() == 4 && c.complex.cells.len() == 4));
        let adm: Vec<&ArrangementClass> = classes.iter().filter(|c| c.admissible).collect();
        assert_eq!(adm.len(), 1);
        let pts: Vec<(f64, f64)> = adm[0].complex.vertices.iter().map(|v| v.point_f64()).collect();
        let target = [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)];
        let t = pts[0];
        let mut moved: Vec<(f64, f64)> = pts.iter().map(|p| ((p.0 - t.0).rem_euclid(1.0), (p.1 - t.1).rem_euclid(1.0))).collect();
        moved.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want = target.to_vec();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(moved, want);
        let g = unique_admissible(&unit_square()).unwrap();
        assert!(rotation_isomorphism(&g, &square_dimer(), false).is_some());
    }

    #[test]
    fn sheared_square_gives_equivalent_dimer() {
        let m = AffineMap::from_columns((1, 1).into(), (0, 1).into(), LatticePoint::ORIGIN);
        let p = m.apply_polygon(&unit_square());
        let g = unique_admissible(&p).unwrap();
        assert!(rotation_isomorphism(&g, &square_dimer(), false).is_some());
        let ms = enumerate_matchings(&g);
        let np = characteristic_polynomial(&g, &ms[0]).unwrap().newton_polygon();
        assert!(np.translation_equivalent(&p));
    }

    #[test]
    fn rejects_non_parallelograms() {
        let tri = LatticePolygon::hull([(0, 0), (1, 0), (0, 1)].map(LatticePoint::from)).unwrap();
        assert!(matches!(unique_admissible(&tri), Err(Error::NotParallelogram(_))));
    }

    #[test]
    fn admissibility_invariant_under_translation() {
        let a = fig4();
        for t in [(q(1, 3), q(1, 7)), (q(2, 5), q(0, 1))] {
            let moved = TorusArrangement::new(
                a.lines
                    .iter()
                    .map(|l| {
                        let n = l.normal();
                        TorusLine::new(l.direction, l.offset + t.0 * n.u + t.1 * n.v).unwrap()
                    })
                    .collect(),
            );
            let (c, d) = (color_cells(&a).unwrap(), color_cells(&moved).unwrap());
            assert!(is_admissible(&d));
            assert_eq!(canonical_form(&c), canonical_form(&d));
        }
    }
}
