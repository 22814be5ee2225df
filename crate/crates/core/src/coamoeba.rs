//! Coamoebas: sampling the zero locus, the argument map, asymptotic
//! boundary lines and checks of the predicted cell structure.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hananyvegh::{color_cells, draw_complex, CellColor, ColoredCellComplex, TorusArrangement, TorusLine};
use crate::laurent::{newton_polygon, LaurentPolynomial};
use crate::roots::roots;
use crate::svg::Viewport;

/// `(arg x, arg y) / 2π` reduced to `[0,1)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    pub theta: f64,
    pub phi: f64,
}

fn unit(t: f64) -> f64 {
    let r = t.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

impl TorusPoint {
    pub fn new(theta: f64, phi: f64) -> Self {
        TorusPoint {
            theta: unit(theta),
            phi: unit(phi),
        }
    }

    pub fn arg(x: Complex64, y: Complex64) -> Self {
        TorusPoint::new(x.arg() / (2.0 * PI), y.arg() / (2.0 * PI))
    }

    /// Max-norm distance on the torus.
    pub fn distance(self, o: TorusPoint) -> f64 {
        let d = |a: f64, b: f64| {
            let t = (a - b).rem_euclid(1.0);
            t.min(1.0 - t)
        };
        d(self.theta, o.theta).max(d(self.phi, o.phi))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub at: TorusPoint,
    pub x: Complex64,
    pub y: Complex64,
    /// Jacobian of the argument map on the locus, normalized to `[-1,1]`;
    /// positive where it preserves the complex orientation.
    pub jacobian: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoamoebaSample {
    pub points: Vec<SamplePoint>,
    /// Roots dropped for exceeding the residual bound.
    pub rejected: usize,
    pub residual_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingGrid {
    pub radial: usize,
    pub angular: usize,
    pub modulus_range: (f64, f64),
    pub residual_bound: f64,
}

impl Default for SamplingGrid {
    fn default() -> Self {
        SamplingGrid {
            radial: 400,
            angular: 64,
            modulus_range: (1e-2, 1e2),
            residual_bound: 1e-9,
        }
    }
}

impl SamplingGrid {
    pub fn new(radial: usize, angular: usize) -> Self {
        SamplingGrid {
            radial,
            angular,
            ..Default::default()
        }
    }

    /// Log-spaced moduli times equally spaced angles `2πj/angular`.
    fn nodes(&self) -> Vec<Complex64> {
        let (lo, hi) = self.modulus_range;
        let (llo, lhi) = (lo.ln(), hi.ln());
        let mut out = Vec::with_capacity(self.radial * self.angular);
        for k in 0..self.radial {
            let t = if self.radial == 1 { 0.5 } else { k as f64 / (self.radial - 1) as f64 };
            let r = (llo + t * (lhi - llo)).exp();
            for j in 0..self.angular {
                out.push(Complex64::from_polar(r, 2.0 * PI * j as f64 / self.angular as f64));
            }
        }
        out
    }
}

/// Sign-carrying Jacobian `Im(x w_x · conj(y w_y)) / (|x w_x| |y w_y|)`.
///
/// Along the locus `d log y = g d log x` with `g = −x w_x / (y w_y)`, and the
/// argument map has determinant `−Im g` in the coordinates `log x`.
pub fn jacobian(dx: &LaurentPolynomial, dy: &LaurentPolynomial, x: Complex64, y: Complex64) -> f64 {
    let a = x * dx.eval(x, y);
    let b = y * dy.eval(x, y);
    let n = a.norm() * b.norm();
    if n == 0.0 {
        return 0.0;
    }
    (a * b.conj()).im / n
}

/// Samples the zero locus over the grid, solving for `y` at every grid `x`
/// and for `x` at every grid `y`. Output order follows the grid.
pub fn sample_zero_locus(w: &LaurentPolynomial, grid: &SamplingGrid) -> Result<CoamoebaSample> {
    if grid.radial == 0 || grid.angular == 0 || !(grid.modulus_range.0 > 0.0 && grid.modulus_range.1 >= grid.modulus_range.0) {
        return Err(Error::EmptyGrid);
    }
    let (ylo, yhi) = w.y_range();
    let (xlo, xhi) = w.x_range();
    if ylo == yhi && xlo == xhi {
        return Err(Error::Degenerate);
    }
    let dx = w.d_dx();
    let dy = w.d_dy();
    let nodes = grid.nodes();
    let swapped = w.swap_variables();
    let sweep = |solve_y: bool| -> Vec<(Vec<SamplePoint>, usize)> {
        nodes
            .par_iter()
            .map(|&t| {
                let coeffs = if solve_y { w.coefficients_in_y(t) } else { swapped.coefficients_in_y(t) };
                let mut pts = Vec::new();
                let mut bad = 0;
                for r in roots(&coeffs) {
                    let (x, y) = if solve_y { (t, r) } else { (r, t) };
                    if !(x.is_finite() && y.is_finite()) || w.eval(x, y).norm() > grid.residual_bound {
                        bad += 1;
                        continue;
                    }
                    pts.push(SamplePoint {
                        at: TorusPoint::arg(x, y),
                        x,
                        y,
                        jacobian: jacobian(&dx, &dy, x, y),
                    });
                }
                (pts, bad)
            })
            .collect()
    };
    let mut points = Vec::new();
    let mut rejected = 0;
    let mut passes = Vec::new();
    if ylo != yhi {
        passes.push(true);
    }
    if xlo != xhi {
        passes.push(false);
    }
    for solve_y in passes {
        for (p, b) in sweep(solve_y) {
            points.extend(p);
            rejected += b;
        }
    }
    Ok(CoamoebaSample {
        points,
        rejected,
        residual_bound: grid.residual_bound,
    })
}

/// Best rational approximation with denominator at most `max_den`.
fn to_rational(x: f64, max_den: i64) -> Rational64 {
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        let ai = a as i64;
        let (p2, q2) = (ai * p1 + p0, ai * q1 + q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let f = v - a;
        if f.abs() < 1e-12 {
            break;
        }
        v = 1.0 / f;
    }
    Rational64::new(p1, q1)
}

/// One oriented line per Newton polygon edge: the edge `m → m'` with
/// coefficients `a, b` gives `⟨m' − m, p⟩ ≡ arg(−a/b)/2π`, where the
/// binomial truncation `a x^m + b x^m'` vanishes.
///
/// Offsets are stored as rationals with denominator at most 10⁶.
pub fn asymptotic_boundary(w: &LaurentPolynomial) -> Result<TorusArrangement> {
    let poly = newton_polygon(w);
    let mut edges = poly.edges();
    if poly.vertices().len() == 2 {
        edges.truncate(1);
    }
    let mut lines = Vec::new();
    for (m, m2) in edges {
        if (m2 - m).lattice_length() != 1 {
            return Err(Error::NonPrimitiveEdge((m.u, m.v), (m2.u, m2.v)));
        }
        let (a, b) = (w.coefficient(m), w.coefficient(m2));
        let off = (-a / b).arg() / (2.0 * PI);
        lines.push(TorusLine::with_normal(m2 - m, to_rational(unit(off), 1_000_000))?);
    }
    Ok(TorusArrangement::new(lines))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictedCoamoeba {
    pub complex: ColoredCellComplex,
    pub tolerance: f64,
}

impl PredictedCoamoeba {
    pub fn from_polynomial(w: &LaurentPolynomial, tolerance: f64) -> Result<Self> {
        Ok(PredictedCoamoeba {
            complex: color_cells(&asymptotic_boundary(w)?)?,
            tolerance,
        })
    }

    /// Index of the cell containing `p` and the distance from `p` to that
    /// cell's boundary, or `None` when `p` lies within `eps` of a line.
    pub fn locate(&self, p: TorusPoint) -> Option<(usize, f64)> {
        for (ci, cell) in self.complex.cells.iter().enumerate() {
            if cell.corners.is_empty() {
                continue;
            }
            if let Some(d) = depth_in_cell(&self.cell_polygon(ci), p) {
                return Some((ci, d));
            }
        }
        None
    }

    fn cell_polygon(&self, ci: usize) -> Vec<(f64, f64)> {
        self.complex.cells[ci]
            .corners
            .iter()
            .map(|&(a, b)| (to_f64(a), to_f64(b)))
            .collect()
    }

    /// Torus distance from `p` to the closure of the colored cells.
    pub fn distance_to_colored(&self, p: TorusPoint) -> f64 {
        let mut best = f64::INFINITY;
        for (ci, cell) in self.complex.cells.iter().enumerate() {
            if cell.color == CellColor::None {
                continue;
            }
            best = best.min(distance_to_cell(&self.cell_polygon(ci), p));
        }
        for v in &self.complex.vertices {
            let (a, b) = v.point_f64();
            best = best.min(p.distance(TorusPoint::new(a, b)));
        }
        best
    }
}

fn to_f64(q: Rational64) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Lifts of `p` near a polygon given in lifted coordinates.
fn lifts(poly: &[(f64, f64)], p: TorusPoint) -> impl Iterator<Item = (f64, f64)> {
    let cx = poly.iter().map(|q| q.0).sum::<f64>() / poly.len().max(1) as f64;
    let cy = poly.iter().map(|q| q.1).sum::<f64>() / poly.len().max(1) as f64;
    let bx = p.theta + (cx - p.theta + 0.5).floor();
    let by = p.phi + (cy - p.phi + 0.5).floor();
    (-1..=1).flat_map(move |i| (-1..=1).map(move |j| (bx + i as f64, by + j as f64)))
}

fn seg_dist(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (vx, vy) = (b.0 - a.0, b.1 - a.1);
    let l2 = vx * vx + vy * vy;
    let t = if l2 == 0.0 { 0.0 } else { (((p.0 - a.0) * vx + (p.1 - a.1) * vy) / l2).clamp(0.0, 1.0) };
    let (dx, dy) = (p.0 - a.0 - t * vx, p.1 - a.1 - t * vy);
    (dx * dx + dy * dy).sqrt()
}

/// Signed distance of a point to a counterclockwise convex polygon:
/// positive inside.
fn signed_distance(poly: &[(f64, f64)], q: (f64, f64)) -> f64 {
    let n = poly.len();
    let mut inside = true;
    let mut d = f64::INFINITY;
    for k in 0..n {
        let (a, b) = (poly[k], poly[(k + 1) % n]);
        if (b.0 - a.0) * (q.1 - a.1) - (b.1 - a.1) * (q.0 - a.0) < 0.0 {
            inside = false;
        }
        d = d.min(seg_dist(q, a, b));
    }
    if inside {
        d
    } else {
        -d
    }
}

/// Depth of `p` inside the cell if some lift lies inside.
fn depth_in_cell(poly: &[(f64, f64)], p: TorusPoint) -> Option<f64> {
    if poly.len() < 3 {
        return None;
    }
    lifts(poly, p).map(|q| signed_distance(poly, q)).filter(|&d| d > 0.0).reduce(f64::max)
}

fn distance_to_cell(poly: &[(f64, f64)], p: TorusPoint) -> f64 {
    if poly.len() < 3 {
        return f64::INFINITY;
    }
    lifts(poly, p).map(|q| (-signed_distance(poly, q)).max(0.0)).fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStructureReport {
    pub samples: usize,
    pub containment_fraction: f64,
    /// Samples deeper than the tolerance inside uncolored cells.
    pub uncolored_violations: usize,
    /// Sub-squares of the refinement whose centers lie inside colored cells.
    pub coverage_required: usize,
    pub coverage_hit: usize,
    pub refinement: usize,
    pub tolerance: f64,
}

impl CellStructureReport {
    pub fn passes(&self, min_containment: f64) -> bool {
        self.containment_fraction >= min_containment && self.uncolored_violations == 0 && self.coverage_hit == self.coverage_required
    }
}

pub const COVERAGE_REFINEMENT: usize = 8;

pub fn verify_cell_structure(s: &CoamoebaSample, pred: &PredictedCoamoeba) -> CellStructureReport {
    let tol = pred.tolerance;
    let per: Vec<(bool, bool)> = s
        .points
        .par_iter()
        .map(|pt| {
            let inside = pred.distance_to_colored(pt.at) <= tol;
            let violation = match pred.locate(pt.at) {
                Some((ci, d)) => pred.complex.cells[ci].color == CellColor::None && d > tol,
                None => false,
            };
            (inside, violation)
        })
        .collect();
    let n = COVERAGE_REFINEMENT;
    let mut hit = vec![false; n * n];
    for pt in &s.points {
        let i = ((pt.at.theta * n as f64) as usize).min(n - 1);
        let j = ((pt.at.phi * n as f64) as usize).min(n - 1);
        hit[i * n + j] = true;
    }
    let (mut required, mut covered) = (0, 0);
    for i in 0..n {
        for j in 0..n {
            let c = TorusPoint::new((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64);
            if let Some((ci, _)) = pred.locate(c) {
                if pred.complex.cells[ci].color != CellColor::None {
                    required += 1;
                    covered += hit[i * n + j] as usize;
                }
            }
        }
    }
    let inside = per.iter().filter(|x| x.0).count();
    CellStructureReport {
        samples: s.points.len(),
        containment_fraction: if per.is_empty() { 0.0 } else { inside as f64 / per.len() as f64 },
        uncolored_violations: per.iter().filter(|x| x.1).count(),
        coverage_required: required,
        coverage_hit: covered,
        refinement: n,
        tolerance: tol,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSigns {
    pub cell: usize,
    pub color: CellColor,
    pub centroid: (f64, f64),
    pub positive: usize,
    pub negative: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientationReport {
    pub cells: Vec<CellSigns>,
    /// Samples inside the exclusion band around the lines.
    pub excluded: usize,
    pub band: f64,
}

impl OrientationReport {
    /// Constant sign per colored cell: positive on white, negative on black.
    pub fn passes(&self) -> bool {
        self.cells.iter().all(|c| match c.color {
            CellColor::White => c.negative == 0 && c.positive > 0,
            CellColor::Black => c.positive == 0 && c.negative > 0,
            CellColor::None => true,
        })
    }
}

/// Tallies Jacobian signs per colored cell, ignoring samples within ten
/// times the tolerance of a line.
pub fn verify_orientation(s: &CoamoebaSample, pred: &PredictedCoamoeba) -> OrientationReport {
    let band = 10.0 * pred.tolerance;
    let mut cells: Vec<CellSigns> = pred
        .complex
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| CellSigns {
            cell: i,
            color: c.color,
            centroid: c.centroid_f64(),
            positive: 0,
            negative: 0,
        })
        .collect();
    let located: Vec<Option<(usize, f64)>> = s.points.par_iter().map(|pt| pred.locate(pt.at)).collect();
    let mut excluded = 0;
    for (pt, loc) in s.points.iter().zip(located) {
        match loc {
            Some((ci, d)) if d > band => {
                if pt.jacobian > 0.0 {
                    cells[ci].positive += 1;
                } else if pt.jacobian < 0.0 {
                    cells[ci].negative += 1;
                }
            }
            _ => excluded += 1,
        }
    }
    OrientationReport { cells, excluded, band }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberReport {
    pub vertex: TorusPoint,
    pub epsilon: f64,
    /// `(|x|, |y|)` sorted by `|x|`.
    pub moduli: Vec<(f64, f64)>,
    pub monotone: bool,
    /// Largest gap between consecutive `ln|x|`.
    pub max_log_gap: f64,
    pub span: (f64, f64),
}

impl FiberReport {
    /// A single monotone arc whose `|x|` range covers `[lo, hi]` with no gap
    /// larger than `max_gap` in `ln|x|` inside that window.
    pub fn is_arc_spanning(&self, lo: f64, hi: f64, max_gap: f64) -> bool {
        let gap = self
            .moduli
            .windows(2)
            .filter(|w| w[1].0 >= lo && w[0].0 <= hi)
            .map(|w| (w[1].0 / w[0].0).ln())
            .fold(0.0, f64::max);
        self.monotone && gap <= max_gap && self.span.0 <= lo && self.span.1 >= hi
    }
}

pub const MIN_FIBER_SAMPLES: usize = 5;

/// Samples whose argument lies within `eps` of `v`.
pub fn fiber_samples(s: &CoamoebaSample, v: TorusPoint, eps: f64) -> Vec<SamplePoint> {
    s.points.iter().filter(|p| p.at.distance(v) <= eps).copied().collect()
}

pub fn vertex_fiber(s: &CoamoebaSample, v: TorusPoint, eps: f64) -> Result<FiberReport> {
    let near = fiber_samples(s, v, eps);
    if near.len() < MIN_FIBER_SAMPLES {
        return Err(Error::TooFewSamples {
            found: near.len(),
            required: MIN_FIBER_SAMPLES,
        });
    }
    let mut moduli: Vec<(f64, f64)> = near.iter().map(|p| (p.x.norm(), p.y.norm())).collect();
    moduli.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let tol = 1e-9;
    let up = moduli.windows(2).all(|w| w[1].1 >= w[0].1 * (1.0 - tol));
    let down = moduli.windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + tol));
    let max_log_gap = moduli.windows(2).map(|w| (w[1].0 / w[0].0).ln()).fold(0.0, f64::max);
    Ok(FiberReport {
        vertex: v,
        epsilon: eps,
        monotone: up || down,
        max_log_gap,
        span: (moduli[0].0, moduli[moduli.len() - 1].0),
        moduli,
    })
}

/// Point cloud over the shaded predicted complex and its lines; points are
/// green where the Jacobian is positive and purple where it is negative.
pub fn render_svg(s: &CoamoebaSample, pred: &PredictedCoamoeba, title: &str) -> String {
    let vp = Viewport::unit_torus(480.0);
    let mut svg = vp.canvas(title);
    draw_complex(&mut svg, &vp, &pred.complex);
    for p in &s.points {
        let c = if p.jacobian >= 0.0 { "#2e7d32" } else { "#6a1b9a" };
        svg.circle(vp.map((p.at.theta, p.at.phi)), 0.8, c, "none");
    }
    svg.render()
}

pub fn write_svg(s: &CoamoebaSample, pred: &PredictedCoamoeba, title: &str, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, render_svg(s, pred, title))?;
    Ok(())
}
