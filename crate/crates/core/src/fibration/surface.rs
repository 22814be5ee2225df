//! The fiber over `t = 0` as four copies of the `s`-plane glued along cuts.
//!
//! A sheet is a pair of labels `(i, j)`: `i` picks the root of the `x`
//! equation, `j` the root of the `y` equation. Labels come from square roots
//! whose branch cuts are the rays of the cut system, so crossing an `x` cut
//! flips `i` and crossing a `y` cut flips `j`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::branch::{BranchKind, BranchPoint, FiberModel};

pub type Sheet = usize;

pub fn sheet_index(i: u8, j: u8) -> Sheet {
    (2 * i + j) as usize
}

pub fn sheet_labels(s: Sheet) -> (u8, u8) {
    ((s / 2) as u8, (s % 2) as u8)
}

/// Square root with its branch cut along the ray `{r d : r > 0}`.
pub fn directed_sqrt(z: Complex64, d: Complex64) -> Complex64 {
    (-z / d).sqrt() * (-d).sqrt()
}

/// Half-line starting at a branch point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub branch: BranchPoint,
    /// Unit direction.
    pub direction: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Puncture {
    pub sheet: Sheet,
    /// Whether `x`, respectively `y`, tends to infinity (rather than zero).
    pub x_large: bool,
    pub y_large: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RibbonSurface {
    pub model: FiberModel,
    pub cuts: Vec<Cut>,
    /// Sheet permutation applied when crossing each cut.
    pub crossings: Vec<[Sheet; 4]>,
    pub punctures: Vec<Puncture>,
}

fn swap_x() -> [Sheet; 4] {
    let mut p = [0; 4];
    for (s, slot) in p.iter_mut().enumerate() {
        let (i, j) = sheet_labels(s);
        *slot = sheet_index(1 - i, j);
    }
    p
}

fn swap_y() -> [Sheet; 4] {
    let mut p = [0; 4];
    for (s, slot) in p.iter_mut().enumerate() {
        let (i, j) = sheet_labels(s);
        *slot = sheet_index(i, 1 - j);
    }
    p
}

fn compose(a: &[Sheet; 4], b: &[Sheet; 4]) -> [Sheet; 4] {
    let mut p = [0; 4];
    for s in 0..4 {
        p[s] = b[a[s]];
    }
    p
}

fn cycle_count(p: &[Sheet; 4]) -> usize {
    let mut seen = [false; 4];
    let mut n = 0;
    for s in 0..4 {
        if seen[s] {
            continue;
        }
        n += 1;
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            k = p[k];
        }
    }
    n
}

impl RibbonSurface {
    /// Cuts running straight away from the origin.
    pub fn new(model: FiberModel) -> Self {
        let dirs = model.branch_points(Complex64::new(0.0, 0.0)).points.map(|p| p.at / p.at.norm());
        Self::with_cut_directions(model, dirs)
    }

    /// Cut rays in the given directions, one per branch point in the order
    /// of [`FiberModel::branch_points`].
    pub fn with_cut_directions(model: FiberModel, directions: [Complex64; 4]) -> Self {
        let points = model.branch_points(Complex64::new(0.0, 0.0)).points;
        let cuts: Vec<Cut> = points
            .iter()
            .zip(directions)
            .map(|(&branch, d)| Cut { branch, direction: d / d.norm() })
            .collect();
        let crossings = cuts
            .iter()
            .map(|c| match c.branch.kind {
                BranchKind::X => swap_x(),
                BranchKind::Y => swap_y(),
            })
            .collect();
        let mut surface = Self { model, cuts, crossings, punctures: Vec::new() };
        surface.punctures = surface.find_punctures();
        surface
    }

    fn cut(&self, kind: BranchKind, k: usize) -> &Cut {
        self.cuts.iter().filter(|c| c.branch.kind == kind).nth(k).expect("two cuts of each kind")
    }

    /// Square root of the discriminant of the `x` equation, continuous off
    /// the `x` cuts.
    fn x_disc_root(&self, s: Complex64) -> Complex64 {
        let (c0, c1) = (self.cut(BranchKind::X, 0), self.cut(BranchKind::X, 1));
        directed_sqrt(s - c0.branch.at, c0.direction) * directed_sqrt(s - c1.branch.at, c1.direction)
    }

    fn y_disc_root(&self, s: Complex64) -> Complex64 {
        let (c0, c1) = (self.cut(BranchKind::Y, 0), self.cut(BranchKind::Y, 1));
        directed_sqrt(s - c0.branch.at, c0.direction) * directed_sqrt(s - c1.branch.at, c1.direction)
    }

    /// Fiber point over `s` on a sheet.
    pub fn point(&self, s: Complex64, sheet: Sheet) -> (Complex64, Complex64) {
        let (i, j) = sheet_labels(sheet);
        let sign = |k: u8| if k == 0 { 1.0 } else { -1.0 };
        let x = (s + sign(i) * self.x_disc_root(s)) / 2.0;
        let y = (-s + sign(j) * self.y_disc_root(s)) / 2.0;
        (x, y)
    }

    /// Sheet of the fiber point `(x, y)` over `s`.
    pub fn sheet_of(&self, s: Complex64, x: Complex64, y: Complex64) -> Sheet {
        let (x0, y0) = self.point(s, 0);
        let (x1, y1) = self.point(s, sheet_index(1, 1));
        let i = u8::from((x - x1).norm() < (x - x0).norm());
        let j = u8::from((y - y1).norm() < (y - y0).norm());
        sheet_index(i, j)
    }

    /// Sheet permutation for a small counterclockwise loop around cut `k`'s
    /// branch point, read from the cut system.
    pub fn monodromy(&self, k: usize) -> [Sheet; 4] {
        self.crossings[k]
    }

    /// The same permutation found by continuing the fiber numerically around
    /// a circle of the given radius.
    pub fn numeric_monodromy(&self, k: usize, radius: f64, steps: usize) -> [Sheet; 4] {
        let center = self.cuts[k].branch.at;
        // start on the side opposite the cut
        let start = center - self.cuts[k].direction * radius;
        let mut out = [0; 4];
        for (sheet, slot) in out.iter_mut().enumerate() {
            let (mut x, mut y) = self.point(start, sheet);
            for n in 1..=steps {
                let theta = std::f64::consts::TAU * n as f64 / steps as f64;
                let s = center + (start - center) * Complex64::from_polar(1.0, theta);
                x = nearest(self.model.x_roots(s), x);
                y = nearest(self.model.y_roots(s, Complex64::new(0.0, 0.0)), y);
            }
            *slot = self.sheet_of(start, x, y);
        }
        out
    }

    /// Monodromy around a loop enclosing every branch point.
    pub fn monodromy_at_infinity(&self) -> [Sheet; 4] {
        // cuts met by a large counterclockwise circle, in angular order
        let mut order: Vec<usize> = (0..self.cuts.len()).collect();
        order.sort_by(|&a, &b| self.cuts[a].direction.arg().total_cmp(&self.cuts[b].direction.arg()));
        order.iter().fold([0, 1, 2, 3], |acc, &k| compose(&acc, &self.crossings[k]))
    }

    /// Euler characteristic of the closed-up surface by Riemann–Hurwitz over
    /// the sphere.
    pub fn euler_characteristic(&self) -> i64 {
        let ramification: usize = self.crossings.iter().map(|p| 4 - cycle_count(p)).sum::<usize>()
            + (4 - cycle_count(&self.monodromy_at_infinity()));
        4 * 2 - ramification as i64
    }

    pub fn puncture_count(&self) -> usize {
        cycle_count(&self.monodromy_at_infinity())
    }

    fn find_punctures(&self) -> Vec<Puncture> {
        // a direction missing every cut
        let mut args: Vec<f64> = self.cuts.iter().map(|c| c.direction.arg()).collect();
        args.sort_by(f64::total_cmp);
        let gap = (0..args.len())
            .map(|k| {
                let next = if k + 1 < args.len() { args[k + 1] } else { args[0] + std::f64::consts::TAU };
                (next - args[k], (args[k] + next) / 2.0)
            })
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .map(|g| g.1)
            .unwrap_or(0.0);
        let s = Complex64::from_polar(1e6, gap);
        (0..4)
            .map(|sheet| {
                let (x, y) = self.point(s, sheet);
                Puncture { sheet, x_large: x.norm() > 1.0, y_large: y.norm() > 1.0 }
            })
            .collect()
    }
}

pub(crate) fn nearest(roots: [Complex64; 2], prev: Complex64) -> Complex64 {
    if (roots[0] - prev).norm() <= (roots[1] - prev).norm() {
        roots[0]
    } else {
        roots[1]
    }
}
