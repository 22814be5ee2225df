//! Branch points of the projection `(x, y) ↦ s` of a fiber `{w = t}`.
//!
//! For `w = x + a/x + y + b/y` the fiber over `t` splits as `x + a/x = s` and
//! `y + b/y = t − s`; the first degenerates at `s = ±2√a`, the second at
//! `s = t ∓ 2√b`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::laurent::LaurentPolynomial;

use super::critical::critical_data;

pub const DEFAULT_STEPS: usize = 1024;
pub const COLLISION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BranchKind {
    /// Degeneration of the `x` equation.
    X,
    /// Degeneration of the `y` equation.
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub kind: BranchKind,
    pub at: Complex64,
}

/// `x + a/x + y + b/y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberModel {
    pub a: Complex64,
    pub b: Complex64,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl FiberModel {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    /// `x − 1/x + y + 1/y`.
    pub fn mirror() -> Self {
        Self::new(c(-1.0, 0.0), c(1.0, 0.0))
    }

    /// `x + 1/x + y + 2/y`.
    pub fn deformed() -> Self {
        Self::new(c(1.0, 0.0), c(2.0, 0.0))
    }

    /// Member `x + (2τ−1)/x + y + (τ+1)/y` of the deformation joining the two.
    pub fn family(tau: Complex64) -> Self {
        Self::new(2.0 * tau - 1.0, tau + 1.0)
    }

    /// Reads `a` and `b` off a potential of the form `x + a/x + y + b/y`.
    pub fn from_potential(w: &LaurentPolynomial) -> Result<Self> {
        let one = c(1.0, 0.0);
        let coeff = |u, v| w.coefficient(LatticePoint::new(u, v));
        let (a, b) = (coeff(-1, 0), coeff(0, -1));
        if w.len() != 4 || coeff(1, 0) != one || coeff(0, 1) != one || a.norm() == 0.0 || b.norm() == 0.0 {
            return Err(Error::Degenerate);
        }
        Ok(Self::new(a, b))
    }

    pub fn potential(&self) -> LaurentPolynomial {
        let one = c(1.0, 0.0);
        LaurentPolynomial::new([
            (LatticePoint::new(1, 0), one),
            (LatticePoint::new(-1, 0), self.a),
            (LatticePoint::new(0, 1), one),
            (LatticePoint::new(0, -1), self.b),
        ])
        .expect("nonzero")
    }

    /// Both roots of `x + a/x = s`.
    pub fn x_roots(&self, s: Complex64) -> [Complex64; 2] {
        quadratic_roots(s, self.a)
    }

    /// Both roots of `y + b/y = t − s`.
    pub fn y_roots(&self, s: Complex64, t: Complex64) -> [Complex64; 2] {
        quadratic_roots(t - s, self.b)
    }

    pub fn branch_points(&self, t: Complex64) -> BranchSet {
        let (ra, rb) = (2.0 * self.a.sqrt(), 2.0 * self.b.sqrt());
        BranchSet {
            t,
            points: [
                BranchPoint { kind: BranchKind::X, at: ra },
                BranchPoint { kind: BranchKind::X, at: -ra },
                BranchPoint { kind: BranchKind::Y, at: t + rb },
                BranchPoint { kind: BranchKind::Y, at: t - rb },
            ],
        }
    }

    /// Straight paths from the origin to the critical values, in the order
    /// returned by [`critical_data`].
    pub fn vanishing_paths(&self) -> Result<Vec<VanishingPath>> {
        Ok(critical_data(&self.potential())?
            .into_iter()
            .enumerate()
            .map(|(index, p)| VanishingPath { index, end: p.value })
            .collect())
    }
}

/// Roots of `z + k/z = m`, i.e. `z² − m z + k = 0`.
fn quadratic_roots(m: Complex64, k: Complex64) -> [Complex64; 2] {
    let d = (m * m - 4.0 * k).sqrt();
    let (r1, r2) = ((m + d) / 2.0, (m - d) / 2.0);
    // the larger root is accurate; recover the other from the product
    if r1.norm() >= r2.norm() {
        [r1, k / r1]
    } else {
        [k / r2, r2]
    }
}

/// The four branch points over one value of `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchSet {
    pub t: Complex64,
    pub points: [BranchPoint; 4],
}

impl BranchSet {
    pub fn positions(&self) -> [Complex64; 4] {
        self.points.map(|p| p.at)
    }

    /// Closest pair `(i, j, distance)`.
    pub fn closest_pair(&self) -> (usize, usize, f64) {
        let mut best = (0, 1, f64::INFINITY);
        for i in 0..4 {
            for j in i + 1..4 {
                let d = (self.points[i].at - self.points[j].at).norm();
                if d < best.2 {
                    best = (i, j, d);
                }
            }
        }
        best
    }
}

/// `t(τ) = τ · end` for `τ ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanishingPath {
    pub index: usize,
    pub end: Complex64,
}

impl VanishingPath {
    pub fn at(&self, tau: f64) -> Complex64 {
        self.end * tau
    }
}

/// Reorders `next` so each entry is the nearest to the corresponding entry of
/// `prev`, choosing the permutation with the smallest total displacement.
fn match_nearest(prev: &[BranchPoint; 4], next: [BranchPoint; 4]) -> [BranchPoint; 4] {
    let mut best = (f64::INFINITY, [0usize, 1, 2, 3]);
    let mut perm = [0usize, 1, 2, 3];
    permutations(&mut perm, 0, &mut |p| {
        let cost: f64 = (0..4)
            .map(|i| {
                if prev[i].kind != next[p[i]].kind {
                    f64::INFINITY
                } else {
                    (prev[i].at - next[p[i]].at).norm_sqr()
                }
            })
            .sum();
        if cost < best.0 {
            best = (cost, *p);
        }
    });
    best.1.map(|k| next[k])
}

fn permutations(p: &mut [usize; 4], k: usize, f: &mut impl FnMut(&[usize; 4])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Continuation of the four branch points along a path of models and fiber
/// values, labels fixed by continuity from the first sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Path parameter of each sample.
    pub params: Vec<f64>,
    pub samples: Vec<[BranchPoint; 4]>,
}

impl Trajectory {
    fn follow(params: Vec<f64>, mut at: impl FnMut(f64) -> [BranchPoint; 4]) -> Self {
        let mut samples: Vec<[BranchPoint; 4]> = Vec::with_capacity(params.len());
        for &u in &params {
            let raw = at(u);
            let next = match samples.last() {
                Some(prev) => match_nearest(prev, raw),
                None => raw,
            };
            samples.push(next);
        }
        Self { params, samples }
    }

    /// Track of branch point `k`.
    pub fn track(&self, k: usize) -> Vec<Complex64> {
        self.samples.iter().map(|s| s[k].at).collect()
    }

    /// Largest displacement of any branch point between consecutive samples.
    pub fn max_step(&self) -> f64 {
        self.samples
            .windows(2)
            .flat_map(|w| (0..4).map(move |k| (w[1][k].at - w[0][k].at).norm()))
            .fold(0.0, f64::max)
    }

    /// Largest parameter increment.
    pub fn max_param_step(&self) -> f64 {
        self.params.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }
}

/// Outcome of following a vanishing path to its end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Collision {
    pub path: VanishingPath,
    /// Branch point that does not move along the path (an `x` point).
    pub fixed: usize,
    /// Branch point that runs into it (a `y` point).
    pub moving: usize,
    /// Where the moving point starts, at `t = 0`.
    pub start: Complex64,
    /// Where the pair meets.
    pub meet: Complex64,
    /// Distance of the pair at the end of the path.
    pub gap: f64,
    /// Largest distance between the moving point's trace and the segment
    /// `[start, meet]`.
    pub segment_error: f64,
    pub trajectory: Trajectory,
}

impl Collision {
    pub fn segment(&self) -> (Complex64, Complex64) {
        (self.start, self.meet)
    }
}

/// Sample parameters on `[0, 1]` with uniform steps, the last one halved
/// repeatedly to resolve the approach to the end.
fn path_params(steps: usize) -> Vec<f64> {
    let steps = steps.max(2);
    let mut params: Vec<f64> = (0..steps).map(|k| k as f64 / steps as f64).collect();
    let mut h = 1.0 / steps as f64;
    for _ in 0..8 {
        h /= 2.0;
        params.push(1.0 - h);
    }
    params.push(1.0);
    params
}

/// Follows the branch points along `path` and finds the unique colliding pair.
pub fn track_collision(model: &FiberModel, path: &VanishingPath, steps: usize) -> Result<Collision> {
    let trajectory = Trajectory::follow(path_params(steps), |u| model.branch_points(path.at(u)).points);
    let last = trajectory.samples.last().expect("samples");
    let set = BranchSet { t: path.end, points: *last };
    let (i, j, gap) = set.closest_pair();
    if gap > COLLISION_TOLERANCE {
        return Err(Error::NoCollision(gap));
    }
    // only one pair may meet
    for a in 0..4 {
        for b in a + 1..4 {
            if (a, b) != (i, j) && (last[a].at - last[b].at).norm() <= COLLISION_TOLERANCE {
                return Err(Error::Degenerate);
            }
        }
    }
    let moved = |k: usize| (trajectory.samples[0][k].at - last[k].at).norm();
    let (fixed, moving) = if moved(i) <= moved(j) { (i, j) } else { (j, i) };
    let start = trajectory.samples[0][moving].at;
    let meet = last[fixed].at;
    let segment_error = trajectory
        .track(moving)
        .into_iter()
        .map(|z| point_segment_distance(z, start, meet))
        .fold(0.0, f64::max);
    Ok(Collision { path: *path, fixed, moving, start, meet, gap, segment_error, trajectory })
}

/// Collisions along every vanishing path of `model`.
pub fn track_all(model: &FiberModel, steps: usize) -> Result<Vec<Collision>> {
    use rayon::prelude::*;
    model.vanishing_paths()?.par_iter().map(|p| track_collision(model, p, steps)).collect()
}

pub fn point_segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let u = ((z - a) * d.conj()).re / len2;
    (z - (a + d * u.clamp(0.0, 1.0))).norm()
}

/// Deformation time along the half circle from `τ = 0` to `τ = 1` through
/// `(1 + i)/2`; keeps `2τ − 1` on the unit circle so the `x` branch points
/// never meet.
pub fn deformation_time(u: f64) -> Complex64 {
    (1.0 + Complex64::from_polar(1.0, PI * (1.0 - u))) / 2.0
}

/// Branch points of the fiber over `t` as the potential moves through the
/// deformation family.
pub fn deformation_trajectory(t: Complex64, steps: usize) -> Trajectory {
    let steps = steps.max(1);
    let params = (0..=steps).map(|k| k as f64 / steps as f64).collect();
    Trajectory::follow(params, |u| FiberModel::family(deformation_time(u)).branch_points(t).points)
}
