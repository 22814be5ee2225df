//! Integer lattice geometry: points, convex lattice polygons, affine lattice
//! maps and parallelogram normal forms.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub u: i64,
    pub v: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { u: 0, v: 0 };

    pub const fn new(u: i64, v: i64) -> Self {
        LatticePoint { u, v }
    }

    pub fn cross(self, other: LatticePoint) -> i64 {
        self.u * other.v - self.v * other.u
    }

    pub fn dot(self, other: LatticePoint) -> i64 {
        self.u * other.u + self.v * other.v
    }

    /// Lattice length of the vector (gcd of its coordinates).
    pub fn lattice_length(self) -> i64 {
        num_integer::gcd(self.u, self.v)
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.u + o.u, self.v + o.v)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.u - o.u, self.v - o.v)
    }
}

impl Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint::new(-self.u, -self.v)
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((u, v): (i64, i64)) -> Self {
        LatticePoint::new(u, v)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

/// Convex lattice polygon. Vertices are counterclockwise, start at the
/// lexicographically smallest vertex, and contain no collinear triples, so
/// structural equality is polygon equality. Degenerate hulls (a point or a
/// segment) are kept with one or two vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

impl LatticePolygon {
    /// Convex hull of a nonempty point set.
    pub fn hull<I: IntoIterator<Item = LatticePoint>>(points: I) -> Result<Self> {
        let mut pts: Vec<LatticePoint> = points.into_iter().collect();
        if pts.is_empty() {
            return Err(Error::InvalidPolygon("empty point set".into()));
        }
        pts.sort();
        pts.dedup();
        if pts.len() <= 2 {
            return Ok(LatticePolygon { vertices: pts });
        }
        // Andrew's monotone chain, dropping collinear points.
        let turn = |o: LatticePoint, a: LatticePoint, b: LatticePoint| (a - o).cross(b - o);
        let mut lower: Vec<LatticePoint> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<LatticePoint> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        // all points collinear: monotone chain returns both endpoints
        Ok(LatticePolygon::canonical(lower))
    }

    /// Builds a polygon from vertices, validating convexity and orientation.
    pub fn from_vertices(vertices: Vec<LatticePoint>) -> Result<Self> {
        let hull = LatticePolygon::hull(vertices.iter().copied())?;
        if hull.vertices.len() != vertices.len() {
            return Err(Error::InvalidPolygon(format!(
                "vertices {:?} are not in convex position",
                vertices
            )));
        }
        Ok(hull)
    }

    fn canonical(mut vertices: Vec<LatticePoint>) -> Self {
        if vertices.len() >= 3 && signed_area2(&vertices) < 0 {
            vertices.reverse();
        }
        if let Some(start) = vertices
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| **p)
            .map(|(i, _)| i)
        {
            vertices.rotate_left(start);
        }
        LatticePolygon { vertices }
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// Counterclockwise edge vectors.
    pub fn edges(&self) -> Vec<(LatticePoint, LatticePoint)> {
        let n = self.vertices.len();
        if n < 2 {
            return Vec::new();
        }
        if n == 2 {
            return vec![(self.vertices[0], self.vertices[1]), (self.vertices[1], self.vertices[0])];
        }
        (0..n)
            .map(|i| (self.vertices[i], self.vertices[(i + 1) % n]))
            .collect()
    }

    /// Twice the area.
    pub fn area2(&self) -> i64 {
        signed_area2(&self.vertices).abs()
    }

    pub fn translate(&self, by: LatticePoint) -> LatticePolygon {
        LatticePolygon::canonical(self.vertices.iter().map(|&p| p + by).collect())
    }

    /// Translate so the lexicographically smallest vertex sits at the origin.
    pub fn normalized_translation(&self) -> LatticePolygon {
        self.translate(-self.vertices[0])
    }

    /// Equality up to a lattice translation.
    pub fn translation_equivalent(&self, other: &LatticePolygon) -> bool {
        self.normalized_translation() == other.normalized_translation()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        match self.vertices.len() {
            1 => self.vertices[0] == p,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                (b - a).cross(p - a) == 0 && (p - a).dot(b - a) >= 0 && (p - b).dot(a - b) >= 0
            }
            _ => self.edges().iter().all(|&(a, b)| (b - a).cross(p - a) >= 0),
        }
    }
}

fn signed_area2(v: &[LatticePoint]) -> i64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum()
}

/// Affine map `p ↦ M p + t` on the integer lattice. `matrix` is row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    pub matrix: [[i64; 2]; 2],
    pub translation: LatticePoint,
}

/// Alias used where the map is required to be unimodular.
pub type AffineUnimodularMap = AffineMap;

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap {
        matrix: [[1, 0], [0, 1]],
        translation: LatticePoint::ORIGIN,
    };

    /// Map with the given matrix columns and translation.
    pub fn from_columns(c1: LatticePoint, c2: LatticePoint, translation: LatticePoint) -> Self {
        AffineMap {
            matrix: [[c1.u, c2.u], [c1.v, c2.v]],
            translation,
        }
    }

    pub fn translation(t: LatticePoint) -> Self {
        AffineMap {
            translation: t,
            ..AffineMap::IDENTITY
        }
    }

    pub fn determinant(&self) -> i64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs() == 1
    }

    pub fn linear(&self, p: LatticePoint) -> LatticePoint {
        let m = &self.matrix;
        LatticePoint::new(m[0][0] * p.u + m[0][1] * p.v, m[1][0] * p.u + m[1][1] * p.v)
    }

    pub fn apply(&self, p: LatticePoint) -> LatticePoint {
        self.linear(p) + self.translation
    }

    pub fn apply_polygon(&self, poly: &LatticePolygon) -> LatticePolygon {
        LatticePolygon::hull(poly.vertices().iter().map(|&p| self.apply(p)))
            .expect("image of a nonempty polygon is nonempty")
    }

    /// Inverse of a unimodular map.
    pub fn inverse(&self) -> Option<AffineMap> {
        let d = self.determinant();
        if d.abs() != 1 {
            return None;
        }
        let m = &self.matrix;
        let inv = [[m[1][1] * d, -m[0][1] * d], [-m[1][0] * d, m[0][0] * d]];
        let lin = AffineMap {
            matrix: inv,
            translation: LatticePoint::ORIGIN,
        };
        let t = -lin.linear(self.translation);
        Some(AffineMap {
            matrix: inv,
            translation: t,
        })
    }

    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        let a = &self.matrix;
        let b = &inner.matrix;
        let mut m = [[0i64; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        AffineMap {
            matrix: m,
            translation: self.linear(inner.translation) + self.translation,
        }
    }
}

/// The unit square with vertices (0,0), (1,0), (1,1), (0,1).
pub fn unit_square() -> LatticePolygon {
    LatticePolygon::from_vertices(vec![
        LatticePoint::new(0, 0),
        LatticePoint::new(1, 0),
        LatticePoint::new(1, 1),
        LatticePoint::new(0, 1),
    ])
    .expect("unit square is convex")
}

pub fn is_lattice_parallelogram(p: &LatticePolygon) -> bool {
    let v = p.vertices();
    if v.len() != 4 {
        return false;
    }
    let e: Vec<LatticePoint> = p.edges().iter().map(|&(a, b)| b - a).collect();
    e[0] == -e[2] && e[1] == -e[3]
}

/// Returns the affine map sending the unit square onto `p`, and whether that
/// map is unimodular.
pub fn normalize_parallelogram(p: &LatticePolygon) -> Result<(AffineMap, bool)> {
    if !is_lattice_parallelogram(p) {
        return Err(Error::NotParallelogram(format!("{:?}", p.vertices())));
    }
    let v = p.vertices();
    // vertices are ccw from the smallest, so (v1-v0, v3-v0) is positively oriented
    let map = AffineMap::from_columns(v[1] - v[0], v[3] - v[0], v[0]);
    Ok((map, map.is_unimodular()))
}
