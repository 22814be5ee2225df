//! Bipartite graphs embedded on the torus: perfect matchings, homology
//! classes, Kasteleyn-signed characteristic polynomials, face structure and
//! isoradial feasibility.

mod fixtures;
mod io;
mod isoradial;
mod render;

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePolygon};
use crate::laurent::LaurentPolynomial;

pub use fixtures::{fig11_dimer, fig11_matching_d, fig24_dimer, square_dimer};
pub use io::{from_fixture_text, to_fixture_text, FIXTURE_VERSION};
pub use isoradial::{is_isoradial_feasible, isoradial_report, IsoradialReport};
pub use render::render_svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub color: Color,
    /// Position in the unit square fundamental domain.
    pub position: (f64, f64),
    /// Incident edge indices in counterclockwise order.
    pub rotation: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub white: usize,
    pub black: usize,
    /// Lattice translate of the black endpoint reached from the white one.
    pub offset: LatticePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimerModel {
    pub name: String,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub metadata: BTreeMap<String, String>,
}

/// Half-edge: `(edge, 0)` leaves the white endpoint, `(edge, 1)` the black one.
pub type Dart = (usize, u8);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PerfectMatching {
    /// Sorted edge indices.
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerData {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub chi: i64,
}

/// Characteristic polynomial with integer coefficients in formal variables
/// `z`, `w` (exponent pair = homology class).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPolynomial {
    pub terms: BTreeMap<LatticePoint, i64>,
}

impl CharPolynomial {
    pub fn newton_polygon(&self) -> LatticePolygon {
        LatticePolygon::hull(self.terms.keys().copied()).expect("nonempty")
    }

    pub fn to_laurent(&self) -> LaurentPolynomial {
        LaurentPolynomial::new(
            self.terms
                .iter()
                .map(|(&e, &c)| (e, num_complex::Complex64::new(c as f64, 0.0))),
        )
        .expect("nonzero")
    }
}

impl DimerModel {
    /// Builds a model whose rotation system is read off from node positions
    /// and edge offsets (straight-line drawing on the torus).
    pub fn from_geometry(
        name: &str,
        nodes: Vec<(String, Color, (f64, f64))>,
        edges: Vec<(String, usize, usize, LatticePoint)>,
    ) -> Result<Self> {
        let mut g = DimerModel {
            name: name.to_string(),
            nodes: nodes
                .into_iter()
                .map(|(id, color, position)| Node {
                    id,
                    color,
                    position,
                    rotation: Vec::new(),
                })
                .collect(),
            edges: edges
                .into_iter()
                .map(|(id, white, black, offset)| Edge { id, white, black, offset })
                .collect(),
            metadata: BTreeMap::new(),
        };
        g.assign_geometric_rotation();
        g.validate()?;
        Ok(g)
    }

    /// Vector from node `at` along edge `e` to the (lifted) other endpoint.
    pub fn edge_vector(&self, e: usize, from_white: bool) -> (f64, f64) {
        let edge = &self.edges[e];
        let w = self.nodes[edge.white].position;
        let b = self.nodes[edge.black].position;
        let v = (
            b.0 + edge.offset.u as f64 - w.0,
            b.1 + edge.offset.v as f64 - w.1,
        );
        if from_white {
            v
        } else {
            (-v.0, -v.1)
        }
    }

    pub fn assign_geometric_rotation(&mut self) {
        for n in 0..self.nodes.len() {
            let white = self.nodes[n].color == Color::White;
            let mut inc: Vec<(f64, usize)> = self
                .incident(n)
                .into_iter()
                .map(|e| {
                    let v = self.edge_vector(e, white);
                    (v.1.atan2(v.0), e)
                })
                .collect();
            inc.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            self.nodes[n].rotation = inc.into_iter().map(|(_, e)| e).collect();
        }
    }

    pub fn incident(&self, n: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.white == n || e.black == n)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn degree(&self, n: usize) -> usize {
        self.incident(n).len()
    }

    pub fn whites(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&n| self.nodes[n].color == Color::White).collect()
    }

    pub fn blacks(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&n| self.nodes[n].color == Color::Black).collect()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    /// Checks the structural invariants: bipartite edges, connectivity,
    /// minimum degree two and a rotation system consistent with incidence.
    pub fn validate(&self) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(Error::InvalidDimer("no nodes".into()));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.white >= self.nodes.len() || e.black >= self.nodes.len() {
                return Err(Error::InvalidDimer(format!("edge {} has a dangling endpoint", e.id)));
            }
            if self.nodes[e.white].color != Color::White || self.nodes[e.black].color != Color::Black {
                return Err(Error::InvalidDimer(format!("edge {i} ({}) does not join white to black", e.id)));
            }
        }
        for n in 0..self.nodes.len() {
            let mut inc = self.incident(n);
            if inc.len() < 2 {
                return Err(Error::InvalidDimer(format!("node {} has degree {}", self.nodes[n].id, inc.len())));
            }
            let mut rot = self.nodes[n].rotation.clone();
            inc.sort_unstable();
            rot.sort_unstable();
            if inc != rot {
                return Err(Error::RotationSystem(format!(
                    "rotation at node {} is not a permutation of its edges",
                    self.nodes[n].id
                )));
            }
        }
        if !self.is_connected() {
            return Err(Error::InvalidDimer("graph is disconnected".into()));
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(n) = queue.pop_front() {
            for e in self.incident(n) {
                let m = if self.edges[e].white == n { self.edges[e].black } else { self.edges[e].white };
                if !seen[m] {
                    seen[m] = true;
                    queue.push_back(m);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn dart_tail(&self, d: Dart) -> usize {
        if d.1 == 0 {
            self.edges[d.0].white
        } else {
            self.edges[d.0].black
        }
    }

    pub fn dart_head(&self, d: Dart) -> usize {
        self.dart_tail((d.0, 1 - d.1))
    }

    /// Next dart counterclockwise around the tail node.
    pub fn rotate_dart(&self, d: Dart) -> Dart {
        let tail = self.dart_tail(d);
        let rot = &self.nodes[tail].rotation;
        let k = rot.iter().position(|&e| e == d.0).expect("rotation contains edge");
        (rot[(k + 1) % rot.len()], d.1)
    }

    /// Next dart along the face on the left of `d`.
    pub fn face_successor(&self, d: Dart) -> Dart {
        let twin = (d.0, 1 - d.1);
        let head = self.dart_tail(twin);
        let rot = &self.nodes[head].rotation;
        let k = rot.iter().position(|&e| e == d.0).expect("rotation contains edge");
        (rot[(k + rot.len() - 1) % rot.len()], twin.1)
    }

    /// Faces as cyclic dart sequences (face on the left).
    pub fn faces(&self) -> Result<Vec<Vec<Dart>>> {
        self.validate()?;
        let mut seen = vec![[false; 2]; self.edges.len()];
        let mut faces = Vec::new();
        for e in 0..self.edges.len() {
            for s in 0..2u8 {
                if seen[e][s as usize] {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = (e, s);
                while !seen[d.0][d.1 as usize] {
                    seen[d.0][d.1 as usize] = true;
                    face.push(d);
                    d = self.face_successor(d);
                }
                if d != (e, s) {
                    return Err(Error::RotationSystem("face traversal did not close".into()));
                }
                faces.push(face);
            }
        }
        Ok(faces)
    }

    /// Homology of a dart sequence: offsets summed white→black, subtracted
    /// black→white.
    pub fn darts_homology(&self, darts: &[Dart]) -> LatticePoint {
        darts.iter().fold(LatticePoint::ORIGIN, |acc, &(e, s)| {
            let o = self.edges[e].offset;
            if s == 0 {
                acc + o
            } else {
                acc - o
            }
        })
    }
}

pub fn euler_check(g: &DimerModel) -> Result<EulerData> {
    let faces = g.faces()?;
    for f in &faces {
        let h = g.darts_homology(f);
        if h != LatticePoint::ORIGIN {
            return Err(Error::RotationSystem(format!(
                "face boundary has nonzero homology {h}; rotation and offsets disagree"
            )));
        }
    }
    let (v, e, f) = (g.nodes.len(), g.edges.len(), faces.len());
    let chi = v as i64 - e as i64 + f as i64;
    if chi != 0 {
        return Err(Error::RotationSystem(format!("Euler characteristic {chi}, not a torus")));
    }
    Ok(EulerData {
        vertices: v,
        edges: e,
        faces: f,
        chi,
    })
}

/// All perfect matchings, sorted lexicographically by edge set.
pub fn enumerate_matchings(g: &DimerModel) -> Vec<PerfectMatching> {
    let whites = g.whites();
    if whites.len() != g.blacks().len() {
        return Vec::new();
    }
    let mut black_used = vec![false; g.nodes.len()];
    let mut chosen = Vec::with_capacity(whites.len());
    let mut out = Vec::new();
    fn rec(
        g: &DimerModel,
        whites: &[usize],
        i: usize,
        used: &mut [bool],
        chosen: &mut Vec<usize>,
        out: &mut Vec<PerfectMatching>,
    ) {
        if i == whites.len() {
            let mut edges = chosen.clone();
            edges.sort_unstable();
            out.push(PerfectMatching { edges });
            return;
        }
        for e in g.incident(whites[i]) {
            let b = g.edges[e].black;
            if !used[b] {
                used[b] = true;
                chosen.push(e);
                rec(g, whites, i + 1, used, chosen, out);
                chosen.pop();
                used[b] = false;
            }
        }
    }
    rec(g, &whites, 0, &mut black_used, &mut chosen, &mut out);
    out.sort();
    out
}

pub fn is_perfect_matching(g: &DimerModel, m: &PerfectMatching) -> bool {
    let mut cover = vec![0usize; g.nodes.len()];
    for &e in &m.edges {
        if e >= g.edges.len() {
            return false;
        }
        cover[g.edges[e].white] += 1;
        cover[g.edges[e].black] += 1;
    }
    cover.iter().all(|&c| c == 1)
}

pub fn homology_class(g: &DimerModel, m: &PerfectMatching, reference: &PerfectMatching) -> Result<LatticePoint> {
    if !is_perfect_matching(g, m) || !is_perfect_matching(g, reference) {
        return Err(Error::InvalidDimer("matching does not belong to this dimer".into()));
    }
    let sum = |pm: &PerfectMatching| {
        pm.edges
            .iter()
            .fold(LatticePoint::ORIGIN, |acc, &e| acc + g.edges[e].offset)
    };
    Ok(sum(m) - sum(reference))
}

/// Edge signs (+1/−1) making every face of length `L` have sign product
/// −1 when `L ≡ 0 (mod 4)` and +1 when `L ≡ 2 (mod 4)`.
pub fn kasteleyn_signs(g: &DimerModel) -> Result<Vec<i8>> {
    let faces = g.faces()?;
    let n = g.edges.len();
    // GF(2) rows: edge bits followed by the right-hand side
    let mut rows: Vec<Vec<u8>> = faces
        .iter()
        .map(|f| {
            let mut r = vec![0u8; n + 1];
            for &(e, _) in f {
                r[e] ^= 1;
            }
            r[n] = u8::from(f.len() % 4 == 0);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..rows.len()).find(|&i| rows[i][col] == 1) else { continue };
        rows.swap(row, p);
        for i in 0..rows.len() {
            if i != row && rows[i][col] == 1 {
                let (a, b) = if i < row {
                    let (lo, hi) = rows.split_at_mut(row);
                    (&mut lo[i], &hi[0])
                } else {
                    let (lo, hi) = rows.split_at_mut(i);
                    (&mut hi[0], &lo[row])
                };
                for (x, y) in a.iter_mut().zip(b.iter()) {
                    *x ^= *y;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    if rows[row..].iter().any(|r| r[n] == 1) {
        return Err(Error::InvalidDimer("no Kasteleyn sign assignment exists".into()));
    }
    let mut bits = vec![0u8; n];
    for (r, c) in pivots {
        bits[c] = rows[r][n];
    }
    Ok(bits.into_iter().map(|b| if b == 1 { -1 } else { 1 }).collect())
}

fn permutation_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Signed sum over perfect matchings of `± z^a w^b`, where `(a,b)` are the
/// intersection numbers of `M − reference` with the basis cycles: a class
/// `(h1,h2)` contributes the exponent `(−h2, h1)`. Equals the Kasteleyn
/// determinant up to a monomial.
pub fn characteristic_polynomial(g: &DimerModel, reference: &PerfectMatching) -> Result<CharPolynomial> {
    let matchings = enumerate_matchings(g);
    if matchings.is_empty() {
        return Err(Error::NoMatchings);
    }
    let signs = kasteleyn_signs(g)?;
    let whites = g.whites();
    let blacks = g.blacks();
    let mut terms: BTreeMap<LatticePoint, i64> = BTreeMap::new();
    for m in &matchings {
        let mut perm = vec![0usize; whites.len()];
        let mut s: i64 = 1;
        for &e in &m.edges {
            let wi = whites.iter().position(|&w| w == g.edges[e].white).unwrap();
            let bi = blacks.iter().position(|&b| b == g.edges[e].black).unwrap();
            perm[wi] = bi;
            s *= signs[e] as i64;
        }
        s *= permutation_sign(&perm);
        let h = homology_class(g, m, reference)?;
        *terms.entry(LatticePoint::new(-h.v, h.u)).or_insert(0) += s;
    }
    terms.retain(|_, c| *c != 0);
    if terms.is_empty() {
        return Err(Error::InvalidDimer("characteristic polynomial cancelled to zero".into()));
    }
    Ok(CharPolynomial { terms })
}

/// Color-preserving isomorphism of rotation systems. With `mirror`, the
/// rotations of `b` are read clockwise. Returns the dart map `a → b`.
pub fn rotation_isomorphism(a: &DimerModel, b: &DimerModel, mirror: bool) -> Option<BTreeMap<Dart, Dart>> {
    if a.nodes.len() != b.nodes.len() || a.edges.len() != b.edges.len() || a.edges.is_empty() {
        return None;
    }
    let rot_b = |d: Dart| -> Dart {
        if !mirror {
            return b.rotate_dart(d);
        }
        let tail = b.dart_tail(d);
        let rot = &b.nodes[tail].rotation;
        let k = rot.iter().position(|&e| e == d.0).unwrap();
        (rot[(k + rot.len() - 1) % rot.len()], d.1)
    };
    let start: Dart = (0, 0);
    for e in 0..b.edges.len() {
        for s in 0..2u8 {
            let cand: Dart = (e, s);
            if a.nodes[a.dart_tail(start)].color != b.nodes[b.dart_tail(cand)].color {
                continue;
            }
            let mut map: BTreeMap<Dart, Dart> = BTreeMap::new();
            let mut used: BTreeMap<Dart, Dart> = BTreeMap::new();
            let mut queue = VecDeque::from([(start, cand)]);
            let mut ok = true;
            while let Some((da, db)) = queue.pop_front() {
                if let Some(&prev) = map.get(&da) {
                    if prev != db {
                        ok = false;
                        break;
                    }
                    continue;
                }
                if used.contains_key(&db)
                    || a.nodes[a.dart_tail(da)].color != b.nodes[b.dart_tail(db)].color
                    || a.nodes[a.dart_tail(da)].rotation.len() != b.nodes[b.dart_tail(db)].rotation.len()
                {
                    ok = false;
                    break;
                }
                map.insert(da, db);
                used.insert(db, da);
                queue.push_back((a.rotate_dart(da), rot_b(db)));
                queue.push_back(((da.0, 1 - da.1), (db.0, 1 - db.1)));
            }
            if ok && map.len() == 2 * a.edges.len() {
                return Some(map);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::unit_square;

    /// Permanent of the white × black multiplicity matrix, by brute force.
    fn permanent_oracle(g: &DimerModel) -> usize {
        let w = g.whites();
        let b = g.blacks();
        if w.len() != b.len() {
            return 0;
        }
        let mult = |i: usize, j: usize| {
            g.edges.iter().filter(|e| e.white == w[i] && e.black == b[j]).count()
        };
        let mut perm: Vec<usize> = (0..w.len()).collect();
        let mut total = 0;
        fn heap(k: usize, perm: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
            if k <= 1 {
                f(perm);
                return;
            }
            for i in 0..k {
                heap(k - 1, perm, f);
                let j = if k.is_multiple_of(2) { i } else { 0 };
                perm.swap(j, k - 1);
            }
        }
        heap(w.len(), &mut perm, &mut |p| {
            total += (0..p.len()).map(|i| mult(i, p[i])).product::<usize>();
        });
        total
    }

    fn diamond() -> LatticePolygon {
        LatticePolygon::hull(vec![
            LatticePoint::new(1, 0),
            LatticePoint::new(0, 1),
            LatticePoint::new(-1, 0),
            LatticePoint::new(0, -1),
        ])
        .unwrap()
    }

    #[test]
    fn square_matchings_and_classes() {
        let g = square_dimer();
        let ms = enumerate_matchings(&g);
        assert_eq!(ms.len(), 4);
        assert_eq!(ms.len(), permanent_oracle(&g));
        let reference = ms.iter().find(|m| g.edges[m.edges[0]].offset == LatticePoint::ORIGIN).unwrap();
        let mut classes: Vec<LatticePoint> = ms.iter().map(|m| homology_class(&g, m, reference).unwrap()).collect();
        classes.sort();
        assert_eq!(
            classes,
            vec![
                LatticePoint::new(0, 0),
                LatticePoint::new(0, 1),
                LatticePoint::new(1, 0),
                LatticePoint::new(1, 1)
            ]
        );
        let e10 = ms.iter().find(|m| g.edges[m.edges[0]].offset == LatticePoint::new(1, 0)).unwrap();
        assert_eq!(homology_class(&g, e10, reference).unwrap(), LatticePoint::new(1, 0));
        assert_eq!(homology_class(&g, e10, e10).unwrap(), LatticePoint::ORIGIN);
    }

    #[test]
    fn fixture_matching_counts_match_permanent() {
        for g in [square_dimer(), fig11_dimer(), fig24_dimer()] {
            assert_eq!(enumerate_matchings(&g).len(), permanent_oracle(&g), "{}", g.name);
        }
        assert_eq!(enumerate_matchings(&fig11_dimer()).len(), 8);
    }

    #[test]
    fn imbalanced_graph_has_no_matchings() {
        let g = DimerModel::from_geometry(
            "imbalanced",
            vec![
                ("w0".into(), Color::White, (0.25, 0.25)),
                ("w1".into(), Color::White, (0.75, 0.75)),
                ("b0".into(), Color::Black, (0.75, 0.25)),
            ],
            vec![
                ("e0".into(), 0, 2, LatticePoint::new(0, 0)),
                ("e1".into(), 0, 2, LatticePoint::new(-1, 0)),
                ("e2".into(), 1, 2, LatticePoint::new(0, 0)),
                ("e3".into(), 1, 2, LatticePoint::new(0, 1)),
            ],
        )
        .unwrap();
        assert!(enumerate_matchings(&g).is_empty());
        assert_eq!(
            characteristic_polynomial(&g, &PerfectMatching { edges: vec![] }),
            Err(Error::NoMatchings)
        );
    }

    #[test]
    fn matching_d_is_a_matching() {
        let g = fig11_dimer();
        assert!(enumerate_matchings(&g).contains(&fig11_matching_d()));
    }

    #[test]
    fn euler_data() {
        let e = |g: &DimerModel| {
            let d = euler_check(g).unwrap();
            (d.vertices, d.edges, d.faces, d.chi)
        };
        assert_eq!(e(&square_dimer()), (2, 4, 2, 0));
        assert_eq!(e(&fig11_dimer()), (4, 8, 4, 0));
        assert_eq!(e(&fig24_dimer()), (8, 12, 4, 0));
        let mut sizes: Vec<usize> = fig24_dimer().faces().unwrap().iter().map(|f| f.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![4, 4, 8, 8]);
    }

    #[test]
    fn broken_rotation_is_reported() {
        let mut g = fig11_dimer();
        g.nodes[0].rotation.swap(0, 1);
        assert!(matches!(euler_check(&g), Err(Error::RotationSystem(_))));
        let mut g = fig11_dimer();
        g.nodes[0].rotation.pop();
        assert!(matches!(g.validate(), Err(Error::RotationSystem(_))));
    }

    #[test]
    fn charpoly_newton_polygons() {
        let g = square_dimer();
        let r = &enumerate_matchings(&g)[0];
        assert!(characteristic_polynomial(&g, r).unwrap().newton_polygon().translation_equivalent(&unit_square()));
        for g in [fig11_dimer(), fig24_dimer()] {
            let ms = enumerate_matchings(&g);
            for r in &ms {
                let p = characteristic_polynomial(&g, r).unwrap();
                assert!(p.newton_polygon().translation_equivalent(&diamond()), "{}", g.name);
            }
        }
    }

    #[test]
    fn kasteleyn_coefficients_count_matchings_per_class() {
        for g in [square_dimer(), fig11_dimer(), fig24_dimer()] {
            let ms = enumerate_matchings(&g);
            let p = characteristic_polynomial(&g, &ms[0]).unwrap();
            let mut counts: BTreeMap<LatticePoint, i64> = BTreeMap::new();
            for m in &ms {
                let h = homology_class(&g, m, &ms[0]).unwrap();
                *counts.entry(LatticePoint::new(-h.v, h.u)).or_insert(0) += 1;
            }
            let abs: BTreeMap<LatticePoint, i64> = p.terms.iter().map(|(&k, &v)| (k, v.abs())).collect();
            assert_eq!(abs, counts, "{}", g.name);
        }
    }

    #[test]
    fn kasteleyn_sign_rule_holds_per_face() {
        for g in [square_dimer(), fig11_dimer(), fig24_dimer()] {
            let s = kasteleyn_signs(&g).unwrap();
            for f in g.faces().unwrap() {
                let prod: i64 = f.iter().map(|&(e, _)| s[e] as i64).product();
                let want = if f.len() % 4 == 0 { -1 } else { 1 };
                assert_eq!(prod, want);
            }
        }
    }

    fn relabeled(g: &DimerModel) -> DimerModel {
        // reverse node order and edge order
        let n = g.nodes.len();
        let m = g.edges.len();
        let mut h = g.clone();
        h.nodes = g
            .nodes
            .iter()
            .rev()
            .map(|nd| Node {
                rotation: nd.rotation.iter().map(|&e| m - 1 - e).collect(),
                ..nd.clone()
            })
            .collect();
        h.edges = g
            .edges
            .iter()
            .rev()
            .map(|e| Edge {
                white: n - 1 - e.white,
                black: n - 1 - e.black,
                ..e.clone()
            })
            .collect();
        h
    }

    #[test]
    fn relabeling_preserves_polygon_and_isomorphism() {
        for g in [square_dimer(), fig11_dimer(), fig24_dimer()] {
            let h = relabeled(&g);
            h.validate().unwrap();
            let pg = characteristic_polynomial(&g, &enumerate_matchings(&g)[0]).unwrap().newton_polygon();
            let ph = characteristic_polynomial(&h, &enumerate_matchings(&h)[0]).unwrap().newton_polygon();
            assert!(pg.translation_equivalent(&ph));
            assert!(rotation_isomorphism(&g, &h, false).is_some());
        }
        assert!(rotation_isomorphism(&fig11_dimer(), &fig24_dimer(), false).is_none());
    }
}
