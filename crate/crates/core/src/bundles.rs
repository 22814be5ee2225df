//! Line bundles on P1×P1: cohomology, Ext groups, Euler form, strong
//! exceptionality and K-theoretic mutations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The line bundle `O(a,b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LineBundleClass {
    pub a: i64,
    pub b: i64,
}

impl LineBundleClass {
    pub const fn new(a: i64, b: i64) -> Self {
        LineBundleClass { a, b }
    }

    pub fn k_class(self) -> KClass {
        KClass {
            rank: 1,
            d1: self.a,
            d2: self.b,
            c: self.a * self.b,
        }
    }

    pub fn twist(self, by: LineBundleClass) -> LineBundleClass {
        LineBundleClass::new(self.a + by.a, self.b + by.b)
    }
}

impl fmt::Display for LineBundleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({},{})", self.a, self.b)
    }
}

/// Chern character components `(r, d1 h1 + d2 h2, c [pt])`, normalized so
/// that `O(a,b)` has `c = a b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KClass {
    pub rank: i64,
    pub d1: i64,
    pub d2: i64,
    pub c: i64,
}

impl KClass {
    pub fn line_bundle(self) -> Option<LineBundleClass> {
        (self.rank == 1 && self.c == self.d1 * self.d2).then_some(LineBundleClass::new(self.d1, self.d2))
    }

    fn scale(self, k: i64) -> KClass {
        KClass {
            rank: self.rank * k,
            d1: self.d1 * k,
            d2: self.d2 * k,
            c: self.c * k,
        }
    }

    fn minus(self, o: KClass) -> KClass {
        KClass {
            rank: self.rank - o.rank,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
            c: self.c - o.c,
        }
    }
}

fn h_p1(n: i64) -> (i64, i64) {
    ((n + 1).max(0), (-n - 1).max(0))
}

/// `(h0, h1, h2)` of `O(a,b)` by Künneth.
pub fn cohomology_dims(l: LineBundleClass) -> (i64, i64, i64) {
    let (p0, p1) = h_p1(l.a);
    let (q0, q1) = h_p1(l.b);
    (p0 * q0, p0 * q1 + p1 * q0, p1 * q1)
}

/// `(hom, ext1, ext2)` from `e` to `f`.
pub fn hom_ext_dims(e: LineBundleClass, f: LineBundleClass) -> (i64, i64, i64) {
    cohomology_dims(LineBundleClass::new(f.a - e.a, f.b - e.b))
}

/// `χ(E, F) = Σ (-1)^i dim Ext^i(E, F)`, extended bilinearly to K-theory by
/// Riemann–Roch: with `Δ = ch(E)^∨ ch(F)`, `χ = Δ_c + Δ_{d1} + Δ_{d2} + Δ_r`.
pub fn euler_form(e: KClass, f: KClass) -> i64 {
    // dual of e: (r, -d1, -d2, c)
    let (r1, a1, b1, c1) = (e.rank, -e.d1, -e.d2, e.c);
    let (r2, a2, b2, c2) = (f.rank, f.d1, f.d2, f.c);
    // product in the ring with h1^2 = h2^2 = 0, h1 h2 = pt
    let r = r1 * r2;
    let d1 = r1 * a2 + a1 * r2;
    let d2 = r1 * b2 + b1 * r2;
    let c = r1 * c2 + c1 * r2 + a1 * b2 + b1 * a2;
    // td = 1 + h1 + h2 + pt
    c + d1 + d2 + r
}

pub fn euler_form_bundles(e: LineBundleClass, f: LineBundleClass) -> i64 {
    euler_form(e.k_class(), f.k_class())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalCollection(pub Vec<LineBundleClass>);

impl ExceptionalCollection {
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        ExceptionalCollection(pairs.iter().map(|&(a, b)| LineBundleClass::new(a, b)).collect())
    }

    /// `(O, O(1,0), O(1,1), O(2,1))`.
    pub fn square_ec() -> Self {
        Self::from_pairs(&[(0, 0), (1, 0), (1, 1), (2, 1)])
    }

    /// `(O, O(1,0), O(0,1), O(1,1))`.
    pub fn square_ec2() -> Self {
        Self::from_pairs(&[(0, 0), (1, 0), (0, 1), (1, 1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses `"(0,0) (1,0) (1,1) (2,1)"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Vec::new();
        for tok in text.split(')').map(str::trim).filter(|t| !t.is_empty()) {
            let inner = tok.trim_start_matches(',').trim().strip_prefix('(').ok_or(Error::Syntax {
                pos: 0,
                msg: format!("expected '(' in '{tok}'"),
            })?;
            let (a, b) = inner.split_once(',').ok_or(Error::Syntax {
                pos: 0,
                msg: format!("expected 'a,b' in '{tok}'"),
            })?;
            let parse = |s: &str| {
                s.trim().parse::<i64>().map_err(|_| Error::Syntax {
                    pos: 0,
                    msg: format!("bad integer '{s}'"),
                })
            };
            out.push(LineBundleClass::new(parse(a)?, parse(b)?));
        }
        Ok(ExceptionalCollection(out))
    }
}

impl fmt::Display for ExceptionalCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub kind: String,
    pub dims: (i64, i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalityReport {
    pub strong_exceptional: bool,
    pub violations: Vec<Violation>,
}

pub fn is_strong_exceptional(c: &ExceptionalCollection) -> ExceptionalityReport {
    let mut violations = Vec::new();
    for (i, &e) in c.0.iter().enumerate() {
        for (j, &f) in c.0.iter().enumerate() {
            let dims = hom_ext_dims(e, f);
            let kind = if i == j {
                (dims != (1, 0, 0)).then_some("not exceptional")
            } else if i < j {
                (dims.1 != 0 || dims.2 != 0).then_some("higher ext forward")
            } else if dims.0 != 0 {
                Some("hom backward")
            } else if dims.1 != 0 || dims.2 != 0 {
                Some("ext backward")
            } else {
                None
            };
            if let Some(kind) = kind {
                violations.push(Violation {
                    i,
                    j,
                    kind: kind.to_string(),
                    dims,
                });
            }
        }
    }
    ExceptionalityReport {
        strong_exceptional: violations.is_empty(),
        violations,
    }
}

/// True iff the K-classes form a basis of the rank-4 lattice.
pub fn fullness_proxy(c: &ExceptionalCollection) -> bool {
    if c.len() != 4 {
        return false;
    }
    let rows: Vec<[i64; 4]> = c
        .0
        .iter()
        .map(|l| {
            let k = l.k_class();
            [k.rank, k.d1, k.d2, k.c]
        })
        .collect();
    det4(&rows).abs() == 1
}

fn det4(m: &[[i64; 4]]) -> i64 {
    fn det(m: &[Vec<i64>]) -> i64 {
        if m.len() == 1 {
            return m[0][0];
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &v)| v).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum()
    }
    det(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutationTrace {
    pub position: usize,
    pub direction: Direction,
    pub pair: (LineBundleClass, LineBundleClass),
    pub chi: i64,
    pub new_pair: (LineBundleClass, LineBundleClass),
}

/// K-theoretic mutation of the adjacent pair `(E, F) = (c[pos], c[pos+1])`.
///
/// `Left` replaces the pair by `(χ(E,F)·E − F, E)`: `F` moves to the left of
/// `E` and becomes the new class. `Right` replaces it by `(F, χ(E,F)·F − E)`:
/// `E` moves to the right of `F`. The two are mutually inverse.
///
/// Naming conventions for left and right mutations differ across the
/// literature; [`mutate_last_pair`] names the one that takes
/// `(O, O(1,0), O(1,1), O(2,1))` to `(O, O(1,0), O(0,1), O(1,1))`.
pub fn mutate(c: &ExceptionalCollection, position: usize, direction: Direction) -> Result<(ExceptionalCollection, MutationTrace)> {
    if position + 1 >= c.len() {
        return Err(Error::MutationPosition(position));
    }
    let (e, f) = (c.0[position], c.0[position + 1]);
    let chi = euler_form_bundles(e, f);
    let (first, second) = match direction {
        Direction::Left => (e.k_class().scale(chi).minus(f.k_class()), e.k_class()),
        Direction::Right => (f.k_class(), f.k_class().scale(chi).minus(e.k_class())),
    };
    let to_lb = |k: KClass| {
        k.line_bundle()
            .ok_or_else(|| Error::NotLineBundle(format!("rank {} degrees ({},{}) c {}", k.rank, k.d1, k.d2, k.c)))
    };
    let new_pair = (to_lb(first)?, to_lb(second)?);
    let mut out = c.clone();
    out.0[position] = new_pair.0;
    out.0[position + 1] = new_pair.1;
    Ok((
        out,
        MutationTrace {
            position,
            direction,
            pair: (e, f),
            chi,
            new_pair,
        },
    ))
}

/// The mutation of the last pair that carries the first collection to the
/// second one (`2·[O(1,1)] − [O(2,1)] = [O(0,1)]`).
pub fn mutate_last_pair(c: &ExceptionalCollection) -> Result<(ExceptionalCollection, MutationTrace)> {
    if c.len() < 2 {
        return Err(Error::MutationPosition(0));
    }
    mutate(c, c.len() - 2, Direction::Left)
}

/// Inverse of [`mutate_last_pair`].
pub fn unmutate_last_pair(c: &ExceptionalCollection) -> Result<(ExceptionalCollection, MutationTrace)> {
    if c.len() < 2 {
        return Err(Error::MutationPosition(0));
    }
    mutate(c, c.len() - 2, Direction::Right)
}
