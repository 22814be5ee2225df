//! Bivariate Laurent polynomials with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{AffineMap, LatticePoint, LatticePolygon};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentPolynomial {
    terms: BTreeMap<LatticePoint, Complex64>,
}

impl LaurentPolynomial {
    /// Builds a polynomial, merging repeated exponents and dropping zero
    /// coefficients. Fails if nothing survives.
    pub fn new<I: IntoIterator<Item = (LatticePoint, Complex64)>>(terms: I) -> Result<Self> {
        let p = Self::from_terms_unchecked(terms);
        if p.terms.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(p)
    }

    pub(crate) fn from_terms_unchecked<I: IntoIterator<Item = (LatticePoint, Complex64)>>(terms: I) -> Self {
        let mut map: BTreeMap<LatticePoint, Complex64> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| c.re != 0.0 || c.im != 0.0);
        LaurentPolynomial { terms: map }
    }

    /// Polynomial from real integer-like coefficients, e.g. `[((1,1),1.0), ...]`.
    pub fn from_real(terms: &[((i64, i64), f64)]) -> Result<Self> {
        Self::new(terms.iter().map(|&(e, c)| (e.into(), Complex64::new(c, 0.0))))
    }

    pub fn monomial(e: LatticePoint, c: Complex64) -> Self {
        Self::from_terms_unchecked([(e, c)])
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(LatticePoint::ORIGIN, c)
    }

    pub fn terms(&self) -> impl Iterator<Item = (LatticePoint, Complex64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: LatticePoint) -> Complex64 {
        self.terms.get(&e).copied().unwrap_or_default()
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().copied().collect()
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, &c)| c * x.powi(e.u as i32) * y.powi(e.v as i32))
            .sum()
    }

    /// Partial derivative in x.
    pub fn d_dx(&self) -> LaurentPolynomial {
        Self::from_terms_unchecked(
            self.terms
                .iter()
                .map(|(e, &c)| (LatticePoint::new(e.u - 1, e.v), c * e.u as f64)),
        )
    }

    /// Partial derivative in y.
    pub fn d_dy(&self) -> LaurentPolynomial {
        Self::from_terms_unchecked(
            self.terms
                .iter()
                .map(|(e, &c)| (LatticePoint::new(e.u, e.v - 1), c * e.v as f64)),
        )
    }

    pub fn add(&self, other: &LaurentPolynomial) -> LaurentPolynomial {
        Self::from_terms_unchecked(self.terms().chain(other.terms()))
    }

    pub fn neg(&self) -> LaurentPolynomial {
        Self::from_terms_unchecked(self.terms().map(|(e, c)| (e, -c)))
    }

    pub fn mul(&self, other: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.push((e1 + e2, c1 * c2));
            }
        }
        Self::from_terms_unchecked(out)
    }

    pub fn scale(&self, k: Complex64) -> LaurentPolynomial {
        Self::from_terms_unchecked(self.terms().map(|(e, c)| (e, c * k)))
    }

    pub fn conj(&self) -> LaurentPolynomial {
        Self::from_terms_unchecked(self.terms().map(|(e, c)| (e, c.conj())))
    }

    /// Degree range of the polynomial in y: (min, max) exponent.
    pub fn y_range(&self) -> (i64, i64) {
        let min = self.terms.keys().map(|e| e.v).min().unwrap_or(0);
        let max = self.terms.keys().map(|e| e.v).max().unwrap_or(0);
        (min, max)
    }

    pub fn x_range(&self) -> (i64, i64) {
        let min = self.terms.keys().map(|e| e.u).min().unwrap_or(0);
        let max = self.terms.keys().map(|e| e.u).max().unwrap_or(0);
        (min, max)
    }

    /// Coefficients (ascending in y, starting at the minimal y-exponent) of
    /// the univariate polynomial obtained by fixing x.
    pub fn coefficients_in_y(&self, x: Complex64) -> Vec<Complex64> {
        let (lo, hi) = self.y_range();
        let mut c = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (e, k) in self.terms() {
            c[(e.v - lo) as usize] += k * x.powi(e.u as i32);
        }
        c
    }

    /// Exchange the roles of x and y.
    pub fn swap_variables(&self) -> LaurentPolynomial {
        Self::from_terms_unchecked(self.terms().map(|(e, c)| (LatticePoint::new(e.v, e.u), c)))
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

pub fn newton_polygon(w: &LaurentPolynomial) -> LatticePolygon {
    LatticePolygon::hull(w.support()).expect("Laurent polynomials have at least one term")
}

/// Monomial change of variables: the exponent of every term is mapped by `m`.
pub fn monomial_substitute(w: &LaurentPolynomial, m: &AffineMap) -> LaurentPolynomial {
    LaurentPolynomial::from_terms_unchecked(w.terms().map(|(e, c)| (m.apply(e), c)))
}

fn fmt_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", fmt_coeff(c))?;
            if e.u != 0 {
                write!(f, "*x^{}", e.u)?;
            }
            if e.v != 0 {
                write!(f, "*y^{}", e.v)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::unit_square;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn square_w() -> LaurentPolynomial {
        LaurentPolynomial::from_real(&[((1, 1), 1.0), ((1, 0), 1.0), ((0, 1), -1.0), ((0, 0), 1.0)]).unwrap()
    }

    fn diamond_w() -> LaurentPolynomial {
        LaurentPolynomial::from_real(&[((1, 0), 1.0), ((-1, 0), -1.0), ((0, 1), 1.0), ((0, -1), 1.0)]).unwrap()
    }

    #[test]
    fn newton_polygon_examples() {
        assert_eq!(newton_polygon(&square_w()), unit_square());
        let d = newton_polygon(&diamond_w());
        assert_eq!(
            d.vertices(),
            &[
                LatticePoint::new(-1, 0),
                LatticePoint::new(0, -1),
                LatticePoint::new(1, 0),
                LatticePoint::new(0, 1)
            ]
        );
        let k = LaurentPolynomial::constant(c(5.0));
        assert_eq!(newton_polygon(&k).vertices(), &[LatticePoint::ORIGIN]);
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(
            LaurentPolynomial::from_real(&[((1, 0), 1.0), ((1, 0), -1.0)]),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn substitution_examples() {
        let w = square_w();
        assert_eq!(monomial_substitute(&w, &AffineMap::IDENTITY), w);
        let shear = AffineMap::from_columns((1, 1).into(), (0, 1).into(), LatticePoint::ORIGIN);
        let np = newton_polygon(&monomial_substitute(&w, &shear));
        let expected = LatticePolygon::hull(vec![
            LatticePoint::new(0, 0),
            LatticePoint::new(1, 1),
            LatticePoint::new(1, 2),
            LatticePoint::new(0, 1),
        ])
        .unwrap();
        assert_eq!(np, expected);
        let xy = LaurentPolynomial::from_real(&[((1, 0), 1.0), ((0, 1), 1.0)]).unwrap();
        let shifted = monomial_substitute(&xy, &AffineMap::translation(LatticePoint::new(-1, 0)));
        assert_eq!(shifted, LaurentPolynomial::from_real(&[((0, 0), 1.0), ((-1, 1), 1.0)]).unwrap());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let w = diamond_w();
        let (x, y) = (Complex64::new(0.7, 0.3), Complex64::new(-0.4, 1.1));
        let h = 1e-6;
        let fd_x = (w.eval(x + h, y) - w.eval(x - h, y)) / (2.0 * h);
        let fd_y = (w.eval(x, y + h) - w.eval(x, y - h)) / (2.0 * h);
        assert!((w.d_dx().eval(x, y) - fd_x).norm() < 1e-8);
        assert!((w.d_dy().eval(x, y) - fd_y).norm() < 1e-8);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn newton_polygon_commutes_with_substitution(
                terms in prop::collection::vec(((-3i64..4, -3i64..4), -3i32..4), 1..7),
                a in -2i64..3, b in -2i64..3, tu in -2i64..3, tv in -2i64..3,
                which in 0usize..3,
            ) {
                let terms: Vec<((i64, i64), f64)> = terms.into_iter().filter(|t| t.1 != 0).map(|(e, c)| (e, c as f64)).collect();
                prop_assume!(!terms.is_empty());
                let w = match LaurentPolynomial::from_real(&terms) { Ok(w) => w, Err(_) => return Ok(()) };
                let m = match which {
                    0 => AffineMap::from_columns((1, a).into(), (0, 1).into(), (tu, tv).into()),
                    1 => AffineMap::from_columns((1, 0).into(), (b, 1).into(), (tu, tv).into()),
                    _ => AffineMap::from_columns((0, 1).into(), (1, 0).into(), (tu, tv).into()),
                };
                prop_assert!(m.is_unimodular());
                let lhs = newton_polygon(&monomial_substitute(&w, &m));
                let rhs = m.apply_polygon(&newton_polygon(&w));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
