//! Dimer models, coamoebas and vanishing-cycle data for bivariate Laurent
//! polynomials.

pub mod bundles;
pub mod coamoeba;
pub mod dimer;
pub mod error;
pub mod fibration;
pub mod hananyvegh;
pub mod lattice;
pub mod laurent;
pub mod lp;
pub mod parse;
pub mod roots;
pub mod svg;

pub use error::{Error, Result};
pub use lattice::{AffineMap, AffineUnimodularMap, LatticePoint, LatticePolygon};
pub use laurent::{monomial_substitute, newton_polygon, LaurentPolynomial};
pub use parse::{parse_poly, parse_poly_with};
