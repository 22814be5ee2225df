//! Isoradiality via R-charge feasibility, solved exactly.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::DimerModel;
use crate::error::{Error, Result};
use crate::lp::{maximize, q, LpOutcome, Q};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoradialReport {
    pub feasible: bool,
    /// Optimal margin `m` with `m ≤ R_e ≤ 1 − m`, as "p/q"; absent when the
    /// closed system is already infeasible.
    pub margin: Option<String>,
    /// Witness weights per edge, as "p/q".
    pub weights: Vec<String>,
}

/// True iff weights `R_e ∈ (0,1)` exist with node sums 2 and face sums of
/// `1 − R_e` equal to 2.
pub fn is_isoradial_feasible(g: &DimerModel) -> Result<bool> {
    Ok(isoradial_report(g)?.feasible)
}

pub fn isoradial_report(g: &DimerModel) -> Result<IsoradialReport> {
    let faces = g.faces()?;
    if faces.is_empty() {
        return Err(Error::InvalidDimer("no faces".into()));
    }
    let ne = g.edges.len();
    // columns: R (ne), margin, lower slack (ne), upper slack (ne), margin cap slack
    let t = ne;
    let lo = ne + 1;
    let hi = 2 * ne + 1;
    let cap = 3 * ne + 1;
    let ncols = 3 * ne + 2;
    let mut a: Vec<Vec<Q>> = Vec::new();
    let mut b: Vec<Q> = Vec::new();
    let row = || vec![Q::zero(); ncols];
    for e in 0..ne {
        let mut r = row();
        r[e] = q(1);
        r[t] = q(-1);
        r[lo + e] = q(-1);
        a.push(r);
        b.push(q(0));
        let mut r = row();
        r[e] = q(1);
        r[t] = q(1);
        r[hi + e] = q(1);
        a.push(r);
        b.push(q(1));
    }
    let mut r = row();
    r[t] = q(1);
    r[cap] = q(1);
    a.push(r);
    b.push(q(1));
    for n in 0..g.nodes.len() {
        let mut r = row();
        for e in g.incident(n) {
            r[e] += q(1);
        }
        a.push(r);
        b.push(q(2));
    }
    for f in &faces {
        let mut r = row();
        for &(e, _) in f {
            r[e] += q(1);
        }
        a.push(r);
        b.push(q(f.len() as i64 - 2));
    }
    let mut c = vec![Q::zero(); ncols];
    c[t] = q(1);
    match maximize(&a, &b, &c)? {
        LpOutcome::Infeasible => Ok(IsoradialReport {
            feasible: false,
            margin: None,
            weights: Vec::new(),
        }),
        LpOutcome::Unbounded => Err(Error::Lp("margin is capped; unbounded is impossible".into())),
        LpOutcome::Optimal { value, x } => Ok(IsoradialReport {
            feasible: value.is_positive(),
            margin: Some(value.to_string()),
            weights: x[..ne].iter().map(|v| v.to_string()).collect(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{fig11_dimer, fig24_dimer, square_dimer};
    use super::*;

    /// Direct substitution of uniform weights 1/2 into both conditions.
    fn uniform_half_works(g: &DimerModel) -> bool {
        let nodes_ok = (0..g.nodes.len()).all(|n| g.degree(n) == 4);
        let faces_ok = g.faces().unwrap().iter().all(|f| f.len() == 4);
        nodes_ok && faces_ok
    }

    #[test]
    fn square_and_fig11_are_isoradial() {
        for g in [square_dimer(), fig11_dimer()] {
            assert!(uniform_half_works(&g));
            let r = isoradial_report(&g).unwrap();
            assert!(r.feasible, "{}", g.name);
            assert_eq!(r.margin.as_deref(), Some("1/2"));
        }
    }

    #[test]
    fn fig24_is_not_isoradial() {
        let r = isoradial_report(&fig24_dimer()).unwrap();
        assert!(!r.feasible);
        // the closed system is feasible only at the boundary R_e ∈ {0,1}
        assert_eq!(r.margin.as_deref(), Some("0"));
    }

    #[test]
    fn invariant_under_translation() {
        let mut g = fig24_dimer();
        for n in &mut g.nodes {
            n.position = ((n.position.0 + 0.1) % 1.0, (n.position.1 + 0.3) % 1.0);
        }
        assert!(!is_isoradial_feasible(&g).unwrap());
    }
}
