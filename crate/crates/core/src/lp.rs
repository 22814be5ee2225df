//! Exact rational linear programming (dense two-phase simplex, Bland's rule).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Q, x: Vec<Q> },
}

/// Maximizes `c·x` subject to `A x = b`, `x ≥ 0`.
pub fn maximize(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> Result<LpOutcome> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Lp("dimension mismatch".into()));
    }
    // tableau with artificial variables n..n+m; rows normalized to b >= 0
    let width = n + m + 1;
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = vec![Q::zero(); width];
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = Q::one();
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // phase one: minimize the sum of artificials
    let mut phase1 = vec![Q::zero(); n + m];
    for v in phase1.iter_mut().skip(n) {
        *v = -Q::one();
    }
    run_simplex(&mut t, &mut basis, &phase1, n + m)?;
    let infeas: Q = basis
        .iter()
        .zip(&t)
        .filter(|(&j, _)| j >= n)
        .map(|(_, row)| row[width - 1].clone())
        .fold(Q::zero(), |acc, v| acc + v);
    if infeas.is_positive() {
        return Ok(LpOutcome::Infeasible);
    }
    // drive remaining (zero-valued) artificials out of the basis
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }
    // phase two on the original columns; artificial columns are frozen
    let mut obj = vec![Q::zero(); n + m];
    obj[..n].clone_from_slice(c);
    if !run_simplex(&mut t, &mut basis, &obj, n)? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![Q::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][width - 1].clone();
        }
    }
    let value = x.iter().zip(c).fold(Q::zero(), |acc, (xi, ci)| acc + xi * ci);
    Ok(LpOutcome::Optimal { value, x })
}

/// Returns false if unbounded. Only columns `< allowed` may enter.
fn run_simplex(t: &mut [Vec<Q>], basis: &mut [usize], obj: &[Q], allowed: usize) -> Result<bool> {
    let width = t.first().map_or(0, |r| r.len());
    for _ in 0..100_000 {
        // reduced costs: obj_j - sum_i obj_{basis i} t[i][j]
        let mut entering = None;
        for j in 0..allowed {
            if basis.contains(&j) {
                continue;
            }
            let mut rc = obj[j].clone();
            for (i, &bj) in basis.iter().enumerate() {
                if !obj[bj].is_zero() && !t[i][j].is_zero() {
                    rc -= &obj[bj] * &t[i][j];
                }
            }
            if rc.is_positive() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else { return Ok(true) };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..t.len() {
            if t[i][j].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((i, _)) = leave else { return Ok(false) };
        pivot(t, basis, i, j);
    }
    Err(Error::Lp("iteration limit".into()))
}

fn pivot(t: &mut [Vec<Q>], basis: &mut [usize], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        *v = &*v / &p;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
    basis[r] = c;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_optimum() {
        // max x + y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![vec![q(1), q(2), q(1), q(0)], vec![q(3), q(1), q(0), q(1)]];
        let b = vec![q(4), q(6)];
        let c = vec![q(1), q(1), q(0), q(0)];
        match maximize(&a, &b, &c).unwrap() {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, Q::new(BigInt::from(14), BigInt::from(5)));
                assert_eq!(x[0], Q::new(BigInt::from(8), BigInt::from(5)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![q(1), q(1)]];
        assert_eq!(maximize(&a, &[q(-1)], &[q(0), q(0)]).unwrap(), LpOutcome::Infeasible);
        let a = vec![vec![q(1), q(-1)]];
        assert_eq!(maximize(&a, &[q(1)], &[q(1), q(0)]).unwrap(), LpOutcome::Unbounded);
    }
}
