//! Critical points and values of a Laurent polynomial on `(C×)²`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::laurent::LaurentPolynomial;
use crate::roots::roots;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub x: Complex64,
    pub y: Complex64,
    pub value: Complex64,
}

/// Clockwise angle from the downward ray; orders values as a distinguished
/// basis of straight paths from the origin is usually ordered.
fn clockwise_key(v: Complex64) -> f64 {
    (-PI / 2.0 - v.arg()).rem_euclid(2.0 * PI)
}

fn sort_points(pts: &mut [CriticalPoint]) {
    pts.sort_by(|a, b| {
        clockwise_key(a.value)
            .total_cmp(&clockwise_key(b.value))
            .then(a.value.norm().total_cmp(&b.value.norm()))
    });
}

/// `c₁ x + a/x + c₂ y + b/y` with all four coefficients nonzero.
fn four_term_shape(w: &LaurentPolynomial) -> Option<[Complex64; 4]> {
    let keys = [(1, 0), (-1, 0), (0, 1), (0, -1)];
    if w.len() != 4 {
        return None;
    }
    let mut c = [Complex64::new(0.0, 0.0); 4];
    for (k, &(u, v)) in keys.iter().enumerate() {
        c[k] = w.coefficient(LatticePoint::new(u, v));
        if c[k].norm() == 0.0 {
            return None;
        }
    }
    Some(c)
}

/// Solutions of `∂w/∂x = ∂w/∂y = 0` in `(C×)²` with their values, ordered
/// clockwise from the downward direction.
///
/// Four-term potentials `c₁x + a/x + c₂y + b/y` are solved in closed form;
/// anything else goes through the resultant of `x w_x` and `y w_y` in `y`,
/// followed by Newton polishing.
pub fn critical_data(w: &LaurentPolynomial) -> Result<Vec<CriticalPoint>> {
    let mut pts = match four_term_shape(w) {
        Some([c1, a, c2, b]) => {
            let (sx, sy) = ((a / c1).sqrt(), (b / c2).sqrt());
            let mut out = Vec::with_capacity(4);
            for x in [sx, -sx] {
                for y in [sy, -sy] {
                    out.push(CriticalPoint { x, y, value: w.eval(x, y) });
                }
            }
            out
        }
        None => critical_data_numeric(w)?,
    };
    sort_points(&mut pts);
    Ok(pts)
}

/// Dense coefficient grid `f[i][j]` of `x^i y^j` after clearing negative
/// exponents.
fn dense(p: &LaurentPolynomial) -> Vec<Vec<Complex64>> {
    let (xlo, xhi) = p.x_range();
    let (ylo, yhi) = p.y_range();
    let mut f = vec![vec![Complex64::new(0.0, 0.0); (yhi - ylo + 1) as usize]; (xhi - xlo + 1) as usize];
    for (e, c) in p.terms() {
        f[(e.u - xlo) as usize][(e.v - ylo) as usize] += c;
    }
    f
}

fn in_y(f: &[Vec<Complex64>], x: Complex64) -> Vec<Complex64> {
    let n = f.first().map_or(0, |r| r.len());
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut xp = Complex64::new(1.0, 0.0);
    for row in f {
        for (j, c) in row.iter().enumerate() {
            out[j] += c * xp;
        }
        xp *= x;
    }
    out
}

/// Sylvester determinant of two polynomials with fixed formal degrees.
fn sylvester(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut s = DMatrix::<Complex64>::zeros(size, size);
    for r in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            s[(r, r + k)] = *c;
        }
    }
    for r in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            s[(n + r, r + k)] = *c;
        }
    }
    s.determinant()
}

fn scaled(p: &LaurentPolynomial, by_x: bool) -> LaurentPolynomial {
    let one = Complex64::new(1.0, 0.0);
    if by_x {
        p.d_dx().mul(&LaurentPolynomial::monomial(LatticePoint::new(1, 0), one))
    } else {
        p.d_dy().mul(&LaurentPolynomial::monomial(LatticePoint::new(0, 1), one))
    }
}

fn critical_data_numeric(w: &LaurentPolynomial) -> Result<Vec<CriticalPoint>> {
    let (fx, fy) = (scaled(w, true), scaled(w, false));
    // a derivative vanishing identically means critical points fill curves
    if fx.is_empty() || fy.is_empty() {
        return Err(Error::NonIsolatedCritical);
    }
    let (f, g) = (dense(&fx), dense(&fy));
    let (dfx, dfy) = (f.len() - 1, f[0].len() - 1);
    let (dgx, dgy) = (g.len() - 1, g[0].len() - 1);
    let degree = dfx * dgy + dgx * dfy;
    let n = degree + 1;
    let samples: Vec<(Complex64, Complex64)> = (0..n)
        .map(|k| {
            let x = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            (x, sylvester(&in_y(&f, x), &in_y(&g, x)))
        })
        .collect();
    let scale = samples.iter().map(|s| s.1.norm()).fold(0.0, f64::max);
    if scale < 1e-300 {
        return Err(Error::NonIsolatedCritical);
    }
    let mut coeffs: Vec<Complex64> = (0..n)
        .map(|j| samples.iter().map(|(x, r)| r * x.powi(-(j as i32))).sum::<Complex64>() / n as f64)
        .collect();
    let cmax = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if cmax < 1e-12 * scale.max(1.0) {
        return Err(Error::NonIsolatedCritical);
    }
    for c in coeffs.iter_mut() {
        if c.norm() < 1e-11 * cmax {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    let (wx, wy) = (w.d_dx(), w.d_dy());
    let (wxx, wxy, wyy) = (wx.d_dx(), wx.d_dy(), wy.d_dy());
    let mut out: Vec<CriticalPoint> = Vec::new();
    for x0 in roots(&coeffs) {
        let mut ys = roots(&in_y(&f, x0));
        ys.extend(roots(&in_y(&g, x0)));
        for y0 in ys {
            let (mut x, mut y) = (x0, y0);
            for _ in 0..50 {
                let (a, b) = (wx.eval(x, y), wy.eval(x, y));
                let (j11, j12, j22) = (wxx.eval(x, y), wxy.eval(x, y), wyy.eval(x, y));
                let det = j11 * j22 - j12 * j12;
                if det.norm() == 0.0 {
                    break;
                }
                let dx = (a * j22 - b * j12) / det;
                let dy = (j11 * b - j12 * a) / det;
                x -= dx;
                y -= dy;
                if dx.norm() + dy.norm() < 1e-15 * (1.0 + x.norm() + y.norm()) {
                    break;
                }
            }
            let res = wx.eval(x, y).norm() + wy.eval(x, y).norm();
            if !(x.is_finite() && y.is_finite()) || x.norm() < 1e-9 || y.norm() < 1e-9 || res > 1e-9 {
                continue;
            }
            if out.iter().any(|p| (p.x - x).norm() + (p.y - y).norm() < 1e-7) {
                continue;
            }
            out.push(CriticalPoint { x, y, value: w.eval(x, y) });
        }
    }
    Ok(out)
}
