//! Roots of univariate complex polynomials.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Nonzero finite roots of `sum c[k] z^k` (ascending coefficients).
///
/// Degrees one and two use closed forms; higher degrees use the eigenvalues
/// of the companion matrix. Each root gets one Newton polishing step.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let zero = |c: &Complex64| c.re == 0.0 && c.im == 0.0;
    let lo = match coeffs.iter().position(|c| !zero(c)) {
        Some(i) => i,
        None => return Vec::new(),
    };
    let hi = coeffs.iter().rposition(|c| !zero(c)).unwrap();
    // zero roots are dropped; they are not points of the algebraic torus
    let c = &coeffs[lo..=hi];
    let raw = match c.len() {
        0 | 1 => Vec::new(),
        2 => vec![-c[0] / c[1]],
        3 => quadratic(c[0], c[1], c[2]).to_vec(),
        n => companion_roots(&c[..n]),
    };
    raw.into_iter().map(|r| polish(c, r)).collect()
}

fn quadratic(c: Complex64, b: Complex64, a: Complex64) -> [Complex64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // choose the sign avoiding cancellation
    let q = if (b.conj() * disc).re >= 0.0 {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    if q.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

fn companion_roots(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    match m.clone().try_schur(1e-14, 10_000) {
        Some(s) => s.eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default(),
        None => Vec::new(),
    }
}

pub fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &k in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + k;
    }
    (p, dp)
}

fn polish(c: &[Complex64], z: Complex64) -> Complex64 {
    let (p, dp) = horner(c, z);
    if dp.norm() == 0.0 {
        return z;
    }
    let next = z - p / dp;
    if horner(c, next).0.norm() <= p.norm() {
        next
    } else {
        z
    }
}
