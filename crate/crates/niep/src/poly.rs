//! Dense real polynomial utilities and a simultaneous root iterator.
//!
//! Polynomials are stored by ascending degree: `c[0] + c[1] z + ...`.
//! The root finder is an Aberth-Ehrlich iteration intended for square-free
//! polynomials; callers strip multiple roots first (see the exact
//! characteristic-polynomial path) so every sought root is simple.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RootError {
    #[error("root iteration did not converge within {iterations} iterations (residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("polynomial has degree zero")]
    DegeneratePolynomial,
}

/// Product of two polynomials.
pub fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Rewrites `q(z)` as `q(z^p)` by spreading coefficients.
pub fn substitute_power(q: &[f64], p: usize) -> Vec<f64> {
    assert!(p >= 1);
    let mut out = vec![0.0; (q.len() - 1) * p + 1];
    for (i, &c) in q.iter().enumerate() {
        out[i * p] = c;
    }
    out
}

/// Horner evaluation at a complex point.
pub fn eval(c: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &coeff in c.iter().rev() {
        acc = acc * z + coeff;
    }
    acc
}

/// Evaluates the polynomial and its derivative in one Horner pass.
fn eval_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &coeff in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + coeff;
    }
    (p, dp)
}

/// Fujiwara bound: every root has modulus at most
/// `2 * max_i |c_i / c_n|^(1 / (n - i))`.
pub fn root_radius_bound(c: &[f64]) -> f64 {
    let n = c.len() - 1;
    let lead = c[n];
    let mut bound = 0.0_f64;
    for (i, &coeff) in c.iter().enumerate().take(n) {
        if coeff != 0.0 {
            let e = 1.0 / (n - i) as f64;
            bound = bound.max((coeff / lead).abs().powf(e));
        }
    }
    2.0 * bound
}

/// All roots of a square-free real polynomial by Aberth-Ehrlich iteration.
///
/// Returns roots in no particular order; near-real roots are snapped onto
/// the axis so downstream conjugate pairing is exact.
pub fn aberth_roots(c: &[f64]) -> Result<Vec<Complex64>, RootError> {
    let mut coeffs = c.to_vec();
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
        coeffs.pop();
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return Err(RootError::DegeneratePolynomial);
    }
    let lead = coeffs[n];
    for c in coeffs.iter_mut() {
        *c /= lead;
    }
    if n == 1 {
        return Ok(vec![Complex64::new(-coeffs[0], 0.0)]);
    }
    let radius = root_radius_bound(&coeffs).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            // Irrational angle offset keeps the start asymmetric so the
            // iteration cannot lock onto a symmetric stationary set.
            let angle = 2.0 * std::f64::consts::PI * (j as f64 + 0.354_062) / n as f64;
            Complex64::from_polar(radius * (0.5 + 0.5 * (j as f64 + 1.0) / n as f64), angle)
        })
        .collect();
    let scale = coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
    let max_iter = 400;
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let mut max_step = 0.0_f64;
        residual = 0.0;
        for j in 0..n {
            let (p, dp) = eval_with_derivative(&coeffs, z[j]);
            residual = residual.max(p.norm());
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() == 0.0 {
                // Stationary point of p: nudge off it.
                Complex64::new(1e-8, 1e-8)
            } else {
                p / dp
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (k, &zk) in z.iter().enumerate() {
                if k != j {
                    repulsion += (z[j] - zk).finv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * repulsion;
            let step = if denom.norm() < 1e-300 { w } else { w / denom };
            z[j] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[j].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    let tol = 1e-10 * scale.max(1.0) * n as f64;
    if residual > tol {
        return Err(RootError::NotConverged {
            iterations: max_iter,
            residual,
        });
    }
    for r in z.iter_mut() {
        if r.im.abs() <= 1e-9 * (1.0 + r.re.abs()) {
            *r = Complex64::new(r.re, 0.0);
        }
    }
    Ok(z)
}
