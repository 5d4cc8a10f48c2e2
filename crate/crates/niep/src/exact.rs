//! Exact spectral computations for integer matrices.
//!
//! Integer matrices get their characteristic polynomial computed exactly by
//! the Faddeev-LeVerrier recurrence (an i128 fast path falls back to big
//! integers on overflow; the divisions by k are exact over the integers).
//! Zero roots are then stripped exactly, the remaining polynomial is
//! square-freed by Yun's algorithm over the rationals (monic factors of a
//! monic integer polynomial are again integer), and only simple roots are
//! handed to the numeric root finder.  The result is a spectrum with exact
//! multiplicities and no spurious near-zero eigenvalues, which the floating
//! QR route cannot promise for defective matrices.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::eigen::EigenError;
use crate::poly::aberth_roots;

/// Exact characteristic polynomial `det(zI - A)` of an integer matrix given
/// in row-major flat form, ascending coefficients, monic.
pub(crate) fn charpoly_exact(a_flat: &[f64], n: usize) -> Vec<BigInt> {
    if let Some(coeffs) = charpoly_i128(a_flat, n) {
        return coeffs.into_iter().map(BigInt::from).collect();
    }
    charpoly_big(a_flat, n)
}

/// Faddeev-LeVerrier in checked i128 arithmetic. None on overflow.
fn charpoly_i128(a_flat: &[f64], n: usize) -> Option<Vec<i128>> {
    let a: Vec<i128> = a_flat.iter().map(|&v| v as i128).collect();
    let mut c = vec![0i128; n + 1];
    c[n] = 1;
    // M starts as the identity; the loop maintains M_k = A M_{k-1} + c I.
    let mut m: Vec<i128> = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    for k in 1..=n {
        let mut am = vec![0i128; n * n];
        for i in 0..n {
            for l in 0..n {
                let aval = a[i * n + l];
                if aval == 0 {
                    continue;
                }
                for j in 0..n {
                    let prod = aval.checked_mul(m[l * n + j])?;
                    am[i * n + j] = am[i * n + j].checked_add(prod)?;
                }
            }
        }
        let mut tr = 0i128;
        for i in 0..n {
            tr = tr.checked_add(am[i * n + i])?;
        }
        debug_assert_eq!(tr % k as i128, 0, "Faddeev-LeVerrier division must be exact");
        let ck = -(tr / k as i128);
        c[n - k] = ck;
        for i in 0..n {
            am[i * n + i] = am[i * n + i].checked_add(ck)?;
        }
        m = am;
    }
    Some(c)
}

/// Faddeev-LeVerrier over big integers.
fn charpoly_big(a_flat: &[f64], n: usize) -> Vec<BigInt> {
    let a = big_matrix_from(a_flat, n);
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m: Vec<BigInt> = vec![BigInt::zero(); n * n];
    for i in 0..n {
        m[i * n + i] = BigInt::one();
    }
    for k in 1..=n {
        let mut am = big_mat_mul(&a, &m, n);
        let mut tr = BigInt::zero();
        for i in 0..n {
            tr += &am[i * n + i];
        }
        let (q, r) = num_integer::Integer::div_rem(&tr, &BigInt::from(k));
        assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
        let ck = -q;
        for i in 0..n {
            am[i * n + i] += &ck;
        }
        c[n - k] = ck;
        m = am;
    }
    c
}

pub(crate) fn big_matrix_from(a_flat: &[f64], n: usize) -> Vec<BigInt> {
    assert_eq!(a_flat.len(), n * n);
    a_flat
        .iter()
        .map(|&v| {
            debug_assert_eq!(v, v.round(), "matrix must be integral");
            BigInt::from(v as i64)
        })
        .collect()
}

pub(crate) fn big_mat_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for l in 0..n {
            let aval = &a[i * n + l];
            if aval.is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[l * n + j].is_zero() {
                    out[i * n + j] += aval * &b[l * n + j];
                }
            }
        }
    }
    out
}

/// `A^k` for `k >= 1` by binary exponentiation.
pub(crate) fn big_mat_pow(a: &[BigInt], n: usize, mut k: u32) -> Vec<BigInt> {
    assert!(k >= 1);
    let mut base = a.to_vec();
    let mut acc: Option<Vec<BigInt>> = None;
    loop {
        if k & 1 == 1 {
            acc = Some(match acc {
                Some(prev) => big_mat_mul(&prev, &base, n),
                None => base.clone(),
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        base = big_mat_mul(&base, &base, n);
    }
    acc.expect("k >= 1 always sets the accumulator")
}

pub(crate) fn big_trace(a: &[BigInt], n: usize) -> BigInt {
    let mut tr = BigInt::zero();
    for i in 0..n {
        tr += &a[i * n + i];
    }
    tr
}

/// Splits ascending coefficients into (number of zero roots, remaining
/// polynomial with nonzero constant term).
pub(crate) fn strip_zero_roots(coeffs: &[BigInt]) -> (usize, Vec<BigInt>) {
    let m = coeffs
        .iter()
        .position(|c| !c.is_zero())
        .expect("monic polynomial has a nonzero coefficient");
    (m, coeffs[m..].to_vec())
}

/// Rewrites `q(z)` as `q(z^p)`.
pub(crate) fn substitute_power_big(q: &[BigInt], p: usize) -> Vec<BigInt> {
    assert!(p >= 1);
    let mut out = vec![BigInt::zero(); (q.len() - 1) * p + 1];
    for (i, c) in q.iter().enumerate() {
        out[i * p] = c.clone();
    }
    out
}

// Polynomials over the rationals, ascending coefficients, for Yun's
// square-free decomposition.  All inputs are monic integer polynomials, so
// every factor that comes out is integer again; the rational detour only
// exists to make the Euclidean steps exact.

fn rat_from_big(p: &[BigInt]) -> Vec<BigRational> {
    p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn rat_trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn rat_degree(p: &[BigRational]) -> usize {
    p.len() - 1
}

fn rat_is_zero(p: &[BigRational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn rat_derivative(p: &[BigRational]) -> Vec<BigRational> {
    if p.len() == 1 {
        return vec![BigRational::zero()];
    }
    let mut out = Vec::with_capacity(p.len() - 1);
    for (i, c) in p.iter().enumerate().skip(1) {
        out.push(c * BigRational::from_integer(BigInt::from(i)));
    }
    out
}

fn rat_monic(p: &[BigRational]) -> Vec<BigRational> {
    let lead = p.last().expect("nonempty polynomial");
    assert!(!lead.is_zero(), "zero polynomial cannot be made monic");
    p.iter().map(|c| c / lead).collect()
}

/// Long division, returning (quotient, remainder).
fn rat_div_rem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = rat_degree(b);
    let lead = b.last().expect("nonempty divisor").clone();
    assert!(!lead.is_zero());
    let mut rem = a.to_vec();
    rat_trim(&mut rem);
    if rat_degree(&rem) < db || rat_is_zero(&rem) {
        return (vec![BigRational::zero()], rem);
    }
    let dq = rat_degree(&rem) - db;
    let mut quot = vec![BigRational::zero(); dq + 1];
    for k in (0..=dq).rev() {
        let coeff = &rem[k + db] / &lead;
        if coeff.is_zero() {
            continue;
        }
        quot[k] = coeff.clone();
        for j in 0..=db {
            let sub = &coeff * &b[j];
            rem[k + j] -= sub;
        }
    }
    rat_trim(&mut rem);
    (quot, rem)
}

fn rat_div_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (q, r) = rat_div_rem(a, b);
    assert!(rat_is_zero(&r), "division must be exact here");
    q
}

fn rat_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    rat_trim(&mut out);
    out
}

/// Monic gcd by the Euclidean algorithm.
fn rat_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    rat_trim(&mut x);
    rat_trim(&mut y);
    while !rat_is_zero(&y) {
        let (_, r) = rat_div_rem(&x, &y);
        x = y;
        y = r;
    }
    rat_monic(&x)
}

/// Yun's square-free decomposition of a monic integer polynomial with
/// nonzero constant term: returns `(f_i, i)` with `q = prod f_i^i`, each
/// `f_i` square-free and monic with integer coefficients.
pub(crate) fn squarefree_decomposition(q: &[BigInt]) -> Vec<(Vec<BigInt>, usize)> {
    assert!(q.len() >= 2, "constant polynomial has no roots to decompose");
    let qq = rat_from_big(q);
    let qq = rat_monic(&qq);
    let dq = rat_derivative(&qq);
    let g = rat_gcd(&qq, &dq);
    let mut out = Vec::new();
    if rat_degree(&g) == 0 {
        out.push((rat_to_int(&qq), 1));
        return out;
    }
    let mut c = rat_div_exact(&qq, &g);
    let mut d = rat_sub(&rat_div_exact(&dq, &g), &rat_derivative(&c));
    let mut i = 1;
    while rat_degree(&c) > 0 {
        let f = rat_gcd(&c, &d);
        if rat_degree(&f) > 0 {
            out.push((rat_to_int(&f), i));
        }
        c = rat_div_exact(&c, &f);
        d = rat_sub(&rat_div_exact(&d, &f), &rat_derivative(&c));
        i += 1;
    }
    out
}

/// Monic rational polynomial back to integers.  Monic factors of monic
/// integer polynomials are integer, so a nontrivial denominator here is an
/// internal error.
fn rat_to_int(p: &[BigRational]) -> Vec<BigInt> {
    p.iter()
        .map(|c| {
            assert!(c.denom().abs().is_one(), "factor must have integer coefficients");
            c.numer().clone() * c.denom().signum()
        })
        .collect()
}

/// All roots of an exact monic integer characteristic polynomial, with
/// exact multiplicities: zero roots are stripped symbolically, repeated
/// roots are reduced to simple ones by square-free decomposition, and only
/// those simple roots are located numerically.
pub(crate) fn eigenvalues_from_charpoly(coeffs: &[BigInt]) -> Result<Vec<Complex64>, EigenError> {
    let (zeros, q) = strip_zero_roots(coeffs);
    let mut eigs: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); zeros];
    if q.len() > 1 {
        for (factor, mult) in squarefree_decomposition(&q) {
            let fc: Vec<f64> = factor
                .iter()
                .map(|c| c.to_f64().filter(|v| v.is_finite()))
                .collect::<Option<Vec<f64>>>()
                .ok_or(EigenError::CoefficientRange)?;
            let roots = aberth_roots(&fc).map_err(|e| match e {
                crate::poly::RootError::NotConverged { residual, .. } => {
                    EigenError::RootsNotConverged { residual }
                }
                crate::poly::RootError::DegeneratePolynomial => EigenError::CoefficientRange,
            })?;
            for r in roots {
                for _ in 0..mult {
                    eigs.push(r);
                }
            }
        }
    }
    eigs.sort_by(crate::spectrum::canonical_cmp);
    Ok(eigs)
}

/// Exact spectrum of an integral matrix.
pub(crate) fn eigenvalues_exact(a_flat: &[f64], n: usize) -> Result<Vec<Complex64>, EigenError> {
    eigenvalues_from_charpoly(&charpoly_exact(a_flat, n))
}
