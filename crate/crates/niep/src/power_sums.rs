//! Power sums, Möbius-transformed net traces, and characteristic
//! coefficients of a spectrum multiset.
//!
//! For a multiset `L = {l_1, ..., l_n}` the k-th power sum is
//! `s_k = sum_i l_i^k`.  When `L` is the nonzero spectrum of a matrix `A`,
//! `s_k` equals `tr(A^k)` and the Möbius transform
//! `t_k = sum_{d | k} mobius(k/d) s_d` counts k-periodic points weighted by
//! orbits, so `t_k >= 0` and `k | t_k` are necessary for integer
//! realizability.  Conjugate-closed multisets have real power sums; the
//! imaginary component is surfaced as a residual instead of being silently
//! dropped.

use std::collections::HashMap;
use std::sync::Mutex;

use num_complex::Complex64;
use thiserror::Error;

use crate::spectrum::{complex_powu, SpectrumMultiset};

/// Errors from power-sum style evaluations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum PowerSumError {
    /// The sum left the representable range of f64.
    #[error("power sum overflowed at exponent {k}")]
    Overflow { k: u32 },
}

/// Lazily evaluated, cached sequence `k -> s_k`.
#[derive(Debug)]
pub struct PowerSums {
    source: SpectrumMultiset,
    cache: Mutex<HashMap<u32, Complex64>>,
}

impl PowerSums {
    pub fn new(source: SpectrumMultiset) -> Self {
        Self {
            source,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn source(&self) -> &SpectrumMultiset {
        &self.source
    }

    fn full(&self, k: u32) -> Complex64 {
        if let Some(&v) = self.cache.lock().unwrap().get(&k) {
            return v;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for e in self.source.entries() {
            acc += complex_powu(e.value, k) * e.multiplicity as f64;
        }
        self.cache.lock().unwrap().insert(k, acc);
        acc
    }

    /// Real part of `s_k`.  Errors if the value is no longer finite.
    pub fn value(&self, k: u32) -> Result<f64, PowerSumError> {
        let v = self.full(k);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v.re)
        } else {
            Err(PowerSumError::Overflow { k })
        }
    }

    /// Magnitude of the imaginary component of `s_k`.  Zero for exactly
    /// conjugate-symmetric multisets.
    pub fn imag_residual(&self, k: u32) -> f64 {
        self.full(k).im.abs()
    }
}

/// Möbius function by trial factorization: 0 on a squared prime factor,
/// otherwise `(-1)^(number of prime factors)`.
pub fn mobius(mut n: u64) -> i32 {
    assert!(n >= 1, "mobius is defined on positive integers");
    let mut primes = 0u32;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            primes += 1;
        }
        d += 1;
    }
    if n > 1 {
        primes += 1;
    }
    if primes.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sorted positive divisors of `n`.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Lazily evaluated, cached sequence `k -> t_k` of net traces.
#[derive(Debug)]
pub struct NetTraces {
    sums: PowerSums,
    cache: Mutex<HashMap<u32, f64>>,
}

impl NetTraces {
    pub fn new(source: SpectrumMultiset) -> Self {
        Self {
            sums: PowerSums::new(source),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn power_sums(&self) -> &PowerSums {
        &self.sums
    }

    /// `t_k = sum over divisors d of k of mobius(k/d) * s_d`.
    pub fn value(&self, k: u32) -> Result<f64, PowerSumError> {
        if let Some(&v) = self.cache.lock().unwrap().get(&k) {
            return Ok(v);
        }
        let mut acc = 0.0;
        for d in divisors(k as u64) {
            acc += mobius(k as u64 / d) as f64 * self.sums.value(d as u32)?;
        }
        if !acc.is_finite() {
            return Err(PowerSumError::Overflow { k });
        }
        self.cache.lock().unwrap().insert(k, acc);
        Ok(acc)
    }
}

/// Monic real polynomial whose roots are a spectrum multiset, stored by
/// ascending degree: `c[0] + c[1] z + ... + c[n] z^n` with `c[n] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCoefficients {
    coeffs: Vec<f64>,
    imag_residual: f64,
}

impl PolynomialCoefficients {
    /// Expands `prod (z - l)` over the multiset.  Conjugate-closed inputs
    /// are expanded through real quadratic factors so the result is exactly
    /// real; otherwise the complex product is taken and the largest dropped
    /// imaginary part is recorded as `imag_residual`.
    pub fn from_spectrum(spectrum: &SpectrumMultiset) -> Self {
        if let Some(coeffs) = real_expansion(spectrum) {
            return Self {
                coeffs,
                imag_residual: 0.0,
            };
        }
        let mut acc = vec![Complex64::new(1.0, 0.0)];
        for e in spectrum.entries() {
            for _ in 0..e.multiplicity {
                acc = complex_linear_mul(&acc, e.value);
            }
        }
        let imag_residual = acc.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        Self {
            coeffs: acc.iter().map(|c| c.re).collect(),
            imag_residual,
        }
    }

    /// Wraps raw ascending coefficients.  The leading coefficient must be
    /// within `1e-9` of one and is normalized away.
    pub fn from_coeffs(mut coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        let lead = *coeffs.last().unwrap();
        assert!(
            (lead - 1.0).abs() <= 1e-9 && lead != 0.0,
            "polynomial must be monic, leading coefficient {lead}"
        );
        for c in coeffs.iter_mut() {
            *c /= lead;
        }
        Self {
            coeffs,
            imag_residual: 0.0,
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Ascending coefficients `c_0 ..= c_n`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Largest imaginary part discarded while expanding a non-closed
    /// multiset.
    pub fn imag_residual(&self) -> f64 {
        self.imag_residual
    }

    /// Power sums `s_1 ..= s_k_max` recovered from the coefficients alone
    /// via Newton's identities.  Independent of any root finding, which is
    /// what makes it usable as a cross-check oracle.
    pub fn power_sums(&self, k_max: u32) -> Vec<f64> {
        let n = self.degree();
        // a[j] is the coefficient of z^(n-j), so a[0] = 1.
        let a: Vec<f64> = self.coeffs.iter().rev().copied().collect();
        let mut s = vec![0.0_f64; k_max as usize + 1];
        for k in 1..=k_max as usize {
            let mut acc = 0.0;
            if k <= n {
                for i in 1..k {
                    acc += a[i] * s[k - i];
                }
                acc += k as f64 * a[k];
            } else {
                for i in 1..=n {
                    acc += a[i] * s[k - i];
                }
            }
            s[k] = -acc;
        }
        s.remove(0);
        s
    }

    /// Rounds every coefficient to the nearest integer if all of them are
    /// within `tol` of one.  The largest rounding distance decides.
    pub fn integer_coefficients(&self, tol: f64) -> Option<Vec<i64>> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            let r = c.round();
            if (c - r).abs() > tol || r.abs() >= 9.0e18 {
                return None;
            }
            out.push(r as i64);
        }
        Some(out)
    }

    /// Largest distance from any coefficient to its nearest integer.
    pub fn integrality_residual(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|&c| (c - c.round()).abs())
            .fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
}

/// Real expansion through linear factors for real roots and quadratic
/// factors for conjugate pairs.  None if the multiset is not exactly
/// conjugate-symmetric at the representation level.
fn real_expansion(spectrum: &SpectrumMultiset) -> Option<Vec<f64>> {
    let entries = spectrum.entries();
    let mut used = vec![false; entries.len()];
    let mut acc = vec![1.0_f64];
    for i in 0..entries.len() {
        if used[i] {
            continue;
        }
        let e = entries[i];
        if e.value.im == 0.0 {
            for _ in 0..e.multiplicity {
                acc = real_linear_mul(&acc, e.value.re);
            }
            used[i] = true;
            continue;
        }
        let conj = e.value.conj();
        let j = (0..entries.len()).find(|&j| {
            !used[j]
                && j != i
                && entries[j].multiplicity == e.multiplicity
                && entries[j].value.re.to_bits() == conj.re.to_bits()
                && entries[j].value.im.to_bits() == conj.im.to_bits()
        })?;
        // (z - l)(z - conj l) = z^2 - 2 Re(l) z + |l|^2
        let b = -2.0 * e.value.re;
        let c = e.value.norm_sqr();
        for _ in 0..e.multiplicity {
            acc = real_quadratic_mul(&acc, b, c);
        }
        used[i] = true;
        used[j] = true;
    }
    Some(acc)
}

fn real_linear_mul(p: &[f64], root: f64) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i] -= root * c;
        out[i + 1] += c;
    }
    out
}

fn real_quadratic_mul(p: &[f64], b: f64, c: f64) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + 2];
    for (i, &pc) in p.iter().enumerate() {
        out[i] += c * pc;
        out[i + 1] += b * pc;
        out[i + 2] += pc;
    }
    out
}

fn complex_linear_mul(p: &[Complex64], root: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i] -= root * c;
        out[i + 1] += c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn spectrum(vals: &[(f64, f64)]) -> SpectrumMultiset {
        let raw: Vec<Complex64> = vals.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        SpectrumMultiset::new(&raw).unwrap()
    }

    #[test]
    fn power_sums_of_small_sets() {
        // {2, -1, -1}: s_k = 2^k + 2(-1)^k.
        let s = PowerSums::new(spectrum(&[(2.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]));
        assert_eq!(s.value(1).unwrap(), 0.0);
        assert_eq!(s.value(2).unwrap(), 6.0);
        assert_eq!(s.value(3).unwrap(), 6.0);
        assert_eq!(s.value(4).unwrap(), 18.0);

        // Fourth roots of unity: s_k = 4 when 4 | k, otherwise 0.
        let r = PowerSums::new(spectrum(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]));
        for k in 1..=12 {
            let expect = if k % 4 == 0 { 4.0 } else { 0.0 };
            assert!((r.value(k).unwrap() - expect).abs() < 1e-12, "k = {k}");
            assert!(r.imag_residual(k) < 1e-12);
        }
    }

    #[test]
    fn power_sum_overflow_is_reported() {
        let s = PowerSums::new(spectrum(&[(10.0, 0.0)]));
        assert!(matches!(
            s.value(400),
            Err(PowerSumError::Overflow { k: 400 })
        ));
    }

    #[test]
    fn mobius_small_values() {
        let expect: [(u64, i32); 10] = [
            (1, 1),
            (2, -1),
            (3, -1),
            (4, 0),
            (5, -1),
            (6, 1),
            (7, -1),
            (8, 0),
            (9, 0),
            (10, 1),
        ];
        for (n, m) in expect {
            assert_eq!(mobius(n), m, "mobius({n})");
        }
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(210), 1);
    }

    #[test]
    fn divisors_are_sorted_and_complete() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn net_traces_of_small_sets() {
        // {2, -1, -1}: t_1 = 0, t_2 = s_2 - s_1 = 6, t_3 = s_3 - s_1 = 6,
        // t_4 = s_4 - s_2 = 12.
        let t = NetTraces::new(spectrum(&[(2.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]));
        assert_eq!(t.value(1).unwrap(), 0.0);
        assert_eq!(t.value(2).unwrap(), 6.0);
        assert_eq!(t.value(3).unwrap(), 6.0);
        assert_eq!(t.value(4).unwrap(), 12.0);

        // Fourth roots of unity: t_4 = s_4 - s_2 = 4, all lower t vanish.
        let r = NetTraces::new(spectrum(&[
            (1.0, 0.0),
            (0.0, 1.0),
            (-1.0, 0.0),
            (0.0, -1.0),
        ]));
        for k in 1..=3 {
            assert!((r.value(k).unwrap()).abs() < 1e-12);
        }
        assert!((r.value(4).unwrap() - 4.0).abs() < 1e-12);

        // {sqrt2, -sqrt2}: t_2 = s_2 - s_1 = 4, t_4 = s_4 - s_2 = 4.
        let q = NetTraces::new(spectrum(&[(2.0_f64.sqrt(), 0.0), (-(2.0_f64.sqrt()), 0.0)]));
        assert!((q.value(2).unwrap() - 4.0).abs() < 1e-12);
        assert!((q.value(4).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn coefficients_from_real_and_complex_spectra() {
        // (z - sqrt2)(z + sqrt2) = z^2 - 2.
        let p = PolynomialCoefficients::from_spectrum(&spectrum(&[
            (2.0_f64.sqrt(), 0.0),
            (-(2.0_f64.sqrt()), 0.0),
        ]));
        assert_eq!(p.degree(), 2);
        assert!((p.coeffs()[0] + 2.0).abs() < 1e-12);
        assert!(p.coeffs()[1].abs() < 1e-12);
        assert_eq!(p.coeffs()[2], 1.0);
        assert_eq!(p.imag_residual(), 0.0);

        // Fourth roots of unity: z^4 - 1, expanded through quadratics.
        let q = PolynomialCoefficients::from_spectrum(&spectrum(&[
            (1.0, 0.0),
            (0.0, 1.0),
            (-1.0, 0.0),
            (0.0, -1.0),
        ]));
        let expect = [-1.0, 0.0, 0.0, 0.0, 1.0];
        for (a, b) in q.coeffs().iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(q.imag_residual(), 0.0);

        // A non-closed multiset goes through the complex route and reports
        // the dropped imaginary mass.
        let open = PolynomialCoefficients::from_spectrum(&spectrum(&[(1.0, 0.0), (0.5, 0.5)]));
        assert!(open.imag_residual() > 0.1);
    }

    #[test]
    fn newton_identities_recover_power_sums() {
        // z^2 - z - 1: s_1 = 1, s_2 = 3, s_3 = 4 (Lucas numbers).
        let p = PolynomialCoefficients::from_coeffs(vec![-1.0, -1.0, 1.0]);
        let s = p.power_sums(4);
        assert!((s[0] - 1.0).abs() < 1e-12);
        assert!((s[1] - 3.0).abs() < 1e-12);
        assert!((s[2] - 4.0).abs() < 1e-12);
        assert!((s[3] - 7.0).abs() < 1e-12);

        // z - 2: s_k = 2^k, exercising the k > n recurrence.
        let q = PolynomialCoefficients::from_coeffs(vec![-2.0, 1.0]);
        let s = q.power_sums(4);
        assert_eq!(s, vec![2.0, 4.0, 8.0, 16.0]);

        // z^2 - 2: s = 0, 4, 0, 8.
        let r = PolynomialCoefficients::from_coeffs(vec![-2.0, 0.0, 1.0]);
        let s = r.power_sums(4);
        for (got, expect) in s.iter().zip([0.0, 4.0, 0.0, 8.0]) {
            assert!((got - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn integer_coefficient_detection() {
        let p = PolynomialCoefficients::from_coeffs(vec![-2.0 + 1e-10, 1e-10, 1.0]);
        assert_eq!(p.integer_coefficients(1e-8), Some(vec![-2, 0, 1]));
        assert!(p.integrality_residual() < 1e-9);
        let q = PolynomialCoefficients::from_coeffs(vec![-0.5, 1.0]);
        assert_eq!(q.integer_coefficients(1e-8), None);
        assert!((q.integrality_residual() - 0.5).abs() < 1e-12);
    }
}
