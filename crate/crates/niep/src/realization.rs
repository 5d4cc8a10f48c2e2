//! Constructive realization: quotient spectra, the cyclic block lift, and
//! verification certificates.
//!
//! A multiset with rotational order p is realized in two moves.  The p-th
//! power map sends it to p copies of a quotient multiset whose peripheral
//! set is a single simple radius, so the quotient is primitive territory;
//! a realizer B of the quotient is then lifted to the block-cyclic matrix
//!
//! ```text
//!     [ 0   I   0  ...  0 ]
//!     [ 0   0   I  ...  0 ]
//!     [ ...             I ]
//!     [ B   0   0  ...  0 ]
//! ```
//!
//! of order pM, which is irreducible of period p and carries exactly the
//! original multiset as its nonzero spectrum.  Nothing here is trusted:
//! every certificate re-measures irreducibility, the period, and the
//! spectrum on the constructed matrix, and the integer variant additionally
//! confirms the defining polynomial identity and the net-trace transfer in
//! exact arithmetic.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::conditions::check_frobenius_set;
use crate::exact;
use crate::matrix::{MatrixError, NonnegativeMatrix};
use crate::power_sums::{PolynomialCoefficients, PowerSums};
use crate::report::Status;
use crate::spectrum::{format_complex, SpectrumError, SpectrumMultiset};

#[derive(Debug, Clone, Error)]
pub enum RealizationError {
    #[error("multiset lacks the rotational structure: {condition} fails ({witness})")]
    NotFrobenius { condition: String, witness: String },
    #[error("peripheral set is not a full set of rotated radii: {detail}")]
    MalformedPeripheral { detail: String },
    #[error("power-map multiplicity of {value} is {multiplicity}, not divisible by p = {p}")]
    QuotientFailure {
        value: String,
        multiplicity: usize,
        p: usize,
    },
    #[error("power-sum transfer mismatch at k = {k}: residual {residual:.3e}")]
    QuotientTransferFailure { k: u32, residual: f64 },
    #[error("supplied matrix does not realize the quotient: {detail}")]
    WrongQuotientRealizer { detail: String },
    #[error("constructed matrix failed verification")]
    CertificateFailed(Box<RealizationCertificate>),
    #[error("exact structure check failed: {detail}")]
    StructureMismatch { detail: String },
    #[error("target is not admissible for a primitive search: {detail}")]
    NotAdmissible { detail: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// Quotient of a multiset under its rotational order.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientResult {
    pub p: usize,
    /// The quotient multiset: the p-th power map applied to the input
    /// yields exactly p copies of this.
    pub lambda1: SpectrumMultiset,
    /// Largest normalized defect in the transfer law
    /// `s_(kp)(input) = p * s_k(quotient)` over the scanned k.
    pub copy_check_residual: f64,
}

/// Everything measured on a constructed realizer.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateEvidence {
    pub irreducible: bool,
    pub b_primitive: bool,
    pub measured_period: Option<usize>,
    pub spectrum_match_residual: f64,
    pub zeros_removed: usize,
    pub quotient_copy_residual: f64,
    pub integral: bool,
    /// Exact polynomial identity between the target polynomial and the
    /// realizer's lifted characteristic factor (integer lifts only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polynomial_identity: Option<bool>,
    /// Exact net-trace transfer t_(pk)(lift) = p t_k(realizer) (integer
    /// lifts only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub net_trace_transfer: Option<bool>,
}

/// A constructed matrix together with the measurements backing the claim
/// that it realizes the spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct RealizationCertificate {
    pub matrix: NonnegativeMatrix,
    pub claimed_spectrum: SpectrumMultiset,
    pub p: usize,
    pub verified: bool,
    pub evidence: CertificateEvidence,
}

/// Rotational order of the peripheral set: the number of its distinct
/// elements, after confirming the multiset has the full rotational
/// structure and the peripheral set is exactly `{zeta^j rho}` for
/// `zeta = exp(2 pi i / p)`.
pub fn peripheral_period(spectrum: &SpectrumMultiset, tol: f64) -> Result<usize, RealizationError> {
    for entry in check_frobenius_set(spectrum, tol) {
        if entry.status == Status::Fails {
            return Err(RealizationError::NotFrobenius {
                condition: entry.condition_id,
                witness: entry.witness,
            });
        }
    }
    let rho = spectrum.spectral_radius();
    let tol_abs = tol * rho.max(1.0);
    let peripheral = spectrum.peripheral(rho, tol_abs);
    let p = peripheral.count_distinct;
    for j in 0..p {
        let expect = Complex64::from_polar(rho, 2.0 * std::f64::consts::PI * j as f64 / p as f64);
        let found = peripheral
            .elements
            .iter()
            .any(|e| (e.value - expect).norm() <= tol_abs && e.multiplicity == 1);
        if !found {
            return Err(RealizationError::MalformedPeripheral {
                detail: format!(
                    "expected simple element {} on the circle",
                    format_complex(expect)
                ),
            });
        }
    }
    Ok(p)
}

/// Applies the p-th power map and divides every multiplicity by p.
///
/// Requires the input to be invariant under rotation by `exp(2 pi i / p)`;
/// a multiplicity not divisible by p is the detector for that failing.
/// The transfer law `s_(kp)(input) = p * s_k(quotient)` is verified for
/// `k <= 20` and its largest normalized defect is returned.
pub fn quotient_spectrum(
    spectrum: &SpectrumMultiset,
    p: usize,
    tol: f64,
) -> Result<QuotientResult, RealizationError> {
    assert!(p >= 1);
    let phi = spectrum.power_map(p as u32)?;
    let mut values = Vec::new();
    for e in phi.entries() {
        if e.multiplicity % p != 0 {
            return Err(RealizationError::QuotientFailure {
                value: format_complex(e.value),
                multiplicity: e.multiplicity,
                p,
            });
        }
        for _ in 0..e.multiplicity / p {
            values.push(e.value);
        }
    }
    let lambda1 = SpectrumMultiset::with_tolerance(&values, phi.tolerance())?;
    let sums = PowerSums::new(spectrum.clone());
    let quotient_sums = PowerSums::new(lambda1.clone());
    let rho = spectrum.spectral_radius();
    let mut worst = 0.0_f64;
    for k in 1..=20u32 {
        let kp = k * p as u32;
        let (skp, sk) = match (sums.value(kp), quotient_sums.value(k)) {
            (Ok(a), Ok(b)) => (a, b),
            // Overflow limits the scan, it does not falsify the law.
            _ => break,
        };
        let scale = rho.powi(kp as i32).max(1.0);
        let defect = (skp - p as f64 * sk).abs() / scale;
        worst = worst.max(defect);
        if defect > tol.max(1e-12) * 100.0 {
            return Err(RealizationError::QuotientTransferFailure {
                k: kp,
                residual: defect,
            });
        }
    }
    Ok(QuotientResult {
        p,
        lambda1,
        copy_check_residual: worst,
    })
}

/// The block-cyclic lift: identity blocks of order M on the superdiagonal
/// and B in the bottom-left corner, giving a matrix of order pM.  For
/// p = 1 this is B itself.
pub fn cyclic_block_lift(b: &NonnegativeMatrix, p: usize) -> NonnegativeMatrix {
    assert!(p >= 1);
    if p == 1 {
        return b.clone();
    }
    let m = b.order();
    let n = p * m;
    let mut data = vec![0.0_f64; n * n];
    for block in 0..p - 1 {
        for r in 0..m {
            data[(block * m + r) * n + ((block + 1) * m + r)] = 1.0;
        }
    }
    for r in 0..m {
        for c in 0..m {
            data[((p - 1) * m + r) * n + c] = b[(r, c)];
        }
    }
    NonnegativeMatrix::from_flat(n, data).expect("lift of a valid matrix is valid")
}

/// Builds the lift of `b` and measures every claim: irreducibility, the
/// period, and the nonzero spectrum matching `spectrum`.  `b` must realize
/// the quotient of `spectrum` under its rotational order.
pub fn realize_irreducible(
    spectrum: &SpectrumMultiset,
    b: &NonnegativeMatrix,
    tol: f64,
) -> Result<RealizationCertificate, RealizationError> {
    let p = peripheral_period(spectrum, tol)?;
    let quotient = quotient_spectrum(spectrum, p, tol)?;
    build_certificate(spectrum, b, p, &quotient, tol, false)
}

/// Integer variant: additionally confirms the lift is integral, the exact
/// polynomial identity `prod (z - lambda) = q(z^p)` where q is the nonzero
/// characteristic factor of B, and the exact net-trace transfer
/// `t_(pk)(lift) = p t_k(B)` for `pk <= 24`.
pub fn verify_kor_lift(
    spectrum: &SpectrumMultiset,
    b: &NonnegativeMatrix,
    tol: f64,
) -> Result<RealizationCertificate, RealizationError> {
    if !b.is_integral() {
        return Err(MatrixError::NotIntegral.into());
    }
    let p = peripheral_period(spectrum, tol)?;
    let quotient = quotient_spectrum(spectrum, p, tol)?;
    build_certificate(spectrum, b, p, &quotient, tol, true)
}

fn build_certificate(
    spectrum: &SpectrumMultiset,
    b: &NonnegativeMatrix,
    p: usize,
    quotient: &QuotientResult,
    tol: f64,
    exact_checks: bool,
) -> Result<RealizationCertificate, RealizationError> {
    let rho = spectrum.spectral_radius();
    let tol_abs = tol * rho.max(1.0);
    let quotient_tol = tol * rho.powi(p as i32).max(1.0);

    let b_spectrum = b.nonzero_spectrum(None)?;
    if let Err(fail) = b_spectrum
        .spectrum
        .match_against(&quotient.lambda1, quotient_tol)
    {
        return Err(RealizationError::WrongQuotientRealizer {
            detail: format!(
                "nonzero spectrum of the supplied matrix has unmatched element {}",
                format_complex(fail.unmatched)
            ),
        });
    }

    let a = cyclic_block_lift(b, p);
    let irreducible = a.is_irreducible(0.0);
    let b_primitive = b.is_primitive(0.0);
    let measured_period = if irreducible {
        Some(a.period(0.0).expect("irreducible matrix has a period"))
    } else {
        None
    };
    let lifted = a.nonzero_spectrum(None)?;
    let (match_ok, spectrum_match_residual) =
        match lifted.spectrum.match_against(spectrum, tol_abs) {
            Ok(residual) => (true, residual),
            Err(_) => (false, f64::INFINITY),
        };

    let mut polynomial_identity = None;
    let mut net_trace_transfer = None;
    if exact_checks {
        polynomial_identity = Some(exact_polynomial_identity(spectrum, b, p, tol)?);
        net_trace_transfer = Some(exact_net_trace_transfer(&a, b, p)?);
    }

    let period_ok = !b_primitive || measured_period == Some(p);
    let verified = irreducible
        && period_ok
        && match_ok
        && polynomial_identity != Some(false)
        && net_trace_transfer != Some(false);

    let certificate = RealizationCertificate {
        matrix: a,
        claimed_spectrum: spectrum.clone(),
        p,
        verified,
        evidence: CertificateEvidence {
            irreducible,
            b_primitive,
            measured_period,
            spectrum_match_residual,
            zeros_removed: lifted.zeros_removed,
            quotient_copy_residual: quotient.copy_check_residual,
            integral: certificate_integral(b, p),
            polynomial_identity,
            net_trace_transfer,
        },
    };
    if verified {
        Ok(certificate)
    } else {
        Err(RealizationError::CertificateFailed(Box::new(certificate)))
    }
}

fn certificate_integral(b: &NonnegativeMatrix, p: usize) -> bool {
    // The lift only adds 0/1 blocks, so integrality is decided by B.
    let _ = p;
    b.is_integral()
}

/// Exact identity `prod over the multiset (z - lambda) = q(z^p)` with q the
/// nonzero characteristic factor of B, both sides as integer coefficient
/// vectors.
fn exact_polynomial_identity(
    spectrum: &SpectrumMultiset,
    b: &NonnegativeMatrix,
    p: usize,
    tol: f64,
) -> Result<bool, RealizationError> {
    let pc = PolynomialCoefficients::from_spectrum(spectrum);
    let scale = pc.coeffs().iter().map(|c| c.abs()).fold(1.0, f64::max);
    let lhs = pc
        .integer_coefficients(tol * scale)
        .ok_or_else(|| RealizationError::StructureMismatch {
            detail: format!(
                "target polynomial is not integral (residual {:.3e})",
                pc.integrality_residual()
            ),
        })?;
    let lhs: Vec<BigInt> = lhs.into_iter().map(BigInt::from).collect();
    let charpoly = exact::charpoly_exact(b.data(), b.order());
    let (_, q) = exact::strip_zero_roots(&charpoly);
    let rhs = exact::substitute_power_big(&q, p);
    if lhs == rhs {
        Ok(true)
    } else {
        Err(RealizationError::StructureMismatch {
            detail: format!(
                "coefficient vectors differ: target {:?} vs lifted factor {:?}",
                lhs, rhs
            ),
        })
    }
}

/// Exact transfer `t_(pk)(lift) = p t_k(B)` for `pk <= 24`.
fn exact_net_trace_transfer(
    a: &NonnegativeMatrix,
    b: &NonnegativeMatrix,
    p: usize,
) -> Result<bool, RealizationError> {
    let mut k = 1u32;
    while k * p as u32 <= 24 {
        let lhs = a.net_trace_exact(k * p as u32)?;
        let rhs = b.net_trace_exact(k)? * BigInt::from(p);
        if lhs != rhs {
            return Err(RealizationError::StructureMismatch {
                detail: format!("net trace transfer fails at k = {k}: {lhs} != {rhs}"),
            });
        }
        k += 1;
    }
    // The lift's net traces must vanish off multiples of p.
    if p > 1 {
        for k in 1..=24u32 {
            if k % p as u32 == 0 {
                continue;
            }
            let t = a.net_trace_exact(k)?;
            if !t.is_zero() && a.is_integral() {
                return Err(RealizationError::StructureMismatch {
                    detail: format!("net trace t_{k} = {t} should vanish off multiples of {p}"),
                });
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::CheckParams;

    fn spectrum(vals: &[(f64, f64)]) -> SpectrumMultiset {
        let raw: Vec<Complex64> = vals.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        SpectrumMultiset::new(&raw).unwrap()
    }

    fn matrix(rows: &[&[f64]]) -> NonnegativeMatrix {
        NonnegativeMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn peripheral_period_examples() {
        assert_eq!(
            peripheral_period(&spectrum(&[(2.0, 0.0), (-2.0, 0.0)]), 1e-8).unwrap(),
            2
        );
        assert_eq!(
            peripheral_period(&spectrum(&[(2.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]), 1e-8).unwrap(),
            1
        );
        assert_eq!(
            peripheral_period(
                &spectrum(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]),
                1e-8
            )
            .unwrap(),
            4
        );
        // {2, -2, 1} is not rotation-invariant.
        assert!(matches!(
            peripheral_period(&spectrum(&[(2.0, 0.0), (-2.0, 0.0), (1.0, 0.0)]), 1e-8),
            Err(RealizationError::NotFrobenius { .. })
        ));
    }

    #[test]
    fn quotient_examples() {
        let r = 2.0_f64.sqrt();
        let q = quotient_spectrum(&spectrum(&[(r, 0.0), (-r, 0.0)]), 2, 1e-8).unwrap();
        assert_eq!(q.p, 2);
        assert_eq!(q.lambda1.size(), 1);
        assert!((q.lambda1.entries()[0].value - Complex64::new(2.0, 0.0)).norm() < 1e-9);
        assert!(q.copy_check_residual < 1e-9);

        let roots4 = spectrum(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]);
        let q = quotient_spectrum(&roots4, 4, 1e-8).unwrap();
        assert_eq!(q.lambda1.size(), 1);
        assert!((q.lambda1.entries()[0].value - Complex64::new(1.0, 0.0)).norm() < 1e-9);

        // p = 1 is the identity.
        let s = spectrum(&[(2.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]);
        let q = quotient_spectrum(&s, 1, 1e-8).unwrap();
        assert!(q.lambda1.multiset_equal(&s, 1e-9));

        // Quotient by a mismatched p is detected by non-divisible
        // multiplicities.
        let bad = quotient_spectrum(&spectrum(&[(2.0, 0.0), (1.0, 0.0)]), 2, 1e-8);
        assert!(matches!(
            bad,
            Err(RealizationError::QuotientFailure { p: 2, .. })
        ));
    }

    #[test]
    fn lift_construction_examples() {
        let b = matrix(&[&[2.0]]);
        let a2 = cyclic_block_lift(&b, 2);
        assert_eq!(a2.order(), 2);
        assert_eq!(a2.data(), &[0.0, 1.0, 2.0, 0.0]);

        let a3 = cyclic_block_lift(&b, 3);
        assert_eq!(a3.order(), 3);
        assert_eq!(
            a3.data(),
            &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 2.0, 0.0, 0.0]
        );
        assert!(a3.is_integral());

        let id = cyclic_block_lift(&b, 1);
        assert_eq!(id, b);

        // Block placement for M = 2, p = 2.
        let b2 = matrix(&[&[1.0, 1.0], &[1.0, 0.0]]);
        let a = cyclic_block_lift(&b2, 2);
        assert_eq!(a.order(), 4);
        assert_eq!(a[(0, 2)], 1.0);
        assert_eq!(a[(1, 3)], 1.0);
        assert_eq!(a[(2, 0)], 1.0);
        assert_eq!(a[(2, 1)], 1.0);
        assert_eq!(a[(3, 0)], 1.0);
        assert_eq!(a[(3, 1)], 0.0);
    }

    #[test]
    fn realize_square_root_pair() {
        let r = 2.0_f64.sqrt();
        let s = spectrum(&[(r, 0.0), (-r, 0.0)]);
        let cert = realize_irreducible(&s, &matrix(&[&[2.0]]), 1e-8).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.p, 2);
        assert_eq!(cert.matrix.data(), &[0.0, 1.0, 2.0, 0.0]);
        assert!(cert.evidence.irreducible);
        assert_eq!(cert.evidence.measured_period, Some(2));
        assert!(cert.evidence.spectrum_match_residual < 1e-9);
    }

    #[test]
    fn realize_period_one_case() {
        let s = spectrum(&[(2.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]);
        let b = matrix(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[2.0, 3.0, 0.0]]);
        assert!(b.is_primitive(0.0));
        let cert = realize_irreducible(&s, &b, 1e-8).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.p, 1);
        assert_eq!(cert.matrix, b);
    }

    #[test]
    fn realize_fourth_roots_of_unity() {
        let s = spectrum(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]);
        let cert = realize_irreducible(&s, &matrix(&[&[1.0]]), 1e-8).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.p, 4);
        assert_eq!(cert.evidence.measured_period, Some(4));
        assert_eq!(cert.matrix.order(), 4);
    }

    #[test]
    fn wrong_realizer_is_rejected() {
        let r = 2.0_f64.sqrt();
        let s = spectrum(&[(r, 0.0), (-r, 0.0)]);
        let err = realize_irreducible(&s, &matrix(&[&[3.0]]), 1e-8);
        assert!(matches!(
            err,
            Err(RealizationError::WrongQuotientRealizer { .. })
        ));
    }

    #[test]
    fn integer_lift_verifies_exact_identities() {
        let r = 2.0_f64.sqrt();
        let s = spectrum(&[(r, 0.0), (-r, 0.0)]);
        let cert = verify_kor_lift(&s, &matrix(&[&[2.0]]), 1e-8).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.evidence.polynomial_identity, Some(true));
        assert_eq!(cert.evidence.net_trace_transfer, Some(true));
        assert!(cert.evidence.integral);

        let roots4 = spectrum(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]);
        let cert = verify_kor_lift(&roots4, &matrix(&[&[1.0]]), 1e-8).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.p, 4);

        // Golden pair with p = 1: the lift is B itself.
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        let golden = spectrum(&[(phi, 0.0), (1.0 - phi, 0.0)]);
        let b = matrix(&[&[1.0, 1.0], &[1.0, 0.0]]);
        let cert = verify_kor_lift(&golden, &b, 1e-8).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.p, 1);
        assert_eq!(cert.matrix, b);
    }

    #[test]
    fn integer_lift_requires_integral_realizer() {
        let r = 2.0_f64.sqrt();
        let s = spectrum(&[(r, 0.0), (-r, 0.0)]);
        let b = NonnegativeMatrix::parse("1\n2.0\n").unwrap();
        assert!(matches!(
            verify_kor_lift(&s, &b, 1e-8),
            Err(RealizationError::Matrix(MatrixError::NotIntegral))
        ));
    }

    #[test]
    fn certificates_and_quotients_serialize() {
        let r = 2.0_f64.sqrt();
        let s = spectrum(&[(r, 0.0), (-r, 0.0)]);
        let cert = verify_kor_lift(&s, &matrix(&[&[2.0]]), 1e-8).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.contains("\"verified\":true"));
        assert!(json.contains("\"polynomial_identity\":true"));
        let q = quotient_spectrum(&s, 2, 1e-8).unwrap();
        assert!(serde_json::to_string(&q).unwrap().contains("\"p\":2"));
    }

    #[test]
    fn kor_acceptance_then_lift_for_root_two() {
        // End to end: the integer-realizability decision accepts
        // {sqrt2, -sqrt2}, and the certified lift of [[2]] realizes it.
        let r = 2.0_f64.sqrt();
        let s = spectrum(&[(r, 0.0), (-r, 0.0)]);
        let decision =
            crate::conditions::check_kor_integer_realizability(&s, CheckParams::default());
        assert!(decision.accepted());
        let cert = verify_kor_lift(&s, &matrix(&[&[2.0]]), 1e-8).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.matrix.order(), 2);
    }
}
