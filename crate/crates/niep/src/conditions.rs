//! Condition checkers for nonzero spectra of nonnegative matrices.
//!
//! Three graded acceptance tests are assembled from shared ingredients:
//!
//! * primitive realizability: the spectral circle carries only the radius
//!   itself (simple), and the trace and positivity-propagation inequalities
//!   hold;
//! * irreducible realizability: the multiset has the full rotational
//!   (Frobenius) structure, and the same two trace families hold;
//! * integer irreducible realizability: the Frobenius structure, integer
//!   characteristic coefficients, and nonnegative net traces.
//!
//! Families quantified over all exponents are scanned to a horizon and
//! reported as `holds_finite_horizon`, never as a plain `holds`; strict
//! inequalities leave a `+-tol` borderline band that is reported
//! `inconclusive` rather than silently resolved either way.

use num_complex::Complex64;

use crate::power_sums::{NetTraces, PolynomialCoefficients, PowerSumError, PowerSums};
use crate::report::{CheckParams, ConditionEntry, ConditionReport, Status};
use crate::spectrum::{format_complex, SpectrumMultiset};

pub const TRACE_NONNEGATIVE: &str = "trace_nonnegative";
pub const STRUCTURE_CONJUGATE_CLOSED: &str = "structure_conjugate_closed";
pub const STRUCTURE_RADIUS_ATTAINED: &str = "structure_radius_attained";
pub const STRUCTURE_RADIUS_MAX_MULTIPLICITY: &str = "structure_radius_max_multiplicity";
pub const STRUCTURE_PERIPHERAL_ROTATION: &str = "structure_peripheral_rotation";
pub const LOEWY_LONDON: &str = "loewy_london";
pub const POSITIVITY_PROPAGATION: &str = "positivity_propagation";
pub const ODD_CASE_REFINEMENT: &str = "odd_case_refinement";
pub const FROBENIUS_CONJUGATE_CLOSED: &str = "frobenius_conjugate_closed";
pub const FROBENIUS_RADIUS_ATTAINED: &str = "frobenius_radius_attained";
pub const FROBENIUS_PERIPHERAL_SIMPLE: &str = "frobenius_peripheral_simple";
pub const FROBENIUS_ROTATION_INVARIANCE: &str = "frobenius_rotation_invariance";
pub const PERIPHERAL_UNIQUE: &str = "peripheral_unique";
pub const INTEGER_COEFFICIENTS: &str = "integer_coefficients";
pub const NET_TRACE_NONNEGATIVE: &str = "net_trace_nonnegative";

/// Default horizon for the infinite condition families: generous relative
/// to the multiset size and its rotational order.
pub fn default_k_max(spectrum: &SpectrumMultiset) -> u32 {
    let rho = spectrum.spectral_radius();
    let p = spectrum
        .peripheral(rho, spectrum.tolerance())
        .count_distinct
        .max(1);
    (4 * spectrum.size() * p).max(50) as u32
}

fn abs_tol(spectrum: &SpectrumMultiset, tol: f64) -> f64 {
    tol * spectrum.spectral_radius().max(1.0)
}

/// Trace conditions: `s_k >= 0` for all k, scanned for `k = 1..=k_max`
/// with slack `tol * rho^k`.
pub fn check_trace_conditions(spectrum: &SpectrumMultiset, k_max: u32, tol: f64) -> ConditionEntry {
    let sums = PowerSums::new(spectrum.clone());
    let rho = spectrum.spectral_radius();
    let mut worst_margin = f64::INFINITY;
    for k in 1..=k_max {
        let scale = rho.powi(k as i32).max(1e-300);
        let s = match sums.value(k) {
            Ok(v) => v,
            Err(PowerSumError::Overflow { k }) => {
                return ConditionEntry::new(
                    TRACE_NONNEGATIVE,
                    Status::Inconclusive,
                    format!("power sum overflowed at k = {k}"),
                    f64::INFINITY,
                )
            }
        };
        let normalized = s / scale;
        worst_margin = worst_margin.min(normalized);
        if normalized < -tol {
            return ConditionEntry::new(
                TRACE_NONNEGATIVE,
                Status::Fails,
                format!("s_{k} = {s}"),
                -normalized,
            );
        }
    }
    ConditionEntry::new(
        TRACE_NONNEGATIVE,
        Status::HoldsFiniteHorizon,
        format!("s_k >= -tol*rho^k for k = 1..{k_max}; smallest normalized s_k = {worst_margin}"),
        (-worst_margin).max(0.0),
    )
    .with_horizon(k_max)
}

/// Structural conclusions that hold for any nonzero spectrum of a
/// nonnegative matrix: conjugate closure, the radius being an element of
/// maximal multiplicity, and invariance of the peripheral multiset under
/// rotation by `exp(2 pi i / p)` where p counts the distinct peripheral
/// elements of maximal multiplicity.  Four entries.
pub fn check_structure(spectrum: &SpectrumMultiset, tol: f64) -> Vec<ConditionEntry> {
    let tol_abs = abs_tol(spectrum, tol);
    let rho = spectrum.spectral_radius();
    let mut out = Vec::with_capacity(4);

    out.push(conjugate_closure_entry(
        spectrum,
        tol_abs,
        STRUCTURE_CONJUGATE_CLOSED,
    ));
    out.push(radius_attained_entry(
        spectrum,
        tol_abs,
        STRUCTURE_RADIUS_ATTAINED,
    ));

    // The multiplicity bound is over the peripheral set only: interior
    // elements may repeat more often than rho does.
    let m_rho = spectrum.radius_multiplicity(tol_abs);
    let peripheral = spectrum.peripheral(rho, tol_abs);
    let max_entry = peripheral
        .elements
        .iter()
        .max_by_key(|e| e.multiplicity)
        .copied()
        .expect("radius is attained by some element");
    if m_rho >= max_entry.multiplicity {
        out.push(ConditionEntry::new(
            STRUCTURE_RADIUS_MAX_MULTIPLICITY,
            Status::Holds,
            format!("m(rho) = {m_rho} is maximal"),
            0.0,
        ));
    } else {
        out.push(ConditionEntry::new(
            STRUCTURE_RADIUS_MAX_MULTIPLICITY,
            Status::Fails,
            format!(
                "m({}) = {} exceeds m(rho) = {m_rho}",
                format_complex(max_entry.value),
                max_entry.multiplicity
            ),
            (max_entry.multiplicity - m_rho) as f64,
        ));
    }

    // Rotation of the peripheral multiset by e^(2 pi i / p), where p counts
    // the distinct peripheral elements whose multiplicity equals m(rho).
    let p = peripheral
        .elements
        .iter()
        .filter(|e| e.multiplicity == m_rho)
        .count();
    if m_rho == 0 || p == 0 {
        out.push(ConditionEntry::new(
            STRUCTURE_PERIPHERAL_ROTATION,
            Status::Inconclusive,
            "rotation order undefined: rho is not an element".into(),
            f64::INFINITY,
        ));
        return out;
    }
    let values: Vec<Complex64> = peripheral
        .elements
        .iter()
        .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
        .collect();
    let peripheral_set = SpectrumMultiset::with_tolerance(&values, spectrum.tolerance())
        .expect("peripheral elements are valid");
    out.push(rotation_entry(
        &peripheral_set,
        p,
        tol_abs,
        STRUCTURE_PERIPHERAL_ROTATION,
        "peripheral multiset",
    ));
    out
}

/// Power-sum growth bound: `n^(k-1) s_{mk} >= (s_m)^k` for all m >= 1 and
/// k >= 2 with `mk <= k_max`.  `n` defaults to the multiset size; a
/// realizing matrix may be larger, so an override is accepted.
pub fn check_loewy_london(
    spectrum: &SpectrumMultiset,
    n_override: Option<usize>,
    k_max: u32,
    tol: f64,
) -> ConditionEntry {
    let n = n_override.unwrap_or_else(|| spectrum.size());
    let sums = PowerSums::new(spectrum.clone());
    let mut overflow: Option<(u32, u32)> = None;
    let mut worst = 0.0_f64;
    for m in 1..=k_max {
        for k in 2..=k_max {
            let km = match m.checked_mul(k) {
                Some(v) if v <= k_max => v,
                _ => break,
            };
            let (s_km, s_m) = match (sums.value(km), sums.value(m)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    overflow = overflow.or(Some((m, k)));
                    continue;
                }
            };
            let lhs = (n as f64).powi(k as i32 - 1) * s_km;
            let rhs = s_m.powi(k as i32);
            if !lhs.is_finite() || !rhs.is_finite() {
                overflow = overflow.or(Some((m, k)));
                continue;
            }
            let slack = tol * lhs.abs().max(rhs.abs()).max(1.0);
            if lhs < rhs - slack {
                return ConditionEntry::new(
                    LOEWY_LONDON,
                    Status::Fails,
                    format!("m = {m}, k = {k}: n^(k-1) s_(mk) = {lhs} < (s_m)^k = {rhs}"),
                    (rhs - lhs) / rhs.abs().max(1.0),
                );
            }
            worst = worst.max((rhs - lhs) / rhs.abs().max(1.0));
        }
    }
    if let Some((m, k)) = overflow {
        return ConditionEntry::new(
            LOEWY_LONDON,
            Status::Inconclusive,
            format!("overflow while scanning m = {m}, k = {k}"),
            f64::INFINITY,
        );
    }
    ConditionEntry::new(
        LOEWY_LONDON,
        Status::HoldsFiniteHorizon,
        format!("n = {n}; all pairs with mk <= {k_max}"),
        worst.max(0.0),
    )
    .with_horizon(k_max)
}

/// Positivity propagation: whenever `s_m > 0`, every `s_{km}` must be
/// positive as well.  Strict positivity is certified only outside a
/// `+-tol*rho^k` band; values inside the band make the verdict
/// inconclusive rather than resolving strictness by luck.
pub fn check_positivity_propagation(
    spectrum: &SpectrumMultiset,
    k_max: u32,
    tol: f64,
) -> ConditionEntry {
    let sums = PowerSums::new(spectrum.clone());
    let rho = spectrum.spectral_radius();
    let thr = |k: u32| tol * rho.powi(k as i32).max(1.0);
    let mut borderline: Option<String> = None;
    for m in 1..=k_max {
        let s_m = match sums.value(m) {
            Ok(v) => v,
            Err(_) => {
                borderline.get_or_insert(format!("power sum overflowed at k = {m}"));
                continue;
            }
        };
        if s_m <= thr(m) {
            continue;
        }
        let mut t = 2 * m;
        while t <= k_max {
            match sums.value(t) {
                Ok(s_t) if s_t < -thr(t) => {
                    return ConditionEntry::new(
                        POSITIVITY_PROPAGATION,
                        Status::Fails,
                        format!("s_{m} = {s_m} > 0 but s_{t} = {s_t} < 0"),
                        -s_t / rho.powi(t as i32).max(1e-300),
                    );
                }
                Ok(s_t) if s_t <= thr(t) => {
                    borderline.get_or_insert(format!(
                        "s_{m} = {s_m} > 0 but s_{t} = {s_t} is within +-tol of zero"
                    ));
                }
                Ok(_) => {}
                Err(_) => {
                    borderline.get_or_insert(format!("power sum overflowed at k = {t}"));
                }
            }
            t += m;
        }
    }
    match borderline {
        Some(witness) => {
            ConditionEntry::new(POSITIVITY_PROPAGATION, Status::Inconclusive, witness, 0.0)
                .with_horizon(k_max)
        }
        None => ConditionEntry::new(
            POSITIVITY_PROPAGATION,
            Status::HoldsFiniteHorizon,
            format!("every clearly positive s_m propagates up to k = {k_max}"),
            0.0,
        )
        .with_horizon(k_max),
    }
}

/// Sharpened fourth-moment bound for traceless odd-sized multisets:
/// `(n-1) s_4 >= (s_2)^2` when `s_1 = 0` and n is odd.  Not applicable
/// otherwise.
pub fn check_odd_case_refinement(spectrum: &SpectrumMultiset, tol: f64) -> ConditionEntry {
    let n = spectrum.size();
    let tol_abs = abs_tol(spectrum, tol);
    if n.is_multiple_of(2) {
        return ConditionEntry::new(
            ODD_CASE_REFINEMENT,
            Status::NotApplicable,
            format!("size n = {n} is even"),
            0.0,
        );
    }
    let sums = PowerSums::new(spectrum.clone());
    let s_1 = match sums.value(1) {
        Ok(v) => v,
        Err(_) => {
            return ConditionEntry::new(
                ODD_CASE_REFINEMENT,
                Status::Inconclusive,
                "power sum overflowed at k = 1".into(),
                f64::INFINITY,
            )
        }
    };
    if s_1.abs() > tol_abs {
        return ConditionEntry::new(
            ODD_CASE_REFINEMENT,
            Status::NotApplicable,
            format!("s_1 = {s_1} is nonzero"),
            0.0,
        );
    }
    let (s_2, s_4) = match (sums.value(2), sums.value(4)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => {
            return ConditionEntry::new(
                ODD_CASE_REFINEMENT,
                Status::Inconclusive,
                "power sum overflowed at k = 2 or 4".into(),
                f64::INFINITY,
            )
        }
    };
    let lhs = (n as f64 - 1.0) * s_4;
    let rhs = s_2 * s_2;
    let slack = tol * lhs.abs().max(rhs.abs()).max(1.0);
    if lhs >= rhs - slack {
        ConditionEntry::new(
            ODD_CASE_REFINEMENT,
            Status::Holds,
            format!("(n-1) s_4 = {lhs} >= (s_2)^2 = {rhs}"),
            ((rhs - lhs) / rhs.abs().max(1.0)).max(0.0),
        )
    } else {
        ConditionEntry::new(
            ODD_CASE_REFINEMENT,
            Status::Fails,
            format!("(n-1) s_4 = {lhs} < (s_2)^2 = {rhs}"),
            (rhs - lhs) / rhs.abs().max(1.0),
        )
    }
}

/// The four rotational-structure conditions a nonzero spectrum of an
/// irreducible nonnegative matrix must satisfy: conjugate closure, the
/// radius being an element, every peripheral element being simple, and
/// invariance of the whole multiset under rotation by `exp(2 pi i / p)`
/// with p the number of distinct peripheral elements.  Four entries.
pub fn check_frobenius_set(spectrum: &SpectrumMultiset, tol: f64) -> Vec<ConditionEntry> {
    let tol_abs = abs_tol(spectrum, tol);
    let rho = spectrum.spectral_radius();
    let mut out = Vec::with_capacity(4);
    out.push(conjugate_closure_entry(
        spectrum,
        tol_abs,
        FROBENIUS_CONJUGATE_CLOSED,
    ));
    out.push(radius_attained_entry(
        spectrum,
        tol_abs,
        FROBENIUS_RADIUS_ATTAINED,
    ));
    let peripheral = spectrum.peripheral(rho, tol_abs);
    match peripheral.elements.iter().find(|e| e.multiplicity > 1) {
        Some(e) => out.push(ConditionEntry::new(
            FROBENIUS_PERIPHERAL_SIMPLE,
            Status::Fails,
            format!("m({}) = {}", format_complex(e.value), e.multiplicity),
            (e.multiplicity - 1) as f64,
        )),
        None => out.push(ConditionEntry::new(
            FROBENIUS_PERIPHERAL_SIMPLE,
            Status::Holds,
            format!("all {} peripheral elements are simple", peripheral.count_distinct),
            0.0,
        )),
    }
    // Rotation invariance of the WHOLE multiset; contrast with the
    // structural check above, which rotates only the peripheral part.
    out.push(rotation_entry(
        spectrum,
        peripheral.count_distinct,
        tol_abs,
        FROBENIUS_ROTATION_INVARIANCE,
        "full multiset",
    ));
    out
}

/// Primitive realizability: the peripheral set is `{rho}` alone with
/// multiplicity one, and the trace and positivity-propagation families
/// hold.
pub fn check_boyle_handelman(spectrum: &SpectrumMultiset, params: CheckParams) -> ConditionReport {
    let mut entries = vec![peripheral_unique_entry(spectrum, params.tol)];
    entries.push(check_trace_conditions(spectrum, params.k_max, params.tol));
    entries.push(check_positivity_propagation(
        spectrum,
        params.k_max,
        params.tol,
    ));
    ConditionReport::from_entries(params, entries, standard_diagnostics(spectrum, params))
}

/// Irreducible realizability: the Frobenius structure plus the trace and
/// positivity-propagation families.
pub fn check_irreducible_realizability(
    spectrum: &SpectrumMultiset,
    params: CheckParams,
) -> ConditionReport {
    let mut entries = check_frobenius_set(spectrum, params.tol);
    entries.push(check_trace_conditions(spectrum, params.k_max, params.tol));
    entries.push(check_positivity_propagation(
        spectrum,
        params.k_max,
        params.tol,
    ));
    ConditionReport::from_entries(params, entries, standard_diagnostics(spectrum, params))
}

/// Integer irreducible realizability: the Frobenius structure, integer
/// characteristic coefficients, and nonnegative net traces.
pub fn check_kor_integer_realizability(
    spectrum: &SpectrumMultiset,
    params: CheckParams,
) -> ConditionReport {
    let mut entries = check_frobenius_set(spectrum, params.tol);
    entries.push(integer_coefficients_entry(spectrum, params.tol));
    entries.push(net_trace_entry(spectrum, params.k_max, params.tol));
    ConditionReport::from_entries(params, entries, standard_diagnostics(spectrum, params))
}

/// Context lines shared by every suite report: size, radius, peripheral
/// count.
pub fn standard_diagnostics(spectrum: &SpectrumMultiset, params: CheckParams) -> Vec<String> {
    let rho = spectrum.spectral_radius();
    let p = spectrum.peripheral(rho, abs_tol(spectrum, params.tol)).count_distinct;
    vec![
        format!("n = {}", spectrum.size()),
        format!("rho = {rho}"),
        format!("peripheral distinct count p = {p}"),
    ]
}

fn conjugate_closure_entry(
    spectrum: &SpectrumMultiset,
    tol_abs: f64,
    id: &str,
) -> ConditionEntry {
    match spectrum.match_against(&spectrum.conjugate(), tol_abs) {
        Ok(residual) => ConditionEntry::new(
            id,
            Status::Holds,
            "multiset equals its conjugate".into(),
            residual,
        ),
        Err(fail) => ConditionEntry::new(
            id,
            Status::Fails,
            format!("{} has no conjugate partner", format_complex(fail.unmatched)),
            f64::INFINITY,
        ),
    }
}

fn radius_attained_entry(spectrum: &SpectrumMultiset, tol_abs: f64, id: &str) -> ConditionEntry {
    let rho = spectrum.spectral_radius();
    let m = spectrum.radius_multiplicity(tol_abs);
    if m >= 1 {
        ConditionEntry::new(id, Status::Holds, format!("rho = {rho} is an element"), 0.0)
    } else {
        let nearest = spectrum
            .entries()
            .iter()
            .map(|e| (e.value - Complex64::new(rho, 0.0)).norm())
            .fold(f64::INFINITY, f64::min);
        ConditionEntry::new(
            id,
            Status::Fails,
            format!("rho = {rho} is not an element"),
            nearest,
        )
    }
}

/// Rotation invariance of `target` under `exp(2 pi i / p)`.
fn rotation_entry(
    target: &SpectrumMultiset,
    p: usize,
    tol_abs: f64,
    id: &str,
    what: &str,
) -> ConditionEntry {
    assert!(p >= 1);
    let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / p as f64);
    let rotated = match target.rotate(zeta) {
        Ok(r) => r,
        Err(e) => {
            return ConditionEntry::new(
                id,
                Status::Inconclusive,
                format!("rotation failed: {e}"),
                f64::INFINITY,
            )
        }
    };
    match rotated.match_against(target, tol_abs) {
        Ok(residual) => ConditionEntry::new(
            id,
            Status::Holds,
            format!("{what} invariant under rotation by 2 pi / {p}"),
            residual,
        ),
        Err(fail) => ConditionEntry::new(
            id,
            Status::Fails,
            format!(
                "rotation by 2 pi / {p} moves {} outside the {what}",
                format_complex(fail.unmatched)
            ),
            f64::INFINITY,
        ),
    }
}

fn peripheral_unique_entry(spectrum: &SpectrumMultiset, tol: f64) -> ConditionEntry {
    let tol_abs = abs_tol(spectrum, tol);
    let rho = spectrum.spectral_radius();
    let peripheral = spectrum.peripheral(rho, tol_abs);
    if peripheral.count_distinct != 1 {
        let others: Vec<String> = peripheral
            .elements
            .iter()
            .map(|e| format_complex(e.value))
            .collect();
        return ConditionEntry::new(
            PERIPHERAL_UNIQUE,
            Status::Fails,
            format!(
                "{} distinct peripheral elements: {}",
                peripheral.count_distinct,
                others.join(", ")
            ),
            peripheral.count_distinct as f64 - 1.0,
        );
    }
    let e = peripheral.elements[0];
    if (e.value - Complex64::new(rho, 0.0)).norm() > tol_abs {
        return ConditionEntry::new(
            PERIPHERAL_UNIQUE,
            Status::Fails,
            format!(
                "peripheral element {} differs from rho = {rho}",
                format_complex(e.value)
            ),
            (e.value - Complex64::new(rho, 0.0)).norm(),
        );
    }
    if e.multiplicity != 1 {
        return ConditionEntry::new(
            PERIPHERAL_UNIQUE,
            Status::Fails,
            format!("m(rho) = {}", e.multiplicity),
            (e.multiplicity - 1) as f64,
        );
    }
    ConditionEntry::new(
        PERIPHERAL_UNIQUE,
        Status::Holds,
        format!("peripheral set is exactly {{{rho}}}"),
        0.0,
    )
}

fn integer_coefficients_entry(spectrum: &SpectrumMultiset, tol: f64) -> ConditionEntry {
    let pc = PolynomialCoefficients::from_spectrum(spectrum);
    let scale = pc.coeffs().iter().map(|c| c.abs()).fold(1.0, f64::max);
    let residual = pc.integrality_residual().max(pc.imag_residual());
    if residual <= tol * scale {
        let ints: Vec<String> = pc
            .coeffs()
            .iter()
            .map(|c| format!("{}", c.round() as i64))
            .collect();
        ConditionEntry::new(
            INTEGER_COEFFICIENTS,
            Status::Holds,
            format!("ascending coefficients [{}]", ints.join(", ")),
            residual,
        )
    } else {
        let (idx, coeff) = pc
            .coeffs()
            .iter()
            .enumerate()
            .max_by(|a, b| {
                (a.1 - a.1.round())
                    .abs()
                    .total_cmp(&(b.1 - b.1.round()).abs())
            })
            .expect("nonempty coefficients");
        ConditionEntry::new(
            INTEGER_COEFFICIENTS,
            Status::Fails,
            format!("coefficient of z^{idx} is {coeff}"),
            residual,
        )
    }
}

fn net_trace_entry(spectrum: &SpectrumMultiset, k_max: u32, tol: f64) -> ConditionEntry {
    let traces = NetTraces::new(spectrum.clone());
    let rho = spectrum.spectral_radius();
    let mut worst = f64::INFINITY;
    for k in 1..=k_max {
        let scale = rho.powi(k as i32).max(1e-300);
        let t = match traces.value(k) {
            Ok(v) => v,
            Err(_) => {
                return ConditionEntry::new(
                    NET_TRACE_NONNEGATIVE,
                    Status::Inconclusive,
                    format!("net trace overflowed at k = {k}"),
                    f64::INFINITY,
                )
            }
        };
        let normalized = t / scale;
        worst = worst.min(normalized);
        if normalized < -tol {
            return ConditionEntry::new(
                NET_TRACE_NONNEGATIVE,
                Status::Fails,
                format!("t_{k} = {t}"),
                -normalized,
            );
        }
    }
    ConditionEntry::new(
        NET_TRACE_NONNEGATIVE,
        Status::HoldsFiniteHorizon,
        format!("t_k >= -tol*rho^k for k = 1..{k_max}; smallest normalized t_k = {worst}"),
        (-worst).max(0.0),
    )
    .with_horizon(k_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(vals: &[(f64, f64)]) -> SpectrumMultiset {
        let raw: Vec<Complex64> = vals.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        SpectrumMultiset::new(&raw).unwrap()
    }

    fn params() -> CheckParams {
        CheckParams::default().with_k_max(30)
    }

    #[test]
    fn trace_conditions_examples() {
        let fail = check_trace_conditions(&spectrum(&[(-1.0, 0.0)]), 30, 1e-8);
        assert_eq!(fail.status, Status::Fails);
        assert!(fail.witness.contains("s_1 = -1"));

        let hold = check_trace_conditions(&spectrum(&[(2.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]), 30, 1e-8);
        assert_eq!(hold.status, Status::HoldsFiniteHorizon);
        assert_eq!(hold.horizon, Some(30));

        let roots4 = spectrum(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]);
        assert_eq!(
            check_trace_conditions(&roots4, 30, 1e-8).status,
            Status::HoldsFiniteHorizon
        );
    }

    #[test]
    fn structure_examples() {
        // {1, -1, -1}: the radius does not carry the maximal multiplicity.
        let e = check_structure(&spectrum(&[(1.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]), 1e-8);
        assert_eq!(e.len(), 4);
        let by_id = |id: &str| e.iter().find(|x| x.condition_id == id).unwrap();
        assert_eq!(by_id(STRUCTURE_CONJUGATE_CLOSED).status, Status::Holds);
        assert_eq!(by_id(STRUCTURE_RADIUS_ATTAINED).status, Status::Holds);
        let c3 = by_id(STRUCTURE_RADIUS_MAX_MULTIPLICITY);
        assert_eq!(c3.status, Status::Fails);
        assert!(c3.witness.contains("m(-1) = 2"));
        // p counts only maximal-multiplicity peripheral elements: here just
        // {1}, so the rotation is by 2 pi and trivially holds.
        assert_eq!(by_id(STRUCTURE_PERIPHERAL_ROTATION).status, Status::Holds);

        // {2, -2}: all four hold with p = 2.
        let e = check_structure(&spectrum(&[(2.0, 0.0), (-2.0, 0.0)]), 1e-8);
        assert!(e.iter().all(|x| x.status == Status::Holds));

        // {2, -1, -1}: an interior element may repeat more often than rho;
        // the multiplicity bound applies to peripheral elements only.  This
        // multiset is realized by the companion matrix of (z-2)(z+1)^2.
        let e = check_structure(&spectrum(&[(2.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]), 1e-8);
        assert!(e.iter().all(|x| x.status == Status::Holds));

        // {1+i}: conjugate closure fails.
        let e = check_structure(&spectrum(&[(1.0, 1.0)]), 1e-8);
        assert_eq!(e[0].condition_id, STRUCTURE_CONJUGATE_CLOSED);
        assert_eq!(e[0].status, Status::Fails);
        assert!(e[0].witness.contains("1+1i"));
    }

    #[test]
    fn loewy_london_examples() {
        // {1, 1}: equality for every pair.
        let e = check_loewy_london(&spectrum(&[(1.0, 0.0), (1.0, 0.0)]), None, 20, 1e-8);
        assert_eq!(e.status, Status::HoldsFiniteHorizon);

        let e = check_loewy_london(
            &spectrum(&[(2.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]),
            None,
            20,
            1e-8,
        );
        assert_eq!(e.status, Status::HoldsFiniteHorizon);

        // {1, -1}: m = 2, k = 2 gives equality s_4 = (s_2)^2 / 2.
        let e = check_loewy_london(&spectrum(&[(1.0, 0.0), (-1.0, 0.0)]), None, 20, 1e-8);
        assert_eq!(e.status, Status::HoldsFiniteHorizon);

        // A multiset violating the bound: {3, -1, -1} has s_1 = 1 and
        // n = 3, so s_2 >= s_1^2 / 3 requires s_2 = 11 >= 1/3: holds; use a
        // synthetic failure instead: {1, i sqrt 2, -i sqrt 2} has s_2 = -3
        // while s_1 = 1 > 0, so m = 1, k = 2 fails.
        let s2 = 2.0_f64.sqrt();
        let e = check_loewy_london(
            &spectrum(&[(1.0, 0.0), (0.0, s2), (0.0, -s2)]),
            None,
            20,
            1e-8,
        );
        assert_eq!(e.status, Status::Fails);
        assert!(e.witness.contains("m = 1, k = 2"));
    }

    #[test]
    fn loewy_london_respects_order_override() {
        // With a larger claimed order the bound weakens.
        let s = spectrum(&[(1.0, 0.0), (1.0, 0.0)]);
        let tight = check_loewy_london(&s, Some(2), 10, 1e-8);
        let loose = check_loewy_london(&s, Some(10), 10, 1e-8);
        assert_eq!(tight.status, Status::HoldsFiniteHorizon);
        assert_eq!(loose.status, Status::HoldsFiniteHorizon);
        assert!(loose.witness.contains("n = 10"));
    }

    #[test]
    fn positivity_propagation_examples() {
        let e = check_positivity_propagation(
            &spectrum(&[(2.0_f64.sqrt(), 0.0), (-(2.0_f64.sqrt()), 0.0)]),
            30,
            1e-8,
        );
        assert_eq!(e.status, Status::HoldsFiniteHorizon);

        let e = check_positivity_propagation(
            &spectrum(&[(2.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]),
            30,
            1e-8,
        );
        assert_eq!(e.status, Status::HoldsFiniteHorizon);

        // {1, i sqrt2, -i sqrt2}: s_1 = 1 > 0 but s_2 = -3.
        let s2 = 2.0_f64.sqrt();
        let e = check_positivity_propagation(
            &spectrum(&[(1.0, 0.0), (0.0, s2), (0.0, -s2)]),
            30,
            1e-8,
        );
        assert_eq!(e.status, Status::Fails);
        assert!(e.witness.contains("s_1 = 1"));
        assert!(e.witness.contains("s_2 = -3"));
    }

    #[test]
    fn odd_case_examples() {
        // {2, -1, -1}: n = 3 odd, s_1 = 0, equality 2 * 18 = 36 = 6^2.
        let e = check_odd_case_refinement(&spectrum(&[(2.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]), 1e-8);
        assert_eq!(e.status, Status::Holds);
        assert!(e.witness.contains("36"));

        let e = check_odd_case_refinement(&spectrum(&[(1.0, 0.0), (1.0, 0.0)]), 1e-8);
        assert_eq!(e.status, Status::NotApplicable);
        assert!(e.witness.contains("even"));

        let e = check_odd_case_refinement(
            &spectrum(&[(3.0, 0.0), (-1.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]),
            1e-8,
        );
        assert_eq!(e.status, Status::NotApplicable);

        // Odd size but nonzero trace: also not applicable.
        let e = check_odd_case_refinement(&spectrum(&[(2.0, 0.0)]), 1e-8);
        assert_eq!(e.status, Status::NotApplicable);
        assert!(e.witness.contains("s_1"));
    }

    #[test]
    fn frobenius_examples() {
        let ok = check_frobenius_set(&spectrum(&[(2.0, 0.0), (-2.0, 0.0)]), 1e-8);
        assert!(ok.iter().all(|e| e.status == Status::Holds));

        // {2, -2, 1}: rotation by -1 sends 1 to -1, which is missing.
        let bad = check_frobenius_set(&spectrum(&[(2.0, 0.0), (-2.0, 0.0), (1.0, 0.0)]), 1e-8);
        let rot = bad
            .iter()
            .find(|e| e.condition_id == FROBENIUS_ROTATION_INVARIANCE)
            .unwrap();
        assert_eq!(rot.status, Status::Fails);
        assert!(rot.witness.contains("-1"));

        let roots4 = check_frobenius_set(
            &spectrum(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]),
            1e-8,
        );
        assert!(roots4.iter().all(|e| e.status == Status::Holds));

        // Doubled radius breaks peripheral simplicity.
        let dup = check_frobenius_set(&spectrum(&[(1.0, 0.0), (1.0, 0.0)]), 1e-8);
        let simple = dup
            .iter()
            .find(|e| e.condition_id == FROBENIUS_PERIPHERAL_SIMPLE)
            .unwrap();
        assert_eq!(simple.status, Status::Fails);
        assert!(simple.witness.contains("m(1) = 2"));
    }

    #[test]
    fn boyle_handelman_examples() {
        let ok = check_boyle_handelman(&spectrum(&[(2.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]), params());
        assert!(ok.accepted());
        assert_eq!(ok.overall, Status::HoldsFiniteHorizon);

        let r = 2.0_f64.sqrt();
        let two_peripheral = check_boyle_handelman(&spectrum(&[(r, 0.0), (-r, 0.0)]), params());
        assert_eq!(two_peripheral.overall, Status::Fails);
        assert_eq!(
            two_peripheral.entry(PERIPHERAL_UNIQUE).unwrap().status,
            Status::Fails
        );

        let neg = check_boyle_handelman(&spectrum(&[(-1.0, 0.0)]), params());
        assert_eq!(neg.overall, Status::Fails);
        assert_eq!(
            neg.entry(TRACE_NONNEGATIVE).unwrap().status,
            Status::Fails
        );
    }

    #[test]
    fn irreducible_realizability_examples() {
        let r = 2.0_f64.sqrt();
        let ok = check_irreducible_realizability(&spectrum(&[(r, 0.0), (-r, 0.0)]), params());
        assert!(ok.accepted());

        let bad = check_irreducible_realizability(
            &spectrum(&[(2.0, 0.0), (-2.0, 0.0), (1.0, 0.0)]),
            params(),
        );
        assert_eq!(bad.overall, Status::Fails);

        let bh_case =
            check_irreducible_realizability(&spectrum(&[(2.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]), params());
        assert!(bh_case.accepted());
    }

    #[test]
    fn integer_realizability_examples() {
        let r = 2.0_f64.sqrt();
        let ok = check_kor_integer_realizability(&spectrum(&[(r, 0.0), (-r, 0.0)]), params());
        assert!(ok.accepted());
        let coeffs = ok.entry(INTEGER_COEFFICIENTS).unwrap();
        assert_eq!(coeffs.status, Status::Holds);
        assert!(coeffs.witness.contains("[-2, 0, 1]"));

        // Golden pair: z^2 - z - 1, net traces from Lucas numbers.
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        let golden = check_kor_integer_realizability(
            &spectrum(&[(phi, 0.0), (1.0 - phi, 0.0)]),
            params(),
        );
        assert!(golden.accepted());

        let frac = check_kor_integer_realizability(&spectrum(&[(1.5, 0.0)]), params());
        assert_eq!(frac.overall, Status::Fails);
        let c = frac.entry(INTEGER_COEFFICIENTS).unwrap();
        assert_eq!(c.status, Status::Fails);
        assert!(c.witness.contains("z^0"));
    }

    #[test]
    fn failing_traces_sink_all_three_theorems() {
        let s = spectrum(&[(-1.0, 0.0)]);
        assert_eq!(check_boyle_handelman(&s, params()).overall, Status::Fails);
        assert_eq!(
            check_irreducible_realizability(&s, params()).overall,
            Status::Fails
        );
        let kor = check_kor_integer_realizability(&s, params());
        assert_eq!(kor.overall, Status::Fails);
        // Net trace t_1 = s_1 = -1 also fails on its own.
        assert_eq!(
            kor.entry(NET_TRACE_NONNEGATIVE).unwrap().status,
            Status::Fails
        );
    }

    #[test]
    fn reports_are_deterministic() {
        let a = spectrum(&[(2.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)]);
        let b = spectrum(&[(-1.0, 0.0), (2.0, 0.0), (-1.0, 0.0)]);
        let ra = serde_json::to_string(&check_boyle_handelman(&a, params())).unwrap();
        let rb = serde_json::to_string(&check_boyle_handelman(&b, params())).unwrap();
        assert_eq!(ra, rb);
    }

    #[test]
    fn default_horizon_scales_with_size_and_period() {
        let small = spectrum(&[(2.0, 0.0)]);
        assert_eq!(default_k_max(&small), 50);
        let roots: Vec<(f64, f64)> = (0..8)
            .map(|j| {
                let t = 2.0 * std::f64::consts::PI * j as f64 / 8.0;
                (t.cos(), t.sin())
            })
            .collect();
        let eighth = spectrum(&roots);
        assert_eq!(default_k_max(&eighth), 4 * 8 * 8);
    }
}
