//! Browser bindings for the realizability checker.
//!
//! Three operations back the demo page: check a spectrum against the
//! decision suites, analyze a matrix given in the plain text format, and
//! build and verify the cyclic block lift of a matrix.  Each takes plain
//! text and returns a JSON envelope (`{"ok":true,"report":...}` or
//! `{"ok":false,"error":...}`) so the page needs no bindings beyond
//! `JSON.parse`.
//!
//! The `*_impl` functions contain all the logic and compile on the host,
//! where the unit tests run; the thin `#[wasm_bindgen]` wrappers only
//! serialize.  Build the browser package with
//! `wasm-pack build crates/niep-wasm --target web`.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use niep::report::combine;
use niep::{
    check_boyle_handelman, check_irreducible_realizability, check_kor_integer_realizability,
    cyclic_block_lift, parse_polynomial_roots, parse_spectrum_list, CheckParams, ConditionReport,
    NonnegativeMatrix, SpectrumMultiset, Status,
};

/// One plotted eigenvalue: position, multiplicity, and whether it lies on
/// the circle of maximal modulus.
#[derive(Serialize)]
struct Point {
    re: f64,
    im: f64,
    multiplicity: usize,
    peripheral: bool,
}

fn points(spectrum: &SpectrumMultiset) -> Vec<Point> {
    let rho = spectrum.spectral_radius();
    let tol = spectrum.tolerance() * rho.max(1.0);
    spectrum
        .entries()
        .iter()
        .map(|e| Point {
            re: e.value.re,
            im: e.value.im,
            multiplicity: e.multiplicity,
            peripheral: (e.value.norm() - rho).abs() <= tol,
        })
        .collect()
}

#[derive(Serialize)]
struct SuiteVerdict {
    suite: &'static str,
    overall: Status,
    overall_label: &'static str,
    report: ConditionReport,
}

fn suite(name: &'static str, report: ConditionReport) -> SuiteVerdict {
    SuiteVerdict {
        suite: name,
        overall: report.overall,
        overall_label: report.overall.label(),
        report,
    }
}

/// The three suites answer three different questions (realizable by a
/// primitive, an irreducible, an integer irreducible matrix), so there is
/// deliberately no combined verdict here; the page shows them side by side.
#[derive(Serialize)]
struct CheckReport {
    n: usize,
    rho: f64,
    zero_roots_stripped: usize,
    spectrum: Vec<Point>,
    suites: Vec<SuiteVerdict>,
}

fn check_spectrum_impl(
    input: &str,
    as_polynomial: bool,
    tol: f64,
) -> Result<CheckReport, String> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err("tolerance must be a nonnegative finite number".into());
    }
    let (zeros, values) = if as_polynomial {
        parse_polynomial_roots(input).map_err(|e| e.to_string())?
    } else {
        let v = parse_spectrum_list(input).map_err(|e| e.to_string())?;
        (0, v)
    };
    let sp = SpectrumMultiset::with_tolerance(&values, tol).map_err(|e| e.to_string())?;
    let params = CheckParams {
        tol,
        ..CheckParams::default()
    };
    let suites = vec![
        suite("boyle-handelman", check_boyle_handelman(&sp, params)),
        suite("irreducible", check_irreducible_realizability(&sp, params)),
        suite("kor", check_kor_integer_realizability(&sp, params)),
    ];
    Ok(CheckReport {
        n: sp.size(),
        rho: sp.spectral_radius(),
        zero_roots_stripped: zeros,
        spectrum: points(&sp),
        suites,
    })
}

#[derive(Serialize)]
struct AnalysisReport {
    order: usize,
    integral: bool,
    irreducible: bool,
    period: Option<usize>,
    primitive: bool,
    spectral_radius: f64,
    zeros_removed: usize,
    spectrum: Vec<Point>,
    suites: Vec<SuiteVerdict>,
    note: Option<String>,
    overall: Status,
    overall_label: &'static str,
}

fn analyze_matrix_impl(text: &str) -> Result<AnalysisReport, String> {
    let m = NonnegativeMatrix::parse(text).map_err(|e| e.to_string())?;
    let irreducible = m.is_irreducible(0.0);
    let period = m.period(0.0).ok();
    let nz = m.nonzero_spectrum(None).map_err(|e| e.to_string())?;
    let params = CheckParams::default();

    let mut suites = Vec::new();
    let mut note = None;
    if irreducible {
        suites.push(suite(
            "irreducible",
            check_irreducible_realizability(&nz.spectrum, params),
        ));
        if m.is_integral() {
            suites.push(suite(
                "kor",
                check_kor_integer_realizability(&nz.spectrum, params),
            ));
        }
    } else {
        note = Some("not irreducible; necessity suites skipped".to_string());
    }
    let overall = combine(suites.iter().map(|s| s.overall));
    Ok(AnalysisReport {
        order: m.order(),
        integral: m.is_integral(),
        irreducible,
        period,
        primitive: m.is_primitive(0.0),
        spectral_radius: nz.spectrum.spectral_radius(),
        zeros_removed: nz.zeros_removed,
        spectrum: points(&nz.spectrum),
        suites,
        note,
        overall,
        overall_label: overall.label(),
    })
}

#[derive(Serialize)]
struct LiftReport {
    p: usize,
    base_order: usize,
    lifted_order: usize,
    verified: bool,
    irreducible: bool,
    measured_period: Option<usize>,
    round_trip_residual: f64,
    matrix_text: String,
    base_spectrum: Vec<Point>,
    lifted_spectrum: Vec<Point>,
    detail: Option<String>,
}

fn lift_matrix_impl(text: &str, p: usize) -> Result<LiftReport, String> {
    if p == 0 {
        return Err("period must be at least 1".into());
    }
    if p > 64 {
        return Err("period is capped at 64 for the demo".into());
    }
    let b = NonnegativeMatrix::parse(text).map_err(|e| e.to_string())?;
    if b.order() * p > 256 {
        return Err("lifted order is capped at 256 for the demo".into());
    }
    let b_nz = b.nonzero_spectrum(None).map_err(|e| e.to_string())?;
    let a = cyclic_block_lift(&b, p);
    let a_nz = a.nonzero_spectrum(None).map_err(|e| e.to_string())?;

    let irreducible = a.is_irreducible(0.0);
    let measured_period = a.period(0.0).ok();

    // Round trip: the p-th powers of the lifted spectrum must be p copies
    // of the base spectrum.
    let rho_b = b_nz.spectrum.spectral_radius();
    let match_tol = 1e-9_f64.max(b_nz.spectrum.tolerance()) * rho_b.max(1.0);
    let phi = a_nz
        .spectrum
        .power_map(p as u32)
        .map_err(|e| e.to_string())?;
    let copies: Vec<Complex64> = b_nz
        .spectrum
        .entries()
        .iter()
        .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity * p))
        .collect();
    let copies_set =
        SpectrumMultiset::with_tolerance(&copies, phi.tolerance()).map_err(|e| e.to_string())?;
    let round_trip = phi.match_against(&copies_set, match_tol);
    let round_trip_residual = *round_trip.as_ref().unwrap_or(&f64::INFINITY);

    let period_ok = measured_period == Some(p) || (!b.is_primitive(0.0) && irreducible);
    let verified = irreducible && period_ok && round_trip.is_ok();
    let detail = if verified {
        None
    } else if !irreducible {
        Some("lift is not irreducible; is the base matrix irreducible?".to_string())
    } else if !period_ok {
        Some(format!(
            "measured period {measured_period:?} differs from requested {p}"
        ))
    } else {
        Some("p-th powers of the lifted spectrum do not match p copies of the base".to_string())
    };

    Ok(LiftReport {
        p,
        base_order: b.order(),
        lifted_order: a.order(),
        verified,
        irreducible,
        measured_period,
        round_trip_residual,
        matrix_text: a.to_text(),
        base_spectrum: points(&b_nz.spectrum),
        lifted_spectrum: points(&a_nz.spectrum),
        detail,
    })
}

fn envelope<T: Serialize>(result: Result<T, String>) -> String {
    let value = match result {
        Ok(report) => json!({ "ok": true, "report": report }),
        Err(error) => json!({ "ok": false, "error": error }),
    };
    value.to_string()
}

/// Check a spectrum (comma or space separated complex literals, or monic
/// polynomial coefficients when `as_polynomial`) against the three
/// realizability suites.
#[wasm_bindgen]
pub fn check_spectrum(input: &str, as_polynomial: bool, tol: f64) -> String {
    envelope(check_spectrum_impl(input, as_polynomial, tol))
}

/// Analyze a matrix in the plain text format: order line, then rows.
#[wasm_bindgen]
pub fn analyze_matrix(text: &str) -> String {
    envelope(analyze_matrix_impl(text))
}

/// Build the cyclic block lift of the given matrix and verify it.
#[wasm_bindgen]
pub fn lift_matrix(text: &str, p: usize) -> String {
    envelope(lift_matrix_impl(text, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_distinguishes_the_three_questions() {
        // {sqrt 2, -sqrt 2} has two peripheral elements: not realizable by
        // a primitive matrix, but irreducibly and integrally realizable.
        let r = check_spectrum_impl("[1.4142135624, -1.4142135624]", false, 1e-8).unwrap();
        assert_eq!(r.n, 2);
        let by_name = |name: &str| r.suites.iter().find(|s| s.suite == name).unwrap();
        assert_eq!(by_name("boyle-handelman").overall, Status::Fails);
        assert_eq!(
            by_name("irreducible").overall,
            Status::HoldsFiniteHorizon
        );
        assert_eq!(by_name("kor").overall, Status::HoldsFiniteHorizon);
        assert_eq!(r.spectrum.len(), 2);
        assert!(r.spectrum.iter().all(|pt| pt.peripheral));
    }

    #[test]
    fn check_flags_failures() {
        let r = check_spectrum_impl("2, -2, 1", false, 1e-8).unwrap();
        assert!(r.suites.iter().all(|s| s.overall == Status::Fails));
    }

    #[test]
    fn check_parses_polynomials() {
        let r = check_spectrum_impl("1 0 0 -2", true, 1e-8).unwrap();
        assert_eq!(r.n, 3);
        assert_eq!(r.zero_roots_stripped, 0);
        assert!((r.rho - 2.0_f64.cbrt()).abs() < 1e-9);
    }

    #[test]
    fn check_rejects_malformed_input() {
        assert!(check_spectrum_impl("abc", false, 1e-8).is_err());
        assert!(check_spectrum_impl("[1]", false, -1.0).is_err());
        assert!(check_spectrum_impl("", false, 1e-8).is_err());
    }

    #[test]
    fn analyze_reports_structure() {
        let r = analyze_matrix_impl("2\n0 1\n2 0\n").unwrap();
        assert_eq!(r.order, 2);
        assert!(r.irreducible);
        assert_eq!(r.period, Some(2));
        assert!(!r.primitive);
        assert_eq!(r.suites.len(), 2);
        assert!(r.note.is_none());

        let r = analyze_matrix_impl("2\n1 1\n0 1\n").unwrap();
        assert!(!r.irreducible);
        assert!(r.suites.is_empty());
        assert!(r.note.unwrap().contains("not irreducible"));
    }

    #[test]
    fn lift_builds_and_verifies() {
        let r = lift_matrix_impl("1\n2\n", 3).unwrap();
        assert!(r.verified, "detail: {:?}", r.detail);
        assert_eq!(r.lifted_order, 3);
        assert_eq!(r.measured_period, Some(3));
        assert_eq!(r.lifted_spectrum.len(), 3);
        assert!(r.round_trip_residual < 1e-9);
        assert!(r.matrix_text.starts_with("3\n"));
    }

    #[test]
    fn lift_rejects_bad_parameters() {
        assert!(lift_matrix_impl("1\n2\n", 0).is_err());
        assert!(lift_matrix_impl("1\n2\n", 65).is_err());
        assert!(lift_matrix_impl("garbage", 2).is_err());
    }

    #[test]
    fn envelope_shapes_are_stable() {
        let ok: serde_json::Value =
            serde_json::from_str(&check_spectrum("[2]", false, 1e-8)).unwrap();
        assert_eq!(ok["ok"], true);
        assert_eq!(ok["report"]["n"], 1);
        let err: serde_json::Value =
            serde_json::from_str(&check_spectrum("nope", false, 1e-8)).unwrap();
        assert_eq!(err["ok"], false);
        assert!(err["error"].as_str().unwrap().contains("nope"));
    }
}
