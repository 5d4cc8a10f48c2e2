//! Job assembly and reporting for the `niep` command-line tool.
//!
//! A [`JobSpec`] names an input (spectrum list, polynomial, or matrix
//! file), the decision suites to run, and an optional construction.
//! [`run`] executes it and returns a structured [`Report`] plus a text
//! summary; [`batch_verify`] does the same for a directory of matrix
//! files.  Reports are deterministic: equal jobs on equal inputs
//! serialize byte-identically, and no timestamps are embedded.
//!
//! Exit codes: 0 when everything requested holds (finite horizons
//! included), 1 when some check fails, 2 when the strongest verdict is
//! inconclusive, 3 for input or usage errors.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use niep::conditions::standard_diagnostics;
use niep::report::combine;
use niep::{
    check_boyle_handelman, check_frobenius_set, check_irreducible_realizability,
    check_kor_integer_realizability, check_loewy_london, check_structure,
    check_trace_conditions, cyclic_block_lift, parse_polynomial_roots, parse_spectrum_list,
    realize_irreducible, search_primitive_realizer, verify_kor_lift, CheckParams,
    ConditionReport, MatrixError, NonnegativeMatrix, ParseError, RealizationCertificate,
    RealizationError, SpectrumError, SpectrumMultiset, Status,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Errors that make a job unrunnable; they map to exit status 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Matrix(#[from] MatrixError),
    #[error("{0}")]
    Spectrum(#[from] SpectrumError),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

/// The decision suites the CLI can run on a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// All power sums nonnegative up to the horizon.
    Traces,
    /// Structure of the peripheral set under the maximal-multiplicity
    /// rotation.
    Structure,
    /// The binomial trace inequalities.
    LoewyLondon,
    /// Conjugate closure, radius attained and simple, full rotation
    /// invariance.
    Frobenius,
    /// Primitive realizability: unique peripheral element plus trace
    /// conditions.
    BoyleHandelman,
    /// Irreducible realizability: Frobenius set plus trace conditions.
    Irreducible,
    /// Integer irreducible realizability: integer coefficients and net
    /// traces.
    Kor,
}

pub const ALL_CHECKS: [CheckKind; 7] = [
    CheckKind::Traces,
    CheckKind::Structure,
    CheckKind::LoewyLondon,
    CheckKind::Frobenius,
    CheckKind::BoyleHandelman,
    CheckKind::Irreducible,
    CheckKind::Kor,
];

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Traces => "traces",
            CheckKind::Structure => "structure",
            CheckKind::LoewyLondon => "loewy-london",
            CheckKind::Frobenius => "frobenius",
            CheckKind::BoyleHandelman => "boyle-handelman",
            CheckKind::Irreducible => "irreducible",
            CheckKind::Kor => "kor",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What the job reads.
#[derive(Debug, Clone)]
pub enum InputKind {
    SpectrumList(String),
    Polynomial(String),
    MatrixFile(PathBuf),
}

/// Optional construction attached to a job.
#[derive(Debug, Clone)]
pub enum Construction {
    /// Lift the matrix in the file, either to a requested period or
    /// against a target spectrum.
    Lift {
        matrix: PathBuf,
        p: Option<usize>,
        target: Option<String>,
    },
    /// Search for a primitive realizer of the input spectrum.
    Search { n_max: Option<usize> },
}

/// Numeric knobs, mirroring the CLI flags.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Params {
    pub k_max: u32,
    pub tol: f64,
    pub zero_cut: Option<f64>,
    pub seed: u64,
    pub budget: u64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            k_max: 50,
            tol: 1e-8,
            zero_cut: None,
            seed: 0,
            budget: 100_000,
        }
    }
}

impl Params {
    fn check_params(&self) -> CheckParams {
        CheckParams::default()
            .with_k_max(self.k_max)
            .with_tol(self.tol)
    }
}

/// One runnable job: input, requested suites, optional construction.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: String,
    pub input: InputKind,
    pub checks: Vec<CheckKind>,
    pub construction: Option<Construction>,
    pub params: Params,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_roots_stripped: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub report: ConditionReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixAnalysis {
    pub order: usize,
    pub integral: bool,
    pub irreducible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    pub primitive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeros_removed: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigen_validation_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonzero_spectrum: Option<SpectrumMultiset>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructionReport {
    Lift {
        p: usize,
        verified: bool,
        matrix_text: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        certificate: Option<RealizationCertificate>,
        #[serde(skip_serializing_if = "Option::is_none")]
        round_trip_residual: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        detail: Option<String>,
    },
    Search {
        found: bool,
        evaluations: u64,
        best_objective: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        matrix_text: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        detail: Option<String>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchEntry {
    pub file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<MatrixAnalysis>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<SuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overall: Option<Status>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchTotals {
    pub files: usize,
    pub analyzed: usize,
    pub read_errors: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
}

/// The structured report, serialized to `--out`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub input: InputEcho,
    pub parameters: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumMultiset>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<SuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<MatrixAnalysis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub batch: Vec<BatchEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub totals: Option<BatchTotals>,
    pub overall: Status,
    pub exit_code: i32,
}

/// Exit status from the achieved verdicts: failure dominates, then
/// inconclusive, then success.
fn exit_code_for(overall: Status) -> i32 {
    match overall {
        Status::Fails => 1,
        Status::Inconclusive => 2,
        _ => 0,
    }
}

fn load_matrix(path: &Path) -> Result<NonnegativeMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(NonnegativeMatrix::parse(&text)?)
}

fn build_spectrum(input: &InputKind) -> Result<(SpectrumMultiset, InputEcho), CliError> {
    match input {
        InputKind::SpectrumList(text) => {
            let values = parse_spectrum_list(text)?;
            let spectrum = SpectrumMultiset::new(&values)?;
            Ok((
                spectrum,
                InputEcho {
                    kind: "spectrum-list",
                    text: Some(text.clone()),
                    path: None,
                    zero_roots_stripped: None,
                },
            ))
        }
        InputKind::Polynomial(text) => {
            let (zeros, roots) = parse_polynomial_roots(text)?;
            if roots.is_empty() {
                return Err(CliError::Usage(
                    "polynomial has no nonzero roots; the nonzero spectrum is empty".into(),
                ));
            }
            let spectrum = SpectrumMultiset::new(&roots)?;
            Ok((
                spectrum,
                InputEcho {
                    kind: "polynomial",
                    text: Some(text.clone()),
                    path: None,
                    zero_roots_stripped: Some(zeros),
                },
            ))
        }
        InputKind::MatrixFile(path) => Err(CliError::Usage(format!(
            "matrix input {} needs the analyze verb",
            path.display()
        ))),
    }
}

fn run_suite(kind: CheckKind, spectrum: &SpectrumMultiset, params: &Params) -> ConditionReport {
    let cp = params.check_params();
    match kind {
        CheckKind::Traces => ConditionReport::from_entries(
            cp,
            vec![check_trace_conditions(spectrum, params.k_max, params.tol)],
            standard_diagnostics(spectrum, cp),
        ),
        CheckKind::Structure => ConditionReport::from_entries(
            cp,
            check_structure(spectrum, params.tol),
            standard_diagnostics(spectrum, cp),
        ),
        CheckKind::LoewyLondon => ConditionReport::from_entries(
            cp,
            vec![check_loewy_london(
                spectrum,
                None,
                params.k_max,
                params.tol,
            )],
            standard_diagnostics(spectrum, cp),
        ),
        CheckKind::Frobenius => ConditionReport::from_entries(
            cp,
            check_frobenius_set(spectrum, params.tol),
            standard_diagnostics(spectrum, cp),
        ),
        CheckKind::BoyleHandelman => check_boyle_handelman(spectrum, cp),
        CheckKind::Irreducible => check_irreducible_realizability(spectrum, cp),
        CheckKind::Kor => check_kor_integer_realizability(spectrum, cp),
    }
}

/// Structure facts plus the class-matched necessity suites for a matrix:
/// the irreducible suite when the matrix is irreducible, the integer
/// suite additionally when it is integral.
fn analyze_matrix(
    m: &NonnegativeMatrix,
    params: &Params,
) -> (MatrixAnalysis, Vec<SuiteReport>) {
    let irreducible = m.is_irreducible(0.0);
    let period = if irreducible {
        Some(m.period(0.0).expect("irreducible matrix has a period"))
    } else {
        None
    };
    let primitive = period == Some(1);
    let mut analysis = MatrixAnalysis {
        order: m.order(),
        integral: m.is_integral(),
        irreducible,
        period,
        primitive,
        spectral_radius: None,
        zeros_removed: None,
        eigen_validation_residual: None,
        nonzero_spectrum: None,
        note: None,
    };
    let mut suites = Vec::new();
    match m.nonzero_spectrum(params.zero_cut) {
        Ok(nz) => {
            analysis.spectral_radius = Some(nz.spectrum.spectral_radius());
            analysis.zeros_removed = Some(nz.zeros_removed);
            analysis.eigen_validation_residual = Some(nz.validation_residual);
            if irreducible {
                suites.push(SuiteReport {
                    suite: CheckKind::Irreducible.name().into(),
                    report: run_suite(CheckKind::Irreducible, &nz.spectrum, params),
                });
                if m.is_integral() {
                    suites.push(SuiteReport {
                        suite: CheckKind::Kor.name().into(),
                        report: run_suite(CheckKind::Kor, &nz.spectrum, params),
                    });
                }
            } else {
                analysis.note = Some("not irreducible; necessity suites skipped".into());
            }
            analysis.nonzero_spectrum = Some(nz.spectrum);
        }
        Err(MatrixError::EmptySpectrum { removed, .. }) => {
            analysis.zeros_removed = Some(removed);
            analysis.note = Some(
                "all eigenvalues are zero; nonzero spectrum is empty, suites skipped".into(),
            );
        }
        Err(e) => {
            analysis.note = Some(format!("eigenvalue extraction failed: {e}"));
        }
    }
    (analysis, suites)
}

fn run_lift(
    b_path: &Path,
    p: Option<usize>,
    target: &Option<String>,
    params: &Params,
) -> Result<(ConstructionReport, Status, Option<SpectrumMultiset>), CliError> {
    let b = load_matrix(b_path)?;
    match (p, target) {
        (Some(p), None) => {
            if p == 0 {
                return Err(CliError::Usage("period must be at least 1".into()));
            }
            let a = cyclic_block_lift(&b, p);
            let lam_b = b.nonzero_spectrum(params.zero_cut)?.spectrum;
            let lam_a = a.nonzero_spectrum(params.zero_cut)?.spectrum;
            let irreducible = a.is_irreducible(0.0);
            let measured = if irreducible { a.period(0.0).ok() } else { None };
            // Round trip: the p-th powers of the lifted spectrum must be p
            // copies of the base spectrum.
            let mapped = lam_a.power_map(p as u32)?;
            let mut copies = Vec::new();
            for _ in 0..p {
                copies.extend(lam_b.values());
            }
            let expected = SpectrumMultiset::new(&copies)?;
            let rho = lam_b.spectral_radius().max(1.0);
            let round_trip = mapped.match_against(&expected, params.tol.max(1e-9) * rho);
            let period_ok = !b.is_primitive(0.0) || measured == Some(p);
            let verified = irreducible && period_ok && round_trip.is_ok();
            let detail = if verified {
                None
            } else if !irreducible {
                Some("lift is not irreducible".into())
            } else if !period_ok {
                Some(format!("measured period {measured:?}, requested {p}"))
            } else {
                Some("power-map round trip failed".into())
            };
            let status = if verified { Status::Holds } else { Status::Fails };
            Ok((
                ConstructionReport::Lift {
                    p,
                    verified,
                    matrix_text: a.to_text(),
                    certificate: None,
                    round_trip_residual: round_trip.ok(),
                    detail,
                },
                status,
                Some(lam_a),
            ))
        }
        (None, Some(text)) => {
            let values = parse_spectrum_list(text)?;
            let spectrum = SpectrumMultiset::new(&values)?;
            let result = if b.is_integral() {
                verify_kor_lift(&spectrum, &b, params.tol)
            } else {
                realize_irreducible(&spectrum, &b, params.tol)
            };
            match result {
                Ok(cert) => Ok((
                    ConstructionReport::Lift {
                        p: cert.p,
                        verified: cert.verified,
                        matrix_text: cert.matrix.to_text(),
                        certificate: Some(cert),
                        round_trip_residual: None,
                        detail: None,
                    },
                    Status::Holds,
                    Some(spectrum),
                )),
                Err(RealizationError::CertificateFailed(cert)) => Ok((
                    ConstructionReport::Lift {
                        p: cert.p,
                        verified: false,
                        matrix_text: cert.matrix.to_text(),
                        certificate: Some(*cert),
                        round_trip_residual: None,
                        detail: Some("certificate checks failed".into()),
                    },
                    Status::Fails,
                    Some(spectrum),
                )),
                Err(RealizationError::Matrix(e)) => Err(e.into()),
                Err(RealizationError::Spectrum(e)) => Err(e.into()),
                Err(other) => Ok((
                    ConstructionReport::Lift {
                        p: 0,
                        verified: false,
                        matrix_text: String::new(),
                        certificate: None,
                        round_trip_residual: None,
                        detail: Some(other.to_string()),
                    },
                    Status::Fails,
                    Some(spectrum),
                )),
            }
        }
        _ => Err(CliError::Usage(
            "lift needs exactly one of --p or --spectrum".into(),
        )),
    }
}

fn run_search(
    spectrum: &SpectrumMultiset,
    n_max: Option<usize>,
    params: &Params,
) -> Result<(ConstructionReport, Status), CliError> {
    let n_max = n_max.unwrap_or(spectrum.size());
    if n_max > 8 || spectrum.size() > n_max {
        return Err(CliError::Usage(format!(
            "search needs spectrum size <= n_max <= 8, got {} and {}",
            spectrum.size(),
            n_max
        )));
    }
    match search_primitive_realizer(spectrum, n_max, params.budget, params.seed) {
        Ok(outcome) => {
            let found = outcome.matrix.is_some();
            let status = if found {
                Status::Holds
            } else {
                Status::Inconclusive
            };
            Ok((
                ConstructionReport::Search {
                    found,
                    evaluations: outcome.evaluations,
                    best_objective: outcome.best_objective,
                    matrix_text: outcome.matrix.as_ref().map(|m| m.to_text()),
                    detail: if found {
                        None
                    } else {
                        Some("budget exhausted without a verified candidate".into())
                    },
                },
                status,
            ))
        }
        Err(RealizationError::NotAdmissible { detail }) => Ok((
            ConstructionReport::Search {
                found: false,
                evaluations: 0,
                best_objective: f64::INFINITY,
                matrix_text: None,
                detail: Some(format!("target not admissible: {detail}")),
            },
            Status::Fails,
        )),
        Err(RealizationError::Matrix(e)) => Err(e.into()),
        Err(RealizationError::Spectrum(e)) => Err(e.into()),
        Err(other) => Err(CliError::Usage(other.to_string())),
    }
}

/// Executes one job and produces the structured report plus the text
/// summary.
pub fn run(job: &JobSpec) -> Result<(Report, String), CliError> {
    let analyzes_matrix = matches!(job.input, InputKind::MatrixFile(_));
    if job.checks.is_empty() && job.construction.is_none() && !analyzes_matrix {
        return Err(CliError::Usage(
            "nothing to do: request at least one check or a construction".into(),
        ));
    }

    let mut statuses: Vec<Status> = Vec::new();
    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        command: job.command.clone(),
        input: InputEcho {
            kind: "none",
            text: None,
            path: None,
            zero_roots_stripped: None,
        },
        parameters: job.params,
        spectrum: None,
        suites: Vec::new(),
        analysis: None,
        construction: None,
        batch: Vec::new(),
        totals: None,
        overall: Status::NotApplicable,
        exit_code: 0,
    };

    if let Some(Construction::Lift { matrix, p, target }) = &job.construction {
        report.input = InputEcho {
            kind: "matrix-file",
            text: None,
            path: Some(matrix.display().to_string()),
            zero_roots_stripped: None,
        };
        let (construction, status, lifted) = run_lift(matrix, *p, target, &job.params)?;
        statuses.push(status);
        report.spectrum = lifted;
        report.construction = Some(construction);
    } else {
        match &job.input {
            InputKind::MatrixFile(path) => {
                report.input = InputEcho {
                    kind: "matrix-file",
                    text: None,
                    path: Some(path.display().to_string()),
                    zero_roots_stripped: None,
                };
                let m = load_matrix(path)?;
                let (analysis, suites) = analyze_matrix(&m, &job.params);
                statuses.extend(suites.iter().map(|s| s.report.overall));
                report.spectrum = analysis.nonzero_spectrum.clone();
                report.analysis = Some(analysis);
                report.suites = suites;
            }
            other => {
                let (spectrum, echo) = build_spectrum(other)?;
                report.input = echo;
                for kind in &job.checks {
                    let suite = run_suite(*kind, &spectrum, &job.params);
                    statuses.push(suite.overall);
                    report.suites.push(SuiteReport {
                        suite: kind.name().into(),
                        report: suite,
                    });
                }
                if let Some(Construction::Search { n_max }) = &job.construction {
                    let (construction, status) = run_search(&spectrum, *n_max, &job.params)?;
                    statuses.push(status);
                    report.construction = Some(construction);
                }
                report.spectrum = Some(spectrum);
            }
        }
    }

    report.overall = combine(statuses.into_iter());
    report.exit_code = exit_code_for(report.overall);
    let text = render_text(&report);
    Ok((report, text))
}

/// Analyzes every regular file in `dir` as a matrix, sorted by file name;
/// unreadable entries are listed without aborting the batch.
pub fn batch_verify(dir: &Path, params: &Params) -> Result<(Report, String), CliError> {
    let read = std::fs::read_dir(dir).map_err(|e| CliError::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let mut files: Vec<PathBuf> = read
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Usage(format!(
            "directory {} contains no matrix files",
            dir.display()
        )));
    }

    let mut entries = Vec::new();
    let mut statuses = Vec::new();
    let mut totals = BatchTotals {
        files: files.len(),
        analyzed: 0,
        read_errors: 0,
        passed: 0,
        failed: 0,
        inconclusive: 0,
    };
    for path in &files {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        match load_matrix(path) {
            Ok(m) => {
                let (analysis, suites) = analyze_matrix(&m, params);
                let overall = combine(suites.iter().map(|s| s.report.overall));
                statuses.push(overall);
                totals.analyzed += 1;
                match overall {
                    Status::Fails => totals.failed += 1,
                    Status::Inconclusive => totals.inconclusive += 1,
                    _ => totals.passed += 1,
                }
                entries.push(BatchEntry {
                    file: name,
                    error: None,
                    analysis: Some(analysis),
                    suites,
                    overall: Some(overall),
                });
            }
            Err(e) => {
                totals.read_errors += 1;
                entries.push(BatchEntry {
                    file: name,
                    error: Some(e.to_string()),
                    analysis: None,
                    suites: Vec::new(),
                    overall: None,
                });
            }
        }
    }
    if totals.analyzed == 0 {
        return Err(CliError::Usage(format!(
            "no file in {} parsed as a matrix",
            dir.display()
        )));
    }

    let overall = combine(statuses.into_iter());
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: "batch".into(),
        input: InputEcho {
            kind: "directory",
            text: None,
            path: Some(dir.display().to_string()),
            zero_roots_stripped: None,
        },
        parameters: *params,
        spectrum: None,
        suites: Vec::new(),
        analysis: None,
        construction: None,
        batch: entries,
        totals: Some(totals),
        overall,
        exit_code: exit_code_for(overall),
    };
    let text = render_text(&report);
    Ok((report, text))
}

fn push_suite_lines(out: &mut String, suites: &[SuiteReport], indent: &str) {
    for s in suites {
        out.push_str(&format!(
            "{indent}suite {}: {}\n",
            s.suite,
            s.report.overall.label()
        ));
        for e in &s.report.entries {
            let status = match e.horizon {
                Some(h) => format!("{} (k <= {})", e.status.label(), h),
                None => e.status.label().to_string(),
            };
            out.push_str(&format!(
                "{indent}  {:<36} {:<24} {}\n",
                e.condition_id, status, e.witness
            ));
        }
    }
}

fn push_analysis_lines(out: &mut String, a: &MatrixAnalysis, indent: &str) {
    out.push_str(&format!(
        "{indent}order {}, integral {}, irreducible {}",
        a.order, a.integral, a.irreducible
    ));
    if let Some(p) = a.period {
        out.push_str(&format!(", period {p}"));
    }
    out.push_str(&format!(", primitive {}\n", a.primitive));
    if let Some(rho) = a.spectral_radius {
        out.push_str(&format!(
            "{indent}spectral radius {rho}, zeros removed {}, validation residual {:.3e}\n",
            a.zeros_removed.unwrap_or(0),
            a.eigen_validation_residual.unwrap_or(0.0),
        ));
    }
    if let Some(nz) = &a.nonzero_spectrum {
        out.push_str(&format!("{indent}nonzero spectrum: {}\n", spectrum_line(nz)));
    }
    if let Some(note) = &a.note {
        out.push_str(&format!("{indent}note: {note}\n"));
    }
}

fn spectrum_line(s: &SpectrumMultiset) -> String {
    let parts: Vec<String> = s
        .entries()
        .iter()
        .map(|e| {
            let v = niep::spectrum::format_complex(e.value);
            if e.multiplicity == 1 {
                v
            } else {
                format!("{v} (x{})", e.multiplicity)
            }
        })
        .collect();
    parts.join(", ")
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("command: {}\n", report.command));
    match (&report.input.text, &report.input.path) {
        (Some(t), _) => out.push_str(&format!("input: {} {:?}\n", report.input.kind, t)),
        (None, Some(p)) => out.push_str(&format!("input: {} {}\n", report.input.kind, p)),
        _ => {}
    }
    if let Some(z) = report.input.zero_roots_stripped {
        if z > 0 {
            out.push_str(&format!("zero roots stripped: {z}\n"));
        }
    }
    if let Some(s) = &report.spectrum {
        out.push_str(&format!(
            "spectrum (n = {}, rho = {}): {}\n",
            s.size(),
            s.spectral_radius(),
            spectrum_line(s)
        ));
    }
    if let Some(a) = &report.analysis {
        push_analysis_lines(&mut out, a, "");
    }
    push_suite_lines(&mut out, &report.suites, "");
    if let Some(c) = &report.construction {
        match c {
            ConstructionReport::Lift {
                p,
                verified,
                matrix_text,
                detail,
                ..
            } => {
                out.push_str(&format!(
                    "lift: p = {p}, verified = {verified}\n"
                ));
                if let Some(d) = detail {
                    out.push_str(&format!("  detail: {d}\n"));
                }
                if !matrix_text.is_empty() {
                    out.push_str("matrix:\n");
                    for line in matrix_text.lines() {
                        out.push_str(&format!("  {line}\n"));
                    }
                }
            }
            ConstructionReport::Search {
                found,
                evaluations,
                best_objective,
                matrix_text,
                detail,
            } => {
                out.push_str(&format!(
                    "search: found = {found}, evaluations = {evaluations}, best objective = {best_objective:.3e}\n"
                ));
                if let Some(d) = detail {
                    out.push_str(&format!("  detail: {d}\n"));
                }
                if let Some(m) = matrix_text {
                    out.push_str("matrix:\n");
                    for line in m.lines() {
                        out.push_str(&format!("  {line}\n"));
                    }
                }
            }
        }
    }
    for e in &report.batch {
        match (&e.error, &e.analysis) {
            (Some(err), _) => out.push_str(&format!("file {}: error: {err}\n", e.file)),
            (None, Some(a)) => {
                out.push_str(&format!(
                    "file {}: {}\n",
                    e.file,
                    e.overall.map(|s| s.label()).unwrap_or("skipped")
                ));
                push_analysis_lines(&mut out, a, "  ");
                push_suite_lines(&mut out, &e.suites, "  ");
            }
            _ => {}
        }
    }
    if let Some(t) = &report.totals {
        out.push_str(&format!(
            "totals: {} files, {} analyzed, {} read errors, {} passed, {} failed, {} inconclusive\n",
            t.files, t.analyzed, t.read_errors, t.passed, t.failed, t.inconclusive
        ));
    }
    out.push_str(&format!(
        "overall: {} (exit {})\n",
        report.overall.label(),
        report.exit_code
    ));
    out
}
