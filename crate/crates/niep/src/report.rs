//! Structured verdicts for condition checks.
//!
//! Every checker produces one entry per condition with a stable id, a
//! status, a human-readable witness, and a numeric residual.  Checks over
//! an infinite family of exponents are truncated at a horizon `K_max` and
//! are never reported as a plain `holds`; the distinct
//! `holds_finite_horizon` status keeps that honesty machine-readable.

use serde::Serialize;

/// Verdict for a single condition.
///
/// `NotApplicable` marks conditions whose hypotheses exclude the input
/// (for example the odd-order refinement on an even-sized multiset); it is
/// neutral when verdicts are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    HoldsFiniteHorizon,
    Fails,
    Inconclusive,
    NotApplicable,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::HoldsFiniteHorizon => "holds (finite horizon)",
            Status::Fails => "fails",
            Status::Inconclusive => "inconclusive",
            Status::NotApplicable => "not applicable",
        }
    }
}

/// Shared parameters of a batch of checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckParams {
    /// Horizon for conditions quantified over all exponents k.
    pub k_max: u32,
    /// Relative tolerance; comparisons are slacked by tol times a scale
    /// natural to the quantity (usually a power of the spectral radius).
    pub tol: f64,
    /// Matrix order to use where a condition involves it and the realizing
    /// order may exceed the multiset size.  None means use the size.
    pub n_override: Option<usize>,
}

impl Default for CheckParams {
    fn default() -> Self {
        Self {
            k_max: 50,
            tol: 1e-8,
            n_override: None,
        }
    }
}

impl CheckParams {
    pub fn with_k_max(self, k_max: u32) -> Self {
        Self { k_max, ..self }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        Self { tol, ..self }
    }
}

/// One condition verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionEntry {
    pub condition_id: String,
    pub status: Status,
    /// Concrete evidence: the violating k, element, or coefficient on
    /// failure; the strongest margin information otherwise.
    pub witness: String,
    /// Numeric size of the violation (0 when the condition holds).
    pub residual: f64,
    /// Horizon actually scanned, for finite-horizon verdicts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u32>,
}

impl ConditionEntry {
    pub fn new(condition_id: &str, status: Status, witness: String, residual: f64) -> Self {
        Self {
            condition_id: condition_id.to_string(),
            status,
            witness,
            residual,
            horizon: None,
        }
    }

    pub fn with_horizon(mut self, k_max: u32) -> Self {
        self.horizon = Some(k_max);
        self
    }
}

/// A set of condition verdicts with an overall conjunction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub parameters: CheckParams,
    pub entries: Vec<ConditionEntry>,
    pub overall: Status,
    /// Free-form context lines (derived quantities, parameter notes).
    pub diagnostics: Vec<String>,
}

impl ConditionReport {
    pub fn from_entries(
        parameters: CheckParams,
        entries: Vec<ConditionEntry>,
        diagnostics: Vec<String>,
    ) -> Self {
        let overall = combine(entries.iter().map(|e| e.status));
        Self {
            parameters,
            entries,
            overall,
            diagnostics,
        }
    }

    pub fn entry(&self, condition_id: &str) -> Option<&ConditionEntry> {
        self.entries.iter().find(|e| e.condition_id == condition_id)
    }

    /// True when nothing failed and nothing was left inconclusive.
    pub fn accepted(&self) -> bool {
        matches!(
            self.overall,
            Status::Holds | Status::HoldsFiniteHorizon | Status::NotApplicable
        )
    }
}

/// Conjunction of verdicts: any failure dominates, then inconclusiveness,
/// then the finite-horizon caveat; `NotApplicable` is neutral.
pub fn combine(statuses: impl Iterator<Item = Status>) -> Status {
    let mut out = Status::NotApplicable;
    for s in statuses {
        match s {
            Status::Fails => return Status::Fails,
            Status::Inconclusive => out = Status::Inconclusive,
            Status::HoldsFiniteHorizon => {
                if out != Status::Inconclusive {
                    out = Status::HoldsFiniteHorizon;
                }
            }
            Status::Holds => {
                if out == Status::NotApplicable {
                    out = Status::Holds;
                }
            }
            Status::NotApplicable => {}
        }
    }
    out
}
