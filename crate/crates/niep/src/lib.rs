//! Decision procedures and constructions for the nonzero spectra of
//! nonnegative matrices.
//!
//! Given a finite multiset of nonzero complex numbers, this crate answers
//! three graded questions: can the multiset be the nonzero eigenvalue
//! multiset of a nonnegative primitive matrix, of a nonnegative irreducible
//! matrix, or of a nonnegative irreducible matrix with integer entries?
//! The decision side is built from power sums, Möbius-transformed net
//! traces, and the structure of the peripheral spectrum.  The constructive
//! side lifts a primitive realizer of the quotient spectrum to an
//! irreducible realizer of any requested period through a cyclic block
//! embedding, and verifies every claim on the produced matrix.
//!
//! The crate deliberately keeps two independent routes for each structural
//! question (graph search versus matrix powers for irreducibility and
//! primitivity, eigensolver versus characteristic polynomial for spectra)
//! so that one route can certify the other.

pub mod conditions;
mod eigen;
mod exact;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod power_sums;
pub mod realization;
pub mod report;
pub mod search;
pub mod spectrum;

pub use conditions::{
    check_boyle_handelman, check_frobenius_set, check_irreducible_realizability,
    check_kor_integer_realizability, check_loewy_london, check_odd_case_refinement,
    check_positivity_propagation, check_structure, check_trace_conditions, default_k_max,
};
pub use eigen::EigenError;
pub use matrix::{DigraphSummary, MatrixError, NonnegativeMatrix, NonzeroSpectrum};
pub use parse::{parse_complex, parse_polynomial_roots, parse_spectrum_list, ParseError};
pub use realization::{
    cyclic_block_lift, peripheral_period, quotient_spectrum, realize_irreducible,
    verify_kor_lift, CertificateEvidence, QuotientResult, RealizationCertificate,
    RealizationError,
};
pub use report::{CheckParams, ConditionEntry, ConditionReport, Status};
pub use search::{search_primitive_realizer, SearchOutcome};

pub use power_sums::{mobius, NetTraces, PolynomialCoefficients, PowerSumError, PowerSums};
pub use spectrum::{PeripheralSet, SpectrumEntry, SpectrumError, SpectrumMultiset};
