//! Canonical multisets of nonzero complex numbers.
//!
//! Every decision procedure in this crate consumes a [`SpectrumMultiset`]:
//! a finite multiset of nonzero complex values in a canonical form that
//! makes equality, conjugation symmetry, and peripheral structure cheap to
//! inspect.  Canonicalization clusters points that agree within a
//! tolerance, merges them into multiplicity-weighted representatives, and
//! forces exact conjugate symmetry whenever the input is conjugate-closed
//! within the same tolerance.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Default relative clustering tolerance.
///
/// The absolute tolerance used during canonicalization is this value scaled
/// by `max(1, max |z|)` over the raw input.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Errors raised while building or transforming a spectrum multiset.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpectrumError {
    /// The input contained no elements.
    #[error("spectrum multiset must contain at least one element")]
    Empty,
    /// An element had a NaN or infinite component.
    #[error("element ({re}, {im}) is not finite")]
    NotFinite { re: f64, im: f64 },
    /// An element was zero or indistinguishable from zero at the tolerance.
    #[error("element {value} has modulus {modulus:.3e} at or below the zero threshold {threshold:.3e}")]
    ZeroElement {
        value: Complex64,
        modulus: f64,
        threshold: f64,
    },
    /// A rotation factor was not on the unit circle.
    #[error("rotation factor {zeta} has modulus {modulus} but must be unit modulus")]
    NotUnitModulus { zeta: Complex64, modulus: f64 },
}

/// One canonical representative together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// The elements of maximal modulus, i.e. those on the spectral circle.
#[derive(Debug, Clone, Serialize)]
pub struct PeripheralSet {
    /// Radius of the circle the elements were collected from.
    pub radius: f64,
    /// Distinct peripheral representatives with multiplicities.
    pub elements: Vec<SpectrumEntry>,
    /// Number of distinct peripheral values.
    pub count_distinct: usize,
}

/// A canonical multiset of nonzero complex numbers.
///
/// Invariants maintained by every constructor and transform:
///
/// * all values are finite, nonzero, and pairwise separated by more than
///   the clustering tolerance;
/// * multiplicities are positive and sum to the multiset size;
/// * entries are sorted by decreasing modulus, ties broken by increasing
///   principal argument;
/// * if the multiset is conjugate-closed within the tolerance, the stored
///   representatives are exactly conjugate-symmetric and real
///   representatives have imaginary part exactly `0.0`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumMultiset {
    entries: Vec<SpectrumEntry>,
    tolerance: f64,
}

impl SpectrumMultiset {
    /// Canonicalizes a raw list of complex numbers with the default
    /// relative tolerance.
    pub fn new(raw: &[Complex64]) -> Result<Self, SpectrumError> {
        let scale = raw
            .iter()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max)
            .max(1.0);
        Self::with_tolerance(raw, DEFAULT_REL_TOL * scale)
    }

    /// Canonicalizes a raw list of complex numbers, clustering points whose
    /// distance is at most `tolerance`.
    pub fn with_tolerance(raw: &[Complex64], tolerance: f64) -> Result<Self, SpectrumError> {
        let points: Vec<(Complex64, usize)> = raw.iter().map(|&z| (z, 1usize)).collect();
        Self::from_weighted(points, tolerance)
    }

    /// Canonicalizes weighted points. All transforms funnel through here so
    /// the invariants hold uniformly.
    fn from_weighted(
        raw: Vec<(Complex64, usize)>,
        tolerance: f64,
    ) -> Result<Self, SpectrumError> {
        if raw.iter().map(|&(_, m)| m).sum::<usize>() == 0 {
            return Err(SpectrumError::Empty);
        }
        let mut points = Vec::with_capacity(raw.len());
        for &(z, m) in &raw {
            if m == 0 {
                continue;
            }
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(SpectrumError::NotFinite { re: z.re, im: z.im });
            }
            // -0.0 would break exact conjugate symmetry and ordering.
            let z = Complex64::new(z.re + 0.0, z.im + 0.0);
            if z.norm() <= tolerance {
                return Err(SpectrumError::ZeroElement {
                    value: z,
                    modulus: z.norm(),
                    threshold: tolerance,
                });
            }
            points.push((z, m));
        }
        // Merging reduces the point count and symmetrization alone is
        // idempotent, so this loop runs at most `points.len()` times.
        loop {
            let merged = merge_pass(&mut points, tolerance);
            let symmetrized = symmetrize_if_closed(&mut points, tolerance);
            if !merged && !symmetrized {
                break;
            }
        }
        for &(z, _) in &points {
            if z.norm() <= tolerance {
                return Err(SpectrumError::ZeroElement {
                    value: z,
                    modulus: z.norm(),
                    threshold: tolerance,
                });
            }
        }
        points.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
        let entries = points
            .into_iter()
            .map(|(value, multiplicity)| SpectrumEntry {
                value,
                multiplicity,
            })
            .collect();
        Ok(Self { entries, tolerance })
    }

    /// Distinct representatives in canonical order.
    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    /// Clustering tolerance this multiset was canonicalized with.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Total multiplicity, i.e. the multiset size `n`.
    pub fn size(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Number of distinct representatives.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    /// All values with multiplicity expanded, in canonical order.
    pub fn values(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.size());
        for e in &self.entries {
            for _ in 0..e.multiplicity {
                out.push(e.value);
            }
        }
        out
    }

    /// Largest modulus among the elements.
    pub fn spectral_radius(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.value.norm())
            .fold(0.0, f64::max)
    }

    /// Multiplicity of the value `rho` (as a positive real), or zero if the
    /// radius itself is not an element.
    pub fn radius_multiplicity(&self, tol: f64) -> usize {
        let rho = self.spectral_radius();
        self.entries
            .iter()
            .filter(|e| (e.value - Complex64::new(rho, 0.0)).norm() <= tol)
            .map(|e| e.multiplicity)
            .sum()
    }

    /// Elements whose modulus is within `tol` of `radius`.
    pub fn peripheral(&self, radius: f64, tol: f64) -> PeripheralSet {
        let elements: Vec<SpectrumEntry> = self
            .entries
            .iter()
            .copied()
            .filter(|e| (e.value.norm() - radius).abs() <= tol)
            .collect();
        PeripheralSet {
            radius,
            count_distinct: elements.len(),
            elements,
        }
    }

    /// Multiplies every element by the unit-modulus factor `zeta` and
    /// re-canonicalizes.
    pub fn rotate(&self, zeta: Complex64) -> Result<Self, SpectrumError> {
        let modulus = zeta.norm();
        if (modulus - 1.0).abs() > self.tolerance.max(16.0 * f64::EPSILON) {
            return Err(SpectrumError::NotUnitModulus { zeta, modulus });
        }
        let points = self
            .entries
            .iter()
            .map(|e| (e.value * zeta, e.multiplicity))
            .collect();
        Self::from_weighted(points, self.tolerance)
    }

    /// Applies `z -> z^p` elementwise, keeping multiplicities, and
    /// re-canonicalizes with the tolerance rescaled to the new magnitude.
    ///
    /// Requires `p >= 1`: the zeroth power would map everything to 1 and
    /// lose the multiset structure this type exists to track.
    pub fn power_map(&self, p: u32) -> Result<Self, SpectrumError> {
        assert!(p >= 1, "power map exponent must be at least 1");
        let rho = self.spectral_radius();
        let rel = self.tolerance / rho.max(1.0);
        let new_tol = rel * rho.powi(p as i32).max(1.0);
        let points = self
            .entries
            .iter()
            .map(|e| (complex_powu(e.value, p), e.multiplicity))
            .collect();
        Self::from_weighted(points, new_tol)
    }

    /// Elementwise complex conjugate.
    pub fn conjugate(&self) -> Self {
        let points = self
            .entries
            .iter()
            .map(|e| (e.value.conj(), e.multiplicity))
            .collect();
        // Conjugation is an isometry, so re-canonicalization cannot fail or
        // merge anything.
        Self::from_weighted(points, self.tolerance).expect("conjugate preserves invariants")
    }

    /// Whether the multiset equals its conjugate within `tol`.
    pub fn is_conjugate_closed(&self, tol: f64) -> bool {
        self.match_against(&self.conjugate(), tol).is_ok()
    }

    /// Whether two multisets are equal within `tol`: a multiplicity-exact
    /// matching with every matched pair at distance at most `tol`.
    pub fn multiset_equal(&self, other: &Self, tol: f64) -> bool {
        self.match_against(other, tol).is_ok()
    }

    /// Matches this multiset against `other`.  On success returns the
    /// largest matched-pair distance; on failure returns a witness element
    /// that could not be matched.
    pub fn match_against(&self, other: &Self, tol: f64) -> Result<f64, MatchFailure> {
        greedy_match(&self.entries, &other.entries, tol)
    }
}

/// Witness for a failed multiset match.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchFailure {
    /// Element that had no partner within tolerance.
    pub unmatched: Complex64,
    /// True if the witness comes from the left multiset.
    pub from_left: bool,
}

/// Canonical ordering: decreasing modulus, then increasing principal
/// argument.  Total for finite nonzero values.
pub(crate) fn canonical_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    b.norm()
        .total_cmp(&a.norm())
        .then_with(|| a.im.atan2(a.re).total_cmp(&b.im.atan2(b.re)))
}

/// Integer power by repeated squaring. Stays exact for exact inputs far
/// longer than `powf` round trips.
pub(crate) fn complex_powu(z: Complex64, mut p: u32) -> Complex64 {
    let mut base = z;
    let mut acc = Complex64::new(1.0, 0.0);
    while p > 0 {
        if p & 1 == 1 {
            acc *= base;
        }
        base *= base;
        p >>= 1;
    }
    acc
}

/// One union-find clustering pass. Returns true if any two points merged.
fn merge_pass(points: &mut Vec<(Complex64, usize)>, tol: f64) -> bool {
    let n = points.len();
    if n < 2 {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = i;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    let mut any = false;
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i].0 - points[j].0).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                    any = true;
                }
            }
        }
    }
    if !any {
        return false;
    }
    let mut merged: Vec<(Complex64, usize)> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for (i, &(z, m)) in points.iter().enumerate() {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(slot) => {
                let (acc, macc) = merged[slot];
                // Multiplicity-weighted mean keeps the representative inside
                // the cluster hull.
                let total = macc + m;
                let mean = (acc * macc as f64 + z * m as f64) / total as f64;
                merged[slot] = (mean, total);
            }
            None => {
                root_of[r] = Some(merged.len());
                merged.push((z, m));
            }
        }
    }
    *points = merged;
    true
}

/// If the point set is conjugate-closed within `tol`, rewrites it to be
/// exactly conjugate-symmetric: near-real points get imaginary part `0.0`
/// and complex points are paired and averaged against their partners.
/// Returns true if any value changed.
fn symmetrize_if_closed(points: &mut [(Complex64, usize)], tol: f64) -> bool {
    let entries: Vec<SpectrumEntry> = points
        .iter()
        .map(|&(value, multiplicity)| SpectrumEntry {
            value,
            multiplicity,
        })
        .collect();
    let conj: Vec<SpectrumEntry> = entries
        .iter()
        .map(|e| SpectrumEntry {
            value: e.value.conj(),
            multiplicity: e.multiplicity,
        })
        .collect();
    if greedy_match(&entries, &conj, tol).is_err() {
        return false;
    }
    let n = points.len();
    let mut updated = points.to_vec();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let (z, m) = updated[i];
        if 2.0 * z.im.abs() <= tol {
            updated[i] = (Complex64::new(z.re, 0.0), m);
            used[i] = true;
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if j == i || used[j] || updated[j].1 != m {
                continue;
            }
            let d = (updated[j].0 - z.conj()).norm();
            if d <= tol && best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, _)) => {
                let w = updated[j].0;
                let mean = (z + w.conj()) * 0.5;
                let (upper, lower) = if mean.im >= 0.0 {
                    (mean, mean.conj())
                } else {
                    (mean.conj(), mean)
                };
                if z.im >= 0.0 {
                    updated[i] = (upper, m);
                    updated[j] = (lower, m);
                } else {
                    updated[i] = (lower, m);
                    updated[j] = (upper, m);
                }
                used[i] = true;
                used[j] = true;
            }
            // Closure held at multiset level but no clean entry pairing
            // exists (multiplicity split across clusters). Leave the set
            // as-is rather than guess.
            None => return false,
        }
    }
    let changed = updated
        .iter()
        .zip(points.iter())
        .any(|(a, b)| a.0.re.to_bits() != b.0.re.to_bits() || a.0.im.to_bits() != b.0.im.to_bits());
    points.copy_from_slice(&updated);
    changed
}

/// Multiplicity-exact greedy matching in canonical order.  Greedy nearest
/// matching is exact here because canonicalized entries are pairwise
/// separated by more than the tolerance, so each left entry has at most one
/// candidate partner at distance <= tol when both sides share a tolerance
/// scale; for safety the search still scans all remaining partners.
fn greedy_match(
    left: &[SpectrumEntry],
    right: &[SpectrumEntry],
    tol: f64,
) -> Result<f64, MatchFailure> {
    let total_left: usize = left.iter().map(|e| e.multiplicity).sum();
    let total_right: usize = right.iter().map(|e| e.multiplicity).sum();
    let mut remaining: Vec<usize> = right.iter().map(|e| e.multiplicity).collect();
    let mut worst = 0.0_f64;
    for e in left {
        let mut need = e.multiplicity;
        while need > 0 {
            let mut best: Option<(usize, f64)> = None;
            for (j, r) in right.iter().enumerate() {
                if remaining[j] == 0 {
                    continue;
                }
                let d = (e.value - r.value).norm();
                if d <= tol && best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
            match best {
                Some((j, d)) => {
                    let take = need.min(remaining[j]);
                    remaining[j] -= take;
                    need -= take;
                    worst = worst.max(d);
                }
                None => {
                    return Err(MatchFailure {
                        unmatched: e.value,
                        from_left: true,
                    })
                }
            }
        }
    }
    if total_left != total_right {
        let j = remaining
            .iter()
            .position(|&r| r > 0)
            .expect("count mismatch leaves a right survivor");
        return Err(MatchFailure {
            unmatched: right[j].value,
            from_left: false,
        });
    }
    Ok(worst)
}

/// Formats a complex number compactly for witnesses and reports: real
/// values print without an imaginary part.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
