//! Nonnegative matrices: digraph structure, irreducibility, period,
//! primitivity, exact power traces, and nonzero-spectrum extraction.
//!
//! Structural questions are answered twice, by independent routes that are
//! required to agree: strong connectivity of the induced digraph versus
//! entrywise positivity of `(I+A)^(N-1)`, and period-1 irreducibility
//! versus positivity of `A^((N-1)^2+1)`.  Spectra of integral matrices go
//! through the exact characteristic-polynomial path, so constructed
//! matrices report exact eigenvalue multiplicities and exact zeros.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::eigen::{self, EigenError};
use crate::exact;
use crate::power_sums::{divisors, mobius};
use crate::spectrum::{SpectrumError, SpectrumMultiset, DEFAULT_REL_TOL};

/// Largest entry magnitude for which f64 stores integers exactly.
const MAX_EXACT_INT: f64 = 9007199254740992.0; // 2^53

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MatrixError {
    #[error("entry ({row}, {col}) = {value} is negative")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("entry ({row}, {col}) is not finite")]
    NotFinite { row: usize, col: usize },
    #[error("entry ({row}, {col}) = {value} is too large to store exactly")]
    TooLarge { row: usize, col: usize, value: f64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("matrix must be irreducible for this operation")]
    NotIrreducible,
    #[error("matrix must be integral for exact arithmetic")]
    NotIntegral,
    #[error("power trace overflowed at exponent {k}")]
    Overflow { k: u32 },
    #[error("all {removed} eigenvalues fell at or below the zero cut {zero_cut:.3e}")]
    EmptySpectrum { removed: usize, zero_cut: f64 },
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// Dense nonnegative square matrix.  `integral` is set exactly when every
/// entry is an exact nonnegative integer (and small enough that f64 stores
/// it without rounding), which unlocks the exact trace and spectrum paths.
#[derive(Debug, Clone, PartialEq)]
pub struct NonnegativeMatrix {
    n: usize,
    data: Vec<f64>,
    integral: bool,
}

/// Digraph view of a matrix at a zero threshold.
#[derive(Debug, Clone, Serialize)]
pub struct DigraphSummary {
    pub order: usize,
    /// Row-major adjacency: `adjacency[i * order + j]` iff entry (i, j) is
    /// above the threshold.
    pub adjacency: Vec<bool>,
    pub strongly_connected: bool,
    /// Defined only when strongly connected (and, for order 1, only when
    /// the single vertex has a loop).
    pub period: Option<usize>,
}

/// Result of extracting the nonzero part of a spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct NonzeroSpectrum {
    pub spectrum: SpectrumMultiset,
    pub zeros_removed: usize,
    /// Characteristic-polynomial residual of the underlying full spectrum.
    pub validation_residual: f64,
    pub zero_cut: f64,
}

impl NonnegativeMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::Parse {
                    line: i + 1,
                    message: format!("expected {n} entries in row, found {}", row.len()),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(n, data)
    }

    pub fn from_flat(n: usize, data: Vec<f64>) -> Result<Self, MatrixError> {
        assert!(n >= 1, "matrix order must be positive");
        assert_eq!(data.len(), n * n, "flat data must have n^2 entries");
        for (idx, &v) in data.iter().enumerate() {
            let (row, col) = (idx / n, idx % n);
            if !v.is_finite() {
                return Err(MatrixError::NotFinite { row, col });
            }
            if v < 0.0 {
                return Err(MatrixError::NegativeEntry { row, col, value: v });
            }
        }
        let integral = data.iter().all(|&v| v == v.round() && v <= MAX_EXACT_INT);
        // Normalize -0.0 so equality and serialization are stable.
        let data = data.into_iter().map(|v| v + 0.0).collect();
        Ok(Self { n, data, integral })
    }

    /// Parses the plain text format: first line the order `N`, then `N`
    /// rows of `N` whitespace-separated values.  The matrix is integral
    /// only when every value token is an integer literal.
    pub fn parse(text: &str) -> Result<Self, MatrixError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, first) = lines.next().ok_or(MatrixError::Parse {
            line: 1,
            message: "empty input".into(),
        })?;
        let n: usize = first.parse().map_err(|_| MatrixError::Parse {
            line: line_no,
            message: format!("expected matrix order, found {first:?}"),
        })?;
        if n == 0 {
            return Err(MatrixError::Parse {
                line: line_no,
                message: "matrix order must be positive".into(),
            });
        }
        let mut data = Vec::with_capacity(n * n);
        let mut all_integer_literals = true;
        for row in 0..n {
            let (line_no, line) = lines.next().ok_or(MatrixError::Parse {
                line: line_no + row + 1,
                message: format!("expected {n} rows, found {row}"),
            })?;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != n {
                return Err(MatrixError::Parse {
                    line: line_no,
                    message: format!("expected {n} entries, found {}", tokens.len()),
                });
            }
            for tok in tokens {
                if tok.parse::<i64>().is_err() {
                    all_integer_literals = false;
                }
                let v: f64 = tok.parse().map_err(|_| MatrixError::Parse {
                    line: line_no,
                    message: format!("invalid number {tok:?}"),
                })?;
                data.push(v);
            }
        }
        if let Some((line_no, line)) = lines.next() {
            return Err(MatrixError::Parse {
                line: line_no,
                message: format!("unexpected trailing content {line:?}"),
            });
        }
        let mut m = Self::from_flat(n, data)?;
        // A token like "2.0" denotes a real entry even though its value is
        // integral; only integer literals opt in to exact arithmetic.
        m.integral = m.integral && all_integer_literals;
        Ok(m)
    }

    /// Emits the text format accepted by [`NonnegativeMatrix::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| {
                    let v = self[(i, j)];
                    if self.integral {
                        format!("{}", v as i64)
                    } else {
                        format!("{v}")
                    }
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn max_row_sum(&self) -> f64 {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Default threshold below which an eigenvalue counts as a numerical
    /// zero of this matrix.
    pub fn default_zero_cut(&self) -> f64 {
        64.0 * self.n as f64 * f64::EPSILON * self.max_row_sum().max(1.0)
    }

    pub fn digraph_summary(&self, zero_threshold: f64) -> DigraphSummary {
        let adjacency: Vec<bool> = self.data.iter().map(|&v| v > zero_threshold).collect();
        let strongly_connected = self.irreducible_via_graph(zero_threshold);
        let period = if strongly_connected {
            self.period_unchecked(zero_threshold)
        } else {
            None
        };
        DigraphSummary {
            order: self.n,
            adjacency,
            strongly_connected,
            period,
        }
    }

    /// Irreducibility through strong connectivity of the induced digraph,
    /// cross-checked against entrywise positivity of `(I+A)^(N-1)` (the two
    /// routes provably coincide; disagreement would be an internal error).
    /// Order 1 is irreducible only with a positive entry.
    pub fn is_irreducible(&self, zero_threshold: f64) -> bool {
        let graph = self.irreducible_via_graph(zero_threshold);
        if self.n <= 50 {
            let power = self.irreducible_via_power(zero_threshold);
            assert_eq!(
                graph, power,
                "irreducibility routes disagree on an order-{} matrix",
                self.n
            );
        }
        graph
    }

    /// Strong connectivity by forward and backward breadth-first search.
    pub fn irreducible_via_graph(&self, zero_threshold: f64) -> bool {
        if self.n == 1 {
            return self.data[0] > zero_threshold;
        }
        let adj = |i: usize, j: usize| self.data[i * self.n + j] > zero_threshold;
        let reach_all = |transpose: bool| {
            let mut seen = vec![false; self.n];
            let mut queue = vec![0usize];
            seen[0] = true;
            while let Some(u) = queue.pop() {
                for (v, s) in seen.iter_mut().enumerate() {
                    let edge = if transpose { adj(v, u) } else { adj(u, v) };
                    if edge && !*s {
                        *s = true;
                        queue.push(v);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach_all(false) && reach_all(true)
    }

    /// Irreducibility via entrywise positivity of `(I+A)^(N-1)` in
    /// saturating boolean arithmetic.
    pub fn irreducible_via_power(&self, zero_threshold: f64) -> bool {
        if self.n == 1 {
            return self.data[0] > zero_threshold;
        }
        let mut b = BitMatrix::from_adjacency(self, zero_threshold);
        b.set_diagonal();
        b.pow(self.n as u64 - 1).all_ones()
    }

    /// Period of an irreducible matrix: the gcd of the lengths of all
    /// closed walks, computed from breadth-first levels as
    /// `gcd over edges (u, v) of (level(u) + 1 - level(v))`.
    pub fn period(&self, zero_threshold: f64) -> Result<usize, MatrixError> {
        if !self.is_irreducible(zero_threshold) {
            return Err(MatrixError::NotIrreducible);
        }
        Ok(self
            .period_unchecked(zero_threshold)
            .expect("irreducible matrix has closed walks"))
    }

    fn period_unchecked(&self, zero_threshold: f64) -> Option<usize> {
        let n = self.n;
        let adj = |i: usize, j: usize| self.data[i * n + j] > zero_threshold;
        let mut level = vec![i64::MIN; n];
        let mut queue = std::collections::VecDeque::new();
        level[0] = 0;
        queue.push_back(0usize);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if adj(u, v) && level[v] == i64::MIN {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let mut g: u64 = 0;
        for u in 0..n {
            if level[u] == i64::MIN {
                continue;
            }
            for v in 0..n {
                if adj(u, v) && level[v] != i64::MIN {
                    g = num_integer::gcd(g, (level[u] + 1 - level[v]).unsigned_abs());
                }
            }
        }
        if g == 0 {
            None
        } else {
            Some(g as usize)
        }
    }

    /// Primitivity as irreducibility with period 1, cross-checked against
    /// entrywise positivity of `A^((N-1)^2 + 1)` for small orders.
    pub fn is_primitive(&self, zero_threshold: f64) -> bool {
        let structural = self.is_irreducible(zero_threshold)
            && self.period_unchecked(zero_threshold) == Some(1);
        if self.n <= 12 {
            let power = self.primitive_via_power(zero_threshold);
            assert_eq!(
                structural, power,
                "primitivity routes disagree on an order-{} matrix",
                self.n
            );
        }
        structural
    }

    /// Primitivity via the power bound: `A^((N-1)^2 + 1)` is entrywise
    /// positive exactly for primitive matrices.
    pub fn primitive_via_power(&self, zero_threshold: f64) -> bool {
        let b = BitMatrix::from_adjacency(self, zero_threshold);
        let e = ((self.n as u64 - 1) * (self.n as u64 - 1)) + 1;
        b.pow(e).all_ones()
    }

    /// Trace of `A^k`.  Integral matrices compute it exactly and convert at
    /// the end; real matrices use floating repeated squaring.
    pub fn power_trace(&self, k: u32) -> Result<f64, MatrixError> {
        assert!(k >= 1, "power trace needs k >= 1");
        if self.integral {
            let t = self.power_trace_big(k)?;
            return t
                .to_f64()
                .filter(|v| v.is_finite())
                .ok_or(MatrixError::Overflow { k });
        }
        let mut base = self.data.clone();
        let mut acc: Option<Vec<f64>> = None;
        let mut e = k;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(prev) => float_mat_mul(&prev, &base, self.n),
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = float_mat_mul(&base, &base, self.n);
            if base.iter().any(|v| !v.is_finite()) {
                return Err(MatrixError::Overflow { k });
            }
        }
        let acc = acc.expect("k >= 1 always sets the accumulator");
        let trace: f64 = (0..self.n).map(|i| acc[i * self.n + i]).sum();
        if trace.is_finite() {
            Ok(trace)
        } else {
            Err(MatrixError::Overflow { k })
        }
    }

    /// Exact `tr(A^k)` for integral matrices.
    pub fn power_trace_big(&self, k: u32) -> Result<BigInt, MatrixError> {
        assert!(k >= 1, "power trace needs k >= 1");
        if !self.integral {
            return Err(MatrixError::NotIntegral);
        }
        let a = exact::big_matrix_from(&self.data, self.n);
        Ok(exact::big_trace(&exact::big_mat_pow(&a, self.n, k), self.n))
    }

    /// Exact net trace `t_k = sum over d | k of mobius(k/d) tr(A^d)`.
    pub fn net_trace_exact(&self, k: u32) -> Result<BigInt, MatrixError> {
        assert!(k >= 1, "net trace needs k >= 1");
        if !self.integral {
            return Err(MatrixError::NotIntegral);
        }
        let a = exact::big_matrix_from(&self.data, self.n);
        let mut acc = BigInt::zero();
        for d in divisors(k as u64) {
            let tr = exact::big_trace(&exact::big_mat_pow(&a, self.n, d as u32), self.n);
            acc += tr * BigInt::from(mobius(k as u64 / d));
        }
        Ok(acc)
    }

    /// Exact characteristic polynomial of an integral matrix: ascending
    /// integer coefficients of `det(zI - A)`, monic of degree `order`.
    pub fn characteristic_polynomial(&self) -> Result<Vec<BigInt>, MatrixError> {
        if !self.integral {
            return Err(MatrixError::NotIntegral);
        }
        Ok(exact::charpoly_exact(&self.data, self.n))
    }

    /// Full eigenvalue multiset, zeros included, in canonical order.
    /// Integral matrices go through the exact characteristic-polynomial
    /// route (square-free factorization, simple roots only); real matrices
    /// through balanced Hessenberg double-shift QR.  Either way the result
    /// must pass an independent characteristic-polynomial residual check at
    /// `tol` before it is returned.
    pub fn eigenvalues(&self, tol: f64) -> Result<Vec<Complex64>, MatrixError> {
        let eigs = if self.integral {
            match exact::eigenvalues_exact(&self.data, self.n) {
                Ok(e) => e,
                // Coefficients beyond exact float range: fall back to the
                // dense route, which only needs the entries themselves.
                Err(EigenError::CoefficientRange) => eigen::eigenvalues_dense(&self.data, self.n)?,
                Err(other) => return Err(other.into()),
            }
        } else {
            eigen::eigenvalues_dense(&self.data, self.n)?
        };
        let residual = eigen::charpoly_residual(&self.data, self.n, &eigs);
        if residual > tol {
            return Err(EigenError::ValidationFailed {
                residual,
                tolerance: tol,
            }
            .into());
        }
        Ok(eigs)
    }

    /// Removes numerically zero eigenvalues and canonicalizes the rest.
    ///
    /// The effective cut is `max(zero_cut, clustering tolerance)` so that
    /// every survivor is representable in the canonical multiset; the
    /// default `zero_cut` scales as `64 N eps (max row sum)`.
    pub fn nonzero_spectrum(&self, zero_cut: Option<f64>) -> Result<NonzeroSpectrum, MatrixError> {
        self.nonzero_spectrum_with_tol(zero_cut, 1e-8)
    }

    pub fn nonzero_spectrum_with_tol(
        &self,
        zero_cut: Option<f64>,
        eigen_tol: f64,
    ) -> Result<NonzeroSpectrum, MatrixError> {
        let eigs = self.eigenvalues(eigen_tol)?;
        let residual = eigen::charpoly_residual(&self.data, self.n, &eigs);
        let rho = eigs.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
        let cluster_tol = DEFAULT_REL_TOL * rho.max(1.0);
        let cut = zero_cut.unwrap_or_else(|| self.default_zero_cut()).max(cluster_tol);
        let survivors: Vec<Complex64> = eigs.iter().copied().filter(|z| z.norm() > cut).collect();
        let removed = eigs.len() - survivors.len();
        if survivors.is_empty() {
            return Err(MatrixError::EmptySpectrum {
                removed,
                zero_cut: cut,
            });
        }
        let spectrum = SpectrumMultiset::with_tolerance(&survivors, cluster_tol)?;
        Ok(NonzeroSpectrum {
            spectrum,
            zeros_removed: removed,
            validation_residual: residual,
            zero_cut: cut,
        })
    }
}

impl std::ops::Index<(usize, usize)> for NonnegativeMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl Serialize for NonnegativeMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[f64]> = (0..self.n)
            .map(|i| &self.data[i * self.n..(i + 1) * self.n])
            .collect();
        let mut st = serializer.serialize_struct("NonnegativeMatrix", 3)?;
        st.serialize_field("order", &self.n)?;
        st.serialize_field("rows", &rows)?;
        st.serialize_field("integral", &self.integral)?;
        st.end()
    }
}

/// Square boolean matrix in packed words, with saturating (boolean
/// semiring) multiplication.  Used by the power-based structure checks.
#[derive(Clone)]
struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn from_adjacency(a: &NonnegativeMatrix, zero_threshold: f64) -> Self {
        let n = a.order();
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for i in 0..n {
            for j in 0..n {
                if a[(i, j)] > zero_threshold {
                    bits[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        Self { n, words, bits }
    }

    fn identity(n: usize) -> Self {
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for i in 0..n {
            bits[i * words + i / 64] |= 1 << (i % 64);
        }
        Self { n, words, bits }
    }

    fn set_diagonal(&mut self) {
        for i in 0..self.n {
            self.bits[i * self.words + i / 64] |= 1 << (i % 64);
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0u64; self.n * self.words];
        for i in 0..self.n {
            for k in 0..self.n {
                if self.bits[i * self.words + k / 64] >> (k % 64) & 1 == 1 {
                    for w in 0..self.words {
                        out[i * self.words + w] |= other.bits[k * self.words + w];
                    }
                }
            }
        }
        Self {
            n: self.n,
            words: self.words,
            bits: out,
        }
    }

    fn pow(&self, mut e: u64) -> Self {
        if e == 0 {
            return Self::identity(self.n);
        }
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(prev) => prev.mul(&base),
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        acc.expect("e >= 1 always sets the accumulator")
    }

    fn all_ones(&self) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                if self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 0 {
                    return false;
                }
            }
        }
        true
    }
}

fn float_mat_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik != 0.0 {
                for j in 0..n {
                    out[i * n + j] += aik * b[k * n + j];
                }
            }
        }
    }
    out
}
