//! Text input formats: complex literals, spectrum lists, and polynomial
//! coefficient lists.
//!
//! Complex literals are `a`, `a+bi`, `a-bi`, or `bi` with optional
//! scientific notation in each part; `i` and `-i` abbreviate unit
//! imaginary parts.  Lists are separated by whitespace, commas, or
//! semicolons, with optional surrounding brackets.  Polynomials are given
//! highest degree first and must be monic.

use num_complex::Complex64;
use thiserror::Error;

use crate::poly::{aberth_roots, RootError};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("cannot parse {token:?} as a complex number")]
    BadToken { token: String },
    #[error("input contains no values")]
    Empty,
    #[error("polynomial must be monic: leading coefficient is {leading}")]
    NotMonic { leading: f64 },
    #[error("coefficient {token:?} is not a real number")]
    BadCoefficient { token: String },
    #[error("root extraction failed: {0}")]
    Roots(#[from] RootError),
}

/// Parses one complex literal.
pub fn parse_complex(token: &str) -> Result<Complex64, ParseError> {
    let t = token.trim();
    if t.is_empty() {
        return Err(ParseError::Empty);
    }
    let bad = || ParseError::BadToken {
        token: token.to_string(),
    };
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        if let Some(split) = interior_sign(body) {
            let re: f64 = body[..split].parse().map_err(|_| bad())?;
            let im = imaginary_coefficient(&body[split..]).ok_or_else(bad)?;
            Ok(Complex64::new(re, im))
        } else {
            let im = imaginary_coefficient(body).ok_or_else(bad)?;
            Ok(Complex64::new(0.0, im))
        }
    } else {
        let re: f64 = t.parse().map_err(|_| bad())?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Position of the +/- separating real and imaginary parts, skipping the
/// leading sign and exponent signs.
fn interior_sign(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    for i in (1..bytes.len()).rev() {
        let c = bytes[i];
        if (c == b'+' || c == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            return Some(i);
        }
    }
    None
}

/// Coefficient of the imaginary unit: empty or a bare sign means one.
fn imaginary_coefficient(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

/// Splits list input into tokens: brackets are decorative, separators are
/// whitespace, commas, and semicolons.
fn tokens(text: &str) -> Vec<&str> {
    text.split(|c: char| c.is_whitespace() || matches!(c, ',' | ';' | '[' | ']' | '{' | '}'))
        .filter(|t| !t.is_empty())
        .collect()
}

/// Parses a spectrum given as a list of complex literals.
pub fn parse_spectrum_list(text: &str) -> Result<Vec<Complex64>, ParseError> {
    let toks = tokens(text);
    if toks.is_empty() {
        return Err(ParseError::Empty);
    }
    toks.into_iter().map(parse_complex).collect()
}

/// Parses a monic real polynomial given highest degree first and returns
/// `(zero_root_count, nonzero_roots)`.  Zero roots are stripped
/// symbolically before root iteration.
pub fn parse_polynomial_roots(text: &str) -> Result<(usize, Vec<Complex64>), ParseError> {
    let toks = tokens(text);
    if toks.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut coeffs = Vec::with_capacity(toks.len());
    for t in &toks {
        let c: f64 = t.parse().map_err(|_| ParseError::BadCoefficient {
            token: t.to_string(),
        })?;
        coeffs.push(c);
    }
    if coeffs[0] != 1.0 {
        return Err(ParseError::NotMonic { leading: coeffs[0] });
    }
    coeffs.reverse();
    let mut zeros = 0usize;
    while coeffs.first() == Some(&0.0) && coeffs.len() > 1 {
        zeros += 1;
        coeffs.remove(0);
    }
    if coeffs.len() == 1 {
        return Ok((zeros, Vec::new()));
    }
    let roots = aberth_roots(&coeffs)?;
    Ok((zeros, roots))
}
