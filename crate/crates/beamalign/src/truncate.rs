//! Threshold truncation of derivative series into sparse polynomials.
//!
//! The derivative series f1, f2 carry a full triangle of Taylor
//! coefficients whose magnitudes span many orders. Normalizing by the
//! largest magnitude and keeping only the terms above a threshold epsilon
//! turns each series into a small real polynomial; the inverse of the
//! summed retained magnitudes is the approximation-error surrogate delta.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::BeamAngles;
use crate::scalar::Scalar;
use crate::series::{MonomialOrder, TruncatedSeries, Variable};

/// Sparse real bivariate polynomial in local coordinates
/// `(u, v) = (theta_rx, theta_tx) - center`.
///
/// Terms are unique, nonzero, finite, and sorted by `MonomialOrder`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePolynomial<T: Scalar> {
    terms: Vec<((usize, usize), T)>,
    center: BeamAngles<T>,
}

impl<T: Scalar> SparsePolynomial<T> {
    /// Validates, sorts, and wraps a term list. The zero polynomial (empty
    /// list) is representable.
    pub fn new(mut terms: Vec<((usize, usize), T)>, center: BeamAngles<T>) -> Result<Self> {
        for &((a, b), c) in &terms {
            if !c.is_finite() {
                return Err(Error::Domain(format!(
                    "coefficient of u^{a} v^{b} is not finite"
                )));
            }
            if c == T::zero() {
                return Err(Error::Domain(format!(
                    "zero coefficient stored at u^{a} v^{b}"
                )));
            }
        }
        terms.sort_by(|x, y| MonomialOrder::cmp(x.0, y.0));
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("duplicate exponent pair".into()));
        }
        Ok(Self { terms, center })
    }

    pub fn terms(&self) -> &[((usize, usize), T)] {
        &self.terms
    }

    pub fn center(&self) -> BeamAngles<T> {
        self.center
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Exponent vectors as lattice points (for Newton polytopes).
    pub fn support(&self) -> Vec<(i64, i64)> {
        self.terms
            .iter()
            .map(|&((a, b), _)| (a as i64, b as i64))
            .collect()
    }

    /// Largest exponent of the rx variable.
    pub fn deg_rx(&self) -> usize {
        self.terms.iter().map(|t| t.0 .0).max().unwrap_or(0)
    }

    /// Largest exponent of the tx variable.
    pub fn deg_tx(&self) -> usize {
        self.terms.iter().map(|t| t.0 .1).max().unwrap_or(0)
    }

    pub fn max_coeff_magnitude(&self) -> T {
        self.terms
            .iter()
            .map(|t| t.1.abs())
            .fold(T::zero(), |acc, m| if m > acc { m } else { acc })
    }

    pub fn sum_abs_coeffs(&self) -> T {
        self.terms.iter().map(|t| t.1.abs()).sum()
    }

    /// Evaluate at complex local coordinates.
    pub fn eval(&self, u: Complex<T>, v: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &((a, b), c) in &self.terms {
            acc += u.powi(a as i32) * v.powi(b as i32).scale(c);
        }
        acc
    }

    /// Formal partial derivative (used by the Newton polish Jacobian).
    pub fn partial(&self, var: Variable) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|&((a, b), c)| match var {
                Variable::Rx if a > 0 => Some(((a - 1, b), c * T::from_usize(a).unwrap())),
                Variable::Tx if b > 0 => Some(((a, b - 1), c * T::from_usize(b).unwrap())),
                _ => None,
            })
            .collect();
        Self {
            terms,
            center: self.center,
        }
    }

    /// CSV serialization `deg_rx,deg_tx,coeff` with a header row; the
    /// solver's fixture files use the same rows without the header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("deg_rx,deg_tx,coeff\n");
        for &((a, b), c) in &self.terms {
            out.push_str(&format!("{a},{b},{c}\n"));
        }
        out
    }

    /// Parses `deg_rx,deg_tx,coeff` rows; a leading header row is skipped
    /// if present.
    pub fn from_csv(text: &str, center: BeamAngles<T>) -> Result<Self> {
        let mut terms = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with("deg_rx")) {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Domain(format!(
                    "polynomial CSV row {i} has {} fields, expected 3",
                    fields.len()
                )));
            }
            let a: usize = fields[0]
                .parse()
                .map_err(|_| Error::Domain(format!("bad deg_rx in row {i}: {}", fields[0])))?;
            let b: usize = fields[1]
                .parse()
                .map_err(|_| Error::Domain(format!("bad deg_tx in row {i}: {}", fields[1])))?;
            let c: f64 = fields[2]
                .parse()
                .map_err(|_| Error::Domain(format!("bad coeff in row {i}: {}", fields[2])))?;
            terms.push(((a, b), T::from_f64_lossy(c)));
        }
        Self::new(terms, center)
    }
}

/// Coefficient magnitudes of every monomial slot (total degree up to the
/// cap), divided by the largest magnitude, in `MonomialOrder`.
pub fn normalize_magnitudes<T: Scalar>(s: &TruncatedSeries<T>) -> Result<Vec<((usize, usize), T)>> {
    let max = s.max_magnitude();
    if max == T::zero() {
        return Err(Error::Domain(
            "nothing to normalize: series is identically zero".into(),
        ));
    }
    Ok(s.iter().map(|(e, c)| (e, c.norm() / max)).collect())
}

/// Keeps the terms whose normalized magnitude is strictly greater than
/// `epsilon`, discarding the (noise-level) imaginary parts.
pub fn threshold_select<T: Scalar>(
    s: &TruncatedSeries<T>,
    epsilon: T,
) -> Result<SparsePolynomial<T>> {
    if !(epsilon >= T::zero() && epsilon <= T::one()) {
        return Err(Error::Domain(format!(
            "threshold must lie in [0, 1], got {epsilon}"
        )));
    }
    let max = s.max_magnitude();
    if max == T::zero() {
        return Err(Error::EmptyTruncation);
    }
    let terms: Vec<((usize, usize), T)> = s
        .iter()
        .filter(|(_, c)| c.norm() / max > epsilon)
        .map(|(e, c)| (e, c.re))
        .filter(|&(_, re)| re != T::zero())
        .collect();
    if terms.is_empty() {
        return Err(Error::EmptyTruncation);
    }
    SparsePolynomial::new(terms, s.center())
}

/// Sparsity-gain surrogate for the truncation error:
/// `delta = 1 / (sum |c| over p1 + sum |c| over p2)`, with raw
/// (unnormalized) magnitudes, so harsher truncation scores higher.
pub fn approximation_error<T: Scalar>(
    p1: &SparsePolynomial<T>,
    p2: &SparsePolynomial<T>,
) -> Result<T> {
    if p1.is_empty() && p2.is_empty() {
        return Err(Error::Domain(
            "approximation error undefined for two empty polynomials".into(),
        ));
    }
    Ok(T::one() / (p1.sum_abs_coeffs() + p2.sum_abs_coeffs()))
}
