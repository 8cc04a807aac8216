//! Exact multivariate Laurent polynomials over the rationals.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg;
use crate::Rational;

pub use parse::{parse, ParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("substitution basis is not unimodular (determinant {0})")]
    NonUnimodular(String),
    #[error("substitution basis must have {expected} vectors of length {expected}")]
    BadBasis { expected: usize },
}

/// Integer exponent vector. Ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(components: Vec<i64>) -> Self {
        ExponentVector(components)
    }

    pub fn zero(dim: usize) -> Self {
        ExponentVector(vec![0; dim])
    }

    /// The `i`-th unit vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn dot(&self, other: &ExponentVector) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, k: i64) -> ExponentVector {
        ExponentVector(self.0.iter().map(|c| c * k).collect())
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

impl<const N: usize> From<[i64; N]> for ExponentVector {
    fn from(v: [i64; N]) -> Self {
        ExponentVector(v.to_vec())
    }
}

impl Index<usize> for ExponentVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;
    fn add(self, rhs: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ExponentVector {
    type Output = ExponentVector;
    fn sub(self, rhs: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ExponentVector {
    type Output = ExponentVector;
    fn neg(self) -> ExponentVector {
        ExponentVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A Laurent polynomial in `dimension` variables. No stored coefficient is
/// zero, so equality of values is equality of term maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    dimension: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl LaurentPolynomial {
    pub fn zero(dimension: usize) -> Self {
        LaurentPolynomial {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dimension: usize) -> Self {
        Self::constant(dimension, Rational::one())
    }

    pub fn constant(dimension: usize, c: Rational) -> Self {
        Self::monomial(ExponentVector::zero(dimension), c)
    }

    pub fn monomial(exponent: ExponentVector, c: Rational) -> Self {
        let mut p = Self::zero(exponent.dim());
        if !c.is_zero() {
            p.terms.insert(exponent, c);
        }
        p
    }

    /// The variable `x_i` (0-based).
    pub fn variable(dimension: usize, i: usize) -> Self {
        Self::monomial(ExponentVector::unit(dimension, i), Rational::one())
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents and discarding zeros.
    pub fn from_terms<I>(dimension: usize, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        let mut p = Self::zero(dimension);
        for (e, c) in terms {
            if e.dim() != dimension {
                return Err(LaurentError::DimensionMismatch(dimension, e.dim()));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: ExponentVector, c: Rational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExponentVector> {
        self.terms.keys()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// The single term of a monomial, if the polynomial is one.
    pub fn as_monomial(&self) -> Option<(&ExponentVector, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&ExponentVector::zero(self.dimension))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    fn check_dim(&self, other: &Self) -> Result<(), LaurentError> {
        if self.dimension == other.dimension {
            Ok(())
        } else {
            Err(LaurentError::DimensionMismatch(self.dimension, other.dimension))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPolynomial {
            dimension: self.dimension,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.dimension);
        }
        LaurentPolynomial {
            dimension: self.dimension,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dimension);
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                out.add_term(e + f, c * d);
            }
        }
        Ok(out)
    }

    /// `self^n` by binary powering; `p^0 = 1`.
    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(self.dimension);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base).expect("same dimension");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same dimension");
            }
        }
        result
    }

    /// Change of monomial coordinates: every exponent `e` is rewritten as the
    /// integer coordinate vector `c` with `e - shift = sum_j c_j * basis[j]`.
    /// The basis must be unimodular so that `c` is integral.
    pub fn monomial_substitute(
        &self,
        basis: &[ExponentVector],
        shift: &ExponentVector,
    ) -> Result<Self, LaurentError> {
        let d = self.dimension;
        if basis.len() != d || basis.iter().any(|b| b.dim() != d) || shift.dim() != d {
            return Err(LaurentError::BadBasis { expected: d });
        }
        // columns of `m` are the basis vectors: e = m * c
        let m: Vec<Vec<i64>> = (0..d)
            .map(|i| basis.iter().map(|b| b[i]).collect())
            .collect();
        let inv = linalg::unimodular_inverse(&m)
            .ok_or_else(|| LaurentError::NonUnimodular(linalg::det_i64(&m).to_string()))?;
        let terms = self.terms.iter().map(|(e, c)| {
            let v = e - shift;
            let coords = (0..d)
                .map(|i| (0..d).map(|k| inv[i][k] * v[k]).sum())
                .collect();
            (ExponentVector(coords), c.clone())
        });
        Self::from_terms(d, terms)
    }

    /// Projects onto the terms whose exponents satisfy `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&ExponentVector) -> bool) -> Self {
        LaurentPolynomial {
            dimension: self.dimension,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops trailing coordinates, which must all be zero on the support.
    pub fn truncate_dimension(&self, new_dim: usize) -> Option<Self> {
        let mut out = Self::zero(new_dim);
        for (e, c) in &self.terms {
            if e.0[new_dim..].iter().any(|&v| v != 0) {
                return None;
            }
            out.terms.insert(ExponentVector(e.0[..new_dim].to_vec()), c.clone());
        }
        Some(out)
    }
}

pub(crate) fn variable_name(dim: usize, i: usize) -> String {
    if dim <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

/// Canonical text form: terms in lexicographic exponent order, coefficients
/// written `p/q` when not integral, negative exponents as `x^-k`. The output
/// parses back to the same polynomial.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || e.is_zero() {
                factors.push(abs.to_string());
            }
            for (k, &p) in e.0.iter().enumerate() {
                let name = variable_name(self.dimension, k);
                match p {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{p}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
