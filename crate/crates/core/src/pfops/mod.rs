//! Linear differential operators in `t` and `D = t d/dt`.
//!
//! An operator `L = sum_{j,k} c[j][k] t^j D^k` acts on a power series
//! `sum a_n t^n` coefficientwise: the coefficient of `t^n` in `L f` is
//! `sum_j q_j(n) a_{n-j}` with `q_j(n) = sum_k c[j][k] (n - j)^k`. This is the
//! recurrence attached to `L`.

mod discover;
mod singular;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::poly::UniPoly;
use crate::Rational;

pub use discover::operator_from_series;
pub use singular::{involution, singular_points, InvolutionDatum, SingularPoint, SingularSet};

/// Monic polynomial in the fiber coordinate whose roots are the finite
/// nonzero singular points.
pub type SymbolPolynomial = UniPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperatorError {
    #[error("series has {got} terms, {needed} required")]
    InsufficientTerms { needed: usize, got: usize },
    #[error("no annihilating operator with order <= {max_order} and degree <= {max_degree}")]
    NoAnnihilator { max_order: usize, max_degree: usize },
    #[error("ambiguous: {dimension}-dimensional solution space at order {order}, degree {degree}")]
    Ambiguous {
        order: usize,
        degree: usize,
        dimension: usize,
    },
}

/// `sum_{j,k} c[j][k] t^j D^k`, stored as `coeffs[j][k]`.
///
/// Operators built through [`DifferentialOperator::new`] are normalized:
/// integer coefficients with content 1, no all-zero top row or column, and
/// the lowest nonzero coefficient of the leading polynomial `F_r(t)`
/// positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DifferentialOperator {
    coeffs: Vec<Vec<Rational>>,
}

impl DifferentialOperator {
    /// Normalizes a coefficient matrix indexed `[j][k]` (power of `t`, power
    /// of `D`). Rows may have different lengths.
    pub fn new(coeffs: Vec<Vec<Rational>>) -> Self {
        let order = coeffs.iter().map(Vec::len).max().unwrap_or(0).max(1) - 1;
        let mut m: Vec<Vec<Rational>> = coeffs
            .into_iter()
            .map(|mut row| {
                row.resize(order + 1, Rational::zero());
                row
            })
            .collect();
        if m.is_empty() {
            m.push(vec![Rational::zero(); order + 1]);
        }
        // trim zero top rows (degree) and zero top columns (order)
        while m.len() > 1 && m.last().unwrap().iter().all(Zero::is_zero) {
            m.pop();
        }
        while m[0].len() > 1 && m.iter().all(|row| row.last().unwrap().is_zero()) {
            for row in m.iter_mut() {
                row.pop();
            }
        }
        let lcm = m
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: Vec<Vec<BigInt>> = m
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
                    .collect()
            })
            .collect();
        let content = scaled.iter().flatten().fold(BigInt::zero(), |g, c| g.gcd(c));
        if content.is_zero() {
            return DifferentialOperator { coeffs: m };
        }
        let r = m[0].len() - 1;
        let leading_low = scaled.iter().map(|row| &row[r]).find(|c| !c.is_zero());
        let content = match leading_low {
            Some(c) if c.is_negative() => -content,
            _ => content,
        };
        let coeffs = scaled
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|c| Rational::from_integer(c / &content))
                    .collect()
            })
            .collect();
        DifferentialOperator { coeffs }
    }

    /// From polynomials in `D`, one per power of `t`.
    pub fn from_d_polynomials(rows: &[UniPoly]) -> Self {
        Self::new(rows.iter().map(|p| p.coeffs().to_vec()).collect())
    }

    /// The operator `D`.
    pub fn theta() -> Self {
        Self::from_d_polynomials(&[UniPoly::from_ints(&[0, 1])])
    }

    pub fn zero() -> Self {
        Self::new(vec![vec![Rational::zero()]])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(Zero::is_zero)
    }

    pub fn order(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize, k: usize) -> Rational {
        self.coeffs
            .get(j)
            .and_then(|row| row.get(k))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficients(&self) -> &[Vec<Rational>] {
        &self.coeffs
    }

    /// The polynomial in `D` multiplying `t^j`.
    pub fn t_row(&self, j: usize) -> UniPoly {
        UniPoly::new(self.coeffs.get(j).cloned().unwrap_or_default())
    }

    /// `F_k(t) = sum_j c[j][k] t^j`.
    pub fn f_poly(&self, k: usize) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|row| row.get(k).cloned().unwrap_or_else(Rational::zero)).collect())
    }

    /// `F_r(t)` for the order `r`.
    pub fn leading_polynomial(&self) -> UniPoly {
        self.f_poly(self.order())
    }

    pub fn to_recurrence(&self) -> Recurrence {
        to_recurrence(self)
    }

    /// Coefficients `0..=n` of `L` applied to a series with at least `n + 1`
    /// known terms.
    pub fn apply(&self, series: &[Rational], n: usize) -> Result<Vec<Rational>, OperatorError> {
        apply(self, series, n)
    }

    pub fn symbol(&self) -> SymbolPolynomial {
        symbol(self)
    }
}

impl fmt::Display for DifferentialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, _) in self.coeffs.iter().enumerate() {
            let row = self.t_row(j);
            if row.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "({})", row.display_in("D"))?,
                1 => write!(f, "t*({})", row.display_in("D"))?,
                _ => write!(f, "t^{j}*({})", row.display_in("D"))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for DifferentialOperator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let coeffs: Vec<Vec<String>> = self
            .coeffs
            .iter()
            .map(|row| row.iter().map(|c| c.to_string()).collect())
            .collect();
        let mut st = s.serialize_struct("DifferentialOperator", 3)?;
        st.serialize_field("order", &self.order())?;
        st.serialize_field("degree", &self.degree())?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// `sum_{j=0}^{span} q_j(n) a_{n-j} = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Recurrence {
    coefficients: Vec<UniPoly>,
}

impl Recurrence {
    pub fn new(coefficients: Vec<UniPoly>) -> Self {
        assert!(!coefficients.is_empty(), "a recurrence needs q_0");
        Recurrence { coefficients }
    }

    pub fn span(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[UniPoly] {
        &self.coefficients
    }

    pub fn q(&self, j: usize) -> &UniPoly {
        &self.coefficients[j]
    }

    /// `sum_j q_j(n) a_{n-j}` for each `n` in `start..a.len()`, reading
    /// negative indices as zero.
    pub fn residuals(&self, a: &[Rational], start: usize) -> Vec<Rational> {
        (start..a.len())
            .map(|n| {
                self.coefficients
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j <= n)
                    .map(|(j, q)| q.eval_int(n as i64) * &a[n - j])
                    .sum()
            })
            .collect()
    }

    /// The operator whose attached recurrence this is.
    pub fn to_operator(&self) -> DifferentialOperator {
        operator_from_recurrence(self)
    }
}

/// `q_j(n) = sum_k c[j][k] (n - j)^k`.
pub fn to_recurrence(op: &DifferentialOperator) -> Recurrence {
    Recurrence::new(
        (0..=op.degree())
            .map(|j| op.t_row(j).shift(&Rational::from_integer(-BigInt::from(j))))
            .collect(),
    )
}

/// Inverse of [`to_recurrence`]; the result is normalized.
pub fn operator_from_recurrence(rec: &Recurrence) -> DifferentialOperator {
    DifferentialOperator::from_d_polynomials(
        &rec.coefficients
            .iter()
            .enumerate()
            .map(|(j, q)| q.shift(&Rational::from_integer(BigInt::from(j))))
            .collect::<Vec<_>>(),
    )
}

pub fn apply(
    op: &DifferentialOperator,
    series: &[Rational],
    n: usize,
) -> Result<Vec<Rational>, OperatorError> {
    if series.len() < n + 1 {
        return Err(OperatorError::InsufficientTerms {
            needed: n + 1,
            got: series.len(),
        });
    }
    Ok(to_recurrence(op).residuals(&series[..=n], 0))
}

/// `t^d F_r(1/t)` for the operator degree `d`, made monic: the leading
/// polynomial read in the fiber coordinate `1/t`. Its nonzero roots are the
/// critical values of the family, the reciprocals of the nonzero roots of
/// `F_r(t)`; a zero root records that `F_r` has degree below `d`.
pub fn symbol(op: &DifferentialOperator) -> SymbolPolynomial {
    let r = op.order();
    let column: Vec<Rational> = (0..=op.degree()).rev().map(|j| op.coeff(j, r)).collect();
    UniPoly::new(column).monic()
}
