//! Guessing an annihilating operator from the first terms of a series.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use super::{DifferentialOperator, OperatorError};
use crate::linalg;
use crate::Rational;

/// The operator of minimal order, then minimal degree, annihilating the
/// series through all given terms.
///
/// For each `(r, d)` the unknowns `c[j][k]` (`j <= d`, `k <= r`) are fitted on
/// all but the last `verify_margin` coefficients; a one-dimensional nullspace
/// is accepted only if the resulting operator also kills the held-out
/// coefficients. Boxes with fewer than `unknowns + verify_margin` terms
/// available are skipped.
pub fn operator_from_series(
    series: &[Rational],
    max_order: usize,
    max_degree: usize,
    verify_margin: usize,
) -> Result<DifferentialOperator, OperatorError> {
    let mut smallest_skipped: Option<usize> = None;
    for order in 1..=max_order {
        for degree in 0..=max_degree {
            let unknowns = (order + 1) * (degree + 1);
            if series.len() < unknowns + verify_margin {
                let needed = unknowns + verify_margin;
                smallest_skipped = Some(smallest_skipped.map_or(needed, |s: usize| s.min(needed)));
                continue;
            }
            let fit = series.len() - verify_margin;
            let rows: Vec<Vec<Rational>> = (0..fit)
                .map(|n| ansatz_row(series, n, order, degree))
                .collect();
            let kernel = linalg::nullspace(&rows, unknowns);
            match kernel.len() {
                0 => continue,
                1 => {
                    let v = &kernel[0];
                    let coeffs = (0..=degree)
                        .map(|j| v[j * (order + 1)..(j + 1) * (order + 1)].to_vec())
                        .collect();
                    let op = DifferentialOperator::new(coeffs);
                    let check = op.apply(series, series.len() - 1)?;
                    if check.iter().all(Zero::is_zero) {
                        return Ok(op);
                    }
                }
                dimension => {
                    return Err(OperatorError::Ambiguous {
                        order,
                        degree,
                        dimension,
                    })
                }
            }
        }
    }
    match smallest_skipped {
        Some(needed) => Err(OperatorError::InsufficientTerms {
            needed,
            got: series.len(),
        }),
        None => Err(OperatorError::NoAnnihilator {
            max_order,
            max_degree,
        }),
    }
}

/// Coefficient of `t^n` in `L f` as a linear form in the unknowns.
fn ansatz_row(series: &[Rational], n: usize, order: usize, degree: usize) -> Vec<Rational> {
    let mut row = Vec::with_capacity((order + 1) * (degree + 1));
    for j in 0..=degree {
        for k in 0..=order {
            if j > n {
                row.push(Rational::zero());
            } else {
                let m = BigInt::from(n - j);
                row.push(&series[n - j] * Rational::from_integer(Pow::pow(m, k as u32)));
            }
        }
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::periods::period_sequence;
    use crate::pfops::tests::apery_operator;
    use num_traits::One;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn recovers_apery_operator() {
        let a = period_sequence(&catalog::entry("V12").unwrap().phi, 29).values;
        let op = operator_from_series(&a, 4, 4, 8).unwrap();
        assert_eq!(op, apery_operator());
    }

    #[test]
    fn geometric_series() {
        let ones = vec![Rational::one(); 20];
        let op = operator_from_series(&ones, 4, 4, 8).unwrap();
        // (1 - t) D - t
        let expected = DifferentialOperator::new(vec![vec![q(0), q(1)], vec![q(-1), q(-1)]]);
        assert_eq!(op, expected);
        assert!(op.apply(&ones, 19).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn constant_function() {
        let mut s = vec![Rational::zero(); 20];
        s[0] = Rational::one();
        assert_eq!(operator_from_series(&s, 4, 4, 8).unwrap(), DifferentialOperator::theta());
    }

    #[test]
    fn failure_modes() {
        // factorials grow too fast for any operator in the box
        let mut fact = vec![Rational::one()];
        for n in 1..40 {
            let prev = fact[n - 1].clone();
            fact.push(prev * q(n as i64) * q(n as i64 + 1) + q(1));
        }
        assert!(matches!(
            operator_from_series(&fact, 1, 1, 8),
            Err(OperatorError::NoAnnihilator { .. })
        ));
        assert!(matches!(
            operator_from_series(&fact[..5], 2, 2, 8),
            Err(OperatorError::InsufficientTerms { .. })
        ));
    }
}
