//! The paired solutions `a`, `b` of a recurrence and the limit of `b_n/a_n`.
//!
//! `a_0 = 1`, `b_0 = 0`, `b_1 = 1`, both continued by the homogeneous
//! recurrence (for `b` from `n = 2` on). The increments of `b_n/a_n` decay
//! like `rho^n` with `rho` the ratio of the two largest singular moduli.

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::hpreal::{bits_for_digits, recognize, Basis, HpReal, RecognizedConstant};
use crate::pfops::{Recurrence, SingularPoint, SingularSet};
use crate::Rational;

/// Consecutive steps that must satisfy both stopping tests.
const CONFIRMATIONS: usize = 5;
/// Increments used to fit the constant of the geometric model.
const FIT_WINDOW: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AperyError {
    #[error("leading recurrence coefficient vanishes at n = {n}")]
    VanishingLeading { n: usize },
    #[error("the two dominant singular points have equal modulus; no Apéry limit")]
    EqualModuli,
    #[error("need at least two finite nonzero singular points, found {found}")]
    NoSingularPair { found: usize },
    #[error("no convergence to {digits} digits within {max_terms} terms")]
    NonConvergence { digits: u32, max_terms: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionPair {
    pub recurrence: Recurrence,
    #[serde(serialize_with = "ser_rationals")]
    pub a: Vec<Rational>,
    #[serde(serialize_with = "ser_rationals")]
    pub b: Vec<Rational>,
}

fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

/// Forward solver producing `a_n`, `b_n` one index at a time.
struct PairStepper<'a> {
    rec: &'a Recurrence,
    a: Vec<Rational>,
    b: Vec<Rational>,
}

impl<'a> PairStepper<'a> {
    fn new(rec: &'a Recurrence) -> Self {
        PairStepper {
            rec,
            a: vec![Rational::from_integer(1.into())],
            b: vec![Rational::zero()],
        }
    }

    fn step(&mut self) -> Result<(), AperyError> {
        let n = self.a.len();
        let lead = self.rec.q(0).eval_int(n as i64);
        if lead.is_zero() {
            return Err(AperyError::VanishingLeading { n });
        }
        let rest = |seq: &[Rational]| -> Rational {
            (1..=self.rec.span().min(n))
                .map(|j| self.rec.q(j).eval_int(n as i64) * &seq[n - j])
                .sum()
        };
        let next_a = -rest(&self.a) / &lead;
        let next_b = if n == 1 {
            Rational::from_integer(1.into())
        } else {
            -rest(&self.b) / &lead
        };
        self.a.push(next_a);
        self.b.push(next_b);
        Ok(())
    }
}

/// `a_0..a_N` and `b_0..b_N` in exact arithmetic.
pub fn solve_pair(rec: &Recurrence, n: usize) -> Result<SolutionPair, AperyError> {
    let mut stepper = PairStepper::new(rec);
    while stepper.a.len() <= n {
        stepper.step()?;
    }
    Ok(SolutionPair {
        recurrence: rec.clone(),
        a: stepper.a,
        b: stepper.b,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AperyResult {
    #[serde(serialize_with = "ser_plain")]
    pub limit: HpReal,
    pub terms_used: usize,
    #[serde(serialize_with = "ser_sci")]
    pub error_bound: HpReal,
    #[serde(rename = "ratio", serialize_with = "ser_sci")]
    pub convergence_ratio: HpReal,
    pub recognized: Option<RecognizedConstant>,
}

fn ser_plain<S: Serializer>(x: &HpReal, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_sci<S: Serializer>(x: &HpReal, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_scientific(6))
}

impl AperyResult {
    /// Fills `recognized` from the given bases.
    pub fn recognize(&mut self, bases: &[Basis], max_den: u64, guard_digits: u32) {
        self.recognized = recognize(&self.limit, bases, max_den, guard_digits);
    }
}

/// The two dominant singular points, largest modulus last.
fn dominant_pair(singular: &SingularSet) -> Result<(&SingularPoint, &SingularPoint), AperyError> {
    let pts = &singular.finite_points;
    if pts.len() < 2 {
        return Err(AperyError::NoSingularPair { found: pts.len() });
    }
    Ok((&pts[pts.len() - 2], &pts[pts.len() - 1]))
}

fn moduli_equal(x: &SingularPoint, y: &SingularPoint, bits: u32) -> bool {
    use SingularPoint::*;
    match (x, y) {
        (Rational { value: u, .. }, Rational { value: v, .. }) => u.abs() == v.abs(),
        (Surd { p: p1, q: q1, d: d1, .. }, Surd { p: p2, q: q2, d: d2, .. })
            if p1 == p2 && d1 == d2 && *q1 == -q2.clone() =>
        {
            // a conjugate pair: complex conjugates always match, real ones
            // only when symmetric about zero
            d1.is_negative() || p1.is_zero()
        }
        _ => {
            let (mx, my) = (x.modulus(bits), y.modulus(bits));
            (&mx - &my).magnitude_exponent() < my.magnitude_exponent() - bits as i64 + 16
        }
    }
}

/// `rho = |t_1| / |t_2|` for the two dominant singular points.
pub fn convergence_ratio(singular: &SingularSet, bits: u32) -> Result<HpReal, AperyError> {
    let (t1, t2) = dominant_pair(singular)?;
    if moduli_equal(t1, t2, bits) {
        return Err(AperyError::EqualModuli);
    }
    Ok(&t1.modulus(bits) / &t2.modulus(bits))
}

/// The normalized model bound `rho^N` (1 at `N = 0`). An estimate, not a
/// proof; [`apery_limit`] scales it by a constant fitted to the observed
/// increments.
pub fn limit_error_model(singular: &SingularSet, n: usize) -> Result<HpReal, AperyError> {
    let bits = bits_for_digits(64);
    let rho = convergence_ratio(singular, bits)?;
    Ok(rho.pow_u(n as u64))
}

/// Evaluates `lim b_n/a_n` to `digits` decimal digits.
///
/// Stops at the first `N` where, for five consecutive indices, both the
/// increment `|b_n/a_n - b_{n-1}/a_{n-1}|` and the fitted model bound
/// `C rho^n` lie below `10^-digits`. The reported error bound is the
/// geometric tail `C rho^(N+1) / (1 - rho)`.
pub fn apery_limit(
    rec: &Recurrence,
    singular: &SingularSet,
    digits: u32,
    max_terms: usize,
) -> Result<AperyResult, AperyError> {
    let bits = bits_for_digits(digits) + 32;
    let rho = convergence_ratio(singular, bits)?;
    if rho >= HpReal::from_int(1, bits) {
        return Err(AperyError::EqualModuli);
    }
    let tol = -(digits as i64);
    let mut stepper = PairStepper::new(rec);
    stepper.step()?;
    let mut previous: Option<HpReal> = None;
    // (n, increment / rho^n)
    let mut fitted: Vec<HpReal> = Vec::new();
    let mut rho_n = rho.clone();
    let mut confirmed = 0;
    for n in 2..=max_terms {
        stepper.step()?;
        rho_n = &rho_n * &rho;
        let a = &stepper.a[n];
        if a.is_zero() {
            previous = None;
            confirmed = 0;
            continue;
        }
        let ratio = &HpReal::from_rational(&stepper.b[n], bits) / &HpReal::from_rational(a, bits);
        let Some(prev) = previous.replace(ratio.clone()) else {
            continue;
        };
        let increment = (&ratio - &prev).abs();
        fitted.push(&increment / &rho_n);
        if fitted.len() > FIT_WINDOW {
            fitted.remove(0);
        }
        let c = fitted.iter().max().cloned().expect("nonempty");
        let model = &c * &rho_n;
        if increment.abs_below_pow10(tol) && model.abs_below_pow10(tol) {
            confirmed += 1;
        } else {
            confirmed = 0;
        }
        if confirmed >= CONFIRMATIONS && fitted.len() >= FIT_WINDOW.min(n - 1) {
            let one = HpReal::from_int(1, bits);
            let error_bound = &(&model * &rho) / &(&one - &rho);
            return Ok(AperyResult {
                limit: ratio.with_precision(bits_for_digits(digits)),
                terms_used: n,
                error_bound: error_bound.with_precision(64),
                convergence_ratio: rho.with_precision(bits_for_digits(digits)),
                recognized: None,
            });
        }
    }
    Err(AperyError::NonConvergence { digits, max_terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::hpreal::zeta3;
    use crate::periods::period_sequence;
    use crate::pfops::{operator_from_series, singular_points, DifferentialOperator};
    use crate::poly::UniPoly;

    fn q(p: i64, r: i64) -> Rational {
        Rational::new(p.into(), r.into())
    }

    fn discovered(name: &str) -> DifferentialOperator {
        let a = period_sequence(&catalog::entry(name).unwrap().phi, 29).values;
        operator_from_series(&a, 4, 4, 8).unwrap()
    }

    #[test]
    fn v12_pair() {
        let rec = discovered("V12").to_recurrence();
        let pair = solve_pair(&rec, 4).unwrap();
        assert_eq!(pair.a, vec![q(1, 1), q(5, 1), q(73, 1), q(1445, 1), q(33001, 1)]);
        assert_eq!(&pair.b[..4], &[q(0, 1), q(1, 1), q(117, 8), q(62531, 216)]);
    }

    #[test]
    fn trivial_recurrences() {
        let rec = Recurrence::new(vec![UniPoly::from_ints(&[1]), UniPoly::from_ints(&[-1])]);
        let pair = solve_pair(&rec, 5).unwrap();
        assert!(pair.a.iter().all(|v| *v == q(1, 1)));
        assert_eq!(pair.b, vec![q(0, 1), q(1, 1), q(1, 1), q(1, 1), q(1, 1), q(1, 1)]);
        let bad = Recurrence::new(vec![UniPoly::from_ints(&[-5, 1]), UniPoly::from_ints(&[1])]);
        assert_eq!(solve_pair(&bad, 8), Err(AperyError::VanishingLeading { n: 5 }));
    }

    #[test]
    fn v12_limit_is_zeta3_over_six() {
        let op = discovered("V12");
        let s = singular_points(&op);
        let r = apery_limit(&op.to_recurrence(), &s, 50, 200).unwrap();
        assert!(r.terms_used <= 200);
        let expected = zeta3(50).div_int(6);
        assert!((&r.limit - &expected).abs_below_pow10(-49));
        assert!(r.error_bound.abs_below_pow10(-50));
    }

    #[test]
    fn error_model() {
        let s = singular_points(&discovered("R1"));
        assert_eq!(limit_error_model(&s, 0).unwrap(), HpReal::from_int(1, 64));
        let m = limit_error_model(&s, 5).unwrap();
        assert_eq!(m.to_rational(), q(1, 1024));
        let s = singular_points(&discovered("V12"));
        let m = limit_error_model(&s, 100).unwrap();
        assert!(m.abs_below_pow10(-300));
        let rho = limit_error_model(&s, 1).unwrap().to_f64();
        // (17 - 12 sqrt 2)^2 = 577 - 408 sqrt 2
        assert!((rho - (577.0 - 408.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn equal_moduli_rejected() {
        // symbol t^2 - 4: roots +-2
        let op = DifferentialOperator::new(vec![
            vec![q(1, 1), q(1, 1)],
            vec![q(1, 1), q(0, 1)],
            vec![q(1, 1), q(-4, 1)],
        ]);
        let s = singular_points(&op);
        assert_eq!(
            apery_limit(&op.to_recurrence(), &s, 20, 100).unwrap_err(),
            AperyError::EqualModuli
        );
    }
}
