//! Tanh-sinh quadrature on a finite interval.
//!
//! Nodes are `x = tanh(pi/2 sinh t)` on a grid of step `2^-level`. The
//! distances of each node to both endpoints are computed without
//! cancellation (`1 - tanh u = 2/(e^(2u) + 1)`), so integrands with
//! logarithmic endpoint singularities can use them directly.

use num_traits::Signed;

use super::{bits_for_digits, pi_bits, pow10, HpError, HpReal};
use crate::Rational;

const MAX_LEVEL: u32 = 14;
const MAX_T: i64 = 12;

/// A quadrature node together with its distances to both endpoints.
#[derive(Clone, Debug)]
pub struct Abscissa {
    pub value: HpReal,
    pub from_left: HpReal,
    pub from_right: HpReal,
}

/// `int_a^b f`, level doubling until two successive levels agree to
/// `10^-digits` (relative to `max(1, |I|)`).
pub fn quad_de<F>(f: F, a: &HpReal, b: &HpReal, digits: u32) -> Result<HpReal, HpError>
where
    F: FnMut(&Abscissa) -> HpReal,
{
    quad_de_levels(f, a, b, digits).map(|(v, _)| v)
}

/// As [`quad_de`], also returning the final level.
pub fn quad_de_levels<F>(
    mut f: F,
    a: &HpReal,
    b: &HpReal,
    digits: u32,
) -> Result<(HpReal, u32), HpError>
where
    F: FnMut(&Abscissa) -> HpReal,
{
    if b < a {
        return Err(HpError::OutOfDomain("empty interval".into()));
    }
    let bits = bits_for_digits(digits) + 16;
    let a = a.with_precision(bits);
    let b = b.with_precision(bits);
    let half_width = (&b - &a).mul_pow2(-1);
    if half_width.is_zero() {
        return Ok((HpReal::zero(bits), 0));
    }
    let half_pi = pi_bits(bits).mul_pow2(-1);
    let one = HpReal::from_int(1, bits);
    let negligible = -(bits as i64) - 8;
    let tol = pow10(-(digits as i64));

    // sum over the nodes of level `level` not present at coarser levels
    let mut level_sum = |level: u32| -> HpReal {
        let h = one.mul_pow2(-(level as i64));
        let (start, step) = if level == 0 { (0i64, 1i64) } else { (1, 2) };
        let mut total = HpReal::zero(bits);
        let mut k = start;
        loop {
            let t = h.mul_int(k);
            if t > HpReal::from_int(MAX_T, bits) {
                break;
            }
            let et = t.exp();
            let et_inv = et.recip();
            let sinh = (&et - &et_inv).mul_pow2(-1);
            let cosh = (&et + &et_inv).mul_pow2(-1);
            let u = &half_pi * &sinh;
            let eu = u.exp();
            let cosh_u = (&eu + &eu.recip()).mul_pow2(-1);
            let weight = &(&half_pi * &cosh) / &cosh_u.square();
            // 1 - tanh u, scaled to the interval
            let gap = &half_width * &(&one.mul_int(2) / &(&eu.square() + &one));
            let far = &(&b - &a) - &gap;
            let right = Abscissa {
                value: &b - &gap,
                from_left: far.clone(),
                from_right: gap.clone(),
            };
            let mut term = &weight * &f(&right);
            if k != 0 {
                let left = Abscissa {
                    value: &a + &gap,
                    from_left: gap,
                    from_right: far,
                };
                term = &term + &(&weight * &f(&left));
            }
            total = &total + &term;
            let tiny_term = term.is_zero() || term.magnitude_exponent() < negligible;
            let tiny_weight = weight.magnitude_exponent() < 2 * negligible;
            if k > 0 && ((tiny_term && t > one) || tiny_weight) {
                break;
            }
            k += step;
        }
        &total * &h
    };

    let mut estimate = &level_sum(0) * &half_width;
    for level in 1..=MAX_LEVEL {
        let fresh = &level_sum(level) * &half_width;
        let next = &estimate.mul_pow2(-1) + &fresh;
        let diff = (&next - &estimate).to_rational().abs();
        let scale = next.to_rational().abs().max(Rational::from_integer(1.into()));
        estimate = next;
        if level >= 3 && diff < &tol * &scale {
            return Ok((estimate.with_precision(bits - 16), level));
        }
    }
    Err(HpError::NonConvergence(format!(
        "tanh-sinh quadrature did not settle within {MAX_LEVEL} levels"
    )))
}

/// `2 (int_0^1 log^2 y/(1-y) dy + int_0^1 log^2 y/(1+y) dy)`, which equals
/// `7 zeta(3)`.
pub fn v16_membrane_value(digits: u32) -> Result<HpReal, HpError> {
    v16_membrane_value_with(digits, None)
}

/// As [`v16_membrane_value`], optionally adding a constant to both
/// integrands (shifting the value by four times that constant). Used to
/// exercise the recognition failure path.
pub fn v16_membrane_value_with(
    digits: u32,
    perturbation: Option<&Rational>,
) -> Result<HpReal, HpError> {
    if digits > 40 {
        return Err(HpError::OutOfDomain(format!(
            "membrane quadrature supports at most 40 digits, got {digits}"
        )));
    }
    let bits = bits_for_digits(digits) + 16;
    let shift = perturbation.map(|p| HpReal::from_rational(p, bits));
    let zero = HpReal::zero(bits);
    let one = HpReal::from_int(1, bits);
    let first = quad_de(
        |x| {
            let l = x.from_left.ln();
            let v = &l.square() / &x.from_right;
            shift.as_ref().map_or(v.clone(), |s| &v + s)
        },
        &zero,
        &one,
        digits + 4,
    )?;
    let second = quad_de(
        |x| {
            let l = x.from_left.ln();
            let v = &l.square() / &(&one + &x.value);
            shift.as_ref().map_or(v.clone(), |s| &v + s)
        },
        &zero,
        &one,
        digits + 4,
    )?;
    Ok((&first + &second).mul_pow2(1).with_precision(bits_for_digits(digits)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpreal::zeta3;

    fn hp(v: i64) -> HpReal {
        HpReal::from_int(v, 200)
    }

    #[test]
    fn constant_integrand() {
        let v = quad_de(|_| hp(1), &hp(0), &hp(1), 30).unwrap();
        assert!((&v - &hp(1)).abs_below_pow10(-28));
        let w = quad_de(|x| x.value.clone(), &hp(-1), &hp(3), 30).unwrap();
        assert!((&w - &hp(4)).abs_below_pow10(-28));
    }

    #[test]
    fn log_singular_integrands() {
        let z = zeta3(30);
        let a = quad_de(
            |x| &x.from_left.ln().square() / &x.from_right,
            &hp(0),
            &hp(1),
            30,
        )
        .unwrap();
        assert!((&a - &z.mul_int(2)).abs_below_pow10(-25));
        let b = quad_de(
            |x| &x.from_left.ln().square() / &(&hp(1) + &x.value),
            &hp(0),
            &hp(1),
            30,
        )
        .unwrap();
        assert!((&b - &z.mul_int(3).mul_pow2(-1)).abs_below_pow10(-25));
    }

    #[test]
    fn membrane_value_is_seven_zeta3() {
        let v = v16_membrane_value(20).unwrap();
        assert!((&v - &zeta3(20).mul_int(7)).abs_below_pow10(-18));
        assert!(v.to_fixed(14).starts_with("8.4143983221171"));
        assert!(v16_membrane_value(41).is_err());
    }

    #[test]
    fn level_count_grows_slowly() {
        let f = |x: &Abscissa| &x.from_left.ln().square() / &x.from_right;
        let (_, lo) = quad_de_levels(f, &hp(0), &hp(1), 15).unwrap();
        let (_, hi) = quad_de_levels(f, &hp(0), &hp(1), 30).unwrap();
        assert!(hi <= 2 * lo, "{lo} -> {hi}");
    }
}
