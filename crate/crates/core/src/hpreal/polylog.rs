use super::{bits_for_digits, pi_bits, zeta3_bits, HpError, HpReal};

const MAX_TERMS: u64 = 2_000_000;

/// `Li_s(x) = sum_{n>=1} x^n / n^s` for `s` in {2, 3} and `|x| <= 1`.
pub fn li(s: u32, x: &HpReal, digits: u32) -> Result<HpReal, HpError> {
    if s != 2 && s != 3 {
        return Err(HpError::OutOfDomain(format!("polylogarithm order {s}")));
    }
    let bits = bits_for_digits(digits);
    let one = HpReal::from_int(1, bits);
    if x.abs() > one {
        return Err(HpError::OutOfDomain(format!("|x| > 1 (x = {})", x.to_scientific(6))));
    }
    if x.is_zero() {
        return Ok(HpReal::zero(bits));
    }
    let at_one = x.abs() == one;
    if at_one {
        let positive = !x.is_negative();
        return Ok(match (s, positive) {
            (3, true) => zeta3_bits(bits),
            (3, false) => -&zeta3_bits(bits).mul_int(3).mul_pow2(-2),
            (2, true) => pi_bits(bits).square().div_int(6),
            _ => -&pi_bits(bits).square().div_int(12),
        });
    }
    let w = bits + 16;
    let x = x.with_precision(w);
    let mut power = x.clone();
    let mut sum = x.clone();
    let cutoff = -(w as i64) - 4;
    let mut n = 1u64;
    loop {
        n += 1;
        if n > MAX_TERMS {
            return Err(HpError::NonConvergence(format!(
                "polylogarithm series needs more than {MAX_TERMS} terms"
            )));
        }
        power = &power * &x;
        if power.is_zero() || power.magnitude_exponent() < cutoff {
            break;
        }
        let ns = HpReal::from_int((n as i64).pow(s), w);
        sum = &sum + &(&power / &ns);
    }
    Ok(sum.with_precision(bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpreal::zeta3;
    use crate::Rational;

    fn q(p: i64, r: i64) -> HpReal {
        HpReal::from_rational(&Rational::new(p.into(), r.into()), 200)
    }

    #[test]
    fn special_values() {
        assert_eq!(li(3, &q(1, 1), 30).unwrap(), zeta3(30));
        assert!(li(2, &q(0, 1), 30).unwrap().is_zero());
        let sum = &li(3, &q(-1, 1), 30).unwrap() + &zeta3(30).mul_int(3).mul_pow2(-2);
        assert!(sum.abs_below_pow10(-28));
    }

    #[test]
    fn alternating_series_matches_closed_form() {
        // partial sums of sum (-1)^n / n^3 converge slowly; bracket instead
        let mut s = HpReal::zero(200);
        for n in 1..=2000i64 {
            let t = q(1, n * n * n);
            s = if n % 2 == 1 { &s - &t } else { &s + &t };
        }
        let exact = li(3, &q(-1, 1), 30).unwrap();
        assert!((&s - &exact).abs_below_pow10(-9));
    }

    #[test]
    fn dilogarithm_at_one_half() {
        // Li_2(1/2) = pi^2/12 - (ln 2)^2/2
        let v = li(2, &q(1, 2), 40).unwrap();
        let pi = crate::hpreal::pi(40);
        let l2 = crate::hpreal::ln2(40);
        let expected = &pi.square().div_int(12) - &l2.square().mul_pow2(-1);
        assert!((&v - &expected).abs_below_pow10(-38));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(li(3, &q(3, 2), 10), Err(HpError::OutOfDomain(_))));
        assert!(matches!(li(4, &q(1, 2), 10), Err(HpError::OutOfDomain(_))));
    }
}
