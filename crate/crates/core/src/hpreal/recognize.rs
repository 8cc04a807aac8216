//! Recognition of `x` as `(p/q) * B` for a basis constant `B`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{pi, pow10, sqrt_int, zeta3, HpReal};
use crate::Rational;

/// A named constant supplied by the caller, evaluated at a digit count.
#[derive(Clone)]
pub struct CustomConstant {
    pub name: String,
    pub value: Arc<dyn Fn(u32) -> HpReal + Send + Sync>,
}

impl fmt::Debug for CustomConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomConstant").field("name", &self.name).finish()
    }
}

#[derive(Clone, Debug)]
pub enum Basis {
    One,
    Zeta3,
    Pi3,
    Pi3OverSqrt3,
    Custom(CustomConstant),
}

impl Basis {
    pub fn defaults() -> Vec<Basis> {
        vec![Basis::One, Basis::Zeta3, Basis::Pi3OverSqrt3, Basis::Pi3]
    }

    pub fn tag(&self) -> &str {
        match self {
            Basis::One => "one",
            Basis::Zeta3 => "zeta3",
            Basis::Pi3 => "pi3",
            Basis::Pi3OverSqrt3 => "pi3_over_sqrt3",
            Basis::Custom(c) => &c.name,
        }
    }

    pub fn from_tag(tag: &str) -> Option<Basis> {
        match tag.to_ascii_lowercase().as_str() {
            "one" => Some(Basis::One),
            "zeta3" => Some(Basis::Zeta3),
            "pi3" => Some(Basis::Pi3),
            "pi3_over_sqrt3" => Some(Basis::Pi3OverSqrt3),
            _ => None,
        }
    }

    pub fn value(&self, digits: u32) -> HpReal {
        match self {
            Basis::One => HpReal::from_int(1, super::bits_for_digits(digits)),
            Basis::Zeta3 => zeta3(digits),
            Basis::Pi3 => pi(digits).pow_u(3),
            Basis::Pi3OverSqrt3 => &pi(digits).pow_u(3) / &sqrt_int(3, digits),
            Basis::Custom(c) => (c.value)(digits),
        }
    }
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.tag() == other.tag()
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for Basis {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecognizedConstant {
    #[serde(serialize_with = "ser_display")]
    pub coefficient: Rational,
    pub basis: Basis,
    #[serde(serialize_with = "ser_scientific")]
    pub residual: HpReal,
}

fn ser_display<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_scientific<S: Serializer>(x: &HpReal, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_scientific(3))
}

impl fmt::Display for RecognizedConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * {}", self.coefficient, self.basis)
    }
}

/// Convergents `p/q` of the continued fraction of `r` with `q <= max_den`.
fn convergents(r: &Rational, max_den: u64) -> Vec<Rational> {
    let bound = BigInt::from(max_den);
    let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
    let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
    let mut x = r.clone();
    let mut out = Vec::new();
    loop {
        let a = x.floor().to_integer();
        let h = &a * &h1 + &h2;
        let k = &a * &k1 + &k2;
        if k > bound {
            break;
        }
        out.push(Rational::new(h.clone(), k.clone()));
        let frac = &x - Rational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
    }
    out
}

/// Tries each basis in order; returns the first `p/q` with `q <= max_den`
/// whose residual is below `10^-(digits - guard_digits)`, where `digits` is
/// the decimal precision carried by `x`. Candidates are re-verified against
/// the basis constant at doubled precision. `None` when nothing qualifies or
/// `x` carries fewer than `3 * guard_digits` digits.
pub fn recognize(
    x: &HpReal,
    bases: &[Basis],
    max_den: u64,
    guard_digits: u32,
) -> Option<RecognizedConstant> {
    let digits = x.digits();
    if digits < 3 * guard_digits {
        return None;
    }
    let threshold = pow10(-((digits - guard_digits) as i64));
    let xr = x.to_rational();
    if xr.abs() < threshold {
        return Some(RecognizedConstant {
            coefficient: Rational::zero(),
            basis: Basis::One,
            residual: x.abs(),
        });
    }
    for basis in bases {
        let b = basis.value(digits + 10);
        if b.is_zero() {
            continue;
        }
        let ratio = (x / &b).to_rational();
        for c in convergents(&ratio, max_den) {
            if c.is_zero() {
                continue;
            }
            let residual = (&xr - &c * b.to_rational()).abs();
            if residual >= threshold {
                continue;
            }
            let fine = basis.value(2 * digits + 10).to_rational();
            let residual = (&xr - &c * fine).abs();
            if residual < threshold {
                return Some(RecognizedConstant {
                    coefficient: c,
                    basis: basis.clone(),
                    residual: HpReal::from_rational(&residual, 64),
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpreal::bits_for_digits;

    fn q(p: i64, r: i64) -> Rational {
        Rational::new(p.into(), r.into())
    }

    #[test]
    fn convergents_of_a_fraction() {
        let c = convergents(&q(355, 113), 1000);
        assert_eq!(c.last().unwrap(), &q(355, 113));
        assert_eq!(c[0], q(3, 1));
        assert!(convergents(&q(355, 113), 100).iter().all(|v| v.denom() <= &BigInt::from(100)));
    }

    #[test]
    fn seven_zeta3() {
        let x = zeta3(30).mul_int(7);
        let r = recognize(&x, &Basis::defaults(), 10_000, 8).unwrap();
        assert_eq!(r.coefficient, q(7, 1));
        assert_eq!(r.basis, Basis::Zeta3);
    }

    #[test]
    fn zero_and_sixth() {
        let z = HpReal::zero(bits_for_digits(30));
        let r = recognize(&z, &Basis::defaults(), 10_000, 8).unwrap();
        assert_eq!((r.coefficient, r.basis), (q(0, 1), Basis::One));
        let x = zeta3(50).div_int(6);
        let r = recognize(&x, &Basis::defaults(), 10_000, 8).unwrap();
        assert_eq!((r.coefficient, r.basis), (q(1, 6), Basis::Zeta3));
    }

    #[test]
    fn pi_cubed_over_root_three() {
        let x = Basis::Pi3OverSqrt3.value(40).mul_int(-4).div_int(9);
        let r = recognize(&x, &Basis::defaults(), 10_000, 8).unwrap();
        assert_eq!((r.coefficient, r.basis), (q(-4, 9), Basis::Pi3OverSqrt3));
    }

    #[test]
    fn noise_sensitivity() {
        let digits = 30;
        let bits = bits_for_digits(digits);
        let base = zeta3(digits).mul_int(7);
        let small = HpReal::from_rational(&pow10(-(digits as i64 - 8 + 2)), bits);
        assert!(recognize(&(&base + &small), &Basis::defaults(), 10_000, 8).is_some());
        let large = HpReal::from_rational(&pow10(-3), bits);
        assert!(recognize(&(&base + &large), &Basis::defaults(), 10_000, 8).is_none());
    }

    #[test]
    fn custom_basis_and_low_precision() {
        let ln2 = Basis::Custom(CustomConstant {
            name: "ln2".into(),
            value: Arc::new(crate::hpreal::ln2),
        });
        let x = crate::hpreal::ln2(40).mul_int(3).div_int(5);
        let r = recognize(&x, &[Basis::Zeta3, ln2.clone()], 10_000, 8).unwrap();
        assert_eq!((r.coefficient, r.basis.tag()), (q(3, 5), "ln2"));
        let coarse = zeta3(20);
        assert!(recognize(&coarse, &Basis::defaults(), 10_000, 8).is_none());
    }
}
