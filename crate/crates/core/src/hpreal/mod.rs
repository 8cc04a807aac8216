//! Binary high-precision reals, constants, polylogarithms, tanh-sinh
//! quadrature and recognition of rational multiples of basis constants.
//!
//! A value is `mantissa * 2^scale`, with the mantissa kept to at most
//! `precision_bits` bits by round-to-nearest after every operation. Working
//! precisions derived from decimal digits carry [`GUARD_BITS`] extra bits.

mod constants;
mod polylog;
mod quad;
mod recognize;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

use crate::Rational;

pub use constants::{
    cross_check, ln2, ln2_machin, pi, pi_gauss, sqrt_int, sqrt_int_isqrt, zeta3,
    zeta3_euler_maclaurin, CrossCheck,
};
pub(crate) use constants::{ln2_bits, pi_bits, sqrt_int_bits, zeta3_bits};
pub use polylog::li;
pub use quad::{quad_de, quad_de_levels, v16_membrane_value, v16_membrane_value_with, Abscissa};
pub use recognize::{recognize, Basis, CustomConstant, RecognizedConstant};

pub const GUARD_BITS: u32 = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HpError {
    #[error("argument out of domain: {0}")]
    OutOfDomain(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
}

/// Working precision in bits for `digits` decimal digits, guard bits
/// included.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

/// Decimal digits carried by a value of the given precision, guard bits
/// excluded.
pub fn digits_for_bits(bits: u32) -> u32 {
    (bits.saturating_sub(GUARD_BITS) as f64 / std::f64::consts::LOG2_10).floor() as u32
}

#[derive(Clone, Debug)]
pub struct HpReal {
    mantissa: BigInt,
    scale: i64,
    precision_bits: u32,
}

impl HpReal {
    pub fn new(mantissa: BigInt, scale: i64, precision_bits: u32) -> Self {
        let mut x = HpReal {
            mantissa,
            scale,
            precision_bits,
        };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.scale = 0;
            return;
        }
        let bits = self.mantissa.bits();
        let prec = self.precision_bits as u64;
        if bits > prec {
            let shift = bits - prec;
            self.mantissa = round_shift(&self.mantissa, shift);
            self.scale += shift as i64;
        }
        // strip trailing zero bits so equal values share a representation
        if let Some(tz) = self.mantissa.trailing_zeros() {
            if tz > 0 {
                self.mantissa >>= tz;
                self.scale += tz as i64;
            }
        }
    }

    pub fn zero(precision_bits: u32) -> Self {
        HpReal {
            mantissa: BigInt::zero(),
            scale: 0,
            precision_bits,
        }
    }

    pub fn from_int(n: i64, precision_bits: u32) -> Self {
        Self::new(BigInt::from(n), 0, precision_bits)
    }

    pub fn from_bigint(n: BigInt, precision_bits: u32) -> Self {
        Self::new(n, 0, precision_bits)
    }

    pub fn from_rational(q: &Rational, precision_bits: u32) -> Self {
        if q.is_zero() {
            return Self::zero(precision_bits);
        }
        let num = q.numer();
        let den = q.denom();
        let shift = precision_bits as i64 + 2 + den.bits() as i64 - num.bits() as i64;
        let shift = shift.max(0);
        let m = (num << shift as usize) / den;
        Self::new(m, -shift, precision_bits)
    }

    pub fn from_f64(v: f64, precision_bits: u32) -> Self {
        let q = Rational::from_float(v).expect("finite float");
        Self::from_rational(&q, precision_bits)
    }

    /// Exact rational value of the binary representation.
    pub fn to_rational(&self) -> Rational {
        if self.scale >= 0 {
            Rational::from_integer(&self.mantissa << self.scale as usize)
        } else {
            Rational::new(self.mantissa.clone(), BigInt::one() << (-self.scale) as usize)
        }
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn with_precision(&self, precision_bits: u32) -> Self {
        Self::new(self.mantissa.clone(), self.scale, precision_bits)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// `e` with `2^(e-1) <= |x| < 2^e`; `i64::MIN` for zero.
    pub fn magnitude_exponent(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.mantissa.bits() as i64 + self.scale
        }
    }

    pub fn abs(&self) -> Self {
        HpReal {
            mantissa: self.mantissa.abs(),
            ..self.clone()
        }
    }

    /// `x * 2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        HpReal {
            scale: self.scale + k,
            ..self.clone()
        }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        Self::new(&self.mantissa * n, self.scale, self.precision_bits)
    }

    pub fn div_int(&self, n: i64) -> Self {
        self / &HpReal::from_int(n, self.precision_bits)
    }

    pub fn recip(&self) -> Self {
        &HpReal::from_int(1, self.precision_bits) / self
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow_u(&self, n: u64) -> Self {
        let mut result = HpReal::from_int(1, self.precision_bits + 8);
        let mut base = self.with_precision(self.precision_bits + 8);
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        result.with_precision(self.precision_bits)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative number");
        if self.is_zero() {
            return self.clone();
        }
        let p = self.precision_bits as i64;
        let bits = self.mantissa.bits() as i64;
        let mut k = (2 * p + 4 - bits).max(0);
        if (self.scale - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let m = (&self.mantissa << k as usize).sqrt();
        Self::new(m, (self.scale - k) / 2, self.precision_bits)
    }

    /// Exponential, with argument reduction by `ln 2` and repeated halving.
    pub fn exp(&self) -> Self {
        let p = self.precision_bits;
        if self.is_zero() {
            return HpReal::from_int(1, p);
        }
        let mag = self.magnitude_exponent().max(0) as u32;
        let halvings = ((p as f64).sqrt() as u32 / 2).max(4);
        let w = p + mag + halvings + 16;
        let x = self.with_precision(w);
        let l2 = ln2_bits(w);
        let n = (&x / &l2).round_to_i64();
        let r = &x - &l2.mul_int(n);
        let r = r.mul_pow2(-(halvings as i64));
        // Taylor series for |r| < 2^-halvings
        let one = HpReal::from_int(1, w);
        let mut sum = one.clone();
        let mut term = one;
        let mut k = 1i64;
        loop {
            term = (&term * &r).div_int(k);
            if term.is_zero() || term.magnitude_exponent() < -(w as i64) - 4 {
                break;
            }
            sum = &sum + &term;
            k += 1;
        }
        for _ in 0..halvings {
            sum = sum.square();
        }
        sum.mul_pow2(n).with_precision(p)
    }

    /// Natural logarithm of a positive number.
    pub fn ln(&self) -> Self {
        assert!(self.signum() > 0, "logarithm of a non-positive number");
        let p = self.precision_bits;
        let w = p + 16;
        // x = y * 2^k with y in [1, 2)
        let k = self.magnitude_exponent() - 1;
        let y = self.with_precision(w).mul_pow2(-k);
        let one = HpReal::from_int(1, w);
        let z = &(&y - &one) / &(&y + &one);
        let z2 = z.square();
        let mut sum = z.clone();
        let mut power = z;
        let mut i = 1i64;
        loop {
            power = &power * &z2;
            let term = power.div_int(2 * i + 1);
            if term.is_zero() || term.magnitude_exponent() < -(w as i64) - 4 {
                break;
            }
            sum = &sum + &term;
            i += 1;
        }
        let result = &sum.mul_pow2(1) + &ln2_bits(w + 8).mul_int(k);
        result.with_precision(p)
    }

    /// Nearest integer (ties away from zero).
    pub fn round_to_i64(&self) -> i64 {
        let q = self.to_rational();
        q.round().to_integer().to_i64().expect("value fits in i64")
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 60).max(0);
        let m = (&self.mantissa >> drop as usize).to_f64().unwrap();
        m * 2f64.powi((self.scale + drop).clamp(-2000, 2000) as i32)
    }

    /// Approximate `log10 |x|`, usable far outside the f64 exponent range.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 60).max(0);
        let m = (&self.mantissa >> drop as usize).to_f64().unwrap().abs();
        m.log10() + (self.scale + drop) as f64 * std::f64::consts::LOG10_2
    }

    /// `|x| < 10^k`, decided exactly.
    pub fn abs_below_pow10(&self, k: i64) -> bool {
        let bound = pow10(k);
        self.to_rational().abs() < bound
    }

    /// Decimal with `digits` places after the point, rounded to nearest.
    pub fn to_fixed(&self, digits: u32) -> String {
        let scaled = self.to_rational() * Rational::from_integer(BigInt::from(10).pow(digits));
        let n = scaled.round().to_integer();
        let neg = n.is_negative();
        let s = n.abs().to_string();
        let d = digits as usize;
        let body = if d == 0 {
            s
        } else if s.len() <= d {
            format!("0.{}{}", "0".repeat(d - s.len()), s)
        } else {
            format!("{}.{}", &s[..s.len() - d], &s[s.len() - d..])
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Rounded to `sig` significant digits, in positional notation.
    pub fn to_significant(&self, sig: u32) -> String {
        if self.is_zero() {
            return self.to_fixed(sig.saturating_sub(1));
        }
        let mut e = self.log10_abs().floor() as i64;
        // the estimate can be off by one right at a power of ten
        if self.abs_below_pow10(e) {
            e -= 1;
        } else if !self.abs_below_pow10(e + 1) {
            e += 1;
        }
        let places = (sig as i64 - 1 - e).max(0) as u32;
        self.to_fixed(places)
    }

    /// Scientific notation with `sig` significant digits.
    pub fn to_scientific(&self, sig: u32) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let q = self.to_rational();
        let neg = q.is_negative();
        let q = q.abs();
        let mut e = self.log10_abs().floor() as i64;
        let sig = sig.max(1) as i64;
        let mut digits;
        loop {
            let scaled = &q * pow10(sig - 1 - e);
            digits = scaled.round().to_integer().to_string();
            if digits.len() as i64 > sig {
                e += 1;
            } else if (digits.len() as i64) < sig {
                e -= 1;
            } else {
                break;
            }
        }
        let mantissa = if digits.len() > 1 {
            format!("{}.{}", &digits[..1], &digits[1..])
        } else {
            digits
        };
        format!("{}{}e{}", if neg { "-" } else { "" }, mantissa, e)
    }
}

pub(crate) fn pow10(k: i64) -> Rational {
    let p = BigInt::from(10).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

fn round_shift(m: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return m.clone();
    }
    let half = BigInt::one() << (shift - 1);
    (m + half) >> shift as usize
}

impl PartialEq for HpReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HpReal {}

impl PartialOrd for HpReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HpReal {
    fn cmp(&self, other: &Self) -> Ordering {
        let s = self.scale.min(other.scale);
        let a = &self.mantissa << (self.scale - s) as usize;
        let b = &other.mantissa << (other.scale - s) as usize;
        a.cmp(&b)
    }
}

impl Add for &HpReal {
    type Output = HpReal;
    fn add(self, rhs: &HpReal) -> HpReal {
        let p = self.precision_bits.max(rhs.precision_bits);
        if self.is_zero() {
            return rhs.with_precision(p);
        }
        if rhs.is_zero() {
            return self.with_precision(p);
        }
        let (ea, eb) = (self.magnitude_exponent(), rhs.magnitude_exponent());
        if ea - eb > p as i64 + 2 {
            return self.with_precision(p);
        }
        if eb - ea > p as i64 + 2 {
            return rhs.with_precision(p);
        }
        let s = self.scale.min(rhs.scale);
        let m = (&self.mantissa << (self.scale - s) as usize)
            + (&rhs.mantissa << (rhs.scale - s) as usize);
        HpReal::new(m, s, p)
    }
}

impl Sub for &HpReal {
    type Output = HpReal;
    fn sub(self, rhs: &HpReal) -> HpReal {
        self + &(-rhs)
    }
}

impl Neg for &HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        HpReal {
            mantissa: -&self.mantissa,
            ..self.clone()
        }
    }
}

impl Mul for &HpReal {
    type Output = HpReal;
    fn mul(self, rhs: &HpReal) -> HpReal {
        let p = self.precision_bits.max(rhs.precision_bits);
        HpReal::new(&self.mantissa * &rhs.mantissa, self.scale + rhs.scale, p)
    }
}

impl Div for &HpReal {
    type Output = HpReal;
    fn div(self, rhs: &HpReal) -> HpReal {
        assert!(!rhs.is_zero(), "division by zero");
        let p = self.precision_bits.max(rhs.precision_bits);
        if self.is_zero() {
            return HpReal::zero(p);
        }
        let shift = (p as i64 + 2 + rhs.mantissa.bits() as i64 - self.mantissa.bits() as i64).max(0);
        let m = (&self.mantissa << shift as usize) / &rhs.mantissa;
        HpReal::new(m, self.scale - shift - rhs.scale, p)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for HpReal {
            type Output = HpReal;
            fn $f(self, rhs: HpReal) -> HpReal {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl HpReal {
    /// Decimal digits this value is meant to carry.
    pub fn digits(&self) -> u32 {
        digits_for_bits(self.precision_bits)
    }
}

impl Serialize for HpReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HpReal", 2)?;
        st.serialize_field("value", &self.to_string())?;
        st.serialize_field("digits", &self.digits())?;
        st.end()
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.digits();
        let mag = self.log10_abs();
        if self.is_zero() || (-5.0..20.0).contains(&mag) {
            write!(f, "{}", self.to_significant(digits.max(1)))
        } else {
            write!(f, "{}", self.to_scientific(digits.max(1)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    fn hp(v: i64) -> HpReal {
        HpReal::from_int(v, P)
    }

    #[test]
    fn arithmetic_basics() {
        let third = &hp(1) / &hp(3);
        let back = &third * &hp(3);
        assert!((&back - &hp(1)).abs_below_pow10(-55));
        assert_eq!(&hp(2) + &hp(3), hp(5));
        assert_eq!((&hp(2) - &hp(3)).signum(), -1);
        assert!(hp(2) < hp(3));
        assert_eq!(hp(7).mul_pow2(-1).to_fixed(1), "3.5");
    }

    #[test]
    fn tiny_addends_do_not_disturb() {
        let tiny = hp(1).mul_pow2(-10_000);
        assert_eq!(&hp(1) + &tiny, hp(1));
        assert!(tiny.abs_below_pow10(-3000));
        assert!(!tiny.is_zero());
    }

    #[test]
    fn sqrt_and_powers() {
        let s = hp(2).sqrt();
        assert!((&s.square() - &hp(2)).abs_below_pow10(-55));
        assert_eq!(hp(4).sqrt(), hp(2));
        assert_eq!(hp(3).pow_u(5), hp(243));
    }

    #[test]
    fn exp_ln_round_trip() {
        for v in [-50i64, -3, 1, 7, 120] {
            let x = &hp(v) / &hp(7);
            let y = x.exp().ln();
            assert!((&y - &x).abs_below_pow10(-50), "v = {v}");
        }
        let e = hp(1).exp();
        assert_eq!(e.to_fixed(20), "2.71828182845904523536");
        assert_eq!(hp(10).ln().to_fixed(20), "2.30258509299404568402");
    }

    #[test]
    fn formatting() {
        let x = HpReal::from_rational(&Rational::new((-1).into(), 8.into()), P);
        assert_eq!(x.to_fixed(2), "-0.13");
        assert_eq!(x.to_scientific(3), "-1.25e-1");
        let tiny = hp(3).mul_pow2(-1000);
        assert!(tiny.to_scientific(3).ends_with("e-301"));
        assert_eq!(hp(0).to_fixed(3), "0.000");
        assert_eq!(hp(1).mul_pow2(-1).to_significant(1), "0.5");
        assert_eq!(hp(1000).to_significant(2), "1000");
    }

    #[test]
    fn rational_round_trip_is_exact() {
        let q = Rational::new(5.into(), 16.into());
        assert_eq!(HpReal::from_rational(&q, P).to_rational(), q);
    }
}
