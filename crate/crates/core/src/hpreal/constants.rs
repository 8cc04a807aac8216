//! Fundamental constants, each with an independent second formula.
//!
//! Series are summed in binary fixed point with 16 bits beyond the target
//! precision. Results are memoized per (constant, precision).

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{bits_for_digits, pow10, HpReal};
use crate::Rational;

const SERIES_GUARD: u32 = 16;

type CacheKey = (&'static str, u64, u32);

fn cache() -> &'static Mutex<HashMap<CacheKey, HpReal>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, HpReal>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn memo(name: &'static str, arg: u64, bits: u32, compute: impl FnOnce() -> HpReal) -> HpReal {
    let key = (name, arg, bits);
    if let Some(v) = cache().lock().unwrap().get(&key) {
        return v.clone();
    }
    let v = compute();
    cache().lock().unwrap().insert(key, v.clone());
    v
}

fn from_fixed(m: BigInt, fbits: u32, bits: u32) -> HpReal {
    HpReal::new(m, -(fbits as i64), bits)
}

/// `atan(1/n) * 2^fbits`.
fn atan_inv(n: u64, fbits: u32) -> BigInt {
    arctan_series(n, fbits, true)
}

/// `atanh(1/n) * 2^fbits`.
fn atanh_inv(n: u64, fbits: u32) -> BigInt {
    arctan_series(n, fbits, false)
}

fn arctan_series(n: u64, fbits: u32, alternating: bool) -> BigInt {
    let n2 = BigInt::from(n) * n;
    let mut power = (BigInt::one() << fbits as usize) / n;
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power /= &n2;
        if power.is_zero() {
            break;
        }
        let term = &power / (2 * k + 1);
        if alternating && k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

pub(crate) fn pi_bits(bits: u32) -> HpReal {
    memo("pi", 0, bits, || {
        let f = bits + SERIES_GUARD;
        // Machin: pi/4 = 4 atan(1/5) - atan(1/239)
        let m = atan_inv(5, f) * 16 - atan_inv(239, f) * 4;
        from_fixed(m, f, bits)
    })
}

pub fn pi(digits: u32) -> HpReal {
    pi_bits(bits_for_digits(digits))
}

/// Gauss: pi/4 = 12 atan(1/18) + 8 atan(1/57) - 5 atan(1/239).
pub fn pi_gauss(digits: u32) -> HpReal {
    let bits = bits_for_digits(digits);
    let f = bits + SERIES_GUARD;
    let m = atan_inv(18, f) * 48 + atan_inv(57, f) * 32 - atan_inv(239, f) * 20;
    from_fixed(m, f, bits)
}

pub(crate) fn ln2_bits(bits: u32) -> HpReal {
    memo("ln2", 0, bits, || {
        let f = bits + SERIES_GUARD;
        from_fixed(atanh_inv(3, f) * 2, f, bits)
    })
}

pub fn ln2(digits: u32) -> HpReal {
    ln2_bits(bits_for_digits(digits))
}

/// ln 2 = 18 atanh(1/26) - 2 atanh(1/4801) + 8 atanh(1/8749).
pub fn ln2_machin(digits: u32) -> HpReal {
    let bits = bits_for_digits(digits);
    let f = bits + SERIES_GUARD;
    let m = atanh_inv(26, f) * 18 - atanh_inv(4801, f) * 2 + atanh_inv(8749, f) * 8;
    from_fixed(m, f, bits)
}

/// Newton iteration from a double-precision start.
pub(crate) fn sqrt_int_bits(k: u64, bits: u32) -> HpReal {
    memo("sqrt", k, bits, || {
        let root = k.sqrt();
        if root * root == k {
            return HpReal::from_int(root as i64, bits);
        }
        let w = bits + SERIES_GUARD;
        let target = HpReal::from_bigint(BigInt::from(k), w);
        let mut x = HpReal::from_f64((k as f64).sqrt(), w);
        for _ in 0..64 {
            let next = (&x + &(&target / &x)).mul_pow2(-1);
            let converged = (&next - &x).magnitude_exponent() < next.magnitude_exponent() - w as i64;
            x = next;
            if converged {
                break;
            }
        }
        x.with_precision(bits)
    })
}

pub fn sqrt_int(k: u64, digits: u32) -> HpReal {
    sqrt_int_bits(k, bits_for_digits(digits))
}

/// Integer square root of `k * 4^f`.
pub fn sqrt_int_isqrt(k: u64, digits: u32) -> HpReal {
    let bits = bits_for_digits(digits);
    let f = bits + SERIES_GUARD;
    let m = (BigInt::from(k) << (2 * f) as usize).sqrt();
    from_fixed(m, f, bits)
}

/// `zeta(3) = 5/2 * sum_{k>=1} (-1)^(k+1) / (k^3 binom(2k, k))`.
pub(crate) fn zeta3_bits(bits: u32) -> HpReal {
    memo("zeta3", 0, bits, || {
        let f = bits + SERIES_GUARD;
        let one = BigInt::one() << f as usize;
        let mut central = BigInt::from(2);
        let mut sum = BigInt::zero();
        let mut k = 1u64;
        loop {
            let k3 = BigInt::from(k).pow(3);
            let term = &one / (&k3 * &central);
            if term.is_zero() {
                break;
            }
            if k % 2 == 1 {
                sum += term;
            } else {
                sum -= term;
            }
            k += 1;
            central = central * (2 * k) * (2 * k - 1) / (k * k);
        }
        from_fixed(sum * 5 / 2, f, bits)
    })
}

pub fn zeta3(digits: u32) -> HpReal {
    zeta3_bits(bits_for_digits(digits))
}

fn bernoulli_even(count: usize) -> Vec<Rational> {
    // B_0 .. B_{2 count}, returned at even indices only
    let top = 2 * count;
    let mut b: Vec<Rational> = vec![Rational::one()];
    let mut binom_row: Vec<BigInt> = vec![BigInt::one()];
    for m in 1..=top {
        // row m + 1 of Pascal's triangle
        let mut next = vec![BigInt::one(); binom_row.len() + 1];
        for j in 1..binom_row.len() {
            next[j] = &binom_row[j - 1] + &binom_row[j];
        }
        let mut row2 = vec![BigInt::one(); next.len() + 1];
        for j in 1..next.len() {
            row2[j] = &next[j - 1] + &next[j];
        }
        binom_row = next;
        let s: Rational = (0..m)
            .map(|j| Rational::from_integer(row2[j].clone()) * &b[j])
            .sum();
        b.push(-s / Rational::from_integer(BigInt::from(m as u64 + 1)));
    }
    b.into_iter().step_by(2).collect()
}

/// Direct sum `sum_{n<N} 1/n^3` with an Euler-Maclaurin tail
/// `1/(2N^2) + 1/(2N^3) + sum_k B_{2k} (2k+1)/2 N^(-2k-2)`.
pub fn zeta3_euler_maclaurin(digits: u32) -> HpReal {
    let bits = bits_for_digits(digits);
    let f = bits + SERIES_GUARD;
    let n_cut = 2 * digits as u64 + 10;
    let one = BigInt::one() << f as usize;
    let mut direct = BigInt::zero();
    for n in 1..n_cut {
        direct += &one / BigInt::from(n).pow(3);
    }
    let nq = Rational::from_integer(BigInt::from(n_cut));
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut tail;
    let eps = Rational::new(BigInt::one(), BigInt::one() << f as usize);
    let mut count = 8;
    'outer: loop {
        let b = bernoulli_even(count);
        tail = &half / (&nq * &nq) + &half / (&nq * &nq * &nq);
        for (k, b2k) in b.iter().enumerate().skip(1) {
            let term = b2k * Rational::from_integer(BigInt::from(2 * k as u64 + 1)) * &half
                / Rational::from_integer(BigInt::from(n_cut).pow(2 * k as u32 + 2));
            let small = term.abs() < eps;
            tail += term;
            if small {
                break 'outer;
            }
        }
        count *= 2;
    }
    let tail_fixed = (tail * Rational::from_integer(one)).round().to_integer();
    from_fixed(direct + tail_fixed, f, bits)
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub name: &'static str,
    pub digits: u32,
    pub difference: HpReal,
    pub agrees: bool,
}

/// Compares every shipped constant against its second formula.
pub fn cross_check(digits: u32) -> Vec<CrossCheck> {
    let pairs: Vec<(&'static str, HpReal, HpReal)> = vec![
        ("pi", pi(digits), pi_gauss(digits)),
        ("ln2", ln2(digits), ln2_machin(digits)),
        ("sqrt2", sqrt_int(2, digits), sqrt_int_isqrt(2, digits)),
        ("sqrt3", sqrt_int(3, digits), sqrt_int_isqrt(3, digits)),
        ("zeta3", zeta3(digits), zeta3_euler_maclaurin(digits)),
    ];
    let tol = pow10(-(digits as i64));
    pairs
        .into_iter()
        .map(|(name, a, b)| {
            let difference = &a - &b;
            let agrees = difference.to_rational().abs() < tol;
            CrossCheck {
                name,
                digits,
                difference,
                agrees,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_prefixes() {
        assert_eq!(pi(10).to_significant(10), "3.141592654");
        assert_eq!(zeta3(15).to_significant(15), "1.20205690315959");
        assert_eq!(zeta3(1).to_significant(1), "1");
        assert_eq!(zeta3(2).to_significant(2), "1.2");
        assert_eq!(ln2(12).to_significant(12), "0.693147180560");
    }

    #[test]
    fn formulas_agree_at_100_digits() {
        for c in cross_check(100) {
            assert!(c.agrees, "{} differs by {}", c.name, c.difference.to_scientific(3));
        }
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_int(4, 30), HpReal::from_int(2, 1));
        assert_eq!(sqrt_int(0, 30), HpReal::from_int(0, 1));
        let s = sqrt_int(2, 20);
        assert!((&s.square() - &HpReal::from_int(2, 100)).abs_below_pow10(-19));
    }

    #[test]
    fn refinement_is_monotone() {
        let lo = zeta3(40).to_fixed(40);
        let hi = zeta3(80).to_fixed(80);
        assert_eq!(&hi[..38], &lo[..38]);
    }

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli_even(3);
        let q = |p: i64, r: i64| Rational::new(p.into(), r.into());
        assert_eq!(b, vec![q(1, 1), q(1, 6), q(-1, 30), q(1, 42)]);
    }
}
