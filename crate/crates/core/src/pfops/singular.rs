//! Singular points of an operator and the involution `t -> M/t`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::DifferentialOperator;
use crate::hpreal::{bits_for_digits, sqrt_int_bits, HpReal};
use crate::poly::UniPoly;
use crate::Rational;

/// Digits used when a root has to be approximated.
pub const NUMERIC_DIGITS: u32 = 64;

fn ser_q<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_big<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// A finite nonzero singular point.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SingularPoint {
    Rational {
        #[serde(serialize_with = "ser_q")]
        value: Rational,
        multiplicity: u32,
    },
    /// `p + q sqrt(d)` with `d` squarefree, `d != 1`; negative `d` gives a
    /// complex point.
    Surd {
        #[serde(serialize_with = "ser_q")]
        p: Rational,
        #[serde(serialize_with = "ser_q")]
        q: Rational,
        #[serde(serialize_with = "ser_big")]
        d: BigInt,
        multiplicity: u32,
    },
    /// A real root of a factor of degree above two, refined by Newton's
    /// method.
    Numeric { value: HpReal, multiplicity: u32 },
}

impl SingularPoint {
    pub fn multiplicity(&self) -> u32 {
        match self {
            SingularPoint::Rational { multiplicity, .. }
            | SingularPoint::Surd { multiplicity, .. }
            | SingularPoint::Numeric { multiplicity, .. } => *multiplicity,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, SingularPoint::Numeric { .. })
    }

    pub fn is_real(&self) -> bool {
        match self {
            SingularPoint::Surd { d, .. } => d.is_positive(),
            _ => true,
        }
    }

    /// Real value, `None` for complex points.
    pub fn to_real(&self, bits: u32) -> Option<HpReal> {
        match self {
            SingularPoint::Rational { value, .. } => Some(HpReal::from_rational(value, bits)),
            SingularPoint::Surd { p, q, d, .. } if d.is_positive() => {
                let root = sqrt_big(d, bits);
                Some(&HpReal::from_rational(p, bits) + &(&HpReal::from_rational(q, bits) * &root))
            }
            SingularPoint::Numeric { value, .. } => Some(value.with_precision(bits)),
            _ => None,
        }
    }

    pub fn modulus(&self, bits: u32) -> HpReal {
        match self {
            SingularPoint::Surd { p, q, d, .. } if d.is_negative() => {
                // |p + q i sqrt(-d)|^2 = p^2 - q^2 d
                let sq = p * p - q * q * Rational::from_integer(d.clone());
                HpReal::from_rational(&sq, bits + 8).sqrt().with_precision(bits)
            }
            _ => self.to_real(bits).expect("real point").abs(),
        }
    }
}

fn sqrt_big(d: &BigInt, bits: u32) -> HpReal {
    match u64::try_from(d) {
        Ok(k) => sqrt_int_bits(k, bits),
        Err(_) => HpReal::from_bigint(d.clone(), bits).sqrt(),
    }
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularPoint::Rational { value, .. } => write!(f, "{value}"),
            SingularPoint::Surd { p, q, d, .. } => {
                let sign = if q.is_negative() { "-" } else { "+" };
                let qa = q.abs();
                let radical = if qa.is_one() {
                    format!("sqrt({d})")
                } else {
                    format!("{qa}*sqrt({d})")
                };
                if p.is_zero() {
                    write!(f, "{}{radical}", if q.is_negative() { "-" } else { "" })
                } else {
                    write!(f, "{p} {sign} {radical}")
                }
            }
            SingularPoint::Numeric { value, .. } => write!(f, "~{}", value.to_significant(20)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularSet {
    pub symbol: UniPoly,
    /// Roots of the symbol other than zero, by increasing modulus.
    pub finite_points: Vec<SingularPoint>,
    pub includes_zero: bool,
    pub includes_infinity: bool,
    /// Multiplicity of zero as a root of the symbol itself.
    pub zero_root_multiplicity: u32,
    /// Non-real roots of factors of degree above two; not listed.
    pub unlisted_complex_roots: usize,
}

impl SingularSet {
    pub fn all_exact(&self) -> bool {
        self.unlisted_complex_roots == 0 && self.finite_points.iter().all(SingularPoint::is_exact)
    }

    /// Exact product of the listed points, counted with multiplicity, when
    /// every point is exact and surds come in conjugate pairs.
    pub fn exact_product(&self) -> Option<Rational> {
        if !self.all_exact() {
            return None;
        }
        let mut product = Rational::one();
        let mut pending: Vec<(Rational, Rational, BigInt)> = Vec::new();
        for point in &self.finite_points {
            match point {
                SingularPoint::Rational { value, multiplicity } => {
                    for _ in 0..*multiplicity {
                        product *= value;
                    }
                }
                SingularPoint::Surd {
                    p, q, d, multiplicity,
                } => {
                    let key = (p.clone(), -q.clone(), d.clone());
                    if let Some(pos) = pending.iter().position(|k| *k == key) {
                        pending.remove(pos);
                        let norm = p * p - q * q * Rational::from_integer(d.clone());
                        for _ in 0..*multiplicity {
                            product *= &norm;
                        }
                    } else {
                        pending.push((p.clone(), q.clone(), d.clone()));
                    }
                }
                SingularPoint::Numeric { .. } => return None,
            }
        }
        pending.is_empty().then_some(product)
    }
}

/// `t -> M/t` exchanging the two roots of a quadratic symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionDatum {
    #[serde(rename = "M", serialize_with = "ser_q")]
    pub m: Rational,
    pub exists: bool,
}

fn poly_gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y);
        x = y;
        y = r;
    }
    if x.is_zero() {
        x
    } else {
        x.monic()
    }
}

fn derivative(p: &UniPoly) -> UniPoly {
    UniPoly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
            .collect(),
    )
}

/// Yun's squarefree decomposition of a monic polynomial: pairs of a
/// squarefree monic factor and its multiplicity.
fn squarefree_decomposition(p: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = poly_gcd(p, &derivative(p));
    let mut w = p.exact_div(&c).expect("gcd divides").monic();
    let mut i = 1;
    while c.degree().unwrap_or(0) > 0 {
        let y = poly_gcd(&w, &c);
        let z = w.exact_div(&y).expect("gcd divides");
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w).expect("gcd divides");
    }
    if w.degree().unwrap_or(0) > 0 {
        out.push((w.monic(), i));
    }
    out
}

/// Splits `|n|` as `s^2 * f` with `f` squarefree, by trial division.
fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.abs();
    let mut s = BigInt::one();
    let mut f = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &p;
        }
        if e % 2 == 1 {
            f *= &p;
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
        if p > BigInt::from(1_000_000u32) {
            // leftover factor: a perfect square, or treated as squarefree
            let r = rest.sqrt();
            if &r * &r == rest {
                s *= r;
            } else {
                f *= &rest;
            }
            return (s, f);
        }
    }
    f *= rest;
    (s, f)
}

fn quadratic_roots(p: &UniPoly, multiplicity: u32) -> Vec<SingularPoint> {
    // t^2 + b t + c
    let b = p.coeff(1);
    let c = p.coeff(0);
    let two = Rational::from_integer(BigInt::from(2));
    let half_b = -&b / &two;
    let disc = &b * &b - Rational::from_integer(BigInt::from(4)) * &c;
    let radicand = disc.numer() * disc.denom();
    let (s, f) = square_part(&radicand);
    let f = if radicand.is_negative() { -f } else { f };
    // sqrt(disc) = s sqrt(f) / denom
    let q = Rational::new(s, disc.denom() * 2);
    if f.is_one() {
        return vec![
            SingularPoint::Rational {
                value: &half_b - &q,
                multiplicity,
            },
            SingularPoint::Rational {
                value: &half_b + &q,
                multiplicity,
            },
        ];
    }
    vec![
        SingularPoint::Surd {
            p: half_b.clone(),
            q: -q.clone(),
            d: f.clone(),
            multiplicity,
        },
        SingularPoint::Surd {
            p: half_b,
            q,
            d: f,
            multiplicity,
        },
    ]
}

fn sign_at(p: &UniPoly, x: &Rational) -> i32 {
    let v = p.eval(x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.clone(), derivative(p)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

fn sign_changes(chain: &[UniPoly], x: &Rational) -> usize {
    let signs: Vec<i32> = chain.iter().map(|p| sign_at(p, x)).filter(|s| *s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Isolating intervals `(lo, hi]` of the real roots of a squarefree
/// polynomial, each holding exactly one root.
fn isolate(p: &UniPoly, chain: &[UniPoly]) -> Vec<(Rational, Rational)> {
    let lead = p.leading().expect("nonzero").abs();
    let bound = Rational::one()
        + p.coeffs()
            .iter()
            .map(|c| c.abs() / &lead)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    let mut stack = vec![(-bound.clone(), bound)];
    let mut out = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_changes(chain, &lo) - sign_changes(chain, &hi);
        match count {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort();
    out
}

fn numeric_roots(p: &UniPoly, multiplicity: u32) -> (Vec<SingularPoint>, usize) {
    let chain = sturm_chain(p);
    let intervals = isolate(p, &chain);
    let bits = bits_for_digits(NUMERIC_DIGITS);
    let dp = derivative(p);
    let lead = Rational::from_integer(p.primitive_integer().last().expect("nonzero").abs());
    let two = Rational::from_integer(BigInt::from(2));
    let eps = Rational::new(BigInt::one(), BigInt::one() << 64);
    let mut points = Vec::new();
    for (mut lo, mut hi) in intervals {
        if sign_at(p, &hi) == 0 {
            points.push(SingularPoint::Rational {
                value: hi,
                multiplicity,
            });
            continue;
        }
        let s_hi = sign_at(p, &hi);
        while &hi - &lo > eps {
            let mid = (&lo + &hi) / &two;
            let s = sign_at(p, &mid);
            if s == 0 {
                lo = mid.clone();
                hi = mid;
                break;
            }
            if s == s_hi {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if lo == hi {
            points.push(SingularPoint::Rational {
                value: lo,
                multiplicity,
            });
            continue;
        }
        let mut x = HpReal::from_rational(&((&lo + &hi) / &two), bits);
        for _ in 0..12 {
            let fx = eval_hp(p, &x);
            let dfx = eval_hp(&dp, &x);
            if dfx.is_zero() {
                break;
            }
            x = &x - &(&fx / &dfx);
        }
        // a rational root has denominator dividing the leading coefficient
        // of the primitive integer form
        let candidate = (x.to_rational() * &lead).round() / &lead;
        if p.eval(&candidate).is_zero() {
            points.push(SingularPoint::Rational {
                value: candidate,
                multiplicity,
            });
            continue;
        }
        points.push(SingularPoint::Numeric {
            value: x,
            multiplicity,
        });
    }
    let complex = p.degree().unwrap_or(0) - points.len();
    (points, complex)
}

fn eval_hp(p: &UniPoly, x: &HpReal) -> HpReal {
    let bits = x.precision_bits();
    p.coeffs()
        .iter()
        .rev()
        .fold(HpReal::zero(bits), |acc, c| &(&acc * x) + &HpReal::from_rational(c, bits))
}

/// Singular points from the symbol: exact for factors of degree at most two,
/// numeric (real roots only) otherwise. Zero and infinity are always
/// singular for these operators.
pub fn singular_points(op: &DifferentialOperator) -> SingularSet {
    let symbol = op.symbol();
    let zero_mult = symbol.coeffs().iter().take_while(|c| c.is_zero()).count();
    let rest = UniPoly::new(symbol.coeffs()[zero_mult.min(symbol.coeffs().len())..].to_vec());
    let mut points = Vec::new();
    let mut complex = 0;
    for (factor, mult) in squarefree_decomposition(&rest) {
        match factor.degree() {
            Some(1) => points.push(SingularPoint::Rational {
                value: -factor.coeff(0),
                multiplicity: mult,
            }),
            Some(2) => points.extend(quadratic_roots(&factor, mult)),
            _ => {
                let (found, c) = numeric_roots(&factor, mult);
                points.extend(found);
                complex += c * mult as usize;
            }
        }
    }
    let bits = bits_for_digits(NUMERIC_DIGITS);
    points.sort_by(|a, b| {
        a.modulus(bits)
            .cmp(&b.modulus(bits))
            .then_with(|| a.to_real(bits).cmp(&b.to_real(bits)))
    });
    SingularSet {
        symbol,
        finite_points: points,
        includes_zero: true,
        includes_infinity: true,
        zero_root_multiplicity: zero_mult as u32,
        unlisted_complex_roots: complex,
    }
}

/// For a quadratic symbol `t^2 - S t + M` with `M != 0`, the involution
/// `t -> M/t` swaps its roots. The swap is confirmed exactly from the
/// product of the computed roots.
pub fn involution(op: &DifferentialOperator) -> InvolutionDatum {
    let symbol = op.symbol();
    if symbol.degree() != Some(2) {
        return InvolutionDatum {
            m: Rational::zero(),
            exists: false,
        };
    }
    let m = symbol.coeff(0);
    let product = singular_points(op).exact_product();
    let exists = !m.is_zero() && product.as_ref() == Some(&m);
    InvolutionDatum { m, exists }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::periods::period_sequence;
    use crate::pfops::operator_from_series;

    fn q(p: i64, r: i64) -> Rational {
        Rational::new(p.into(), r.into())
    }

    fn op_with_symbol(coeffs: &[i64]) -> DifferentialOperator {
        // symbol coefficients, highest first, become the D-column by t-power
        DifferentialOperator::new(coeffs.iter().map(|c| vec![q(1, 1), q(*c, 1)]).collect())
    }

    fn discovered(name: &str) -> DifferentialOperator {
        let a = period_sequence(&catalog::entry(name).unwrap().phi, 29).values;
        operator_from_series(&a, 4, 4, 8).unwrap()
    }

    fn surd(p: i64, qq: i64, d: i64) -> SingularPoint {
        SingularPoint::Surd {
            p: q(p, 1),
            q: q(qq, 1),
            d: d.into(),
            multiplicity: 1,
        }
    }

    #[test]
    fn catalog_points() {
        let v12 = singular_points(&discovered("V12"));
        assert_eq!(v12.finite_points, vec![surd(17, -12, 2), surd(17, 12, 2)]);
        assert_eq!(v12.finite_points[1].to_string(), "17 + 12*sqrt(2)");
        let r1 = singular_points(&discovered("R1"));
        assert_eq!(
            r1.finite_points,
            vec![
                SingularPoint::Rational { value: q(4, 1), multiplicity: 1 },
                SingularPoint::Rational { value: q(16, 1), multiplicity: 1 },
            ]
        );
        assert!(r1.includes_zero && r1.includes_infinity);
    }

    #[test]
    fn involution_constants() {
        for (name, m) in [("V12", 1), ("V16", 16), ("V18", -27), ("R1", 64)] {
            let op = discovered(name);
            let inv = involution(&op);
            assert_eq!(inv, InvolutionDatum { m: q(m, 1), exists: true }, "{name}");
            assert_eq!(singular_points(&op).exact_product(), Some(q(m, 1)));
        }
    }

    #[test]
    fn surd_normalization() {
        let s = singular_points(&op_with_symbol(&[1, -24, 16]));
        assert_eq!(s.finite_points, vec![surd(12, -8, 2), surd(12, 8, 2)]);
        let s = singular_points(&op_with_symbol(&[1, -18, -27]));
        assert_eq!(s.finite_points, vec![surd(9, -6, 3), surd(9, 6, 3)]);
        // rational radicand with a square denominator
        let s = singular_points(&op_with_symbol(&[4, 0, -2]));
        assert_eq!(
            s.finite_points[0],
            SingularPoint::Surd { p: q(0, 1), q: q(-1, 2), d: 2.into(), multiplicity: 1 }
        );
    }

    #[test]
    fn degenerate_and_complex() {
        let s = singular_points(&op_with_symbol(&[1, 0, 0]));
        assert!(s.finite_points.is_empty());
        assert_eq!(s.zero_root_multiplicity, 2);
        assert!(!involution(&op_with_symbol(&[1, 0, 0])).exists);

        let s = singular_points(&op_with_symbol(&[1, 0, 4]));
        assert_eq!(s.finite_points[0], surd(0, -2, -1));
        assert_eq!(s.exact_product(), Some(q(4, 1)));
        assert_eq!(s.finite_points[0].modulus(100), HpReal::from_int(2, 100));

        let s = singular_points(&op_with_symbol(&[1, -2, 1]));
        assert_eq!(s.finite_points[0], SingularPoint::Rational { value: q(1, 1), multiplicity: 2 });
        assert!(!involution(&DifferentialOperator::theta()).exists);
    }

    #[test]
    fn numeric_fallback() {
        // t^3 - 2 : one real root, two complex
        let s = singular_points(&op_with_symbol(&[1, 0, 0, -2]));
        assert_eq!(s.finite_points.len(), 1);
        assert_eq!(s.unlisted_complex_roots, 2);
        let root = s.finite_points[0].to_real(256).unwrap();
        assert!((&root.pow_u(3) - &HpReal::from_int(2, 256)).abs_below_pow10(-60));
        assert!(!s.all_exact());
        // (t - 1)(t - 2)(t - 3) recovers exact roots
        let s = singular_points(&op_with_symbol(&[1, -6, 11, -6]));
        let values: Vec<String> = s.finite_points.iter().map(|p| p.to_string()).collect();
        assert_eq!(values, vec!["1", "2", "3"]);
    }

    #[test]
    fn squarefree_parts() {
        let p = &UniPoly::from_ints(&[-1, 1]).pow(3) * &UniPoly::from_ints(&[2, 0, 1]);
        let d = squarefree_decomposition(&p);
        assert_eq!(d, vec![(UniPoly::from_ints(&[2, 0, 1]), 1), (UniPoly::from_ints(&[-1, 1]), 3)]);
        assert_eq!(square_part(&BigInt::from(72)), (BigInt::from(6), BigInt::from(2)));
    }
}
