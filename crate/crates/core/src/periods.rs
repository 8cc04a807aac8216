//! Period sequences `a_n = [phi^n]_0`.
//!
//! The fast path keeps the running power `phi^k` but discards every term
//! `x^e` that can no longer reach the constant term before the horizon `H`,
//! i.e. when `-e` lies outside `(H - k) * Delta`. Membership is tested with
//! facet inequalities of the Newton polytope (or its bounding box when the
//! polytope is not full-dimensional in three variables).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::laurent::LaurentPolynomial;
use crate::pfops::Recurrence;
use crate::polytope::newton_polytope;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodSequence {
    #[serde(rename = "phi")]
    pub source: LaurentPolynomial,
    #[serde(rename = "a", serialize_with = "ser_rationals")]
    pub values: Vec<Rational>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

impl PeriodSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }
}

/// Linear inequalities `<normal, x> >= -offset` valid on the Newton polytope.
fn supporting_inequalities(p: &LaurentPolynomial) -> Vec<(Vec<i64>, i64)> {
    if p.dimension() == 3 {
        if let Ok(facets) = newton_polytope(p).and_then(|d| d.facets()) {
            return facets
                .into_iter()
                .map(|f| (f.normal.as_slice().to_vec(), f.offset))
                .collect();
        }
    }
    let d = p.dimension();
    let mut out = Vec::with_capacity(2 * d);
    for i in 0..d {
        let lo = p.support().map(|e| e[i]).min().unwrap_or(0);
        let hi = p.support().map(|e| e[i]).max().unwrap_or(0);
        let mut unit = vec![0; d];
        unit[i] = 1;
        out.push((unit.clone(), -lo));
        unit[i] = -1;
        out.push((unit, hi));
    }
    out
}

/// Incremental period computation with pruning relative to a horizon.
///
/// Extending within the horizon reuses the current power; extending past it
/// recomputes with a doubled horizon, since pruned terms would be needed.
#[derive(Clone, Debug)]
pub struct PeriodEngine {
    source: LaurentPolynomial,
    terms: Vec<(i128, Vec<i64>, BigInt)>,
    denominator: BigInt,
    inequalities: Vec<(Vec<i64>, i64)>,
    origin_outside: bool,
    horizon: usize,
    base: i128,
    power: HashMap<i128, BigInt>,
    values: Vec<Rational>,
}

impl PeriodEngine {
    pub fn new(p: &LaurentPolynomial, horizon: usize) -> Self {
        let denominator = p
            .terms()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let max_abs = p
            .support()
            .flat_map(|e| e.as_slice().iter().map(|c| c.abs()))
            .max()
            .unwrap_or(0) as i128;
        let base = 2 * (horizon as i128 + 1) * max_abs.max(1) + 3;
        assert!(
            base.checked_pow(p.dimension() as u32).is_some(),
            "exponent range too large for packed keys"
        );
        let inequalities = supporting_inequalities(p);
        let origin_outside = p.is_zero() || inequalities.iter().any(|(_, c)| *c < 0);
        let mut engine = PeriodEngine {
            source: p.clone(),
            terms: Vec::new(),
            denominator,
            inequalities,
            origin_outside,
            horizon,
            base,
            power: HashMap::new(),
            values: Vec::new(),
        };
        engine.terms = p
            .terms()
            .map(|(e, c)| {
                let scaled = (c * Rational::from_integer(engine.denominator.clone())).to_integer();
                (engine.pack(e.as_slice()), e.as_slice().to_vec(), scaled)
            })
            .collect();
        engine.power.insert(0, BigInt::one());
        engine.values.push(Rational::one());
        engine
    }

    fn pack(&self, e: &[i64]) -> i128 {
        e.iter()
            .rev()
            .fold(0i128, |acc, &c| acc * self.base + c as i128)
    }

    fn unpack(&self, mut key: i128, out: &mut [i64]) {
        let half = self.base / 2;
        for slot in out.iter_mut() {
            let mut r = key.rem_euclid(self.base);
            if r > half {
                r -= self.base;
            }
            *slot = r as i64;
            key = (key - r) / self.base;
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Number of terms currently held for the running power.
    pub fn working_set(&self) -> usize {
        self.power.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Computes `a_n` for all `n <= target`.
    pub fn extend_to(&mut self, target: usize) {
        if target > self.horizon {
            let mut fresh = PeriodEngine::new(&self.source, target.max(2 * self.horizon));
            fresh.extend_to(target);
            *self = fresh;
            return;
        }
        if self.origin_outside {
            while self.values.len() <= target {
                self.values.push(Rational::zero());
            }
            return;
        }
        let dim = self.source.dimension();
        let mut coords = vec![0i64; dim];
        let mut denominator_power = Rational::from_integer(self.denominator.pow(self.values.len() as u32 - 1));
        while self.values.len() <= target {
            let k = self.values.len();
            let budget = (self.horizon - k) as i64;
            let mut next: HashMap<i128, BigInt> = HashMap::with_capacity(self.power.len() * 2);
            for (key, c) in &self.power {
                for (tk, _, tc) in &self.terms {
                    let nk = key + tk;
                    let prod = c * tc;
                    match next.get_mut(&nk) {
                        Some(v) => *v += prod,
                        None => {
                            next.insert(nk, prod);
                        }
                    }
                }
            }
            next.retain(|key, v| {
                if v.is_zero() {
                    return false;
                }
                self.unpack(*key, &mut coords);
                self.inequalities.iter().all(|(u, c)| {
                    let s: i64 = u.iter().zip(&coords).map(|(a, b)| a * b).sum();
                    s <= budget * c
                })
            });
            self.power = next;
            denominator_power *= Rational::from_integer(self.denominator.clone());
            let ct = self.power.get(&0).cloned().unwrap_or_else(BigInt::zero);
            self.values.push(Rational::from_integer(ct) / &denominator_power);
        }
    }

    pub fn sequence(&self) -> PeriodSequence {
        PeriodSequence {
            source: self.source.clone(),
            values: self.values.clone(),
        }
    }
}

/// `a_0 .. a_N` via the pruned engine.
pub fn period_sequence(p: &LaurentPolynomial, n: usize) -> PeriodSequence {
    let mut engine = PeriodEngine::new(p, n);
    engine.extend_to(n);
    engine.sequence()
}

/// `a_0 .. a_N` by full expansion of every power. Reference implementation.
pub fn period_sequence_naive(p: &LaurentPolynomial, n: usize) -> PeriodSequence {
    let mut values = Vec::with_capacity(n + 1);
    let mut power = LaurentPolynomial::one(p.dimension());
    values.push(Rational::one());
    for _ in 1..=n {
        power = power.mul(p).expect("same dimension");
        values.push(power.constant_term());
    }
    PeriodSequence {
        source: p.clone(),
        values,
    }
}

/// Whether `sum_j q_j(n) a_{n-j} = 0` for every `n` in range with all
/// referenced indices available (`span <= n <= N`).
pub fn check_recurrence(seq: &PeriodSequence, rec: &Recurrence) -> bool {
    rec.residuals(&seq.values, rec.span())
        .iter()
        .all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::laurent::parse;

    fn ints(v: &[Rational]) -> Vec<i64> {
        v.iter().map(|q| i64::try_from(q.to_integer()).unwrap()).collect()
    }

    #[test]
    fn tetrahedron_periods() {
        let p = parse("x + y + z + 1/(x*y*z)", 3).unwrap();
        let s = period_sequence(&p, 8);
        assert_eq!(ints(&s.values), vec![1, 0, 0, 0, 24, 0, 0, 0, 2520]);
        assert_eq!(s, period_sequence_naive(&p, 8));
    }

    #[test]
    fn v12_periods() {
        let p = catalog::entry("V12").unwrap().phi;
        let s = period_sequence(&p, 4);
        assert_eq!(ints(&s.values), vec![1, 5, 73, 1445, 33001]);
    }

    #[test]
    fn v16_matches_naive() {
        let p = catalog::entry("V16").unwrap().phi;
        assert_eq!(period_sequence(&p, 3), period_sequence_naive(&p, 3));
    }

    #[test]
    fn trivial_cases() {
        let p = parse("x - 2*y", 3).unwrap();
        assert_eq!(period_sequence(&p, 0).values, vec![Rational::one()]);
        let one = parse("1", 3).unwrap();
        assert!(period_sequence_naive(&one, 5).values.iter().all(One::is_one));
        assert!(period_sequence(&one, 5).values.iter().all(One::is_one));
        // origin outside the Newton polytope
        let shifted = parse("x + x^2*y", 3).unwrap();
        assert_eq!(ints(&period_sequence(&shifted, 3).values), vec![1, 0, 0, 0]);
    }

    #[test]
    fn rational_coefficients() {
        let p = parse("1/2*x + 1/3/x + y", 3).unwrap();
        assert_eq!(period_sequence(&p, 6), period_sequence_naive(&p, 6));
    }

    #[test]
    fn low_dimensional_support_uses_box_pruning() {
        let p = parse("x + 1/x + 3", 3).unwrap();
        assert_eq!(period_sequence(&p, 7), period_sequence_naive(&p, 7));
        let q = parse("x1 + 1/x1 + x2 + 1/x2", 2).unwrap();
        assert_eq!(period_sequence(&q, 6), period_sequence_naive(&q, 6));
    }

    #[test]
    fn extension_reuses_state() {
        let p = catalog::entry("V12").unwrap().phi;
        let mut engine = PeriodEngine::new(&p, 10);
        engine.extend_to(4);
        engine.extend_to(10);
        assert_eq!(engine.horizon(), 10);
        assert_eq!(engine.values(), &period_sequence(&p, 10).values[..]);
        engine.extend_to(12);
        assert_eq!(engine.horizon(), 20);
        assert_eq!(engine.values(), &period_sequence(&p, 12).values[..]);
    }

    #[test]
    fn pruning_shrinks_working_set() {
        let p = catalog::entry("V12").unwrap().phi;
        let mut engine = PeriodEngine::new(&p, 12);
        engine.extend_to(12);
        // at the horizon only the constant term can survive
        assert!(engine.working_set() <= 1);
    }
}
