//! End-to-end evaluation of a Laurent polynomial: geometry, periods,
//! operator, singular points, involution and the Apéry limit.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::apery::{apery_limit, AperyError, AperyResult};
use crate::catalog;
use crate::hpreal::{recognize, v16_membrane_value_with, zeta3, Basis, HpError, HpReal};
use crate::laurent::{parse, ExponentVector, LaurentPolynomial, ParseError};
use crate::periods::{period_sequence_naive, PeriodEngine, PeriodSequence};
use crate::pfops::{
    involution, operator_from_series, singular_points, DifferentialOperator, InvolutionDatum,
    OperatorError, SingularSet,
};
use crate::polytope::{newton_polytope, temperedness_check, GeometryError, TemperednessReport};
use crate::Rational;

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub terms: usize,
    pub digits: u32,
    pub max_order: usize,
    pub max_degree: usize,
    pub discovery_terms: usize,
    pub verify_margin: usize,
    pub max_denominator: u64,
    pub guard_digits: u32,
    pub bases: Vec<Basis>,
    pub periods_only: bool,
    pub oracle: bool,
    pub require_recognition: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            terms: 200,
            digits: 50,
            max_order: 4,
            max_degree: 4,
            discovery_terms: 30,
            verify_margin: 8,
            max_denominator: 10_000,
            guard_digits: 8,
            bases: Basis::defaults(),
            periods_only: false,
            oracle: false,
            require_recognition: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("parse: {0}")]
    Parse(#[from] ParseError),
    #[error("geometry: {0}")]
    Geometry(#[from] GeometryError),
    #[error("discovery: {0}")]
    Discovery(#[from] OperatorError),
    #[error("discovery: operator fails to annihilate held-out period terms")]
    Unverified,
    #[error("periods: oracle mismatch at n = {0}")]
    OracleMismatch(usize),
    #[error("apery: {0}")]
    Convergence(#[from] AperyError),
    #[error("numerics: {0}")]
    Numeric(#[from] HpError),
    #[error("recognition: no rational multiple of the basis constants fits the limit")]
    RecognitionAbsent,
}

impl PipelineError {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Parse(_) => 2,
            PipelineError::Geometry(_) => 3,
            PipelineError::Discovery(_) | PipelineError::Unverified | PipelineError::OracleMismatch(_) => 4,
            PipelineError::Convergence(_) | PipelineError::Numeric(_) => 5,
            PipelineError::RecognitionAbsent => 6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolytopeSummary {
    pub vertices: Vec<ExponentVector>,
    pub facets: usize,
    pub edges: usize,
    pub interior_points: Vec<ExponentVector>,
    pub reflexive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub input: String,
    pub phi: LaurentPolynomial,
    pub polytope: Option<PolytopeSummary>,
    pub temperedness: Option<TemperednessReport>,
    pub periods: PeriodSequence,
    pub operator: Option<DifferentialOperator>,
    pub symbol: Option<String>,
    pub singular: Option<SingularSet>,
    pub involution: Option<InvolutionDatum>,
    pub apery: Option<AperyResult>,
    /// Wall-clock seconds per stage.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub timings: BTreeMap<&'static str, f64>,
}

/// A catalog name, or else polynomial text in `x, y, z`.
pub fn resolve_input(input: &str) -> Result<LaurentPolynomial, ParseError> {
    match catalog::entry(input) {
        Some(e) => Ok(e.phi),
        None => parse(input, 3),
    }
}

/// Newton polytope summary, `None` when the support is not full-dimensional.
pub fn polytope_summary(phi: &LaurentPolynomial) -> Result<Option<PolytopeSummary>, GeometryError> {
    let polytope = newton_polytope(phi)?;
    let facets = match polytope.facets() {
        Ok(f) => f,
        Err(GeometryError::Degenerate(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some(PolytopeSummary {
        vertices: polytope.vertices().to_vec(),
        facets: facets.len(),
        edges: polytope.edges()?.len(),
        interior_points: polytope.interior_lattice_points()?,
        reflexive: polytope.is_reflexive(),
    }))
}

fn timed<T>(timings: &mut BTreeMap<&'static str, f64>, stage: &'static str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.insert(stage, start.elapsed().as_secs_f64());
    out
}

/// Operator search on the given period terms, with the last
/// `verify_margin` terms held out of the fit.
pub fn discover_operator(
    series: &[Rational],
    config: &PipelineConfig,
) -> Result<DifferentialOperator, PipelineError> {
    let op = operator_from_series(series, config.max_order, config.max_degree, config.verify_margin)?;
    if !op.apply(series, series.len() - 1)?.iter().all(num_traits::Zero::is_zero) {
        return Err(PipelineError::Unverified);
    }
    Ok(op)
}

/// Periods `a_0..a_{n}` via the pruned engine, optionally checked against
/// full expansion for the first terms.
pub fn periods(
    phi: &LaurentPolynomial,
    n: usize,
    oracle: bool,
) -> Result<PeriodSequence, PipelineError> {
    let mut engine = PeriodEngine::new(phi, n);
    engine.extend_to(n);
    let seq = engine.sequence();
    if oracle {
        let naive = period_sequence_naive(phi, n.min(ORACLE_TERMS));
        if let Some(k) = (0..naive.len()).find(|&k| naive.values[k] != seq.values[k]) {
            return Err(PipelineError::OracleMismatch(k));
        }
    }
    Ok(seq)
}

/// Terms compared against full expansion when the oracle is requested.
pub const ORACLE_TERMS: usize = 12;

/// Runs every stage on `input`, stopping at the first failure.
pub fn run(input: &str, config: &PipelineConfig) -> Result<PipelineReport, PipelineError> {
    let mut timings = BTreeMap::new();
    let phi = timed(&mut timings, "parse", || resolve_input(input))?;
    let polytope = timed(&mut timings, "polytope", || polytope_summary(&phi))?;
    let temperedness = match &polytope {
        Some(p) if p.reflexive => Some(timed(&mut timings, "temperedness", || temperedness_check(&phi))?),
        _ => None,
    };
    // `terms` bounds the Apéry recurrence; periods are only needed for
    // discovery unless they are the requested output
    let count = if config.periods_only {
        config.terms
    } else {
        config.discovery_terms.max(1) - 1
    };
    let periods = timed(&mut timings, "periods", || periods(&phi, count, config.oracle))?;
    let mut report = PipelineReport {
        input: input.to_string(),
        phi: phi.clone(),
        polytope,
        temperedness,
        periods,
        operator: None,
        symbol: None,
        singular: None,
        involution: None,
        apery: None,
        timings,
    };
    if config.periods_only {
        return Ok(report);
    }

    let series = &report.periods.values;
    let op = timed(&mut report.timings, "operator", || discover_operator(series, config))?;
    let singular = timed(&mut report.timings, "singular", || singular_points(&op));
    report.symbol = Some(op.symbol().display_in("t"));
    report.involution = Some(involution(&op));
    report.operator = Some(op.clone());
    report.singular = Some(singular.clone());

    let mut result = timed(&mut report.timings, "apery", || {
        apery_limit(&op.to_recurrence(), &singular, config.digits, config.terms)
    })?;
    timed(&mut report.timings, "recognition", || {
        result.recognize(&config.bases, config.max_denominator, config.guard_digits)
    });
    let absent = result.recognized.is_none();
    report.apery = Some(result);
    if absent && config.require_recognition {
        return Err(PipelineError::RecognitionAbsent);
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct V16Check {
    pub digits: u32,
    pub value: HpReal,
    #[serde(serialize_with = "ser_sci")]
    pub residual: HpReal,
    pub recognized: Option<crate::hpreal::RecognizedConstant>,
    pub pass: bool,
}

fn ser_sci<S: serde::Serializer>(x: &HpReal, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_scientific(3))
}

/// Evaluates the membrane integral and compares it with `7 zeta(3)`.
/// `perturbation` shifts the integrands, for exercising the failure path.
pub fn check_v16(digits: u32, perturbation: Option<&Rational>) -> Result<V16Check, PipelineError> {
    let value = v16_membrane_value_with(digits, perturbation)?;
    let residual = (&value - &zeta3(digits + 10).mul_int(7)).abs();
    let guard = (digits / 3).min(8);
    let recognized = recognize(&value, &[Basis::Zeta3], 10_000, guard);
    let target = Rational::from_integer(7.into());
    let within = residual.abs_below_pow10(-(digits as i64) + 2);
    let pass = within
        && recognized
            .as_ref()
            .is_some_and(|r| r.coefficient == target && r.basis == Basis::Zeta3);
    Ok(V16Check {
        digits,
        value,
        residual,
        recognized,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periods_only_run() {
        let config = PipelineConfig {
            terms: 8,
            periods_only: true,
            oracle: true,
            ..Default::default()
        };
        let r = run("x+y+z+1/(x*y*z)", &config).unwrap();
        let a: Vec<String> = r.periods.values.iter().map(|v| v.to_string()).collect();
        assert_eq!(a, ["1", "0", "0", "0", "24", "0", "0", "0", "2520"]);
        assert!(r.operator.is_none());
    }

    #[test]
    fn v16_check() {
        let c = check_v16(20, None).unwrap();
        assert!(c.pass);
        assert!(c.residual.abs_below_pow10(-18));
        let c = check_v16(5, None).unwrap();
        assert!(c.pass);
        let bad = Rational::new(1.into(), 1000.into());
        assert!(!check_v16(20, Some(&bad)).unwrap().pass);
    }

    #[test]
    fn error_codes() {
        let e = run("x + * y", &PipelineConfig::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
