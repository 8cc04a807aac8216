//! The four rank-three Landau-Ginzburg models with an involution.

use serde::{Serialize, Serializer};

use crate::hpreal::Basis;
use crate::laurent::{parse, LaurentPolynomial};
use crate::poly::UniPoly;
use crate::Rational;

pub const NAMES: [&str; 4] = ["V12", "V16", "V18", "R1"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub phi: LaurentPolynomial,
    #[serde(serialize_with = "ser_symbol")]
    pub expected_symbol: UniPoly,
    #[serde(rename = "expected_M", serialize_with = "ser_q")]
    pub expected_m: Rational,
    pub expected_basis: Basis,
}

fn ser_symbol<S: Serializer>(p: &UniPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.display_in("t"))
}

fn ser_q<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn source(name: &str) -> Option<(&'static str, &'static str, [i64; 3], Basis)> {
    Some(match name.to_ascii_uppercase().as_str() {
        "V12" => ("V12", "(1+x+z)*(1+x+y+z)*(1+z)*(y+z)/(x*y*z)", [1, -34, 1], Basis::Zeta3),
        "V16" => ("V16", "(1+x+y+z)*(1+z)*(1+y)*(1+x)/(x*y*z)", [16, -24, 1], Basis::Zeta3),
        "V18" => (
            "V18",
            "(x+y+z)*(x+y+z+x*y+x*z+y*z+x*y*z)/(x*y*z)",
            [-27, -18, 1],
            Basis::Pi3OverSqrt3,
        ),
        "R1" => ("R1", "(1+x+y+z)*(x*y*z+x*y+x*z+y*z)/(x*y*z)", [64, -20, 1], Basis::Zeta3),
        _ => return None,
    })
}

/// Looks up a catalog model by name (case-insensitive).
pub fn entry(name: &str) -> Option<CatalogEntry> {
    let (name, text, symbol, basis) = source(name)?;
    Some(CatalogEntry {
        name,
        phi: parse(text, 3).expect("catalog polynomial parses"),
        expected_symbol: UniPoly::from_ints(&symbol),
        expected_m: Rational::from_integer(symbol[0].into()),
        expected_basis: basis,
    })
}

pub fn all() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| entry(n).expect("known name")).collect()
}
