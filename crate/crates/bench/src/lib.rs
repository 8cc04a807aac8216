//! Shared inputs for the criterion benchmarks.

use toric_apery::catalog;
use toric_apery::laurent::parse;
use toric_apery::LaurentPolynomial;

/// The catalog models plus a denser polynomial with a larger support.
pub fn workloads() -> Vec<(String, LaurentPolynomial)> {
    let mut out: Vec<(String, LaurentPolynomial)> = catalog::all()
        .into_iter()
        .map(|e| (e.name.to_string(), e.phi))
        .collect();
    out.push((
        "cube".to_string(),
        parse("(x+2+1/x)*(y+2+1/y)*(z+2+1/z)", 3).expect("valid polynomial"),
    ));
    out
}
