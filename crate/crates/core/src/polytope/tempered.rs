//! Edge polynomials and the Minkowski temperedness criterion.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{newton_polytope, Edge, GeometryError};
use crate::laurent::LaurentPolynomial;
use crate::poly::UniPoly;
use crate::Rational;

/// Coefficients of `p` read along the lattice points of `edge`, as a
/// polynomial of degree equal to the lattice length.
pub fn edge_polynomial(p: &LaurentPolynomial, edge: &Edge) -> UniPoly {
    UniPoly::new(edge.lattice_points.iter().map(|e| p.coeff(e)).collect())
}

/// True iff `q = c * u^a * (u - 1)^b * (u + 1)^e`.
pub fn has_only_pm1_roots(q: &UniPoly) -> Result<bool, GeometryError> {
    if q.is_zero() {
        return Err(GeometryError::ZeroEdgePolynomial);
    }
    let mut rest = q.clone();
    for root in [Rational::zero(), Rational::one(), -Rational::one()] {
        let factor = UniPoly::linear_root(root);
        while rest.degree().unwrap_or(0) > 0 {
            match rest.exact_div(&factor) {
                Some(quot) => rest = quot,
                None => break,
            }
        }
    }
    Ok(rest.degree() == Some(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeFailure {
    pub edge: Edge,
    pub polynomial: UniPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TemperednessReport {
    /// Every edge polynomial has only `+-1` as roots.
    pub passed: bool,
    pub failures: Vec<EdgeFailure>,
    pub edges_checked: usize,
}

/// Checks the edge criterion on the Newton polytope of `p`. The polytope
/// must be reflexive; otherwise an error is returned rather than a verdict.
pub fn temperedness_check(p: &LaurentPolynomial) -> Result<TemperednessReport, GeometryError> {
    let polytope = newton_polytope(p)?;
    let edges = polytope.edges()?;
    if !polytope.is_reflexive() {
        return Err(GeometryError::NotReflexive);
    }
    let mut failures = Vec::new();
    for edge in &edges {
        let q = edge_polynomial(p, edge);
        if !has_only_pm1_roots(&q)? {
            failures.push(EdgeFailure {
                edge: edge.clone(),
                polynomial: q,
            });
        }
    }
    Ok(TemperednessReport {
        passed: failures.is_empty(),
        failures,
        edges_checked: edges.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{parse, ExponentVector};

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn root_classification() {
        assert_eq!(has_only_pm1_roots(&up(&[1, 1])), Ok(true));
        assert_eq!(has_only_pm1_roots(&up(&[-1, 0, 1])), Ok(true));
        assert_eq!(has_only_pm1_roots(&up(&[1, 1, 1])), Ok(false));
        assert_eq!(has_only_pm1_roots(&up(&[0, 0, 3])), Ok(true));
        assert_eq!(has_only_pm1_roots(&up(&[1, 0, 1])), Ok(false));
        assert_eq!(has_only_pm1_roots(&up(&[2, 1])), Ok(false));
        assert_eq!(has_only_pm1_roots(&up(&[])), Err(GeometryError::ZeroEdgePolynomial));
    }

    #[test]
    fn tetrahedron_edge_polynomial() {
        let p = parse("x + y + z + 1/(x*y*z)", 3).unwrap();
        let e = Edge::new(ExponentVector::from([1, 0, 0]), ExponentVector::from([0, 1, 0]));
        assert_eq!(edge_polynomial(&p, &e), up(&[1, 1]));
        let r = temperedness_check(&p).unwrap();
        assert!(r.passed);
        assert_eq!(r.edges_checked, 6);
    }

    #[test]
    fn edge_with_single_support_endpoint_is_monomial() {
        let p = parse("x", 3).unwrap();
        let e = Edge::new(ExponentVector::from([-1, 0, 0]), ExponentVector::from([1, 0, 0]));
        assert_eq!(edge_polynomial(&p, &e), up(&[0, 0, 1]));
    }

    #[test]
    fn perturbed_cube_fails_with_witness() {
        let good = parse("(x+2+1/x)*(y+2+1/y)*(z+2+1/z)", 3).unwrap();
        assert!(temperedness_check(&good).unwrap().passed);
        let bad = parse("(x+2+1/x)*(y+2+1/y)*(z+2+1/z) - x*y", 3).unwrap();
        let r = temperedness_check(&bad).unwrap();
        assert!(!r.passed);
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].polynomial, up(&[1, 1, 1]));
    }

    #[test]
    fn non_reflexive_is_an_error() {
        let p = parse("x^2 + y + z + 1/(x*y*z)", 3).unwrap();
        assert_eq!(temperedness_check(&p), Err(GeometryError::NotReflexive));
    }
}
