//! Facet coordinate frames and facet polynomials.

use serde::Serialize;

use super::{Facet, GeometryError, LatticePolytope};
use crate::laurent::{ExponentVector, LaurentPolynomial};
use crate::linalg;

/// Lattice coordinates adapted to a facet: `origin` on the facet, `m1, m2`
/// a basis of the lattice parallel to the facet and `m3` completing a basis
/// with `<normal, m3> = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetFrame {
    pub origin: ExponentVector,
    pub m1: ExponentVector,
    pub m2: ExponentVector,
    pub m3: ExponentVector,
}

impl FacetFrame {
    /// Validates a frame for `facet`.
    pub fn new(
        facet: &Facet,
        origin: ExponentVector,
        m1: ExponentVector,
        m2: ExponentVector,
        m3: ExponentVector,
    ) -> Result<Self, GeometryError> {
        let frame = FacetFrame { origin, m1, m2, m3 };
        frame.validate(facet)?;
        Ok(frame)
    }

    pub fn basis(&self) -> [ExponentVector; 3] {
        [self.m1.clone(), self.m2.clone(), self.m3.clone()]
    }

    pub fn determinant(&self) -> i64 {
        let rows: Vec<Vec<i64>> = self.basis().iter().map(|v| v.as_slice().to_vec()).collect();
        i64::try_from(linalg::det_i64(&rows)).unwrap_or(0)
    }

    fn validate(&self, facet: &Facet) -> Result<(), GeometryError> {
        let n = &facet.normal;
        if !facet.lattice_points.contains(&self.origin) {
            return Err(GeometryError::OriginNotOnFacet(self.origin.clone()));
        }
        if n.dot(&self.m1) != 0 || n.dot(&self.m2) != 0 {
            return Err(GeometryError::FrameMismatch(
                "m1 and m2 must be parallel to the facet".into(),
            ));
        }
        if n.dot(&self.m3) != 1 {
            return Err(GeometryError::FrameMismatch(
                "m3 must have height 1 over the facet".into(),
            ));
        }
        if self.determinant().abs() != 1 {
            return Err(GeometryError::FrameMismatch("basis is not unimodular".into()));
        }
        Ok(())
    }
}

/// Unimodular column operations taking the primitive row vector `n` to
/// `(1, 0, 0)`. Returns the accumulated 3x3 matrix (columns are the images).
fn reduce_to_unit(n: [i64; 3]) -> [[i64; 3]; 3] {
    let mut n = n;
    // columns stored as rows of `u` for convenience: u[c] is column c
    let mut u = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for k in 1..3 {
        if n[0] == 0 && n[k] == 0 {
            continue;
        }
        let (g, x, y) = linalg::ext_gcd(n[0], n[k]);
        let (a, b) = (n[0] / g, n[k] / g);
        let c0 = u[0];
        let ck = u[k];
        for i in 0..3 {
            u[0][i] = x * c0[i] + y * ck[i];
            u[k][i] = -b * c0[i] + a * ck[i];
        }
        n[0] = g;
        n[k] = 0;
    }
    if n[0] < 0 {
        u[0] = [-u[0][0], -u[0][1], -u[0][2]];
    }
    u
}

/// Canonical frame for `facet`.
///
/// When the two facet edges leaving the origin span the facet lattice, `m1`
/// and `m2` are their primitive directions, so the facet polynomial has
/// nonnegative exponents and a constant term. Otherwise `m1, m2` are the
/// Hermite normal form basis of the lattice orthogonal to the normal. `m3` is
/// the shortest height-one vector (ties broken lexicographically) and the
/// order of `m1, m2` is fixed by `det(m1, m2, m3) = 1`. The origin defaults
/// to the lexicographically smallest facet vertex.
pub fn facet_frame(
    polytope: &LatticePolytope,
    facet: &Facet,
    origin_choice: Option<&ExponentVector>,
) -> Result<FacetFrame, GeometryError> {
    let origin = match origin_choice {
        Some(o) => {
            if !facet.lattice_points.contains(o) {
                return Err(GeometryError::OriginNotOnFacet(o.clone()));
            }
            o.clone()
        }
        None => facet.vertices.iter().min().cloned().expect("facet has vertices"),
    };
    let n = facet.normal.as_slice();
    let u = reduce_to_unit([n[0], n[1], n[2]]);
    let hnf = linalg::hermite_normal_form(&[u[1].to_vec(), u[2].to_vec()]);
    let m3 = shortest_height_one(&u[0], &hnf);

    let (mut m1, mut m2) = (hnf[0].clone(), hnf[1].clone());
    if let Some((e1, e2)) = vertex_edge_directions(facet, &origin) {
        if det3(&e1, &e2, &m3).abs() == 1 {
            m1 = e1;
            m2 = e2;
        }
    }
    if det3(&m1, &m2, &m3) < 0 {
        std::mem::swap(&mut m1, &mut m2);
    }
    let frame = FacetFrame {
        origin,
        m1: ExponentVector::new(m1),
        m2: ExponentVector::new(m2),
        m3: ExponentVector::new(m3),
    };
    frame.validate(facet)?;
    // the cone spanned by +-m1, +-m2, m3 contains the polytope translated by
    // -origin: every vertex has nonnegative height over the facet
    for v in polytope.vertices() {
        let w = v - &frame.origin;
        assert!(facet.normal.dot(&w) >= 0, "vertex {v} below facet");
    }
    Ok(frame)
}

fn det3(a: &[i64], b: &[i64], c: &[i64]) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Primitive directions of the two facet edges at `origin`, if it is a
/// vertex.
fn vertex_edge_directions(facet: &Facet, origin: &ExponentVector) -> Option<(Vec<i64>, Vec<i64>)> {
    let m = facet.vertices.len();
    let i = facet.vertices.iter().position(|v| v == origin)?;
    let prev = &facet.vertices[(i + m - 1) % m];
    let next = &facet.vertices[(i + 1) % m];
    let dir = |w: &ExponentVector| {
        let d = w - origin;
        let g = linalg::gcd_slice(d.as_slice()).max(1);
        d.as_slice().iter().map(|x| x / g).collect::<Vec<i64>>()
    };
    Some((dir(prev), dir(next)))
}

/// Shortest vector in `base + span_Z(lattice)`, searching a window around
/// the real least-squares coefficients.
fn shortest_height_one(base: &[i64; 3], lattice: &[Vec<i64>]) -> Vec<i64> {
    let norm = |v: &[i64]| v.iter().map(|x| x * x).sum::<i64>();
    let dotf = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| (x * y) as f64).sum::<f64>();
    let (b1, b2) = (&lattice[0], &lattice[1]);
    // Gram system for the projection of -base onto span(b1, b2)
    let (g11, g12, g22) = (dotf(b1, b1), dotf(b1, b2), dotf(b2, b2));
    let (r1, r2) = (-dotf(base, b1), -dotf(base, b2));
    let det = g11 * g22 - g12 * g12;
    let a0 = ((r1 * g22 - r2 * g12) / det).round() as i64;
    let c0 = ((g11 * r2 - g12 * r1) / det).round() as i64;
    let mut best: Option<Vec<i64>> = None;
    for a in a0 - 3..=a0 + 3 {
        for c in c0 - 3..=c0 + 3 {
            let v: Vec<i64> = (0..3).map(|i| base[i] + a * b1[i] + c * b2[i]).collect();
            let better = match &best {
                None => true,
                Some(b) => (norm(&v), &v) < (norm(b), b),
            };
            if better {
                best = Some(v);
            }
        }
    }
    best.unwrap()
}

/// Terms of `p` on the facet, shifted by `-origin` and rewritten in the
/// frame's `(m1, m2)` coordinates, as a polynomial in two variables.
pub fn facet_polynomial(
    p: &LaurentPolynomial,
    facet: &Facet,
    frame: &FacetFrame,
) -> Result<LaurentPolynomial, GeometryError> {
    frame.validate(facet)?;
    let level = -facet.offset;
    let on_facet = p.filter_terms(|e| facet.normal.dot(e) == level);
    let rewritten = on_facet
        .monomial_substitute(&frame.basis(), &frame.origin)
        .map_err(|e| GeometryError::FrameMismatch(e.to_string()))?;
    Ok(rewritten
        .truncate_dimension(2)
        .expect("facet terms have zero height"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse;
    use crate::polytope::newton_polytope;
    use crate::Rational;

    fn ev(v: [i64; 3]) -> ExponentVector {
        ExponentVector::from(v)
    }

    fn tetra_facet() -> (LaurentPolynomial, LatticePolytope, Facet) {
        let p = parse("x + y + z + 1/(x*y*z)", 3).unwrap();
        let d = newton_polytope(&p).unwrap();
        let f = d
            .facets()
            .unwrap()
            .into_iter()
            .find(|f| f.normal == ev([-1, -1, 3]))
            .unwrap();
        (p, d, f)
    }

    fn coefficient_multiset(p: &LaurentPolynomial) -> Vec<Rational> {
        let mut v: Vec<Rational> = p.terms().map(|(_, c)| c.clone()).collect();
        v.sort();
        v
    }

    #[test]
    fn hand_frame_reproduces_example() {
        let (p, _, f) = tetra_facet();
        let frame = FacetFrame::new(
            &f,
            ev([-1, -1, -1]),
            ev([2, 1, 1]),
            ev([1, 2, 1]),
            ev([-1, 0, 0]),
        )
        .unwrap();
        let fp = facet_polynomial(&p, &f, &frame).unwrap();
        assert_eq!(fp, parse("1 + x + y", 2).unwrap());
    }

    #[test]
    fn canonical_frame_matches_example_at_vertex() {
        let (_, d, f) = tetra_facet();
        let frame = facet_frame(&d, &f, Some(&ev([-1, -1, -1]))).unwrap();
        assert_eq!(frame.m1, ev([2, 1, 1]));
        assert_eq!(frame.m2, ev([1, 2, 1]));
        assert_eq!(frame.m3, ev([-1, 0, 0]));
        assert_eq!(frame.determinant(), 1);
    }

    #[test]
    fn canonical_frame_invariants() {
        let (p, d, f) = tetra_facet();
        for origin in [None, Some(ev([-1, -1, -1])), Some(ev([1, 0, 0]))] {
            let frame = facet_frame(&d, &f, origin.as_ref()).unwrap();
            assert_eq!(frame.determinant().abs(), 1);
            assert_eq!(f.normal.dot(&frame.m3), 1);
            assert_eq!(f.normal.dot(&frame.m1), 0);
            let fp = facet_polynomial(&p, &f, &frame).unwrap();
            assert_eq!(coefficient_multiset(&fp), vec![Rational::from_integer(1.into()); 3]);
            assert!(fp.support().all(|e| e.as_slice().iter().all(|&c| c >= 0)));
            assert_eq!(fp.constant_term(), Rational::from_integer(1.into()));
        }
    }

    fn coords_in(frame: &FacetFrame, v: &ExponentVector) -> ExponentVector {
        let m = LaurentPolynomial::monomial(v.clone(), Rational::from_integer(1.into()));
        let out = m.monomial_substitute(&frame.basis(), &ExponentVector::zero(3)).unwrap();
        let e = out.support().next().unwrap().clone();
        e
    }

    #[test]
    fn frames_differ_by_unimodular_affine_map() {
        let (_, d, f) = tetra_facet();
        let a = facet_frame(&d, &f, Some(&ev([-1, -1, -1]))).unwrap();
        let b = facet_frame(&d, &f, Some(&ev([0, 1, 0]))).unwrap();
        // b's facet directions stay in the facet, b.m3 keeps height one and
        // the origin shift is a facet translation
        let c1 = coords_in(&a, &b.m1);
        let c2 = coords_in(&a, &b.m2);
        let c3 = coords_in(&a, &b.m3);
        let shift = coords_in(&a, &(&b.origin - &a.origin));
        assert_eq!((c1[2], c2[2], c3[2], shift[2]), (0, 0, 1, 0));
        // the 2x2 block on the facet is unimodular
        assert_eq!((c1[0] * c2[1] - c1[1] * c2[0]).abs(), 1);
    }

    #[test]
    fn origin_off_facet_rejected() {
        let (_, d, f) = tetra_facet();
        assert_eq!(
            facet_frame(&d, &f, Some(&ev([0, 0, 1]))),
            Err(GeometryError::OriginNotOnFacet(ev([0, 0, 1])))
        );
    }

    #[test]
    fn single_support_point_gives_constant() {
        let (_, d, f) = tetra_facet();
        let frame = facet_frame(&d, &f, Some(&ev([1, 0, 0]))).unwrap();
        let fp = facet_polynomial(&parse("7*x + z", 3).unwrap(), &f, &frame).unwrap();
        assert_eq!(fp, LaurentPolynomial::constant(2, Rational::from_integer(7.into())));
    }
}
