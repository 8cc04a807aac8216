//! Lattice geometry of Newton polytopes in dimension three.
//!
//! Facets carry primitive inner normals `n` and integer offsets `c` with
//! `<n, x> >= -c` on the polytope, so a reflexive polytope has every offset
//! equal to 1.

mod frame;
mod hull;
mod tempered;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::laurent::{ExponentVector, LaurentPolynomial};

pub use frame::{facet_frame, facet_polynomial, FacetFrame};
pub use tempered::{
    edge_polynomial, has_only_pm1_roots, temperedness_check, EdgeFailure, TemperednessReport,
};

use hull::P3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("the zero polynomial has no Newton polytope")]
    ZeroPolynomial,
    #[error("polytope is not full-dimensional (affine dimension {0})")]
    Degenerate(usize),
    #[error("polytope operations need ambient dimension at most 3, got {0}")]
    UnsupportedDimension(usize),
    #[error("origin {0} is not a lattice point of the facet")]
    OriginNotOnFacet(ExponentVector),
    #[error("frame does not belong to the facet: {0}")]
    FrameMismatch(String),
    #[error("Newton polytope is not reflexive")]
    NotReflexive,
    #[error("zero polynomial has no roots to classify")]
    ZeroEdgePolynomial,
}

/// Convex lattice polytope given by its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticePolytope {
    dimension: usize,
    vertices: Vec<ExponentVector>,
    #[serde(skip)]
    affine_dim: usize,
}

/// A codimension-one face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub normal: ExponentVector,
    pub offset: i64,
    /// Vertices in cyclic order around the facet.
    pub vertices: Vec<ExponentVector>,
    /// All lattice points of the facet, lexicographically sorted.
    pub lattice_points: Vec<ExponentVector>,
}

/// A one-dimensional face with its lattice points from one endpoint to the
/// other.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub endpoints: [ExponentVector; 2],
    pub direction: ExponentVector,
    pub lattice_points: Vec<ExponentVector>,
}

impl Edge {
    pub fn new(a: ExponentVector, b: ExponentVector) -> Self {
        let diff = &b - &a;
        let g = diff
            .as_slice()
            .iter()
            .fold(0i64, |g, &x| g.gcd(&x))
            .max(1);
        let direction = ExponentVector::new(diff.as_slice().iter().map(|x| x / g).collect());
        let lattice_points = (0..=g)
            .map(|i| &a + &direction.scaled(i))
            .collect();
        Edge {
            endpoints: [a, b],
            direction,
            lattice_points,
        }
    }

    pub fn lattice_length(&self) -> usize {
        self.lattice_points.len() - 1
    }
}

fn to_p3(e: &ExponentVector) -> P3 {
    let s = e.as_slice();
    [s[0], s.get(1).copied().unwrap_or(0), s.get(2).copied().unwrap_or(0)]
}

fn from_p3(p: &P3, dim: usize) -> ExponentVector {
    ExponentVector::new(p[..dim].to_vec())
}

/// Convex hull of the support of `p`.
pub fn newton_polytope(p: &LaurentPolynomial) -> Result<LatticePolytope, GeometryError> {
    if p.is_zero() {
        return Err(GeometryError::ZeroPolynomial);
    }
    let points: Vec<ExponentVector> = p.support().cloned().collect();
    LatticePolytope::from_points(p.dimension(), &points)
}

impl LatticePolytope {
    /// Convex hull of a nonempty set of lattice points.
    pub fn from_points(
        dimension: usize,
        points: &[ExponentVector],
    ) -> Result<Self, GeometryError> {
        if dimension > 3 {
            return Err(GeometryError::UnsupportedDimension(dimension));
        }
        if points.is_empty() {
            return Err(GeometryError::ZeroPolynomial);
        }
        let mut pts: Vec<P3> = points.iter().map(to_p3).collect();
        pts.sort();
        pts.dedup();
        let affine_dim = hull::affine_dimension(&pts);
        let verts: Vec<P3> = match affine_dim {
            0 => vec![pts[0]],
            // lexicographic order is monotone along a line
            1 => vec![pts[0], *pts.last().unwrap()],
            2 => {
                let a = pts[0];
                let b = pts[1];
                let c = pts[2..]
                    .iter()
                    .find(|c| hull::cross(&hull::sub(&b, &a), &hull::sub(c, &a)) != [0, 0, 0])
                    .expect("affine dimension 2");
                let n = hull::cross(&hull::sub(&b, &a), &hull::sub(c, &a));
                hull::polygon_hull(&pts, &n)
            }
            _ => {
                let mut v: Vec<P3> = hull::hull_facets(&pts)
                    .into_iter()
                    .flat_map(|f| f.cycle)
                    .collect();
                v.sort();
                v.dedup();
                v
            }
        };
        let mut vertices: Vec<ExponentVector> =
            verts.iter().map(|p| from_p3(p, dimension)).collect();
        vertices.sort();
        Ok(LatticePolytope {
            dimension,
            vertices,
            affine_dim,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertices(&self) -> &[ExponentVector] {
        &self.vertices
    }

    pub fn affine_dimension(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dimension
    }

    fn require_3d(&self) -> Result<Vec<P3>, GeometryError> {
        if self.dimension != 3 {
            return Err(GeometryError::UnsupportedDimension(self.dimension));
        }
        if self.affine_dim != 3 {
            return Err(GeometryError::Degenerate(self.affine_dim));
        }
        Ok(self.vertices.iter().map(to_p3).collect())
    }

    /// All facets, sorted by inner normal.
    pub fn facets(&self) -> Result<Vec<Facet>, GeometryError> {
        let pts = self.require_3d()?;
        let mut facets: Vec<Facet> = hull::hull_facets(&pts)
            .into_iter()
            .map(|f| {
                let lattice_points = polygon_lattice_points(&f);
                Facet {
                    normal: ExponentVector::new(f.normal.to_vec()),
                    offset: f.offset,
                    vertices: f.cycle.iter().map(|p| from_p3(p, 3)).collect(),
                    lattice_points,
                }
            })
            .collect();
        facets.sort_by(|a, b| a.normal.cmp(&b.normal));
        Ok(facets)
    }

    /// All edges, sorted by endpoints. Endpoints are stored in lexicographic
    /// order.
    pub fn edges(&self) -> Result<Vec<Edge>, GeometryError> {
        let facets = self.facets()?;
        Ok(edges_of(&facets))
    }

    /// Lattice points in the interior of the polytope.
    pub fn interior_lattice_points(&self) -> Result<Vec<ExponentVector>, GeometryError> {
        let facets = self.facets()?;
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        for x in lo[0]..=hi[0] {
            for y in lo[1]..=hi[1] {
                for z in lo[2]..=hi[2] {
                    let p = ExponentVector::new(vec![x, y, z]);
                    if facets.iter().all(|f| f.normal.dot(&p) > -f.offset) {
                        out.push(p);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Whether the point lies in the polytope (boundary included).
    pub fn contains(&self, p: &ExponentVector) -> Result<bool, GeometryError> {
        let facets = self.facets()?;
        Ok(facets.iter().all(|f| f.normal.dot(p) >= -f.offset))
    }

    fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let d = self.dimension;
        let lo = (0..d)
            .map(|i| self.vertices.iter().map(|v| v[i]).min().unwrap())
            .collect();
        let hi = (0..d)
            .map(|i| self.vertices.iter().map(|v| v[i]).max().unwrap())
            .collect();
        (lo, hi)
    }

    /// Reflexive: full-dimensional, every facet at lattice distance one from
    /// the origin, and the origin the only interior lattice point.
    pub fn is_reflexive(&self) -> bool {
        let Ok(facets) = self.facets() else {
            return false;
        };
        if facets.iter().any(|f| f.offset != 1) {
            return false;
        }
        matches!(self.interior_lattice_points(), Ok(v) if v.len() == 1 && v[0].is_zero())
    }
}

pub(crate) fn edges_of(facets: &[Facet]) -> Vec<Edge> {
    let mut pairs: Vec<(ExponentVector, ExponentVector)> = Vec::new();
    for f in facets {
        let m = f.vertices.len();
        for i in 0..m {
            let a = f.vertices[i].clone();
            let b = f.vertices[(i + 1) % m].clone();
            pairs.push(if a <= b { (a, b) } else { (b, a) });
        }
    }
    pairs.sort();
    pairs.dedup();
    pairs.into_iter().map(|(a, b)| Edge::new(a, b)).collect()
}

fn polygon_lattice_points(f: &hull::HullFacet) -> Vec<ExponentVector> {
    let drop = (0..3).max_by_key(|&i| f.normal[i].abs()).unwrap();
    let keep: Vec<usize> = (0..3).filter(|&i| i != drop).collect();
    let (i0, i1) = (keep[0], keep[1]);
    let lo0 = f.cycle.iter().map(|p| p[i0]).min().unwrap();
    let hi0 = f.cycle.iter().map(|p| p[i0]).max().unwrap();
    let lo1 = f.cycle.iter().map(|p| p[i1]).min().unwrap();
    let hi1 = f.cycle.iter().map(|p| p[i1]).max().unwrap();
    let m = f.cycle.len();
    let proj = |p: &P3| (p[i0] as i128, p[i1] as i128);
    // orientation of the projected cycle
    let area2: i128 = (0..m)
        .map(|k| {
            let (ax, ay) = proj(&f.cycle[k]);
            let (bx, by) = proj(&f.cycle[(k + 1) % m]);
            ax * by - ay * bx
        })
        .sum();
    let sign = area2.signum();
    let mut out = Vec::new();
    for a in lo0..=hi0 {
        for b in lo1..=hi1 {
            // solve <n, x> = -offset for the dropped coordinate
            let rest = -f.offset - f.normal[i0] * a - f.normal[i1] * b;
            if rest % f.normal[drop] != 0 {
                continue;
            }
            let mut p = [0i64; 3];
            p[i0] = a;
            p[i1] = b;
            p[drop] = rest / f.normal[drop];
            let inside = m < 3
                || (0..m).all(|k| {
                    let (ax, ay) = proj(&f.cycle[k]);
                    let (bx, by) = proj(&f.cycle[(k + 1) % m]);
                    let (px, py) = proj(&p);
                    ((bx - ax) * (py - ay) - (by - ay) * (px - ax)) * sign >= 0
                });
            if inside {
                out.push(from_p3(&p, 3));
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse;

    fn poly(s: &str) -> LaurentPolynomial {
        parse(s, 3).unwrap()
    }

    fn ev(v: [i64; 3]) -> ExponentVector {
        ExponentVector::from(v)
    }

    fn cube() -> LatticePolytope {
        let pts: Vec<_> = [-1, 1]
            .iter()
            .flat_map(|&x| {
                [-1, 1]
                    .iter()
                    .flat_map(move |&y| [-1, 1].iter().map(move |&z| ev([x, y, z])))
            })
            .collect();
        LatticePolytope::from_points(3, &pts).unwrap()
    }

    #[test]
    fn tetrahedron_vertices() {
        let d = newton_polytope(&poly("x + y + z + 1/(x*y*z)")).unwrap();
        assert_eq!(
            d.vertices(),
            &[ev([-1, -1, -1]), ev([0, 0, 1]), ev([0, 1, 0]), ev([1, 0, 0])]
        );
        assert_eq!(d.facets().unwrap().len(), 4);
        assert!(d.is_reflexive());
    }

    #[test]
    fn single_monomial_is_a_point() {
        let d = newton_polytope(&poly("x")).unwrap();
        assert_eq!(d.vertices(), &[ev([1, 0, 0])]);
        assert_eq!(d.affine_dimension(), 0);
        assert_eq!(d.facets(), Err(GeometryError::Degenerate(0)));
        assert!(!d.is_reflexive());
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(newton_polytope(&poly("0")), Err(GeometryError::ZeroPolynomial));
    }

    #[test]
    fn lower_dimensional_hulls() {
        let seg = newton_polytope(&poly("1 + x + x^2 + x^3")).unwrap();
        assert_eq!(seg.vertices(), &[ev([0, 0, 0]), ev([3, 0, 0])]);
        let square = newton_polytope(&poly("(1+x)^2*(1+y)^2")).unwrap();
        assert_eq!(square.vertices().len(), 4);
        assert_eq!(square.edges(), Err(GeometryError::Degenerate(2)));
    }

    #[test]
    fn cube_facets_and_edges() {
        let c = cube();
        let f = c.facets().unwrap();
        assert_eq!(f.len(), 6);
        for facet in &f {
            assert_eq!(facet.offset, 1);
            assert_eq!(facet.normal.as_slice().iter().map(|x| x.abs()).sum::<i64>(), 1);
            assert_eq!(facet.lattice_points.len(), 9);
        }
        let e = c.edges().unwrap();
        assert_eq!(e.len(), 12);
        assert!(e.iter().all(|e| e.lattice_points.len() == 3));
        assert!(c.is_reflexive());
    }

    #[test]
    fn tetrahedron_facet_normal() {
        let d = newton_polytope(&poly("x + y + z + 1/(x*y*z)")).unwrap();
        let f = d.facets().unwrap();
        let sigma = f
            .iter()
            .find(|f| {
                f.vertices.contains(&ev([1, 0, 0]))
                    && f.vertices.contains(&ev([0, 1, 0]))
                    && f.vertices.contains(&ev([-1, -1, -1]))
            })
            .unwrap();
        assert_eq!(sigma.normal, ev([-1, -1, 3]));
        assert!(sigma.normal.dot(&ev([0, 0, 1])) > -sigma.offset);
    }

    #[test]
    fn tetrahedron_edges() {
        let d = newton_polytope(&poly("x + y + z + 1/(x*y*z)")).unwrap();
        let e = d.edges().unwrap();
        assert_eq!(e.len(), 6);
        let e01 = e
            .iter()
            .find(|e| e.endpoints == [ev([0, 1, 0]), ev([1, 0, 0])])
            .unwrap();
        assert_eq!(e01.direction, ev([1, -1, 0]));
        assert_eq!(e01.lattice_points.len(), 2);
        let built = Edge::new(ev([1, 0, 0]), ev([0, 1, 0]));
        assert_eq!(built.direction, ev([-1, 1, 0]));
        assert_eq!(built.lattice_length(), 1);
    }

    #[test]
    fn dilated_simplex_not_reflexive() {
        let pts = [ev([2, 0, 0]), ev([0, 1, 0]), ev([0, 0, 1]), ev([-1, -1, -1])];
        let d = LatticePolytope::from_points(3, &pts).unwrap();
        assert!(d.facets().unwrap().iter().any(|f| f.offset != 1));
        assert!(!d.is_reflexive());
    }
}
