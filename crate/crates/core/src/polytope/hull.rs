//! Exact gift-wrapping convex hull for integer points in three dimensions.

use num_integer::Integer;

pub(crate) type P3 = [i64; 3];

#[inline]
pub(crate) fn sub(a: &P3, b: &P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub(crate) fn cross(a: &P3, b: &P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub(crate) fn dot(a: &P3, b: &P3) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn primitive(v: P3) -> P3 {
    let g = v[0].gcd(&v[1]).gcd(&v[2]);
    if g == 0 {
        v
    } else {
        [v[0] / g, v[1] / g, v[2] / g]
    }
}

/// A supporting plane `<normal, x> = -offset` with the polytope on the side
/// `<normal, x> >= -offset`, and the hull polygon of the points it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct HullFacet {
    pub normal: P3,
    pub offset: i64,
    pub cycle: Vec<P3>,
}

/// Affine dimension of a point set.
pub(crate) fn affine_dimension(points: &[P3]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let rows: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| sub(p, first).to_vec())
        .collect();
    if rows.is_empty() {
        return 0;
    }
    crate::linalg::rank_i64(&rows)
}

/// Convex hull vertices of coplanar points, in cyclic order starting from the
/// lexicographically smallest. Collinear boundary points are dropped. The
/// plane normal selects the 2D projection.
pub(crate) fn polygon_hull(points: &[P3], normal: &P3) -> Vec<P3> {
    // drop the coordinate where the normal is largest; the projection is
    // injective on the plane
    let drop = (0..3).max_by_key(|&i| normal[i].abs()).unwrap();
    let keep: Vec<usize> = (0..3).filter(|&i| i != drop).collect();
    let mut pts: Vec<P3> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let proj = |p: &P3| (p[keep[0]], p[keep[1]]);
    pts.sort_by_key(|p| proj(p));
    let turn = |o: &P3, a: &P3, b: &P3| {
        let (ox, oy) = proj(o);
        let (ax, ay) = proj(a);
        let (bx, by) = proj(b);
        (ax - ox) as i128 * (by - oy) as i128 - (ay - oy) as i128 * (bx - ox) as i128
    };
    let mut lower: Vec<P3> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<P3> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let start = (0..lower.len()).min_by_key(|&i| lower[i]).unwrap();
    lower.rotate_left(start);
    lower
}

/// Returns the inner normal plane through `a, b, c` oriented so that `inside`
/// is on the nonnegative side.
fn oriented_plane(a: &P3, b: &P3, c: &P3, inside: &P3) -> P3 {
    let n = cross(&sub(b, a), &sub(c, a));
    if dot(&n, &sub(inside, a)) < 0 {
        [-n[0], -n[1], -n[2]]
    } else {
        n
    }
}

fn facet_on_plane(points: &[P3], normal: P3, anchor: &P3) -> HullFacet {
    let normal = primitive(normal);
    let level = dot(&normal, anchor);
    let on: Vec<P3> = points
        .iter()
        .filter(|p| dot(&normal, p) == level)
        .copied()
        .collect();
    HullFacet {
        normal,
        offset: -level,
        cycle: polygon_hull(&on, &normal),
    }
}

/// All facets of the hull of a full-dimensional point set, in discovery
/// order from a deterministic start.
pub(crate) fn hull_facets(points: &[P3]) -> Vec<HullFacet> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    debug_assert_eq!(affine_dimension(&pts), 3);
    let a = pts[0];

    // an initial facet through the lexicographically smallest point, which is
    // always a vertex
    let mut initial = None;
    'search: for j in 1..pts.len() {
        for k in j + 1..pts.len() {
            let n = cross(&sub(&pts[j], &a), &sub(&pts[k], &a));
            if n == [0, 0, 0] {
                continue;
            }
            let (mut pos, mut neg) = (false, false);
            for p in &pts {
                let s = dot(&n, &sub(p, &a));
                pos |= s > 0;
                neg |= s < 0;
                if pos && neg {
                    break;
                }
            }
            if !(pos && neg) {
                let n = if neg { [-n[0], -n[1], -n[2]] } else { n };
                initial = Some(facet_on_plane(&pts, n, &a));
                break 'search;
            }
        }
    }
    let initial = initial.expect("full-dimensional point set has a facet");

    let mut facets = vec![initial];
    let mut idx = 0;
    while idx < facets.len() {
        let current = facets[idx].clone();
        idx += 1;
        let m = current.cycle.len();
        for i in 0..m {
            let u = current.cycle[i];
            let v = current.cycle[(i + 1) % m];
            // a facet point off the line uv
            let q = current.cycle[(i + 2) % m];
            let level = -current.offset;
            let mut c = *pts
                .iter()
                .find(|p| dot(&current.normal, p) != level)
                .expect("full-dimensional");
            let mut n = oriented_plane(&u, &v, &c, &q);
            for p in &pts {
                if dot(&n, &sub(p, &u)) < 0 {
                    c = *p;
                    n = oriented_plane(&u, &v, &c, &q);
                }
            }
            let f = facet_on_plane(&pts, n, &u);
            if !facets.iter().any(|g| g.normal == f.normal) {
                facets.push(f);
            }
        }
    }
    facets
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_has_six_square_facets() {
        let mut pts = Vec::new();
        for x in -1..=1 {
            for y in -1..=1 {
                for z in -1..=1 {
                    pts.push([x, y, z]);
                }
            }
        }
        let f = hull_facets(&pts);
        assert_eq!(f.len(), 6);
        assert!(f.iter().all(|f| f.cycle.len() == 4 && f.offset == 1));
    }

    #[test]
    fn polygon_drops_collinear() {
        let pts = [[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 1, 0], [1, 1, 0]];
        let h = polygon_hull(&pts, &[0, 0, 1]);
        assert_eq!(h.len(), 4);
        assert_eq!(h[0], [0, 0, 0]);
    }
}
