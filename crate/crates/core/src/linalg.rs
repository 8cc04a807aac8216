//! Exact linear algebra over the integers and rationals.
//!
//! Nullspaces are computed by fraction-free (Bareiss) elimination on an
//! integer matrix obtained by clearing row denominators; only the final
//! back-substitution touches rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Row echelon form produced by fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub columns: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Clears the denominators of each row independently.
pub fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            row.iter()
                .map(|c| (c.numer() * &lcm) / c.denom())
                .collect()
        })
        .collect()
}

/// Bareiss elimination. Every intermediate entry is a minor of the input,
/// so the division by the previous pivot is exact.
pub fn bareiss(mut m: Vec<Vec<BigInt>>, columns: usize) -> Echelon {
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..columns {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let factor = row[c].clone();
            for k in c + 1..columns {
                let v = &pivot * &row[k] - &factor * &pivot_row[k];
                row[k] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Echelon {
        rows: m,
        pivots,
        columns,
    }
}

/// A basis of the right nullspace `{x : A x = 0}`, one vector per free
/// column, each with a 1 in its free position.
pub fn nullspace(rows: &[Vec<Rational>], columns: usize) -> Vec<Vec<Rational>> {
    let ech = bareiss(integer_rows(rows), columns);
    nullspace_from_echelon(&ech)
}

pub fn nullspace_from_echelon(ech: &Echelon) -> Vec<Vec<Rational>> {
    let free: Vec<usize> = (0..ech.columns)
        .filter(|c| !ech.pivots.contains(c))
        .collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); ech.columns];
            x[f] = Rational::one();
            for (i, &p) in ech.pivots.iter().enumerate().rev() {
                let row = &ech.rows[i];
                let mut acc = Rational::zero();
                for k in p + 1..ech.columns {
                    if !row[k].is_zero() && !x[k].is_zero() {
                        acc += Rational::from_integer(row[k].clone()) * &x[k];
                    }
                }
                x[p] = -acc / Rational::from_integer(row[p].clone());
            }
            x
        })
        .collect()
}

pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    let columns = rows.first().map_or(0, Vec::len);
    let m = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    bareiss(m, columns).rank()
}

/// Determinant of a square integer matrix.
pub fn det_i64(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inverse of a unimodular integer matrix, or `None` if `|det| != 1`.
pub fn unimodular_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let det = det_i64(m);
    if det.abs() != BigInt::one() {
        return None;
    }
    let d: i64 = if det.is_positive() { 1 } else { -1 };
    // adjugate via cofactors
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let cof = det_i64(&minor);
            let cof: i64 = i64::try_from(cof).ok()?;
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            inv[j][i] = s * cof * d;
        }
    }
    Some(inv)
}

/// Row-style Hermite normal form of an integer matrix whose rows span a
/// lattice: upper echelon, positive pivots, entries above each pivot reduced
/// into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let mut best: Option<usize> = None;
            for i in r..m.len() {
                if m[i][c] != 0 && best.is_none_or(|b| m[i][c].abs() < m[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(r, b);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c] != 0 {
                    let q = m[i][c].div_euclid(m[r][c]);
                    for k in 0..ncols {
                        m[i][k] -= q * m[r][k];
                    }
                    if m[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && m[r][c] != 0 {
            if m[r][c] < 0 {
                for v in m[r].iter_mut() {
                    *v = -*v;
                }
            }
            for i in 0..r {
                let q = m[i][c].div_euclid(m[r][c]);
                if q != 0 {
                    for k in 0..ncols {
                        m[i][k] -= q * m[r][k];
                    }
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m.into_iter()
        .map(|row| row.into_iter().map(|v| v as i64).collect())
        .collect()
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}
