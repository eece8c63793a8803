//! Dense matrices over the coefficient field and over polynomial rings.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{PolyRing, Polynomial};
use crate::scalar::{Field, Scalar};

/// Row echelon form in place; returns the pivot columns.
fn echelon(m: &mut [Vec<Scalar>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let v = m[r][k].mul(&f);
                    m[i][k] = m[i][k].sub(&v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Scalar>]) -> usize {
    let mut m = m.to_vec();
    echelon(&mut m).len()
}

pub fn determinant(field: Field, m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "square matrix");
    let mut a = m.to_vec();
    let mut det = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return field.zero();
        };
        if p != c {
            a.swap(p, c);
            det = det.neg();
        }
        det = det.mul(&a[c][c]);
        let inv = a[c][c].inv().expect("pivot is nonzero");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&inv);
            for k in c..n {
                let v = a[c][k].mul(&f);
                a[i][k] = a[i][k].sub(&v);
            }
        }
    }
    det
}

/// Solve `x * m = b` for a row vector `x`, if solvable.
pub fn solve_left(m: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    // transpose to column form: m^T x^T = b^T
    let rows = m.len();
    let cols = b.len();
    let field = b.first().map(|s| s.field())?;
    let mut aug: Vec<Vec<Scalar>> = (0..cols)
        .map(|j| {
            let mut r: Vec<Scalar> = (0..rows).map(|i| m[i][j].clone()).collect();
            r.push(b[j].clone());
            r
        })
        .collect();
    let pivots = echelon(&mut aug);
    if pivots.contains(&rows) {
        return None;
    }
    let mut x = vec![field.zero(); rows];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][rows].clone();
    }
    Some(x)
}

/// Determinant of a square polynomial matrix by cofactor expansion along
/// the sparsest row.
pub fn poly_determinant(ring: &Arc<PolyRing>, m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    if n == 2 {
        return &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    }
    let r = (0..n)
        .min_by_key(|&i| m[i].iter().filter(|p| !p.is_zero()).count())
        .unwrap();
    let mut acc = ring.zero();
    for c in 0..n {
        if m[r][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = (0..n)
            .filter(|&i| i != r)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != c)
                    .map(|j| m[i][j].clone())
                    .collect()
            })
            .collect();
        let term = &m[r][c] * &poly_determinant(ring, &minor);
        acc = if (r + c) % 2 == 0 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Nonzero `k x k` minors of a polynomial matrix.
pub fn minors(ring: &Arc<PolyRing>, m: &[Vec<Polynomial>], k: usize) -> Vec<Polynomial> {
    if k == 0 {
        return vec![ring.one()];
    }
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<Polynomial>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect())
                .collect();
            let d = poly_determinant(ring, &sub);
            if !d.is_zero() && !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

/// Adjugate of a square polynomial matrix: `adj(m) * m = det(m) * 1`.
pub fn poly_adjugate(ring: &Arc<PolyRing>, m: &[Vec<Polynomial>]) -> Vec<Vec<Polynomial>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![ring.one()]];
    }
    let mut adj = vec![vec![ring.zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<Polynomial>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let d = poly_determinant(ring, &minor);
            adj[i][j] = if (i + j) % 2 == 0 { d } else { -&d };
        }
    }
    adj
}

pub fn poly_matmul(
    ring: &Arc<PolyRing>,
    a: &[Vec<Polynomial>],
    b: &[Vec<Polynomial>],
) -> Result<Vec<Vec<Polynomial>>> {
    let inner = b.len();
    if a.iter().any(|r| r.len() != inner) {
        return Err(Error::Shape("matrix dimensions do not agree".into()));
    }
    let cols = b.first().map_or(0, |r| r.len());
    Ok(a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = ring.zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(x * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[&[i64]]) -> Vec<Vec<Scalar>> {
        v.iter()
            .map(|r| r.iter().map(|&x| Field::Rational.from_i64(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_determinant() {
        assert_eq!(rank(&q(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(
            determinant(Field::Rational, &q(&[&[2, 0], &[0, 3]])),
            Field::Rational.from_i64(6)
        );
        assert_eq!(
            determinant(Field::Rational, &q(&[&[0, 1], &[1, 0]])),
            Field::Rational.from_i64(-1)
        );
        let x = solve_left(&q(&[&[1, 0], &[1, 1]]), &q(&[&[3, 2]])[0]).unwrap();
        assert_eq!(x, q(&[&[1, 2]])[0]);
        assert!(solve_left(&q(&[&[1, 1]]), &q(&[&[1, 2]])[0]).is_none());
    }

    #[test]
    fn polynomial_determinant_and_adjugate() {
        let r = PolyRing::with_vars(Field::Rational, &["x", "y"]);
        let p = |s: &str| r.parse(s).unwrap();
        let m = vec![
            vec![p("x"), p("1"), p("0")],
            vec![p("0"), p("y"), p("1")],
            vec![p("1"), p("0"), p("x")],
        ];
        let d = poly_determinant(&r, &m);
        assert_eq!(d, p("x^2*y + 1"));
        let adj = poly_adjugate(&r, &m);
        let prod = poly_matmul(&r, &adj, &m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prod[i][j], if i == j { d.clone() } else { r.zero() });
            }
        }
        assert_eq!(subsets(4, 2).len(), 6);
    }
}
