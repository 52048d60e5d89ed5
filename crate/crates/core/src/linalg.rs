//! Dense matrices over a base field.

use crate::exactfield::{BaseField, Scalar};
use crate::poly::UniPoly;

pub type Matrix = Vec<Vec<Scalar>>;

pub fn zeros(f: BaseField, rows: usize, cols: usize) -> Matrix {
    vec![vec![f.zero(); cols]; rows]
}

pub fn identity(f: BaseField, n: usize) -> Matrix {
    let mut m = zeros(f, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = f.one();
    }
    m
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let f = a[0][0].field();
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = zeros(f, n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][l] * &b[l][j]);
                }
            }
        }
    }
    out
}

pub fn mul_vec(a: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(v[0].field().zero(), |s, (x, y)| &s + &(x * y)))
        .collect()
}

pub fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

pub fn scale(a: &Matrix, c: &Scalar) -> Matrix {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn trace(a: &Matrix) -> Scalar {
    a.iter().enumerate().fold(a[0][0].field().zero(), |s, (i, r)| &s + &r[i])
}

pub fn is_symmetric(a: &Matrix) -> bool {
    (0..a.len()).all(|i| (0..i).all(|j| a[i][j] == a[j][i]))
}

/// Row-reduced echelon form and pivot columns.
pub fn rref(a: &Matrix) -> (Matrix, Vec<usize>) {
    let mut m = a.clone();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
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
        let inv = m[r][c].inv().unwrap();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &Matrix) -> usize {
    if a.is_empty() {
        return 0;
    }
    rref(a).1.len()
}

pub fn det(a: &Matrix) -> Scalar {
    let n = a.len();
    let f = a[0][0].field();
    let mut m = a.clone();
    let mut d = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return f.zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d = &d * &m[c][c];
        let inv = m[c][c].inv().unwrap();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] * &inv;
            for j in c..n {
                let t = &m[c][j] * &factor;
                m[i][j] = &m[i][j] - &t;
            }
        }
    }
    d
}

/// Basis of the right kernel {x : a x = 0}.
pub fn kernel(a: &Matrix) -> Vec<Vec<Scalar>> {
    let f = a[0][0].field();
    let cols = a[0].len();
    let (r, pivots) = rref(a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&r[row][fc];
            }
            v
        })
        .collect()
}

/// Solves a x = b when a is square and invertible.
pub fn solve(a: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = a.len();
    let aug: Matrix = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some((0..n).map(|i| r[i][n].clone()).collect())
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let f = a[0][0].field();
    let aug: Matrix = a.iter().enumerate().map(|(i, r)| {
        let mut row = r.clone();
        row.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
        row
    }).collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.iter().map(|row| row[n..].to_vec()).collect())
}

/// p(a) by Horner's rule.
pub fn eval_poly(p: &UniPoly, a: &Matrix) -> Matrix {
    let f = a[0][0].field();
    let n = a.len();
    let mut acc = zeros(f, n, n);
    for c in p.coeffs().iter().rev() {
        acc = add(&mul(&acc, a), &scale(&identity(f, n), c));
    }
    acc
}

/// Characteristic polynomial det(xI − a) via Hessenberg reduction;
/// valid in every characteristic.
pub fn char_poly(a: &Matrix) -> UniPoly {
    let n = a.len();
    let f = a[0][0].field();
    let mut h = a.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(p) = (j + 1..n).find(|&i| !h[i][j].is_zero()) else {
            continue;
        };
        if p != j + 1 {
            h.swap(p, j + 1);
            for row in h.iter_mut() {
                row.swap(p, j + 1);
            }
        }
        let inv = h[j + 1][j].inv().unwrap();
        for k in j + 2..n {
            if h[k][j].is_zero() {
                continue;
            }
            let factor = &h[k][j] * &inv;
            for c in 0..n {
                let t = &h[j + 1][c] * &factor;
                h[k][c] = &h[k][c] - &t;
            }
            for row in h.iter_mut() {
                let t = &row[k] * &factor;
                row[j + 1] = &row[j + 1] + &t;
            }
        }
    }
    let x = UniPoly::new(vec![f.zero(), f.one()]);
    let mut ps: Vec<UniPoly> = vec![UniPoly::constant(f.one())];
    for m in 1..=n {
        let mut pm = &(&x - &UniPoly::constant(h[m - 1][m - 1].clone())) * &ps[m - 1];
        let mut prod = f.one();
        for i in (1..m).rev() {
            prod = &prod * &h[i][i - 1];
            let coef = &prod * &h[i - 1][m - 1];
            pm = &pm - &ps[i - 1].scale(&coef);
        }
        ps.push(pm);
    }
    ps.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(f: BaseField, rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect()
    }

    #[test]
    fn det_rank_kernel() {
        let q = BaseField::Rationals;
        let a = m(q, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(det(&a), q.from_i64(18));
        let b = m(q, &[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&b), 1);
        let k = kernel(&b);
        assert_eq!(k.len(), 1);
        assert!(mul_vec(&b, &k[0]).iter().all(Scalar::is_zero));
        let inv = inverse(&a).unwrap();
        assert_eq!(mul(&inv, &a), identity(q, 3));
        assert!(inverse(&b).is_none());
        let x = solve(&a, &[q.from_i64(1), q.from_i64(0), q.from_i64(0)]).unwrap();
        assert_eq!(mul_vec(&a, &x), vec![q.from_i64(1), q.zero(), q.zero()]);
    }

    #[test]
    fn char_poly_matches_cayley_hamilton() {
        for f in [BaseField::Rationals, BaseField::prime(7).unwrap()] {
            let a = m(f, &[&[0, 1, 2, 3], &[1, 0, 5, -1], &[4, 2, 0, 1], &[0, 0, 3, 2]]);
            let chi = char_poly(&a);
            assert_eq!(chi.degree(), Some(4));
            assert_eq!(chi.coeffs()[3], -trace(&a));
            assert_eq!(chi.coeffs()[0], det(&a));
            let mut acc = zeros(f, 4, 4);
            let mut pw = identity(f, 4);
            for c in chi.coeffs() {
                acc = add(&acc, &scale(&pw, c));
                pw = mul(&pw, &a);
            }
            assert!(acc.iter().flatten().all(Scalar::is_zero));
        }
    }
}
