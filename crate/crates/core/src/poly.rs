//! Univariate polynomials over a base field, with exact root finding in
//! the base field (Sturm isolation over ℚ, splitting over 𝔽p).

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactfield::{BaseField, Scalar};

/// Coefficients stored low degree first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: BaseField,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        let field = coeffs.first().map(Scalar::field).unwrap_or(BaseField::Rationals);
        Self::with_field(field, coeffs)
    }

    pub fn with_field(field: BaseField, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn constant(c: Scalar) -> Self {
        let f = c.field();
        Self::with_field(f, vec![c])
    }

    pub fn zero(field: BaseField) -> Self {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::with_field(self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().inv().unwrap())
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &self.field.from_i64(i as i64) * c)
            .collect();
        Self::with_field(self.field, c)
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lead().inv().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] = &r[i + j] - &(&c * dc);
                }
            }
            q[i] = c;
        }
        (Self::with_field(self.field, q), Self::with_field(self.field, r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// f / gcd(f, f'); exact when every multiplicity is below the
    /// characteristic.
    pub fn squarefree(&self) -> UniPoly {
        let d = self.derivative();
        if d.is_zero() {
            return self.monic();
        }
        self.div_rem(&self.gcd(&d)).0.monic()
    }

    /// Multiplicity of `x` as a root.
    pub fn multiplicity(&self, x: &Scalar) -> usize {
        let lin = UniPoly::with_field(self.field, vec![-x, self.field.one()]);
        let mut f = self.clone();
        let mut m = 0;
        while !f.is_zero() {
            let (q, r) = f.div_rem(&lin);
            if !r.is_zero() {
                break;
            }
            f = q;
            m += 1;
        }
        m
    }

    /// Distinct roots lying in the base field, ascending over ℚ and by
    /// residue over 𝔽p.
    pub fn base_roots(&self) -> Vec<Scalar> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        match self.field {
            BaseField::Rationals => rational_roots(self).into_iter().map(Scalar::Q).collect(),
            BaseField::Prime(p) => {
                let mut r = fp_roots(self, p);
                r.sort_by_key(|s| s.residue());
                r
            }
        }
    }

    fn pow_mod(&self, mut e: u64, m: &UniPoly) -> UniPoly {
        let mut base = self.rem(m);
        let mut r = UniPoly::constant(self.field.one());
        while e > 0 {
            if e & 1 == 1 {
                r = (&r * &base).rem(m);
            }
            base = (&base * &base).rem(m);
            e >>= 1;
        }
        r
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::with_field(self.field, (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::with_field(self.field, (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::with_field(self.field, out)
    }
}

// ---- rational roots ----

/// Primitive integer polynomial with the same roots.
pub(crate) fn integer_coeffs(f: &UniPoly) -> Vec<BigInt> {
    let qs: Vec<&BigRational> = f.coeffs.iter().map(|c| c.as_rational().unwrap()).collect();
    let l = qs.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| (*q * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.into_iter().map(|x| x / &g).collect()
}

fn eval_q(c: &[BigRational], x: &BigRational) -> BigRational {
    c.iter().rev().fold(BigRational::zero(), |acc, a| acc * x + a)
}

fn sign_changes(seq: &[Vec<BigRational>], x: &BigRational) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| eval_q(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Simplest fraction (least denominator) in the closed interval [a, b].
pub fn simplest_between(a: &BigRational, b: &BigRational) -> BigRational {
    if b.is_negative() {
        return -simplest_between(&-b, &-a);
    }
    if !a.is_positive() {
        return BigRational::zero();
    }
    let fl = a.floor();
    if fl == *a {
        return fl;
    }
    let up = &fl + BigRational::one();
    if up <= *b {
        return up;
    }
    let inner = simplest_between(&(b - &fl).recip(), &(a - &fl).recip());
    fl + inner.recip()
}

fn rational_roots(f: &UniPoly) -> Vec<BigRational> {
    let sf = f.squarefree();
    let ints = integer_coeffs(&sf);
    let c: Vec<BigRational> = ints.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let lead = ints.last().unwrap().abs();
    let mut roots = Vec::new();
    if c.len() == 2 {
        roots.push(-&c[0] / &c[1]);
        return roots;
    }
    // Sturm chain
    let mut seq: Vec<Vec<BigRational>> = vec![c.clone(), derivative_q(&c)];
    while seq.last().unwrap().len() > 1 {
        let n = seq.len();
        let r = rem_q(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|x| -x).collect());
    }
    let bound = BigRational::one()
        + c.iter().map(|a| (a / &c[c.len() - 1]).abs()).max().unwrap();
    let eps = BigRational::new(BigInt::one(), &lead * &lead * BigInt::from(2));
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let n = sign_changes(&seq, &a) - sign_changes(&seq, &b);
        if n == 0 {
            continue;
        }
        if n == 1 && &b - &a < eps {
            let s = simplest_between(&a, &b);
            if eval_q(&c, &s).is_zero() {
                roots.push(s);
            }
            continue;
        }
        let m = (&a + &b) / BigRational::from_integer(2.into());
        if eval_q(&c, &m).is_zero() {
            roots.push(m.clone());
            let mut h = (&b - &a) / BigRational::from_integer(8.into());
            loop {
                let (l, r) = (&m - &h, &m + &h);
                if !eval_q(&c, &l).is_zero()
                    && !eval_q(&c, &r).is_zero()
                    && sign_changes(&seq, &l) - sign_changes(&seq, &r) == 1
                {
                    stack.push((a.clone(), l));
                    stack.push((r, b.clone()));
                    break;
                }
                h = h / BigRational::from_integer(2.into());
            }
        } else {
            stack.push((a, m.clone()));
            stack.push((m, b));
        }
    }
    roots.sort();
    roots
}

fn derivative_q(c: &[BigRational]) -> Vec<BigRational> {
    c.iter().enumerate().skip(1).map(|(i, x)| x * BigRational::from_integer(i.into())).collect()
}

fn rem_q(a: &[BigRational], d: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let dd = d.len() - 1;
    while r.len() > dd {
        let c = r.last().unwrap() / d.last().unwrap();
        let off = r.len() - 1 - dd;
        for (j, x) in d.iter().enumerate() {
            r[off + j] = &r[off + j] - &c * x;
        }
        r.pop();
    }
    while r.last().is_some_and(|x| x.is_zero()) {
        r.pop();
    }
    r
}

// ---- 𝔽p roots ----

fn fp_roots(f: &UniPoly, p: u64) -> Vec<Scalar> {
    let field = f.field;
    let x = UniPoly::with_field(field, vec![field.zero(), field.one()]);
    let f = f.monic();
    let xp = x.pow_mod(p, &f);
    let g = (&xp - &x).gcd(&f);
    let mut out = Vec::new();
    split_linear(&g, p, 0, &mut out);
    out
}

/// Splits a product of distinct linear factors with gcds against
/// (x + a)^((p−1)/2) − 1 for a = 0, 1, 2, … (deterministic).
fn split_linear(g: &UniPoly, p: u64, mut a: u64, out: &mut Vec<Scalar>) {
    let field = g.field;
    match g.degree() {
        None | Some(0) => return,
        Some(1) => {
            out.push(-&g.monic().coeffs[0]);
            return;
        }
        _ => {}
    }
    if p < 64 {
        for v in 0..p {
            let s = field.from_i64(v as i64);
            if g.eval(&s).is_zero() {
                out.push(s);
            }
        }
        return;
    }
    loop {
        let shift = UniPoly::with_field(field, vec![field.from_i64(a as i64), field.one()]);
        let h = &shift.pow_mod((p - 1) / 2, g) - &UniPoly::constant(field.one());
        let d = h.gcd(g);
        a += 1;
        if let Some(k) = d.degree() {
            if k > 0 && k < g.degree().unwrap() {
                let (q, _) = g.div_rem(&d);
                split_linear(&d, p, a, out);
                split_linear(&q, p, a, out);
                return;
            }
        }
    }
}

impl UniPoly {
    /// Base-field roots together with their multiplicities.
    pub fn roots_with_multiplicity(&self) -> Vec<(Scalar, usize)> {
        self.base_roots()
            .into_iter()
            .map(|r| {
                let m = self.multiplicity(&r);
                (r, m)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(c: &[(i64, i64)]) -> UniPoly {
        UniPoly::new(
            c.iter()
                .map(|&(n, d)| Scalar::Q(BigRational::new(n.into(), d.into())))
                .collect(),
        )
    }

    #[test]
    fn rational_roots_found_exactly() {
        // (x + 7/6)(x − 19/6)(x² − 2) = x⁴ − 2x³ − 133/36 x² + 4x + 133/18
        let f = &qp(&[(133, 36), (-2, 1), (1, 1)]) * &qp(&[(-2, 1), (0, 1), (1, 1)]);
        let f = UniPoly::new(f.coeffs().to_vec());
        let r = f.base_roots();
        assert_eq!(r.len(), 0, "x² − 2x + 133/36 has no real roots");
        let g = &qp(&[(-133, 36), (-2, 1), (1, 1)]) * &qp(&[(-2, 1), (0, 1), (1, 1)]);
        let r = g.base_roots();
        let want: Vec<Scalar> = [(-7, 6), (19, 6)]
            .iter()
            .map(|&(n, d)| Scalar::Q(BigRational::new(n.into(), d.into())))
            .collect();
        assert_eq!(r, want);
    }

    #[test]
    fn roots_at_bisection_points_and_multiplicity() {
        // x³(x − 1)²(x + 3)
        let x = qp(&[(0, 1), (1, 1)]);
        let xm1 = qp(&[(-1, 1), (1, 1)]);
        let xp3 = qp(&[(3, 1), (1, 1)]);
        let f = &(&(&x * &x) * &(&x * &xm1)) * &(&xm1 * &xp3);
        let rm = f.roots_with_multiplicity();
        let got: Vec<(String, usize)> = rm.iter().map(|(r, m)| (r.to_string(), *m)).collect();
        assert_eq!(got, vec![("-3".into(), 1), ("0".into(), 3), ("1".into(), 2)]);
    }

    #[test]
    fn simplest_fraction() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(simplest_between(&q(3, 10), &q(4, 10)), q(1, 3));
        assert_eq!(simplest_between(&q(-4, 10), &q(-3, 10)), q(-1, 3));
        assert_eq!(simplest_between(&q(-1, 10), &q(3, 10)), q(0, 1));
        assert_eq!(simplest_between(&q(7, 3), &q(7, 3)), q(7, 3));
    }

    #[test]
    fn fp_roots_small_and_large() {
        for p in [7u64, 101, 1_000_003] {
            let f = BaseField::prime(p).unwrap();
            let lin = |a: i64| UniPoly::new(vec![f.from_i64(-a), f.one()]);
            let irr = UniPoly::new(vec![f.from_i64(1), f.zero(), f.one()]); // x² + 1
            let g = &(&(&lin(2) * &lin(5)) * &lin(3)) * &irr;
            let mut want = vec![f.from_i64(2), f.from_i64(3), f.from_i64(5)];
            if p % 4 == 1 {
                let i = f.from_i64(-1).sqrt().unwrap();
                want.push(i.clone());
                want.push(-&i);
            }
            want.sort_by_key(|s| s.residue());
            assert_eq!(g.base_roots(), want, "p = {p}");
        }
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = qp(&[(-1, 1), (1, 1)]);
        let b = qp(&[(2, 1), (1, 1)]);
        let f = &(&a * &a) * &b;
        assert_eq!(f.squarefree(), &a * &b);
        assert_eq!(f.gcd(&(&a * &qp(&[(5, 1), (1, 1)]))), a);
    }
}
