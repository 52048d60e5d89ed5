//! Sparse multivariate polynomials over a base field, degrevlex order,
//! and Buchberger's algorithm.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::exactfield::{BaseField, Scalar};

/// Exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n: usize) -> Mono {
        Mono(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Mono {
        let mut e = vec![0; n];
        e[i] = 1;
        Mono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, o: &Mono) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Mono {
    /// Degree-reverse-lexicographic.
    fn cmp(&self, o: &Self) -> Ordering {
        match self.degree().cmp(&o.degree()) {
            Ordering::Equal => {}
            c => return c,
        }
        for (a, b) in self.0.iter().zip(&o.0).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MPoly {
    nvars: usize,
    field: BaseField,
    terms: BTreeMap<Mono, Scalar>,
}

impl MPoly {
    pub fn zero(field: BaseField, nvars: usize) -> Self {
        MPoly { nvars, field, terms: BTreeMap::new() }
    }

    pub fn constant(field: BaseField, nvars: usize, c: Scalar) -> Self {
        MPoly::term(field, Mono::one(nvars), c)
    }

    pub fn term(field: BaseField, m: Mono, c: Scalar) -> Self {
        let nvars = m.0.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { nvars, field, terms }
    }

    pub fn var(field: BaseField, nvars: usize, i: usize) -> Self {
        MPoly::term(field, Mono::var(nvars, i), field.one())
    }

    /// Σ coeffs[k]·x_k + coeffs[n] (the last entry is the constant).
    pub fn linear(field: BaseField, coeffs: &[Scalar]) -> Self {
        let n = coeffs.len() - 1;
        let mut p = MPoly::constant(field, n, coeffs[n].clone());
        for (k, c) in coeffs[..n].iter().enumerate() {
            p = &p + &MPoly::term(field, Mono::var(n, k), c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    pub fn lead(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Homogeneous component of degree d.
    pub fn component(&self, d: u32) -> MPoly {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect();
        MPoly { nvars: self.nvars, field: self.field, terms }
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.field, self.nvars);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        MPoly { nvars: self.nvars, field: self.field, terms }
    }

    pub fn mul_term(&self, m: &Mono, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.field, self.nvars);
        }
        let terms = self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect();
        MPoly { nvars: self.nvars, field: self.field, terms }
    }

    pub fn monic(&self) -> MPoly {
        match self.lead() {
            Some((_, c)) => self.scale(&c.inv().unwrap()),
            None => self.clone(),
        }
    }

    fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn eval(&self, pt: &[Scalar]) -> Scalar {
        let mut s = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, e) in pt.iter().zip(&m.0) {
                t = &t * &x.pow(*e as u64);
            }
            s = &s + &t;
        }
        s
    }

    /// Renames variables into a ring with `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> MPoly {
        let mut out = MPoly::zero(self.field, nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Mono(e), c.clone());
        }
        out
    }

    /// (p − p|_{x→y}) / (x − y) for variables x, y with y absent from p.
    pub fn divided_difference(&self, x: usize, y: usize) -> MPoly {
        let mut out = MPoly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[x];
            for a in 0..e {
                let mut k = m.0.clone();
                k[x] = a;
                k[y] += e - 1 - a;
                out.add_term(Mono(k), c.clone());
            }
        }
        out
    }

    pub fn derivative(&self, i: usize) -> MPoly {
        let mut out = MPoly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                continue;
            }
            let mut k = m.0.clone();
            k[i] -= 1;
            out.add_term(Mono(k), c * &self.field.from_i64(m.0[i] as i64));
        }
        out
    }
}

impl std::ops::Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl std::ops::Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            for (k, d) in &o.terms {
                out.add_term(m.mul(k), c * d);
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, e)| if *e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Full reduction of p by g (g need not be a Gröbner basis).
pub fn reduce(p: &MPoly, g: &[MPoly]) -> MPoly {
    let mut rem = MPoly::zero(p.field, p.nvars);
    let mut p = p.clone();
    while let Some((m, c)) = p.terms.pop_last() {
        let div = g.iter().find(|q| q.lead().map(|(lm, _)| lm.divides(&m)).unwrap_or(false));
        match div {
            Some(q) => {
                let (lm, lc) = q.lead().unwrap();
                let f = &c / lc;
                let shift = m.div(lm);
                for (k, x) in q.terms.iter().rev().skip(1) {
                    p.add_term(k.mul(&shift), -&(x * &f));
                }
            }
            None => {
                rem.terms.insert(m, c);
            }
        }
    }
    rem
}

fn s_poly(f: &MPoly, g: &MPoly) -> MPoly {
    let (fm, fc) = f.lead().unwrap();
    let (gm, gc) = g.lead().unwrap();
    let l = fm.lcm(gm);
    &f.mul_term(&l.div(fm), &fc.inv().unwrap()) - &g.mul_term(&l.div(gm), &gc.inv().unwrap())
}

/// Reduced Gröbner basis (monic, sorted by leading monomial).
pub fn groebner(gens: &[MPoly]) -> Vec<MPoly> {
    let mut g: Vec<MPoly> = gens.iter().filter(|p| !p.is_zero()).map(MPoly::monic).collect();
    let mut pairs: Vec<(usize, usize)> = (0..g.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let lcm_of = |g: &[MPoly], i: usize, j: usize| g[i].lead().unwrap().0.lcm(g[j].lead().unwrap().0);
    let mut done: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    while !pairs.is_empty() {
        // normal strategy: smallest lcm first
        let k = (0..pairs.len()).min_by(|&a, &b| lcm_of(&g, pairs[a].0, pairs[a].1).cmp(&lcm_of(&g, pairs[b].0, pairs[b].1))).unwrap();
        let (i, j) = pairs.swap_remove(k);
        done.insert((i, j));
        let (li, lj) = (g[i].lead().unwrap().0.clone(), g[j].lead().unwrap().0.clone());
        if li.coprime(&lj) {
            continue;
        }
        // chain criterion
        let l = li.lcm(&lj);
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let chained = (0..g.len()).any(|h| {
            h != i
                && h != j
                && g[h].lead().unwrap().0.divides(&l)
                && done.contains(&key(i, h))
                && done.contains(&key(j, h))
        });
        if chained {
            continue;
        }
        let r = reduce(&s_poly(&g[i], &g[j]), &g);
        if !r.is_zero() {
            g.push(r.monic());
            let n = g.len() - 1;
            pairs.extend((0..n).map(|k| (k, n)));
        }
    }
    // minimalize, then interreduce
    let mut min: Vec<MPoly> = Vec::new();
    for (k, p) in g.iter().enumerate() {
        let lm = p.lead().unwrap().0;
        let redundant = g.iter().enumerate().any(|(l, q)| {
            let lq = q.lead().unwrap().0;
            l != k && lq.divides(lm) && (lq != lm || l < k)
        });
        if !redundant {
            min.push(p.clone());
        }
    }
    let mut out = Vec::new();
    for k in 0..min.len() {
        let others: Vec<MPoly> = min.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, q)| q.clone()).collect();
        let (lm, _) = min[k].lead().unwrap();
        let tail = &min[k] - &MPoly::term(min[k].field, lm.clone(), min[k].field.one());
        let t = reduce(&tail, &others);
        out.push(&MPoly::term(min[k].field, lm.clone(), min[k].field.one()) + &t);
    }
    out.sort_by(|a, b| a.lead().unwrap().0.cmp(b.lead().unwrap().0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> BaseField {
        BaseField::Rationals
    }

    fn x(i: usize) -> MPoly {
        MPoly::var(q(), 3, i)
    }

    fn c(n: i64) -> MPoly {
        MPoly::constant(q(), 3, q().from_i64(n))
    }

    #[test]
    fn degrevlex() {
        let m = |v: [u32; 3]| Mono(v.to_vec());
        assert!(m([1, 0, 0]) > m([0, 1, 0]));
        assert!(m([0, 1, 0]) > m([0, 0, 1]));
        assert!(m([1, 0, 1]) < m([0, 2, 0]));
        assert!(m([0, 0, 2]) < m([1, 0, 1]));
        assert!(m([0, 0, 3]) > m([2, 0, 0]));
    }

    #[test]
    fn groebner_of_points() {
        // x² − 1, y − x, z: two points
        let g = groebner(&[&(&x(0) * &x(0)) - &c(1), &x(1) - &x(0), x(2)]);
        assert_eq!(g.len(), 3);
        for p in [&(&x(0) * &x(1)) - &c(1), &(&x(1) * &x(1)) - &c(1)] {
            assert!(reduce(&p, &g).is_zero());
        }
        assert!(!reduce(&x(0), &g).is_zero());
    }

    #[test]
    fn groebner_membership_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut rnd = || c(rng.gen_range(-3..=3));
        let quad = |r: &mut dyn FnMut() -> MPoly| {
            let mut p = c(0);
            for i in 0..3 {
                for j in i..3 {
                    p = &p + &(&(&x(i) * &x(j)) * &r());
                }
                p = &p + &(&x(i) * &r());
            }
            &p + &r()
        };
        let f: Vec<MPoly> = (0..3).map(|_| quad(&mut rnd)).collect();
        let g = groebner(&f);
        for p in &f {
            assert!(reduce(p, &g).is_zero());
        }
        let combo = &(&f[0] * &x(1)) + &(&f[2] * &(&x(0) - &c(2)));
        assert!(reduce(&combo, &g).is_zero());
    }

    #[test]
    fn divided_difference_recovers_derivative() {
        // f(x) = x³ on variables (x, y): (x³ − y³)/(x − y) at y = x is 3x²
        let f = MPoly::var(q(), 2, 0);
        let f = &(&f * &f) * &f;
        let d = f.divided_difference(0, 1);
        let at = |a: i64| d.eval(&[q().from_i64(a), q().from_i64(a)]);
        assert_eq!(at(2), q().from_i64(12));
    }
}
