//! Factorization of squarefree polynomials over ℚ.
//!
//! The primitive integer polynomial is split modulo a single prime larger
//! than twice the coefficient bound for its factors (distinct-degree, then
//! Cantor–Zassenhaus), and the modular factors are recombined by trial
//! division over ℤ.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_prime::nt_funcs::next_prime;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactfield::Scalar;
use crate::poly::{integer_coeffs, UniPoly};

type Poly = Vec<BigInt>;

fn trim(mut a: Poly) -> Poly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn deg(a: &Poly) -> usize {
    a.len().saturating_sub(1)
}

struct Zp {
    p: BigInt,
}

impl Zp {
    fn reduce(&self, a: Poly) -> Poly {
        trim(a.into_iter().map(|c| c.mod_floor(&self.p)).collect())
    }

    fn inv(&self, a: &BigInt) -> BigInt {
        a.modpow(&(&self.p - 2u32), &self.p)
    }

    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        self.reduce((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.reduce(out)
    }

    fn div_rem(&self, a: &Poly, m: &Poly) -> (Poly, Poly) {
        let mut r = a.clone();
        if r.len() < m.len() {
            return (Vec::new(), r);
        }
        let li = self.inv(m.last().unwrap());
        let mut q = vec![BigInt::zero(); r.len() - m.len() + 1];
        while r.len() >= m.len() {
            let shift = r.len() - m.len();
            let c = (r.last().unwrap() * &li).mod_floor(&self.p);
            for (i, mi) in m.iter().enumerate() {
                r[shift + i] = (&r[shift + i] - &c * mi).mod_floor(&self.p);
            }
            q[shift] = c;
            r = trim(r);
        }
        (trim(q), r)
    }

    fn rem(&self, a: &Poly, m: &Poly) -> Poly {
        self.div_rem(a, m).1
    }

    fn monic(&self, a: Poly) -> Poly {
        match a.last() {
            None => a,
            Some(l) => {
                let li = self.inv(l);
                self.reduce(a.iter().map(|c| c * &li).collect())
            }
        }
    }

    fn gcd(&self, mut a: Poly, mut b: Poly) -> Poly {
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(a)
    }

    fn pow_mod(&self, base: &Poly, e: &BigUint, m: &Poly) -> Poly {
        let mut acc = vec![BigInt::one()];
        let b = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), m);
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &b), m);
            }
        }
        acc
    }

    /// Factors of a monic squarefree f grouped by degree.
    fn distinct_degree(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let x = vec![BigInt::zero(), BigInt::one()];
        let p = self.p.magnitude();
        let mut f = f.clone();
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut d = 0;
        while deg(&f) >= 2 * (d + 1) {
            d += 1;
            h = self.pow_mod(&h, p, &f);
            let g = self.gcd(self.sub(&h, &x), f.clone());
            if deg(&g) > 0 {
                f = self.div_rem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, d));
            }
        }
        if deg(&f) > 0 {
            let n = deg(&f);
            out.push((f, n));
        }
        out
    }

    fn equal_degree(&self, g: Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
        if deg(&g) == d {
            out.push(g);
            return;
        }
        let e = (self.p.magnitude().pow(d as u32) - 1u32) / 2u32;
        let bits = self.p.bits();
        loop {
            let a: Poly = trim((0..deg(&g)).map(|_| BigInt::from(rng.gen::<u64>()) << (bits / 2) ^ BigInt::from(rng.gen::<u64>())).collect());
            let a = self.reduce(a);
            if deg(&a) == 0 {
                continue;
            }
            let b = self.sub(&self.pow_mod(&a, &e, &g), &vec![BigInt::one()]);
            let u = self.gcd(b, g.clone());
            if deg(&u) > 0 && deg(&u) < deg(&g) {
                let v = self.monic(self.div_rem(&g, &u).0);
                self.equal_degree(u, d, rng, out);
                self.equal_degree(v, d, rng, out);
                return;
            }
        }
    }
}

/// Quotient of a by b over ℤ, if exact.
fn exact_div(a: &Poly, b: &Poly) -> Option<Poly> {
    let mut r = a.clone();
    if r.len() < b.len() {
        return None;
    }
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let (c, m) = r.last().unwrap().div_rem(lb);
        if !m.is_zero() {
            return None;
        }
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        q[shift] = c;
        r = trim(r);
    }
    r.is_empty().then(|| trim(q))
}

fn primitive(h: Poly) -> Poly {
    let g = h.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let s = if h.last().is_some_and(|l| l.is_negative()) { -g } else { g };
    h.into_iter().map(|c| c / &s).collect()
}

/// Irreducible factors of a primitive squarefree integer polynomial.
fn factor_primitive(f: &Poly) -> Vec<Poly> {
    let n = deg(f);
    if n <= 1 {
        return vec![f.clone()];
    }
    let lc = f[n].clone();
    // factors of f have coefficients below 2ⁿ‖f‖₁, and lc·factor is
    // what gets lifted
    let norm: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = (norm * lc.abs() << n) * 2u32;
    let mut p = next_prime(bound.magnitude(), None).unwrap();
    let field = loop {
        let zp = Zp { p: BigInt::from(p.clone()) };
        let fm = zp.reduce(f.clone());
        let df: Poly = fm.iter().enumerate().skip(1).map(|(i, c)| c * i).collect();
        if deg(&fm) == n && deg(&zp.gcd(fm, zp.reduce(df))) == 0 {
            break zp;
        }
        p = next_prime(&p, None).unwrap();
    };
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let mut modular = Vec::new();
    for (h, d) in field.distinct_degree(&field.monic(field.reduce(f.clone()))) {
        field.equal_degree(h, d, &mut rng, &mut modular);
    }
    let half = &field.p / 2;
    let lift = |h: Poly| -> Poly { h.into_iter().map(|c| if c > half { c - &field.p } else { c }).collect() };
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= modular.len() {
        let r = modular.len();
        let lead = vec![rest.last().unwrap().clone()];
        let hit = (1u64..1 << r).filter(|m| m.count_ones() as usize == size).find_map(|mask| {
            let prod = (0..r).filter(|i| mask >> i & 1 == 1).fold(lead.clone(), |acc, i| field.mul(&acc, &modular[i]));
            let h = primitive(lift(prod));
            exact_div(&rest, &h).map(|q| (mask, h, q))
        });
        match hit {
            Some((mask, h, q)) => {
                out.push(h);
                rest = q;
                modular = modular.into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 0).map(|(_, f)| f).collect();
            }
            None => size += 1,
        }
    }
    if deg(&rest) > 0 {
        out.push(rest);
    }
    out
}

/// Monic irreducible factors over ℚ of a squarefree polynomial.
pub fn irreducible_factors(f: &UniPoly) -> Vec<UniPoly> {
    match f.degree() {
        None | Some(0) => return Vec::new(),
        Some(1) => return vec![f.monic()],
        _ => {}
    }
    factor_primitive(&integer_coeffs(f))
        .into_iter()
        .map(|h| UniPoly::new(h.into_iter().map(|c| Scalar::Q(BigRational::from_integer(c))).collect()).monic())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::BaseField;

    fn poly(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&x| BaseField::Rationals.from_i64(x)).collect())
    }

    fn product(fs: &[UniPoly]) -> UniPoly {
        fs.iter().fold(poly(&[1]), |acc, f| &acc * f)
    }

    #[test]
    fn splits_products_of_quadratics() {
        let parts = [poly(&[-2, 0, 1]), poly(&[3, 0, 1]), poly(&[1, 1, 1]), poly(&[-5, 0, 1])];
        let f = product(&parts).scale(&BaseField::Rationals.from_i64(7));
        let mut got: Vec<String> = irreducible_factors(&f).iter().map(|g| g.to_string()).collect();
        let mut want: Vec<String> = parts.iter().map(|g| g.to_string()).collect();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn keeps_irreducibles_whole() {
        // x⁴ + 1 splits modulo every prime
        assert_eq!(irreducible_factors(&poly(&[1, 0, 0, 0, 1])).len(), 1);
        assert_eq!(irreducible_factors(&poly(&[-2, 0, 0, 1])).len(), 1);
        let f = product(&[poly(&[1, 0, 0, 0, 1]), poly(&[-1, 3]), poly(&[2, -1, 0, 5])]);
        let fs = irreducible_factors(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f.monic());
    }

    #[test]
    fn non_monic_rational_input() {
        let q = BaseField::Rationals;
        let f = UniPoly::new(vec![q.parse("-3/4").unwrap(), q.zero(), q.parse("1/3").unwrap()]);
        let fs = irreducible_factors(&f);
        // x² − 9/4 = (x − 3/2)(x + 3/2)
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|g| g.degree() == Some(1)));
    }
}
