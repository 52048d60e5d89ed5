//! Integer helpers for square classes and local symbols over ℚ.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_prime::factor::pollard_rho;
use num_prime::nt_funcs::{factors, is_prime};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Square-free representative of a nonzero rational modulo squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareClass {
    /// Signed square-free integer.
    pub value: BigInt,
    /// Primes dividing `value`.
    pub primes: BTreeSet<BigUint>,
    /// Composite cofactors the factorizer could not split; their square
    /// factors (if any) were not removed.
    pub unresolved: Vec<BigUint>,
}

const TRIAL_LIMIT: u32 = 1 << 14;
const RHO_TRIALS: u64 = 2;
const RHO_ITERATIONS: usize = 1 << 16;

/// Prime factorization with a bounded effort. Composites that survive
/// trial division, a perfect power test and a few Pollard rho walks are
/// returned whole.
pub fn factor_bounded(n: &BigUint) -> (BTreeMap<BigUint, usize>, Vec<BigUint>) {
    let mut found = BTreeMap::new();
    let mut rest = Vec::new();
    let mut n = n.clone();
    let mut d = 2u32;
    while d < TRIAL_LIMIT && !n.is_one() {
        while (&n % d).is_zero() {
            n /= d;
            *found.entry(BigUint::from(d)).or_insert(0) += 1;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut todo = if n.is_one() { Vec::new() } else { vec![(n, 1usize)] };
    while let Some((m, e)) = todo.pop() {
        if m.bits() <= 128 {
            // the small-word path of the library always terminates
            for (p, k) in factors(m, None).0 {
                *found.entry(p).or_insert(0) += k * e;
            }
        } else if is_prime(&m, None).probably() {
            *found.entry(m).or_insert(0) += e;
        } else if let Some((r, k)) = (2..=3u32).find_map(|k| {
            let r = m.nth_root(k);
            (r.pow(k) == m).then_some((r, k as usize))
        }) {
            todo.push((r, e * k));
        } else {
            let split = (1..=RHO_TRIALS).find_map(|c| {
                let (f, _) = pollard_rho(&m, BigUint::from(2u32 + c as u32), BigUint::from(c), RHO_ITERATIONS);
                f.filter(|f| !f.is_one() && f != &m)
            });
            match split {
                Some(f) => {
                    let g = &m / &f;
                    todo.push((f, e));
                    todo.push((g, e));
                }
                None if e % 2 == 1 => rest.push(m),
                None => {}
            }
        }
    }
    (found, rest)
}

/// Square-free part of n·d for q = n/d ≠ 0.
pub fn square_class(q: &BigRational) -> SquareClass {
    assert!(!q.is_zero(), "square class of zero");
    let n = q.numer() * q.denom();
    let sign = n.sign();
    let mag = n.magnitude().clone();
    let mut value = BigUint::one();
    let mut primes = BTreeSet::new();
    let mut unresolved = Vec::new();
    if !mag.is_one() {
        let (found, rest) = factor_bounded(&mag);
        for (p, e) in found {
            if e % 2 == 1 {
                value *= &p;
                primes.insert(p);
            }
        }
        for c in rest {
            value *= &c;
            unresolved.push(c);
        }
    }
    let value = BigInt::from_biguint(if sign == Sign::Minus { Sign::Minus } else { Sign::Plus }, value);
    SquareClass { value, primes, unresolved }
}

/// Smallest r with r^k = n for some k ≥ 1.
fn perfect_root(mut n: BigUint) -> BigUint {
    let mut k = 2u32;
    while u64::from(k) < n.bits() {
        let r = n.nth_root(k);
        if r.pow(k) == n {
            n = r;
        } else {
            k += 1;
        }
    }
    n
}

/// Refines a list of integers > 1 into pairwise coprime factors whose
/// products generate the same multiplicative monoid.
fn coprime_base(xs: Vec<BigUint>) -> Vec<BigUint> {
    let mut base: Vec<BigUint> = Vec::new();
    let mut todo = xs;
    while let Some(x) = todo.pop() {
        if x.is_one() {
            continue;
        }
        match base.iter().position(|b| !b.gcd(&x).is_one()) {
            None => base.push(x),
            Some(k) => {
                let b = base.swap_remove(k);
                let g = b.gcd(&x);
                if g == b && g == x {
                    base.push(g);
                } else {
                    todo.extend([&b / &g, &x / &g, g]);
                }
            }
        }
    }
    base
}

/// Square classes of several rationals at once. Cofactors left composite
/// by the bounded factorizer are split against each other and against the
/// primes found elsewhere, so squares shared across entries still cancel.
pub fn square_classes(qs: &[&BigRational]) -> Vec<SquareClass> {
    let parts: Vec<(Sign, BTreeMap<BigUint, usize>, Vec<BigUint>)> = qs
        .iter()
        .map(|q| {
            assert!(!q.is_zero(), "square class of zero");
            let n = q.numer() * q.denom();
            let (found, rest) = if n.magnitude().is_one() { (BTreeMap::new(), Vec::new()) } else { factor_bounded(n.magnitude()) };
            (n.sign(), found, rest)
        })
        .collect();
    let composites: Vec<BigUint> = parts.iter().flat_map(|(_, _, r)| r.iter().cloned()).collect();
    let mut primes: BTreeSet<BigUint> = BTreeSet::new();
    let mut pieces = Vec::new();
    if !composites.is_empty() {
        let known: Vec<BigUint> = parts.iter().flat_map(|(_, f, _)| f.keys().cloned()).collect();
        for b in coprime_base(composites.into_iter().chain(known).collect()) {
            let b = perfect_root(b);
            if is_prime(&b, None).probably() {
                primes.insert(b);
            } else {
                pieces.push(b);
            }
        }
    }
    parts
        .into_iter()
        .map(|(sign, found, rest)| {
            let mut exps: BTreeMap<BigUint, usize> = found;
            let mut open = Vec::new();
            for c in rest {
                let mut c = c;
                for b in primes.iter().chain(&pieces) {
                    while (&c % b).is_zero() {
                        c /= b;
                        *exps.entry(b.clone()).or_insert(0) += 1;
                    }
                }
                debug_assert!(c.is_one());
            }
            let mut value = BigUint::one();
            let mut odd_primes = BTreeSet::new();
            for (b, e) in exps {
                if e % 2 == 1 {
                    value *= &b;
                    if pieces.contains(&b) {
                        open.push(b);
                    } else {
                        odd_primes.insert(b);
                    }
                }
            }
            let value = BigInt::from_biguint(if sign == Sign::Minus { Sign::Minus } else { Sign::Plus }, value);
            SquareClass { value, primes: odd_primes, unresolved: open }
        })
        .collect()
}

/// Square-free part of a product of two square-free integers.
pub fn product_class(a: &BigInt, b: &BigInt) -> BigInt {
    let g = a.gcd(b);
    (a * b) / (&g * &g)
}

pub fn valuation(n: &BigInt, p: &BigUint) -> (u32, BigInt) {
    let p = BigInt::from(p.clone());
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    (v, n)
}

/// Legendre symbol (u/p) for odd prime p not dividing u.
pub fn legendre(u: &BigInt, p: &BigUint) -> i8 {
    let pi = BigInt::from(p.clone());
    let r = u.mod_floor(&pi);
    let e = (&pi - 1) / 2;
    if r.modpow(&e, &pi).is_one() {
        1
    } else {
        -1
    }
}

/// Hilbert symbol (a, b)_p for nonzero integers, p a prime.
pub fn hilbert_at_prime(a: &BigInt, b: &BigInt, p: &BigUint) -> i8 {
    let (alpha, u) = valuation(a, p);
    let (beta, v) = valuation(b, p);
    if *p == BigUint::from(2u32) {
        let eps = |x: &BigInt| -> u32 { (x.mod_floor(&BigInt::from(4)) == BigInt::from(3)) as u32 };
        let omega = |x: &BigInt| -> u32 {
            let r = x.mod_floor(&BigInt::from(8));
            (r == BigInt::from(3) || r == BigInt::from(5)) as u32
        };
        let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let pm = BigInt::from(p.clone()).mod_floor(&BigInt::from(4));
    let eps_p = (pm == BigInt::from(3)) as u32;
    let mut s: i8 = if (alpha * beta * eps_p) % 2 == 0 { 1 } else { -1 };
    if beta % 2 == 1 {
        s *= legendre(&u, p);
    }
    if alpha % 2 == 1 {
        s *= legendre(&v, p);
    }
    s
}

pub fn hilbert_at_infinity(a: &BigInt, b: &BigInt) -> i8 {
    if a.is_negative() && b.is_negative() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn bu(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn single_square_class() {
        let q = BigRational::new(bi(-72), bi(5));
        let c = square_class(&q);
        assert_eq!(c.value, bi(-10));
        assert_eq!(c.primes.iter().cloned().collect::<Vec<_>>(), vec![bu(2), bu(5)]);
        assert!(c.unresolved.is_empty());
        assert_eq!(product_class(&bi(6), &bi(10)), bi(15));
    }

    #[test]
    fn hilbert_brute_force_agreement() {
        // (a,b)_p = 1 iff ax² + by² = z² has a primitive solution mod p² (p odd)
        // or mod 16 (p = 2); valuations here are at most 1
        for p in [2u64, 3, 5, 7] {
            let m = if p == 2 { 16 } else { p * p };
            for a in [-7i64, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 14, 15] {
                for b in [-7i64, -3, -2, -1, 1, 2, 3, 5, 7, 10] {
                    let want = brute(a, b, p, m);
                    let got = hilbert_at_prime(&bi(a), &bi(b), &bu(p));
                    assert_eq!(got, want, "({a},{b})_{p}");
                }
            }
        }
    }

    fn brute(a: i64, b: i64, p: u64, m: u64) -> i8 {
        let m = m as i64;
        let p = p as i64;
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if x % p == 0 && y % p == 0 && z % p == 0 {
                        continue;
                    }
                    if (a * x * x + b * y * y - z * z).rem_euclid(m) == 0 {
                        return 1;
                    }
                }
            }
        }
        -1
    }

    #[test]
    fn classical_values() {
        assert_eq!(hilbert_at_prime(&bi(-1), &bi(-1), &bu(2)), -1);
        assert_eq!(hilbert_at_infinity(&bi(-1), &bi(-1)), -1);
        assert_eq!(hilbert_at_prime(&bi(-1), &bi(-1), &bu(3)), 1);
        assert_eq!(hilbert_at_prime(&bi(2), &bi(3), &bu(3)), -1);
    }

    fn mersenne(k: u32) -> BigUint {
        (BigUint::one() << k) - 1u32
    }

    #[test]
    fn hard_composites_stay_whole() {
        let n = mersenne(89) * mersenne(107);
        let (found, rest) = factor_bounded(&n);
        assert!(found.is_empty());
        assert_eq!(rest, vec![n.clone()]);
        // a square cofactor is recognised even when it cannot be split
        let (found, rest) = factor_bounded(&(&n * &n * 12u32));
        assert_eq!(found.into_iter().collect::<Vec<_>>(), vec![(bu(2), 2), (bu(3), 1)]);
        assert!(rest.is_empty());
    }

    #[test]
    fn shared_cofactors_split_each_other() {
        let (p, q, r) = (mersenne(89), mersenne(107), mersenne(61));
        let a = BigRational::from_integer(BigInt::from(&p * &q));
        let b = BigRational::from_integer(-BigInt::from(&p * &r));
        let cs = square_classes(&[&a, &b]);
        assert!(cs.iter().all(|c| c.unresolved.is_empty()));
        assert_eq!(cs[0].primes, [p.clone(), q].into_iter().collect());
        assert_eq!(cs[1].value, -BigInt::from(&p * &r));
        assert_eq!(coprime_base(vec![bu(12), bu(18)]).into_iter().collect::<BTreeSet<_>>(), [bu(2), bu(3)].into_iter().collect());
    }
}
