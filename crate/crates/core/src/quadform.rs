//! Symmetric bilinear forms over the base field and their
//! Grothendieck–Witt invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{hilbert_at_infinity, hilbert_at_prime, product_class, square_class, square_classes};
use crate::error::{Error, Result};
use crate::exactfield::{BaseField, FieldElement, Scalar};
use crate::linalg::{self, Matrix};

/// Gram matrix of a symmetric bilinear form over a base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramForm {
    field: BaseField,
    matrix: Matrix,
}

impl GramForm {
    pub fn new(field: BaseField, matrix: Matrix) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) || !linalg::is_symmetric(&matrix) {
            return Err(Error::Invalid("Gram matrix must be square and symmetric".into()));
        }
        if matrix.iter().flatten().any(|x| x.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(GramForm { field, matrix })
    }

    pub fn diagonal(field: BaseField, entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = linalg::zeros(field, n, n);
        for (i, e) in entries.iter().enumerate() {
            m[i][i] = e.clone();
        }
        GramForm { field, matrix: m }
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        if self.dim() == 0 {
            0
        } else {
            linalg::rank(&self.matrix)
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.rank() < self.dim()
    }

    /// Row-major entries as strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.matrix.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    }

    pub fn class(&self) -> FormClass {
        let mut cls = invariants(self.field, &diagonalize(self));
        if self.field != BaseField::Rationals {
            return cls;
        }
        // the cofactors that resist factoring come from one choice of
        // basis; other bases give other cofactors and settle the Hasse
        // symbol at every prime coprime to them
        let mut rng = ChaCha8Rng::seed_from_u64(self.dim() as u64);
        for _ in 0..CLASS_RETRIES {
            if cls.is_complete() {
                break;
            }
            let other = invariants(self.field, &diagonalize(&self.shuffled(&mut rng)));
            cls.cover_with(&other);
        }
        cls
    }

    /// Pᵀ·M·P for a random invertible P with small entries. A triangular
    /// P would keep the leading minors, and with them the diagonal.
    fn shuffled(&self, rng: &mut ChaCha8Rng) -> GramForm {
        let f = self.field;
        let n = self.dim();
        let p = loop {
            let p: Matrix = (0..n).map(|_| (0..n).map(|_| f.from_i64(rng.gen_range(-2..=2))).collect()).collect();
            if linalg::rank(&p) == n {
                break p;
            }
        };
        let m = linalg::mul(&linalg::mul(&linalg::transpose(&p), &self.matrix), &p);
        GramForm { field: f, matrix: m }
    }
}

const CLASS_RETRIES: usize = 4;

/// Pivot choice for [`diagonalize_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pivot {
    First,
    Last,
}

pub fn diagonalize(form: &GramForm) -> Vec<Scalar> {
    diagonalize_with(form, Pivot::First)
}

/// Congruence diagonalization; zero entries come last.
pub fn diagonalize_with(form: &GramForm, pivot: Pivot) -> Vec<Scalar> {
    let f = form.field;
    let mut m = form.matrix.clone();
    let mut active: Vec<usize> = (0..form.dim()).collect();
    let mut out = Vec::new();
    while !active.is_empty() {
        let pick = |it: &mut dyn DoubleEndedIterator<Item = usize>| match pivot {
            Pivot::First => it.next(),
            Pivot::Last => it.next_back(),
        };
        let mut diag = active.iter().copied().filter(|&i| !m[i][i].is_zero());
        let i = match pick(&mut diag) {
            Some(i) => i,
            None => {
                let pairs: Vec<(usize, usize)> = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .filter(|&(i, j)| i < j && !m[i][j].is_zero())
                    .collect();
                let Some(&(i, j)) = (match pivot {
                    Pivot::First => pairs.first(),
                    Pivot::Last => pairs.last(),
                }) else {
                    break;
                };
                // e_i ↦ e_i + e_j makes the (i,i) entry 2·m_ij ≠ 0
                for k in 0..m.len() {
                    let t = m[j][k].clone();
                    m[i][k] = &m[i][k] + &t;
                }
                for row in m.iter_mut() {
                    let t = row[j].clone();
                    row[i] = &row[i] + &t;
                }
                i
            }
        };
        let piv = m[i][i].clone();
        let inv = piv.inv().unwrap();
        for &k in &active {
            if k == i || m[k][i].is_zero() {
                continue;
            }
            let c = &m[k][i] * &inv;
            for l in 0..m.len() {
                let t = &m[i][l] * &c;
                m[k][l] = &m[k][l] - &t;
            }
            for row in m.iter_mut() {
                let t = &row[i] * &c;
                row[k] = &row[k] - &t;
            }
        }
        out.push(piv);
        active.retain(|&k| k != i);
    }
    out.resize(form.dim(), f.zero());
    out
}

/// A place of ℚ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Prime(BigUint),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Hilbert symbol (a, b)_v of nonzero rationals.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: &Place) -> Result<i8> {
    if a.numer().sign() == num_bigint::Sign::NoSign || b.numer().sign() == num_bigint::Sign::NoSign {
        return Err(Error::ZeroArgument);
    }
    let ai = a.numer() * a.denom();
    let bi = b.numer() * b.denom();
    Ok(match place {
        Place::Real => hilbert_at_infinity(&ai, &bi),
        Place::Prime(p) => hilbert_at_prime(&ai, &bi, p),
    })
}

/// Invariants of a (possibly degenerate) symmetric form.
#[derive(Clone, Debug)]
pub struct FormClass {
    pub field: BaseField,
    pub rank: usize,
    /// Dimension of the radical; nonzero flags a degenerate form.
    pub nullity: usize,
    /// Canonical square-class representative of the product of the
    /// nonzero diagonal entries.
    pub disc: Scalar,
    pub signature: Option<i64>,
    /// Hasse–Witt symbols ∏_{i<j}(a_i, a_j)_v at the computed places;
    /// +1 everywhere else.
    pub hasse: BTreeMap<Place, i8>,
    /// Composite cofactors left unfactored; invariants at their prime
    /// divisors are unknown when non-empty.
    pub unresolved: Vec<BigUint>,
}

impl FormClass {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }

    /// Takes the Hasse symbols at the primes of each unresolved cofactor
    /// from `other`, a class of the same form, when none of its own
    /// unresolved cofactors share a prime with it.
    fn cover_with(&mut self, other: &FormClass) {
        let mut open = Vec::new();
        for u in std::mem::take(&mut self.unresolved) {
            if other.unresolved.iter().any(|v| !v.gcd(&u).is_one()) {
                open.push(u);
                continue;
            }
            for (place, s) in &other.hasse {
                if let Place::Prime(p) = place {
                    if (&u % p).is_zero() {
                        self.hasse.insert(place.clone(), *s);
                    }
                }
            }
        }
        self.unresolved = open;
    }

    pub fn is_degenerate(&self) -> bool {
        self.nullity > 0
    }

    pub fn hasse_at(&self, place: &Place) -> i8 {
        self.hasse.get(place).copied().unwrap_or(1)
    }

    /// Places with Hasse symbol −1.
    pub fn nontrivial_places(&self) -> BTreeSet<Place> {
        self.hasse.iter().filter(|(_, &s)| s < 0).map(|(p, _)| p.clone()).collect()
    }

    pub fn zero(field: BaseField) -> Self {
        invariants(field, &[])
    }
}

impl PartialEq for FormClass {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field
            && self.rank == o.rank
            && self.nullity == o.nullity
            && self.disc == o.disc
            && self.signature == o.signature
            && self.nontrivial_places() == o.nontrivial_places()
    }
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {}, disc {}", self.rank, self.disc)?;
        if let Some(s) = self.signature {
            write!(f, ", signature {s}")?;
        }
        let bad: Vec<String> = self.nontrivial_places().iter().map(|p| p.to_string()).collect();
        if bad.is_empty() {
            write!(f, ", hasse trivial")?;
        } else {
            write!(f, ", hasse -1 at {{{}}}", bad.join(", "))?;
        }
        if !self.is_complete() {
            write!(f, " away from {} unfactored cofactors", self.unresolved.len())?;
        }
        if self.nullity > 0 {
            write!(f, ", DEGENERATE (nullity {})", self.nullity)?;
        }
        Ok(())
    }
}

impl Serialize for FormClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FormClass", 7)?;
        st.serialize_field("field", &self.field.to_string())?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("disc", &self.disc.to_string())?;
        if let Some(sig) = self.signature {
            st.serialize_field("signature", &sig)?;
        }
        let hasse: Vec<(String, i8)> = self.hasse.iter().map(|(p, v)| (p.to_string(), *v)).collect();
        st.serialize_field("hasse", &hasse)?;
        st.serialize_field("nullity", &self.nullity)?;
        let unresolved: Vec<String> = self.unresolved.iter().map(|c| c.to_string()).collect();
        st.serialize_field("unresolved", &unresolved)?;
        st.end()
    }
}

fn smallest_nonresidue(p: u64) -> u64 {
    let f = BaseField::Prime(p);
    (2..p).find(|&n| !f.from_i64(n as i64).is_square()).unwrap()
}

fn canonical_fp_disc(d: &Scalar, p: u64) -> Scalar {
    let f = BaseField::Prime(p);
    if d.is_square() {
        f.one()
    } else {
        f.from_i64(smallest_nonresidue(p) as i64)
    }
}

/// Invariants of ⟨a₁,…,aₙ⟩ (zero entries count toward the nullity).
pub fn invariants(field: BaseField, diag: &[Scalar]) -> FormClass {
    let nonzero: Vec<&Scalar> = diag.iter().filter(|a| !a.is_zero()).collect();
    let rank = nonzero.len();
    let nullity = diag.len() - rank;
    match field {
        BaseField::Prime(p) => {
            let prod = nonzero.iter().fold(field.one(), |acc, a| &acc * *a);
            FormClass {
                field,
                rank,
                nullity,
                disc: canonical_fp_disc(&prod, p),
                signature: None,
                hasse: BTreeMap::new(),
                unresolved: Vec::new(),
            }
        }
        BaseField::Rationals => {
            let classes = square_classes(&nonzero.iter().map(|a| a.as_rational().unwrap()).collect::<Vec<_>>());
            let vals: Vec<BigInt> = classes.iter().map(|c| c.value.clone()).collect();
            let disc = vals.iter().fold(BigInt::from(1), |acc, v| product_class(&acc, v));
            let signature =
                nonzero.iter().map(|a| if a.as_rational().unwrap().is_positive() { 1 } else { -1 }).sum();
            let mut places: BTreeSet<Place> = BTreeSet::new();
            places.insert(Place::Real);
            places.insert(Place::Prime(BigUint::from(2u32)));
            let mut unresolved = Vec::new();
            for c in &classes {
                places.extend(c.primes.iter().cloned().map(Place::Prime));
                unresolved.extend(c.unresolved.iter().cloned());
            }
            unresolved.sort();
            unresolved.dedup();
            let mut hasse = BTreeMap::new();
            for place in places {
                let mut s = 1i8;
                for i in 0..vals.len() {
                    for j in i + 1..vals.len() {
                        s *= symbol_int(&vals[i], &vals[j], &place);
                    }
                }
                hasse.insert(place, s);
            }
            FormClass {
                field,
                rank,
                nullity,
                disc: Scalar::Q(BigRational::from_integer(disc)),
                signature: Some(signature),
                hasse,
                unresolved,
            }
        }
    }
}

fn symbol_int(a: &BigInt, b: &BigInt, place: &Place) -> i8 {
    match place {
        Place::Real => hilbert_at_infinity(a, b),
        Place::Prime(p) => hilbert_at_prime(a, b, p),
    }
}

/// Orthogonal sum at the level of invariants.
pub fn add_forms(x: &FormClass, y: &FormClass) -> Result<FormClass> {
    if x.field != y.field {
        return Err(Error::FieldMismatch);
    }
    let mut out = FormClass {
        field: x.field,
        rank: x.rank + y.rank,
        nullity: x.nullity + y.nullity,
        disc: x.disc.clone(),
        signature: x.signature.zip(y.signature).map(|(a, b)| a + b),
        hasse: BTreeMap::new(),
        unresolved: [x.unresolved.clone(), y.unresolved.clone()].concat(),
    };
    out.unresolved.sort();
    out.unresolved.dedup();
    match x.field {
        BaseField::Prime(p) => {
            out.disc = canonical_fp_disc(&(&x.disc * &y.disc), p);
        }
        BaseField::Rationals => {
            let dx = x.disc.as_rational().unwrap().to_integer();
            let dy = y.disc.as_rational().unwrap().to_integer();
            out.disc = Scalar::Q(BigRational::from_integer(product_class(&dx, &dy)));
            let mut places: BTreeSet<Place> = x.hasse.keys().chain(y.hasse.keys()).cloned().collect();
            for d in [&dx, &dy] {
                places.extend(square_class(&BigRational::from_integer(d.clone())).primes.into_iter().map(Place::Prime));
            }
            places.insert(Place::Real);
            places.insert(Place::Prime(BigUint::from(2u32)));
            for place in places {
                let s = x.hasse_at(&place) * y.hasse_at(&place) * symbol_int(&dx, &dy, &place);
                out.hasse.insert(place, s);
            }
        }
    }
    Ok(out)
}

/// Sum of a list of classes (the zero form for an empty list).
pub fn sum_forms<'a>(field: BaseField, it: impl IntoIterator<Item = &'a FormClass>) -> Result<FormClass> {
    it.into_iter().try_fold(FormClass::zero(field), |acc, c| add_forms(&acc, c))
}

/// m·𝐇 = m⟨1⟩ + m⟨−1⟩.
pub fn hyperbolic(field: BaseField, m: usize) -> FormClass {
    let mut diag = vec![field.one(); m];
    diag.extend(vec![field.from_i64(-1); m]);
    invariants(field, &diag)
}

/// Outcome of [`is_multiple_of_h`], with the failing invariants named.
#[derive(Clone, Debug, Serialize)]
pub struct HyperbolicCheck {
    pub holds: bool,
    pub m: usize,
    pub mismatches: Vec<String>,
}

/// Whether `cls` is isometric to m·𝐇; over 𝔽p rank and disc decide.
pub fn is_multiple_of_h(cls: &FormClass, m: usize) -> HyperbolicCheck {
    let want = hyperbolic(cls.field, m);
    let mut mismatches = Vec::new();
    if cls.nullity > 0 {
        mismatches.push(format!("degenerate: nullity {}", cls.nullity));
    }
    if cls.rank != want.rank {
        mismatches.push(format!("rank {} != {}", cls.rank, want.rank));
    }
    if cls.disc != want.disc {
        mismatches.push(format!("disc {} != {}", cls.disc, want.disc));
    }
    if cls.signature != want.signature {
        mismatches.push(format!("signature {:?} != {:?}", cls.signature, want.signature));
    }
    if cls.nontrivial_places() != want.nontrivial_places() {
        let got: Vec<String> = cls.nontrivial_places().iter().map(|p| p.to_string()).collect();
        let exp: Vec<String> = want.nontrivial_places().iter().map(|p| p.to_string()).collect();
        mismatches.push(format!("hasse -1 at {got:?}, expected {exp:?}"));
    }
    if !cls.is_complete() {
        mismatches.push("factorization incomplete".into());
    }
    HyperbolicCheck { holds: mismatches.is_empty(), m, mismatches }
}

/// Gram matrix of (x, y) ↦ Tr_{L/k}(a·x·y) on the root-monomial basis of
/// a's tower.
pub fn trace_form(a: &FieldElement) -> Result<GramForm> {
    if a.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let field = a.field();
    let n = field.degree();
    let basis: Vec<FieldElement> = (0..n).map(|i| field.basis(i)).collect();
    let mut m = linalg::zeros(field.base(), n, n);
    for i in 0..n {
        let ai = a * &basis[i];
        for j in i..n {
            let t = (&ai * &basis[j]).trace_to_base();
            m[i][j] = t.clone();
            m[j][i] = t;
        }
    }
    GramForm::new(field.base(), m)
}

/// ⟨a⟩ pushed down to the base: invariants of Tr_{L/k}⟨a⟩.
pub fn trace_class(a: &FieldElement) -> Result<FormClass> {
    Ok(trace_form(a)?.class())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{Adjoined, FieldDescriptor};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: BaseField = BaseField::Rationals;

    fn diag(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Q.from_i64(x)).collect()
    }

    fn gram(rows: &[&[i64]]) -> GramForm {
        GramForm::new(Q, rows.iter().map(|r| r.iter().map(|&x| Q.from_i64(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn diagonalize_examples() {
        let h = gram(&[&[0, 1], &[1, 0]]);
        let c = h.class();
        assert_eq!((c.rank, c.disc.clone(), c.signature), (2, Q.from_i64(-1), Some(0)));
        assert_eq!(diagonalize(&gram(&[&[2, 0], &[0, 4]])), diag(&[2, 4]));
        assert_eq!(invariants(Q, &diag(&[2, 4])), invariants(Q, &diag(&[2, 1])));
        let d = diagonalize(&gram(&[&[1, 2], &[2, 4]]));
        assert_eq!(d, diag(&[1, 0]));
        assert_eq!(invariants(Q, &d).nullity, 1);
    }

    #[test]
    fn invariants_examples() {
        let c = invariants(Q, &diag(&[1, -1, 1, -1]));
        assert_eq!((c.rank, c.disc.clone(), c.signature), (4, Q.from_i64(1), Some(0)));
        let c = invariants(Q, &diag(&[2, 3]));
        assert_eq!((c.rank, c.disc.clone(), c.signature), (2, Q.from_i64(6), Some(2)));
        let c = invariants(Q, &diag(&[1, 1, 1, 1, -1, -1, -1, -1]));
        assert_eq!((c.rank, c.disc.clone(), c.signature), (8, Q.from_i64(1), Some(0)));
        assert!(c.nontrivial_places().is_empty());
    }

    #[test]
    fn hilbert_examples() {
        let one = BigRational::from_integer(1.into());
        let m1 = BigRational::from_integer((-1).into());
        for b in [-7i64, 2, 3, 10] {
            let b = BigRational::from_integer(b.into());
            for p in [Place::Real, Place::Prime(2u32.into()), Place::Prime(3u32.into())] {
                assert_eq!(hilbert_symbol(&one, &b, &p).unwrap(), 1);
            }
        }
        assert_eq!(hilbert_symbol(&m1, &m1, &Place::Real).unwrap(), -1);
        assert_eq!(hilbert_symbol(&m1, &m1, &Place::Prime(2u32.into())).unwrap(), -1);
        let z = BigRational::from_integer(0.into());
        assert_eq!(hilbert_symbol(&z, &one, &Place::Real), Err(Error::ZeroArgument));
    }

    #[test]
    fn hilbert_product_formula_and_bimultiplicativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let a: i64 = rng.gen_range(-60..60);
            let b: i64 = rng.gen_range(-60..60);
            let c: i64 = rng.gen_range(-60..60);
            if a == 0 || b == 0 || c == 0 {
                continue;
            }
            let (a, b, c) = (BigRational::from_integer(a.into()), BigRational::from_integer(b.into()), BigRational::from_integer(c.into()));
            let mut places = vec![Place::Real];
            places.extend(num_prime::nt_funcs::primes(64).into_iter().map(|p: u64| Place::Prime(p.into())));
            let mut prod = 1;
            for v in &places {
                let ab = hilbert_symbol(&a, &b, v).unwrap();
                assert_eq!(ab, hilbert_symbol(&b, &a, v).unwrap());
                let ac = hilbert_symbol(&a, &c, v).unwrap();
                assert_eq!(hilbert_symbol(&a, &(&b * &c), v).unwrap(), ab * ac);
                prod *= ab;
            }
            assert_eq!(prod, 1);
        }
    }

    #[test]
    fn multiple_of_h_examples() {
        assert!(is_multiple_of_h(&invariants(Q, &diag(&[2, -2])), 1).holds);
        assert!(!is_multiple_of_h(&invariants(Q, &diag(&[1, 1])), 1).holds);
        assert!(is_multiple_of_h(&invariants(Q, &diag(&[1, -1, 2, -2, 3, -3, 6, -6])), 4).holds);
        let f7 = BaseField::prime(7).unwrap();
        let c = invariants(f7, &[f7.from_i64(3), f7.from_i64(4)]);
        // 3·4 = 12 ≡ 5, a non-residue; −1 ≡ 6 is also a non-residue mod 7
        assert!(is_multiple_of_h(&c, 1).holds);
    }

    #[test]
    fn add_forms_examples() {
        let h = hyperbolic(Q, 1);
        let hh = add_forms(&h, &h).unwrap();
        assert_eq!((hh.rank, hh.disc.clone(), hh.signature), (4, Q.from_i64(1), Some(0)));
        assert_eq!(hh, hyperbolic(Q, 2));
        let s = add_forms(&invariants(Q, &diag(&[1])), &invariants(Q, &diag(&[-1]))).unwrap();
        assert_eq!(s, h);
        let s = add_forms(&invariants(Q, &diag(&[2])), &invariants(Q, &diag(&[3]))).unwrap();
        assert_eq!(s, gram(&[&[2, 0], &[0, 3]]).class());
        let f5 = BaseField::prime(5).unwrap();
        assert_eq!(add_forms(&h, &hyperbolic(f5, 1)).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn add_forms_matches_direct_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.gen_range(1..5);
            let m = rng.gen_range(1..5);
            let mut pick = |k: usize| -> Vec<Scalar> {
                (0..k).map(|_| loop {
                    let v: i64 = rng.gen_range(-30..30);
                    if v != 0 { break Q.from_i64(v) }
                }).collect()
            };
            let a = pick(n);
            let b = pick(m);
            let sum = add_forms(&invariants(Q, &a), &invariants(Q, &b)).unwrap();
            let both: Vec<Scalar> = a.iter().chain(&b).cloned().collect();
            assert_eq!(sum, invariants(Q, &both));
            let c = invariants(Q, &pick(2));
            let l = add_forms(&add_forms(&invariants(Q, &a), &invariants(Q, &b)).unwrap(), &c).unwrap();
            let r = add_forms(&invariants(Q, &a), &add_forms(&invariants(Q, &b), &c).unwrap()).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn pivot_order_does_not_matter() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let n = rng.gen_range(2..6);
            let mut m = linalg::zeros(Q, n, n);
            for i in 0..n {
                for j in i..n {
                    let v = Q.from_i64(rng.gen_range(-6..7));
                    m[i][j] = v.clone();
                    m[j][i] = v;
                }
            }
            let g = GramForm::new(Q, m).unwrap();
            let a = invariants(Q, &diagonalize_with(&g, Pivot::First));
            let b = invariants(Q, &diagonalize_with(&g, Pivot::Last));
            assert_eq!(a, b);
            assert_eq!(a.rank, g.rank());
        }
    }

    fn ext(f: &FieldDescriptor, d: i64) -> FieldDescriptor {
        match f.adjoin_sqrt(&f.from_i64(d)).unwrap() {
            Adjoined::Extended(g) => g,
            _ => panic!(),
        }
    }

    #[test]
    fn trace_form_examples() {
        let q = FieldDescriptor::rationals();
        assert_eq!(trace_form(&q.from_i64(5)).unwrap(), gram(&[&[5]]));
        let q2 = ext(&q, 2);
        assert_eq!(trace_form(&q2.one()).unwrap(), gram(&[&[2, 0], &[0, 4]]));
        let t = trace_form(&q2.generator(0)).unwrap();
        assert_eq!(t, gram(&[&[0, 4], &[4, 0]]));
        assert!(is_multiple_of_h(&t.class(), 1).holds);
        assert_eq!(trace_form(&q2.zero()).unwrap_err(), Error::ZeroScalar);
    }

    #[test]
    fn trace_form_depends_on_square_class_only() {
        let q = FieldDescriptor::rationals();
        let k = ext(&ext(&q, 2), 5);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let rnd = |rng: &mut ChaCha8Rng| {
                k.element((0..4).map(|_| Q.from_i64(rng.gen_range(-4..5))).collect()).unwrap()
            };
            let a = rnd(&mut rng);
            let c = rnd(&mut rng);
            if a.is_zero() || c.is_zero() {
                continue;
            }
            assert_eq!(trace_class(&(&a * &c.square())).unwrap(), trace_class(&a).unwrap());
        }
        for d in [2i64, 3, -1, 7, -6] {
            let kd = ext(&q, d);
            let want = invariants(Q, &diag(&[2, 2 * d]));
            assert_eq!(trace_class(&kd.one()).unwrap(), want, "d = {d}");
        }
    }
}
