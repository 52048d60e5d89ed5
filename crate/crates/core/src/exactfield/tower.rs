//! Towers k(√d₁,…,√dₘ) over a base field, stored in the basis of
//! square-free products of the adjoined roots.
//!
//! Coordinate `i` of an element multiplies the product of the generators
//! whose bits are set in `i`, so the bottom half of a coordinate vector is
//! the subtower and the top half is the coefficient of the last root.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use super::scalar::{BaseField, Scalar};
use crate::error::{Error, Result};

/// Deepest tower the engine builds: three radii plus one root adjunction.
pub const MAX_DEPTH: usize = 4;

#[derive(Debug, PartialEq, Eq, Hash)]
struct Desc {
    base: BaseField,
    radicands: Vec<Vec<Scalar>>,
    embedding: Option<Vec<i8>>,
}

/// Cheap-to-clone handle on a quadratic tower.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldDescriptor(Arc<Desc>);

/// Result of [`FieldDescriptor::adjoin_sqrt`].
#[derive(Clone, Debug)]
pub enum Adjoined {
    AlreadySquare(FieldElement),
    Extended(FieldDescriptor),
}

impl FieldDescriptor {
    pub fn new(base: BaseField) -> Self {
        let embedding = base.is_rationals().then(Vec::new);
        FieldDescriptor(Arc::new(Desc { base, radicands: Vec::new(), embedding }))
    }

    pub fn rationals() -> Self {
        Self::new(BaseField::Rationals)
    }

    pub fn base(&self) -> BaseField {
        self.0.base
    }

    pub fn depth(&self) -> usize {
        self.0.radicands.len()
    }

    pub fn degree(&self) -> usize {
        1 << self.depth()
    }

    pub fn embedding(&self) -> Option<&[i8]> {
        self.0.embedding.as_deref()
    }

    pub fn is_base(&self) -> bool {
        self.depth() == 0
    }

    /// The radicand d_j as an element of the subtower below it.
    pub fn radicand(&self, j: usize) -> FieldElement {
        FieldElement { field: self.prefix(j), coords: self.0.radicands[j].clone() }
    }

    /// The subtower generated by the first `m` roots.
    pub fn prefix(&self, m: usize) -> FieldDescriptor {
        if m == self.depth() {
            return self.clone();
        }
        FieldDescriptor(Arc::new(Desc {
            base: self.0.base,
            radicands: self.0.radicands[..m].to_vec(),
            embedding: self.0.embedding.as_ref().map(|e| e[..m].to_vec()),
        }))
    }

    /// True if `self` is a subtower of `other` (same base, radicand prefix).
    pub fn is_prefix_of(&self, other: &FieldDescriptor) -> bool {
        self.0.base == other.0.base
            && self.depth() <= other.depth()
            && self.0.radicands[..] == other.0.radicands[..self.depth()]
    }

    pub fn zero(&self) -> FieldElement {
        self.scalar(self.base().zero())
    }

    pub fn one(&self) -> FieldElement {
        self.scalar(self.base().one())
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        self.scalar(self.base().from_i64(n))
    }

    pub fn scalar(&self, s: Scalar) -> FieldElement {
        let mut coords = vec![self.base().zero(); self.degree()];
        coords[0] = s;
        FieldElement { field: self.clone(), coords }
    }

    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        Ok(self.scalar(self.base().parse(s)?))
    }

    /// The formal root √d_j, j counted from 0.
    pub fn generator(&self, j: usize) -> FieldElement {
        let mut coords = vec![self.base().zero(); self.degree()];
        coords[1 << j] = self.base().one();
        FieldElement { field: self.clone(), coords }
    }

    pub fn element(&self, coords: Vec<Scalar>) -> Result<FieldElement> {
        if coords.len() != self.degree() || coords.iter().any(|c| c.field() != self.base()) {
            return Err(Error::FieldMismatch);
        }
        Ok(FieldElement { field: self.clone(), coords })
    }

    /// Builds an element from a label map such as {"1": "2", "r1*r2": "-1/3"}.
    pub fn from_labels(&self, map: &BTreeMap<String, String>) -> Result<FieldElement> {
        let mut coords = vec![self.base().zero(); self.degree()];
        for (label, value) in map {
            let idx = parse_label(label, self.depth()).ok_or_else(|| Error::Parse(label.clone()))?;
            coords[idx] = self.base().parse(value)?;
        }
        Ok(FieldElement { field: self.clone(), coords })
    }

    /// Adjoins √d, or returns a witness root if d is already a square.
    pub fn adjoin_sqrt(&self, d: &FieldElement) -> Result<Adjoined> {
        let d = d.lift_to(self)?;
        if d.is_zero() {
            return Err(Error::ZeroRadicand);
        }
        if let Some(w) = d.sqrt() {
            return Ok(Adjoined::AlreadySquare(w));
        }
        if self.depth() >= MAX_DEPTH {
            return Err(Error::TowerTooDeep(MAX_DEPTH));
        }
        let embedding = match &self.0.embedding {
            Some(e) if d.sign()? > 0 => {
                let mut e = e.clone();
                e.push(1);
                Some(e)
            }
            _ => None,
        };
        let mut radicands = self.0.radicands.clone();
        radicands.push(d.coords);
        Ok(Adjoined::Extended(FieldDescriptor(Arc::new(Desc {
            base: self.0.base,
            radicands,
            embedding,
        }))))
    }

    /// Adjoins √d if needed and returns the field with the chosen root.
    pub fn with_sqrt(&self, d: &FieldElement) -> Result<(FieldDescriptor, FieldElement)> {
        Ok(match self.adjoin_sqrt(d)? {
            Adjoined::AlreadySquare(w) => (self.clone(), w),
            Adjoined::Extended(f) => {
                let g = f.generator(f.depth() - 1);
                (f, g)
            }
        })
    }

    fn rads(&self) -> &[Vec<Scalar>] {
        &self.0.radicands
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base())?;
        if self.depth() > 0 {
            let parts: Vec<String> =
                (0..self.depth()).map(|j| format!("sqrt({})", self.radicand(j))).collect();
            write!(f, "({})", parts.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for FieldDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FieldDescriptor", 3)?;
        st.serialize_field("base", &self.base().to_string())?;
        let rads: Vec<FieldElement> = (0..self.depth()).map(|j| self.radicand(j)).collect();
        st.serialize_field("radicands", &rads)?;
        st.serialize_field("embedding", &self.0.embedding)?;
        st.end()
    }
}

pub fn label(idx: usize) -> String {
    if idx == 0 {
        return "1".into();
    }
    let parts: Vec<String> =
        (0..usize::BITS as usize).filter(|b| idx >> b & 1 == 1).map(|b| format!("r{}", b + 1)).collect();
    parts.join("*")
}

fn parse_label(s: &str, depth: usize) -> Option<usize> {
    if s.trim() == "1" {
        return Some(0);
    }
    let mut idx = 0usize;
    for part in s.split('*') {
        let j: usize = part.trim().strip_prefix('r')?.parse().ok()?;
        if j == 0 || j > depth || idx >> (j - 1) & 1 == 1 {
            return None;
        }
        idx |= 1 << (j - 1);
    }
    Some(idx)
}

// ---- coordinate kernels ----

fn add_c(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_c(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn neg_c(a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| -x).collect()
}

fn scale_c(a: &[Scalar], s: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| x * s).collect()
}

fn zero_c(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

fn mul_c(rads: &[Vec<Scalar>], a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if rads.len() >= 2 && matches!(a[0], Scalar::Q(_)) {
        return mul_q(rads, a, b);
    }
    mul_generic(rads, a, b)
}

fn mul_generic(rads: &[Vec<Scalar>], a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let level = rads.len();
    if level == 0 {
        return vec![&a[0] * &b[0]];
    }
    let h = a.len() / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let low = &rads[..level - 1];
    let mut out = if zero_c(a1) || zero_c(b1) {
        mul_generic(low, a0, b0)
    } else {
        let p11 = mul_generic(low, a1, b1);
        add_c(&mul_generic(low, a0, b0), &mul_generic(low, &p11, &rads[level - 1]))
    };
    let cross = add_c(&mul_generic(low, a0, b1), &mul_generic(low, a1, b0));
    out.extend(cross);
    out
}

// Over ℚ the product is taken in the basis of rescaled roots h_j = L_j·√d_j
// with L_j chosen so that every h_j² has integer coordinates; integer
// vectors then multiply without any gcd until the final conversion.

/// L^m = ∏_{j∈m} L_j for every basis index m.
fn monomial_scales(scales: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for l in scales {
        let up: Vec<BigInt> = out.iter().map(|x| x * l).collect();
        out.extend(up);
    }
    out
}

/// Integer coordinates in the rescaled basis and their common denominator.
fn to_scaled(a: &[Scalar], ms: &[BigInt]) -> (Vec<BigInt>, BigInt) {
    let qs: Vec<BigRational> = a.iter().zip(ms).map(|(x, m)| x.as_rational().unwrap() / m).collect();
    let den = qs.iter().fold(BigInt::one(), |l, q| num_integer::Integer::lcm(&l, q.denom()));
    let ints = qs.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    (ints, den)
}

fn mul_z(rads: &[Vec<BigInt>], a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let level = rads.len();
    if level == 0 {
        return vec![&a[0] * &b[0]];
    }
    let h = a.len() / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let low = &rads[..level - 1];
    let zero = |v: &[BigInt]| v.iter().all(Zero::is_zero);
    let add = |x: Vec<BigInt>, y: Vec<BigInt>| -> Vec<BigInt> { x.into_iter().zip(y).map(|(p, q)| p + q).collect() };
    let mut out = if zero(a1) || zero(b1) {
        mul_z(low, a0, b0)
    } else {
        let p11 = mul_z(low, a1, b1);
        add(mul_z(low, a0, b0), mul_z(low, &p11, &rads[level - 1]))
    };
    let cross = if zero(a1) {
        mul_z(low, a0, b1)
    } else if zero(b1) {
        mul_z(low, a1, b0)
    } else {
        add(mul_z(low, a0, b1), mul_z(low, a1, b0))
    };
    out.extend(cross);
    out
}

fn mul_q(rads: &[Vec<Scalar>], a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut scales: Vec<BigInt> = Vec::with_capacity(rads.len());
    let mut zrads: Vec<Vec<BigInt>> = Vec::with_capacity(rads.len());
    for d in rads {
        let ms = monomial_scales(&scales);
        let (ints, den) = to_scaled(d, &ms);
        // h² = L²·d with L = den has integer coordinates
        zrads.push(ints.into_iter().map(|x| x * &den).collect());
        scales.push(den);
    }
    let ms = monomial_scales(&scales);
    let (za, da) = to_scaled(a, &ms);
    let (zb, db) = to_scaled(b, &ms);
    let den = da * db;
    mul_z(&zrads, &za, &zb)
        .into_iter()
        .zip(&ms)
        .map(|(c, m)| Scalar::Q(BigRational::new(c * m, den.clone())))
        .collect()
}

fn inv_c(rads: &[Vec<Scalar>], a: &[Scalar]) -> Option<Vec<Scalar>> {
    let level = rads.len();
    if level == 0 {
        return a[0].inv().map(|x| vec![x]);
    }
    let h = a.len() / 2;
    let (a0, a1) = a.split_at(h);
    let low = &rads[..level - 1];
    let norm = sub_c(&mul_c(low, a0, a0), &mul_c(low, &mul_c(low, a1, a1), &rads[level - 1]));
    let ni = inv_c(low, &norm)?;
    let mut out = mul_c(low, a0, &ni);
    out.extend(neg_c(&mul_c(low, a1, &ni)));
    Some(out)
}

fn sqrt_c(rads: &[Vec<Scalar>], a: &[Scalar]) -> Option<Vec<Scalar>> {
    let level = rads.len();
    if level == 0 {
        return a[0].sqrt().map(|w| vec![w]);
    }
    let h = a.len() / 2;
    let (x, y) = a.split_at(h);
    let low = &rads[..level - 1];
    let d = &rads[level - 1];
    let zero = vec![a[0].field().zero(); h];
    if zero_c(y) {
        if let Some(w) = sqrt_c(low, x) {
            return Some([w, zero].concat());
        }
        let q = mul_c(low, x, &inv_c(low, d)?);
        return sqrt_c(low, &q).map(|w| [zero, w].concat());
    }
    let norm = sub_c(&mul_c(low, x, x), &mul_c(low, &mul_c(low, y, y), d));
    let n = sqrt_c(low, &norm)?;
    let half = a[0].field().from_i64(2).inv().expect("char 2 excluded");
    for cand in [add_c(x, &n), sub_c(x, &n)] {
        let cand = scale_c(&cand, &half);
        if let Some(u) = sqrt_c(low, &cand) {
            if zero_c(&u) {
                continue;
            }
            let two_u = add_c(&u, &u);
            let v = mul_c(low, y, &inv_c(low, &two_u)?);
            return Some([u, v].concat());
        }
    }
    None
}

// ---- real intervals ----

#[derive(Clone, Debug)]
struct Interval {
    lo: BigRational,
    hi: BigRational,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

fn round_down(x: &BigRational, k: u32) -> BigRational {
    let s = BigRational::from_integer(pow2(k));
    BigRational::new((x * &s).floor().to_integer(), pow2(k))
}

fn round_up(x: &BigRational, k: u32) -> BigRational {
    let s = BigRational::from_integer(pow2(k));
    BigRational::new((x * &s).ceil().to_integer(), pow2(k))
}

impl Interval {
    fn point(q: &BigRational) -> Self {
        Interval { lo: q.clone(), hi: q.clone() }
    }

    fn add(&self, o: &Interval, k: u32) -> Interval {
        Interval { lo: round_down(&(&self.lo + &o.lo), k), hi: round_up(&(&self.hi + &o.hi), k) }
    }

    fn mul(&self, o: &Interval, k: u32) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap();
        let hi = c.iter().max().unwrap();
        Interval { lo: round_down(lo, k), hi: round_up(hi, k) }
    }

    fn sqrt(&self, k: u32) -> Interval {
        let scale = BigRational::from_integer(pow2(2 * k));
        let lo = if self.lo.is_positive() {
            (&self.lo * &scale).floor().to_integer().sqrt()
        } else {
            BigInt::zero()
        };
        let c = (&self.hi * &scale).ceil().to_integer();
        let mut hi = c.sqrt();
        if &hi * &hi < c {
            hi += 1;
        }
        Interval { lo: BigRational::new(lo, pow2(k)), hi: BigRational::new(hi, pow2(k)) }
    }

    fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }
}

fn interval_c(rads: &[Vec<Scalar>], emb: &[i8], a: &[Scalar], k: u32) -> Interval {
    let level = rads.len();
    if level == 0 {
        return Interval::point(a[0].as_rational().expect("real interval over Q only"));
    }
    let h = a.len() / 2;
    let (x, y) = a.split_at(h);
    let low = &rads[..level - 1];
    let lowe = &emb[..level - 1];
    let ix = interval_c(low, lowe, x, k);
    if zero_c(y) {
        return ix;
    }
    let mut g = interval_c(low, lowe, &rads[level - 1], k + 2).sqrt(k + 2);
    if emb[level - 1] < 0 {
        g = g.neg();
    }
    let iy = interval_c(low, lowe, y, k + 2);
    ix.add(&iy.mul(&g, k + 1), k)
}

/// Element of a quadratic tower.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: FieldDescriptor,
    coords: Vec<Scalar>,
}

impl FieldElement {
    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        zero_c(&self.coords)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && zero_c(&self.coords[1..])
    }

    /// The value as a base scalar, if it lies in the base field.
    pub fn in_base(&self) -> Option<Scalar> {
        zero_c(&self.coords[1..]).then(|| self.coords[0].clone())
    }

    /// Reinterprets in a larger tower that has this one as a prefix.
    pub fn lift_to(&self, target: &FieldDescriptor) -> Result<FieldElement> {
        if self.field == *target {
            return Ok(self.clone());
        }
        let me = if self.field.is_prefix_of(target) { self.clone() } else { self.descend() };
        if !me.field.is_prefix_of(target) {
            return Err(Error::FieldMismatch);
        }
        let mut coords = me.coords;
        coords.resize(target.degree(), target.base().zero());
        Ok(FieldElement { field: target.clone(), coords })
    }

    /// Rewrites in the smallest prefix subtower containing the element.
    pub fn descend(&self) -> FieldElement {
        let mut m = self.field.depth();
        while m > 0 && zero_c(&self.coords[1 << (m - 1)..1 << m]) {
            m -= 1;
        }
        FieldElement { field: self.field.prefix(m), coords: self.coords[..1 << m].to_vec() }
    }

    fn aligned(&self, other: &FieldElement) -> (FieldDescriptor, Vec<Scalar>, Vec<Scalar>) {
        if self.field == other.field {
            return (self.field.clone(), self.coords.clone(), other.coords.clone());
        }
        if let Ok(a) = self.lift_to(&other.field) {
            return (other.field.clone(), a.coords, other.coords.clone());
        }
        if let Ok(b) = other.lift_to(&self.field) {
            return (self.field.clone(), self.coords.clone(), b.coords);
        }
        panic!("elements live in unrelated towers: {} and {}", self.field, other.field)
    }

    /// Combines two elements if their towers are nested.
    pub fn try_common(&self, other: &FieldElement) -> Result<(FieldElement, FieldElement)> {
        if let Ok(a) = self.lift_to(&other.field) {
            return Ok((a, other.clone()));
        }
        let b = other.lift_to(&self.field)?;
        Ok((self.clone(), b))
    }

    pub fn inv(&self) -> Option<FieldElement> {
        inv_c(self.field.rads(), &self.coords).map(|coords| FieldElement { field: self.field.clone(), coords })
    }

    pub fn square(&self) -> FieldElement {
        self * self
    }

    pub fn pow(&self, mut e: u32) -> FieldElement {
        let mut base = self.clone();
        let mut r = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            base = base.square();
            e >>= 1;
        }
        r
    }

    pub fn scale(&self, s: &Scalar) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: scale_c(&self.coords, s) }
    }

    /// Deterministic square root: the recursion witness, made positive
    /// under the embedding when the tower is real.
    pub fn sqrt(&self) -> Option<FieldElement> {
        let coords = sqrt_c(self.field.rads(), &self.coords)?;
        let w = FieldElement { field: self.field.clone(), coords };
        if self.field.embedding().is_some() && w.sign().ok()? < 0 {
            return Some(-&w);
        }
        Some(w)
    }

    pub fn is_square(&self) -> bool {
        sqrt_c(self.field.rads(), &self.coords).is_some()
    }

    /// Tr_{L/k}: the multiplication operator's trace is 2^m times the
    /// constant coordinate, since every root monomial permutes the basis
    /// off the diagonal.
    pub fn trace_to_base(&self) -> Scalar {
        let deg = self.field.base().from_i64(self.field.degree() as i64);
        &deg * &self.coords[0]
    }

    /// Matrix of multiplication by `self` in the root-monomial basis
    /// (column j is self · e_j).
    pub fn regular_matrix(&self) -> Vec<Vec<Scalar>> {
        let n = self.field.degree();
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| (self * &self.field.basis(j)).coords).collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Exact sign under the recorded real embedding.
    pub fn sign(&self) -> Result<i8> {
        let emb = self.field.embedding().ok_or(Error::NoEmbedding)?;
        if self.is_zero() {
            return Ok(0);
        }
        let mut k = 30;
        loop {
            let iv = interval_c(self.field.rads(), emb, &self.coords, k);
            if iv.lo.is_positive() {
                return Ok(1);
            }
            if iv.hi.is_negative() {
                return Ok(-1);
            }
            k *= 2;
        }
    }

    /// Enclosure of the real value at `bits` binary digits.
    pub fn real_interval(&self, bits: u32) -> Result<(BigRational, BigRational)> {
        let emb = self.field.embedding().ok_or(Error::NoEmbedding)?;
        let iv = interval_c(self.field.rads(), emb, &self.coords, bits);
        Ok((iv.lo, iv.hi))
    }

    /// Midpoint of the 30-bit enclosure, for display paths only.
    pub fn approx(&self) -> Result<f64> {
        let (lo, hi) = self.real_interval(30)?;
        let mid = (lo + hi) / BigRational::from_integer(2.into());
        Ok(mid.numer().to_f64().unwrap_or(f64::NAN) / mid.denom().to_f64().unwrap_or(f64::NAN))
    }

    /// Equality that also handles sibling towers P(√D₁), P(√D₂) when the
    /// identification of roots is forced. `None` means undecidable here.
    pub fn try_eq(&self, other: &FieldElement) -> Option<bool> {
        if self.field.base() != other.field.base() {
            return Some(false);
        }
        if let Ok((a, b)) = self.try_common(other) {
            return Some(a.coords == b.coords);
        }
        let x = self.descend();
        let y = other.descend();
        if let Ok((a, b)) = x.try_common(&y) {
            return Some(a.coords == b.coords);
        }
        let c = (0..x.field.depth().min(y.field.depth()))
            .take_while(|&j| x.field.rads()[j] == y.field.rads()[j])
            .count();
        if x.field.depth() != c + 1 || y.field.depth() != c + 1 {
            return None;
        }
        // after descent both top coefficients are nonzero, so x, y ∉ P
        let p = x.field.prefix(c);
        let h = p.degree();
        let split = |e: &FieldElement| {
            (
                FieldElement { field: p.clone(), coords: e.coords[..h].to_vec() },
                FieldElement { field: p.clone(), coords: e.coords[h..].to_vec() },
            )
        };
        let (x0, x1) = split(&x);
        let (y0, y1) = split(&y);
        let d1 = x.field.radicand(c);
        let d2 = y.field.radicand(c);
        let w = match (&d1 * &d2).sqrt() {
            Some(w) => w,
            None => return Some(false),
        };
        // √D₂ = ±(w/D₁)·√D₁; the sign needs the real embedding
        let ratio = &w / &d1;
        let ex = x.field.embedding()?;
        let ey = y.field.embedding()?;
        let sign = ratio.sign().ok()? * ex[c] * ey[c];
        let ratio = if sign < 0 { -&ratio } else { ratio };
        Some(x0.coords == y0.coords && x1.coords == (&y1 * &ratio).coords)
    }

    pub fn to_labels(&self) -> BTreeMap<String, String> {
        let mut map: BTreeMap<String, String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (label(i), c.to_string()))
            .collect();
        if map.is_empty() {
            map.insert("1".into(), self.coords[0].to_string());
        }
        map
    }
}

impl FieldDescriptor {
    /// The basis monomial with index `j`.
    pub fn basis(&self, j: usize) -> FieldElement {
        let mut coords = vec![self.base().zero(); self.degree()];
        coords[j] = self.base().one();
        FieldElement { field: self.clone(), coords }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.try_eq(other) == Some(true)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if i == 0 { c.to_string() } else { format!("({c})*{}", label(i)) })
            .collect();
        if terms.is_empty() {
            write!(f, "{}", self.coords[0])
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if let Some(b) = self.in_base() {
            return s.serialize_str(&b.to_string());
        }
        let labels = self.to_labels();
        let mut m = s.serialize_map(Some(labels.len()))?;
        for (k, v) in &labels {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        let (field, a, b) = self.aligned(rhs);
        FieldElement { field, coords: add_c(&a, &b) }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        let (field, a, b) = self.aligned(rhs);
        FieldElement { field, coords: sub_c(&a, &b) }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        let (field, a, b) = self.aligned(rhs);
        let coords = mul_c(field.rads(), &a, &b);
        FieldElement { field, coords }
    }
}

impl Div for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        let (field, a, b) = self.aligned(rhs);
        let bi = inv_c(field.rads(), &b).expect("division by zero");
        let coords = mul_c(field.rads(), &a, &bi);
        FieldElement { field, coords }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: neg_c(&self.coords) }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement { (&self).$m(&rhs) }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement { (&self).$m(rhs) }
        }
        impl $tr<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement { self.$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    fn extend(f: &FieldDescriptor, d: &FieldElement) -> FieldDescriptor {
        match f.adjoin_sqrt(d).unwrap() {
            Adjoined::Extended(g) => g,
            Adjoined::AlreadySquare(_) => panic!("expected extension"),
        }
    }

    fn q23() -> FieldDescriptor {
        let q2 = extend(&q(), &q().from_i64(2));
        extend(&q2, &q2.from_i64(3))
    }

    #[test]
    fn adjoin_examples() {
        match q().adjoin_sqrt(&q().from_i64(4)).unwrap() {
            Adjoined::AlreadySquare(w) => assert_eq!(w, q().from_i64(2)),
            _ => panic!(),
        }
        let f7 = FieldDescriptor::new(BaseField::prime(7).unwrap());
        assert!(matches!(f7.adjoin_sqrt(&f7.from_i64(3)).unwrap(), Adjoined::Extended(_)));
        let q2 = extend(&q(), &q().from_i64(2));
        match q2.adjoin_sqrt(&q2.from_i64(2)).unwrap() {
            Adjoined::AlreadySquare(w) => assert_eq!(w, q2.generator(0)),
            _ => panic!(),
        }
        assert_eq!(q().adjoin_sqrt(&q().zero()).unwrap_err(), Error::ZeroRadicand);
    }

    #[test]
    fn is_square_examples() {
        let f13 = FieldDescriptor::new(BaseField::prime(13).unwrap());
        assert!(f13.from_i64(5).sqrt().is_none());
        let q2 = extend(&q(), &q().from_i64(2));
        let a = &q2.from_i64(3) + &q2.generator(0).scale(&BaseField::Rationals.from_i64(2));
        let w = a.sqrt().unwrap();
        assert_eq!(w, &q2.one() + &q2.generator(0));
        assert_eq!(q().parse("9/4").unwrap().sqrt().unwrap(), q().parse("3/2").unwrap());
        assert_eq!(q().zero().sqrt().unwrap(), q().zero());
    }

    #[test]
    fn trace_examples_and_regular_representation() {
        let q2 = extend(&q(), &q().from_i64(2));
        assert_eq!(q2.generator(0).trace_to_base(), BaseField::Rationals.from_i64(0));
        assert_eq!(q2.one().trace_to_base(), BaseField::Rationals.from_i64(2));
        let k = q23();
        let a = &k.from_i64(5) + &k.generator(0) * &k.generator(1);
        assert_eq!(a.trace_to_base(), BaseField::Rationals.from_i64(20));
        let m = a.regular_matrix();
        let tr = (0..4).fold(BaseField::Rationals.zero(), |s, i| &s + &m[i][i]);
        assert_eq!(tr, BaseField::Rationals.from_i64(20));
    }

    #[test]
    fn sign_examples() {
        let q2 = extend(&q(), &q().from_i64(2));
        let r = q2.generator(0);
        assert_eq!(q2.zero().sign().unwrap(), 0);
        assert_eq!((&q2.one() - &r).sign().unwrap(), -1);
        let a = &q2.from_i64(3) - &r.scale(&BaseField::Rationals.from_i64(2));
        assert_eq!(a.sign().unwrap(), 1);
        let f7 = FieldDescriptor::new(BaseField::prime(7).unwrap());
        assert_eq!(f7.one().sign(), Err(Error::NoEmbedding));
        let nonreal = extend(&q(), &q().from_i64(-1));
        assert!(nonreal.embedding().is_none());
    }

    #[test]
    fn nearly_cancelling_sign() {
        // 99 - 70√2 ≈ 0.00505
        let q2 = extend(&q(), &q().from_i64(2));
        let a = &q2.from_i64(99) - &q2.generator(0).scale(&BaseField::Rationals.from_i64(70));
        assert_eq!(a.sign().unwrap(), 1);
        let b = &q2.from_i64(-19601) + &q2.generator(0).scale(&BaseField::Rationals.from_i64(13860));
        assert_eq!(b.sign().unwrap(), -1);
    }

    #[test]
    fn descent_between_towers() {
        let k = q23();
        let q2 = k.prefix(1);
        let a = &k.from_i64(7) + &k.generator(0);
        let b = &q2.from_i64(7) + &q2.generator(0);
        assert_eq!(a, b);
        assert_eq!(a.descend().field(), &q2);
    }

    #[test]
    fn sibling_towers_compare() {
        let k8 = extend(&q(), &q().from_i64(8));
        let k2 = extend(&q(), &q().from_i64(2));
        // √8 = 2√2 under the positive embedding
        let a = k8.generator(0);
        let b = k2.generator(0).scale(&BaseField::Rationals.from_i64(2));
        assert_eq!(a.try_eq(&b), Some(true));
        let k3 = extend(&q(), &q().from_i64(3));
        assert_eq!(k3.generator(0).try_eq(&k2.generator(0)), Some(false));
    }

    #[test]
    fn labels_roundtrip() {
        let k = q23();
        let a = &k.from_i64(1) + &(&k.generator(0) * &k.generator(1)).scale(&BaseField::Rationals.from_i64(-3));
        let map = a.to_labels();
        assert_eq!(map.get("r1*r2").unwrap(), "-3");
        assert_eq!(k.from_labels(&map).unwrap(), a);
        assert_eq!(serde_json_like(&q().parse("-3/4").unwrap()), "-3/4");
    }

    fn serde_json_like(e: &FieldElement) -> String {
        e.to_string()
    }

    fn random_elem(k: &FieldDescriptor, rng: &mut ChaCha8Rng) -> FieldElement {
        let coords = (0..k.degree())
            .map(|_| {
                let n: i64 = rng.gen_range(-9..=9);
                let d: i64 = rng.gen_range(1..=5);
                BaseField::Rationals.from_rational(&BigRational::new(n.into(), d.into())).unwrap()
            })
            .collect();
        k.element(coords).unwrap()
    }

    #[test]
    fn field_axioms_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let k = q23();
        let k = extend(&k, &(&k.from_i64(5) + &k.generator(0)));
        for _ in 0..40 {
            let a = random_elem(&k, &mut rng);
            let b = random_elem(&k, &mut rng);
            let c = random_elem(&k, &mut rng);
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                assert!((&a * &a.inv().unwrap()).is_one());
                let sq = a.square();
                let w = sq.sqrt().expect("square has a root");
                assert_eq!(w.square(), sq);
            }
            if !a.is_zero() && !b.is_zero() {
                let sab = (&a * &b).sign().unwrap();
                assert_eq!(sab, a.sign().unwrap() * b.sign().unwrap());
            }
        }
    }

    #[test]
    fn fp_tower_axioms() {
        let f = FieldDescriptor::new(BaseField::prime(13).unwrap());
        let k = extend(&f, &f.from_i64(5));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let coords = (0..2).map(|_| f.base().from_i64(rng.gen_range(0..13))).collect();
            let a = k.element(coords).unwrap();
            if !a.is_zero() {
                assert!((&a * &a.inv().unwrap()).is_one());
                assert_eq!(a.square().sqrt().unwrap().square(), a.square());
            }
        }
    }
}
