//! Coaklay's closed-form solution of the problem of Apollonius.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactfield::{FieldDescriptor, FieldElement};
use crate::localindex::{self, TangencyData};
use crate::moduli::{self, center_radius, circle_from, cone_of, config_check, Circle, ConfigStatus, Point};

/// One of the three input objects.
#[derive(Clone, Debug)]
pub enum InputObject {
    Circle(Circle),
    Point(Point),
}

impl InputObject {
    pub fn circle(a: &FieldElement, b: &FieldElement, r2: &FieldElement) -> Self {
        InputObject::Circle(circle_from(a, b, r2))
    }

    pub fn point(x: &FieldElement, y: &FieldElement) -> Self {
        InputObject::Point(Point::new(x.clone(), y.clone()))
    }

    pub fn is_point(&self) -> bool {
        matches!(self, InputObject::Point(_))
    }

    pub fn center(&self) -> (FieldElement, FieldElement) {
        match self {
            InputObject::Circle(c) => {
                let (a, b, _) = center_radius(c).expect("input circles are non-degenerate");
                (a, b)
            }
            InputObject::Point(p) => (p.x.clone(), p.y.clone()),
        }
    }

    pub fn r2(&self) -> FieldElement {
        match self {
            InputObject::Circle(c) => center_radius(c).expect("input circles are non-degenerate").2,
            InputObject::Point(p) => p.x.field().zero(),
        }
    }

    /// Points become radius-zero circles.
    pub fn as_circle(&self) -> Circle {
        match self {
            InputObject::Circle(c) => c.clone(),
            InputObject::Point(p) => circle_from(&p.x, &p.y, &p.x.field().zero()),
        }
    }

    pub fn field(&self) -> FieldDescriptor {
        self.center().0.field().clone()
    }
}

/// Three inputs over a common base field.
#[derive(Clone, Debug)]
pub struct Configuration {
    pub objects: [InputObject; 3],
}

impl Configuration {
    pub fn new(objects: [InputObject; 3]) -> Result<Self> {
        let f = objects[0].field();
        if objects.iter().any(|o| o.field() != f) || !f.is_base() {
            return Err(Error::FieldMismatch);
        }
        if let Some(c) = objects.iter().find_map(|o| match o {
            InputObject::Circle(c) => Some(c),
            _ => None,
        }) {
            if c.is_degenerate() {
                return Err(Error::DegenerateCircle);
            }
        }
        Ok(Configuration { objects })
    }

    /// Three circles given as (a, b, r²) strings.
    pub fn circles(field: &FieldDescriptor, data: [(&str, &str, &str); 3]) -> Result<Self> {
        let mut objs = Vec::new();
        for (a, b, r2) in data {
            objs.push(InputObject::circle(&field.parse(a)?, &field.parse(b)?, &field.parse(r2)?));
        }
        Configuration::new(objs.try_into().unwrap())
    }

    pub fn field(&self) -> FieldDescriptor {
        self.objects[0].field()
    }

    pub fn centers(&self) -> [(FieldElement, FieldElement); 3] {
        std::array::from_fn(|i| self.objects[i].center())
    }

    pub fn radii_squared(&self) -> [FieldElement; 3] {
        std::array::from_fn(|i| self.objects[i].r2())
    }

    pub fn as_circles(&self) -> [Circle; 3] {
        std::array::from_fn(|i| self.objects[i].as_circle())
    }

    pub fn point_count(&self) -> usize {
        self.objects.iter().filter(|o| o.is_point()).count()
    }

    pub fn check(&self) -> ConfigStatus {
        config_check(&self.as_circles())
    }
}

/// A choice of square roots r_i of the radii squared.
#[derive(Clone, Debug)]
pub struct Radii {
    pub field: FieldDescriptor,
    pub r: [FieldElement; 3],
}

impl Radii {
    /// True when every r_i lies in the base field.
    pub fn is_split(&self) -> bool {
        self.r.iter().all(|r| r.descend().field().is_base())
    }

    pub fn negated(&self) -> Radii {
        Radii { field: self.field.clone(), r: self.r.each_ref().map(|r| -r) }
    }
}

/// Takes the canonical root of each r_i², adjoining roots as needed;
/// `branches[i] = −1` picks the other root.
pub fn choose_radii(cfg: &Configuration, branches: [i8; 3]) -> Result<Radii> {
    let mut field = cfg.field();
    let mut roots = Vec::new();
    for r2 in cfg.radii_squared() {
        if r2.is_zero() {
            roots.push(field.zero());
            continue;
        }
        let (f, w) = field.with_sqrt(&r2)?;
        field = f;
        roots.push(w);
    }
    let r = std::array::from_fn(|i| {
        let w = roots[i].lift_to(&field).unwrap();
        if branches[i] < 0 {
            -&w
        } else {
            w
        }
    });
    Ok(Radii { field, r })
}

/// s with s₁ = +1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub [i8; 3]);

impl SignVector {
    pub const ALL: [SignVector; 4] =
        [SignVector([1, 1, 1]), SignVector([1, 1, -1]), SignVector([1, -1, 1]), SignVector([1, -1, -1])];

    /// Position in the fixed order (1,1,1), (1,1,−1), (1,−1,1), (1,−1,−1).
    pub fn class(&self) -> usize {
        let n = self.normalized();
        Self::ALL.iter().position(|s| *s == n).unwrap()
    }

    pub fn normalized(&self) -> SignVector {
        if self.0[0] < 0 {
            SignVector(self.0.map(|x| -x))
        } else {
            *self
        }
    }

    pub fn flip(&self, i: usize) -> SignVector {
        let mut s = self.0;
        s[i] = -s[i];
        SignVector(s)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |x: i8| if x > 0 { '+' } else { '-' };
        write!(f, "({}{}{})", c(self.0[0]), c(self.0[1]), c(self.0[2]))
    }
}

impl Serialize for SignVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Polynomial in t with tower coefficients, low degree first.
#[derive(Clone, Debug)]
pub struct TPoly(pub Vec<FieldElement>);

impl TPoly {
    pub fn constant(c: FieldElement) -> Self {
        TPoly(vec![c])
    }

    pub fn t_times(c: FieldElement) -> Self {
        TPoly(vec![c.field().zero(), c])
    }

    fn trim(mut self) -> Self {
        while self.0.len() > 1 && self.0.last().unwrap().is_zero() {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        let t = self.clone().trim();
        if t.0.len() == 1 && t.0[0].is_zero() {
            None
        } else {
            Some(t.0.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.0.get(i).cloned().unwrap_or_else(|| self.0[0].field().zero())
    }

    pub fn eval(&self, t: &FieldElement) -> FieldElement {
        self.0.iter().rev().fold(t.field().zero(), |acc, c| &(&acc * t) + c)
    }

    pub fn scale(&self, c: &FieldElement) -> TPoly {
        TPoly(self.0.iter().map(|x| x * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(FieldElement::is_zero)
    }
}

impl Add for &TPoly {
    type Output = TPoly;
    fn add(self, o: &TPoly) -> TPoly {
        let n = self.0.len().max(o.0.len());
        TPoly((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect()).trim()
    }
}

impl Sub for &TPoly {
    type Output = TPoly;
    fn sub(self, o: &TPoly) -> TPoly {
        let n = self.0.len().max(o.0.len());
        TPoly((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect()).trim()
    }
}

impl Mul for &TPoly {
    type Output = TPoly;
    fn mul(self, o: &TPoly) -> TPoly {
        let zero = self.0[0].field().zero();
        let mut out = vec![zero; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        TPoly(out).trim()
    }
}

/// A₁, B₁, A₂, B₂, M, N as polynomials in t.
#[derive(Clone, Debug)]
pub struct FamilyCoefficients {
    pub a1: TPoly,
    pub b1: TPoly,
    pub a2: TPoly,
    pub b2: TPoly,
    pub m: TPoly,
    pub n: TPoly,
    /// s₁R₁
    pub shift: TPoly,
}

/// Coefficients with r_i replaced by t·r_i (everywhere, D_ij included)
/// when `degenerate = Some(i)`.
pub fn family_coefficients(
    centers: &[(FieldElement, FieldElement); 3],
    r: &[FieldElement; 3],
    s: SignVector,
    degenerate: Option<usize>,
) -> Result<FamilyCoefficients> {
    let delta = moduli::delta(centers);
    if delta.is_zero() {
        return Err(Error::CollinearCenters);
    }
    let field = r[0].field().clone();
    let c = |x: &FieldElement| TPoly::constant(x.lift_to(&field).unwrap());
    let rr: Vec<TPoly> = (0..3)
        .map(|j| {
            let v = r[j].clone();
            if degenerate == Some(j) {
                TPoly::t_times(v)
            } else {
                TPoly::constant(v)
            }
        })
        .collect();
    let sr: Vec<TPoly> = (0..3).map(|j| if s.0[j] > 0 { rr[j].clone() } else { rr[j].scale(&field.from_i64(-1)) }).collect();
    let [(a1, b1), (a2, b2), (a3, b3)] = centers.each_ref().map(|(a, b)| (c(a), c(b)));
    let sq = |p: &TPoly| p * p;
    let ab = [(&a1, &b1), (&a2, &b2), (&a3, &b3)];
    let dij = |i: usize, j: usize| {
        let (ai, bi) = ab[i];
        let (aj, bj) = ab[j];
        &(&(&(&sq(ai) - &sq(aj)) + &sq(bi)) - &sq(bj)) - &(&sq(&rr[i]) - &sq(&rr[j]))
    };
    let d12 = dij(0, 1);
    let d13 = dij(0, 2);
    let inv = delta.lift_to(&field).unwrap().inv().unwrap();
    let half_inv = &inv / &field.from_i64(2);
    let a1m = &(&(&sr[0] - &sr[1]) * &(&b1 - &b3)) - &(&(&sr[0] - &sr[2]) * &(&b1 - &b2));
    let b1m = &(&(&sr[0] - &sr[2]) * &(&a1 - &a2)) - &(&(&sr[0] - &sr[1]) * &(&a1 - &a3));
    let a2m = &(&(&b1 - &b3) * &d12) - &(&(&b1 - &b2) * &d13);
    let b2m = &(&(&a1 - &a2) * &d13) - &(&(&a1 - &a3) * &d12);
    let (ca1, cb1) = (a1m.scale(&inv), b1m.scale(&inv));
    let (ca2, cb2) = (a2m.scale(&half_inv), b2m.scale(&half_inv));
    let m = &(&(&ca1 * &sr[0]) + &ca2) - &a1;
    let n = &(&(&cb1 * &sr[0]) + &cb2) - &b1;
    Ok(FamilyCoefficients { a1: ca1, b1: cb1, a2: ca2, b2: cb2, m, n, shift: sr[0].clone() })
}

/// f(x) = L(x−s₁R₁)² − 2K(x−s₁R₁) − (M²+N²) as [x⁰, x¹, x²] coefficients.
pub fn family_quadratic(fc: &FamilyCoefficients) -> [TPoly; 3] {
    let one = TPoly::constant(fc.a1.0[0].field().one());
    let two = fc.a1.0[0].field().from_i64(2);
    let l = &(&one - &(&fc.a1 * &fc.a1)) - &(&fc.b1 * &fc.b1);
    let k = &(&fc.m * &fc.a1) + &(&fc.n * &fc.b1);
    let mn = &(&fc.m * &fc.m) + &(&fc.n * &fc.n);
    let h = &fc.shift;
    let x1 = (&(&l * h) + &k).scale(&(-&two));
    let x0 = &(&(&(&l * h) * h) + &(&k * h).scale(&two)) - &mn;
    [x0, x1, l]
}

/// The six quantities of Coaklay's construction.
#[derive(Clone, Debug)]
pub struct CoaklayCoefficients {
    pub a1: FieldElement,
    pub b1: FieldElement,
    pub a2: FieldElement,
    pub b2: FieldElement,
    pub m: FieldElement,
    pub n: FieldElement,
    pub shift: FieldElement,
}

pub fn coaklay_coefficients(
    centers: &[(FieldElement, FieldElement); 3],
    r: &[FieldElement; 3],
    s: SignVector,
) -> Result<CoaklayCoefficients> {
    let fc = family_coefficients(centers, r, s, None)?;
    Ok(CoaklayCoefficients {
        a1: fc.a1.coeff(0),
        b1: fc.b1.coeff(0),
        a2: fc.a2.coeff(0),
        b2: fc.b2.coeff(0),
        m: fc.m.coeff(0),
        n: fc.n.coeff(0),
        shift: fc.shift.coeff(0),
    })
}

/// f_s as [x⁰, x¹, x²].
pub fn coaklay_poly(c: &CoaklayCoefficients) -> [FieldElement; 3] {
    let fc = FamilyCoefficients {
        a1: TPoly::constant(c.a1.clone()),
        b1: TPoly::constant(c.b1.clone()),
        a2: TPoly::constant(c.a2.clone()),
        b2: TPoly::constant(c.b2.clone()),
        m: TPoly::constant(c.m.clone()),
        n: TPoly::constant(c.n.clone()),
        shift: TPoly::constant(c.shift.clone()),
    };
    family_quadratic(&fc).map(|p| p.coeff(0))
}

/// Roots of a quadratic over its tower, root 0 using the canonical
/// square root of the discriminant. Adjoins the root when needed.
pub fn quadratic_roots(f: &[FieldElement; 3]) -> Result<(FieldDescriptor, [FieldElement; 2])> {
    let [c0, c1, c2] = f;
    if c2.is_zero() {
        return Err(Error::InfiniteRadius);
    }
    let field = c2.field().clone();
    let disc = &c1.square() - &(&field.from_i64(4) * &(c2 * c0));
    if disc.is_zero() {
        return Err(Error::DegenerateSolution);
    }
    let (ext, w) = field.with_sqrt(&disc)?;
    let den = (c2 * &ext.from_i64(2)).lift_to(&ext)?;
    let mb = (-c1).lift_to(&ext)?;
    Ok((ext, [&(&mb + &w) / &den, &(&mb - &w) / &den]))
}

/// One tangent circle.
#[derive(Clone, Debug)]
pub struct ApolloniusSolution {
    pub sign: SignVector,
    pub root_index: usize,
    pub rho: FieldElement,
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub circle: Circle,
    /// Tower in which the solution was computed.
    pub field: FieldDescriptor,
    pub multiplicity: usize,
    pub tangency: Vec<TangencyData>,
}

impl ApolloniusSolution {
    /// Position 1..8 in the labeling (1,1,1)→{1,2}, …, (1,−1,−1)→{7,8}.
    pub fn label(&self) -> usize {
        2 * self.sign.class() + self.root_index + 1
    }

    /// Smallest prefix tower holding the circle's coordinates.
    pub fn residue_field(&self) -> FieldDescriptor {
        self.circle.field()
    }

    /// All data real under the standard embedding.
    pub fn is_real(&self) -> bool {
        self.field.embedding().is_some()
    }

    pub fn center(&self) -> (FieldElement, FieldElement) {
        (self.alpha.clone(), self.beta.clone())
    }
}

impl Serialize for ApolloniusSolution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ApolloniusSolution", 9)?;
        st.serialize_field("label", &self.label())?;
        st.serialize_field("sign", &self.sign)?;
        st.serialize_field("root_index", &self.root_index)?;
        st.serialize_field("rho", &self.rho)?;
        st.serialize_field("center", &[&self.alpha, &self.beta])?;
        st.serialize_field("circle", &self.circle)?;
        st.serialize_field("field", &self.field)?;
        st.serialize_field("real", &self.is_real())?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.serialize_field("tangency", &self.tangency)?;
        st.end()
    }
}

/// The two solutions of one sign class.
pub fn solve_sign(cfg: &Configuration, radii: &Radii, s: SignVector) -> Result<[ApolloniusSolution; 2]> {
    let centers = cfg.centers();
    let co = coaklay_coefficients(&centers, &radii.r, s)?;
    let f = coaklay_poly(&co);
    let (field, roots) = quadratic_roots(&f).map_err(|e| match e {
        Error::DegenerateSolution => match cfg.check() {
            ConfigStatus::TangentPair(i, j) => Error::TangentPair(i, j),
            _ => Error::DegenerateSolution,
        },
        e => e,
    })?;
    let lift = |x: &FieldElement| x.lift_to(&field).unwrap();
    let mk = |j: usize| -> Result<ApolloniusSolution> {
        let rho = roots[j].clone();
        let alpha = &(&lift(&co.a1) * &rho) + &lift(&co.a2);
        let beta = &(&lift(&co.b1) * &rho) + &lift(&co.b2);
        let circle = circle_from(&alpha, &beta, &rho.square());
        let mut sol = ApolloniusSolution {
            sign: s,
            root_index: j,
            rho,
            alpha,
            beta,
            circle,
            field: field.clone(),
            multiplicity: 1,
            tangency: Vec::new(),
        };
        for i in 0..3 {
            let tau = tangency_point(cfg, &sol, i)?;
            let (u, v) = localindex::uv(cfg, &sol, i, &tau);
            sol.tangency.push(TangencyData { tau, u, v });
        }
        Ok(sol)
    };
    Ok([mk(0)?, mk(1)?])
}

/// All eight tangent circles, each checked against the three cones.
pub fn solve_all(cfg: &Configuration, radii: &Radii) -> Result<Vec<ApolloniusSolution>> {
    match cfg.check() {
        ConfigStatus::Ok => {}
        ConfigStatus::CollinearCenters => return Err(Error::CollinearCenters),
        ConfigStatus::TangentPair(i, j) => return Err(Error::TangentPair(i, j)),
        ConfigStatus::DegenerateInput => return Err(Error::DegenerateCircle),
    }
    let mut sols = Vec::new();
    for s in SignVector::ALL {
        sols.extend(solve_sign(cfg, radii, s)?);
    }
    let cones: Vec<_> = cfg.as_circles().iter().map(|c| cone_of(c).unwrap()).collect();
    for sol in &sols {
        for cone in &cones {
            if !cone.eval(sol.circle.coords()).is_zero() {
                return Err(Error::Invalid(format!("solution {} is off a cone", sol.label())));
            }
        }
    }
    let n = sols.len();
    for i in 0..n {
        sols[i].multiplicity = (0..n).filter(|&j| sols[j].circle == sols[i].circle).count();
    }
    Ok(sols)
}

/// τ_i = z_i + λ(γ − z_i), λ = (d² + r_i² − ρ²)/(2d²).
pub fn tangency_point(cfg: &Configuration, sol: &ApolloniusSolution, i: usize) -> Result<Point> {
    let (a, b) = cfg.objects[i].center();
    let f = &sol.field;
    let (a, b) = (a.lift_to(f)?, b.lift_to(f)?);
    let (dx, dy) = (&sol.alpha - &a, &sol.beta - &b);
    let d2 = &dx.square() + &dy.square();
    if d2.is_zero() {
        return Err(Error::ConcentricDegeneracy(i + 1));
    }
    let r2 = cfg.objects[i].r2().lift_to(f)?;
    let lambda = &(&(&d2 + &r2) - &sol.rho.square()) / &(&f.from_i64(2) * &d2);
    Ok(Point::new(&a + &(&lambda * &dx), &b + &(&lambda * &dy)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    fn e(s: &str) -> FieldElement {
        q().parse(s).unwrap()
    }

    fn standard() -> Configuration {
        Configuration::circles(&q(), [("0", "0", "1"), ("4", "0", "1"), ("2", "3", "1")]).unwrap()
    }

    fn fig1() -> Configuration {
        Configuration::circles(&q(), [("0", "1/8", "49/64"), ("5/4", "0", "1"), ("1", "2", "1/4")]).unwrap()
    }

    #[test]
    fn delta_examples() {
        let z = |v: [(&str, &str); 3]| v.map(|(a, b)| (e(a), e(b)));
        assert_eq!(moduli::delta(&z([("0", "0"), ("1", "0"), ("0", "1")])), e("1"));
        assert!(moduli::delta(&z([("0", "0"), ("1", "1"), ("2", "2")])).is_zero());
    }

    #[test]
    fn worked_coefficients() {
        let cfg = standard();
        let radii = choose_radii(&cfg, [1, 1, 1]).unwrap();
        assert!(radii.is_split());
        let co = coaklay_coefficients(&cfg.centers(), &radii.r, SignVector([1, 1, 1])).unwrap();
        assert!(co.a1.is_zero() && co.b1.is_zero());
        assert_eq!((co.a2.clone(), co.b2.clone()), (e("2"), e("5/6")));
        assert_eq!((co.m.clone(), co.n.clone()), (e("2"), e("5/6")));
        // (x−1)² − 169/36
        let f = coaklay_poly(&co);
        assert_eq!(f, [e("-133/36"), e("-2"), e("1")]);
    }

    #[test]
    fn worked_solutions() {
        let cfg = standard();
        let radii = choose_radii(&cfg, [1, 1, 1]).unwrap();
        let [s0, s1] = solve_sign(&cfg, &radii, SignVector([1, 1, 1])).unwrap();
        assert_eq!(s0.rho, e("19/6"));
        assert_eq!(s1.rho, e("-7/6"));
        for s in [&s0, &s1] {
            assert_eq!(s.center(), (e("2"), e("5/6")));
            // ‖γ − z_i‖ = |ρ| ∓ r_i, compared squared
            for (a, b) in cfg.centers() {
                let d2 = &(&s.alpha - &a).square() + &(&s.beta - &b).square();
                assert_eq!(d2, e("169/36"));
            }
        }
        let tau = tangency_point(&cfg, &s1, 0).unwrap();
        assert_eq!((tau.x.clone(), tau.y.clone()), (e("12/13"), e("5/13")));
        let sols = solve_all(&cfg, &radii).unwrap();
        assert_eq!(sols.len(), 8);
        assert!(sols.iter().all(|s| s.multiplicity == 1));
    }

    #[test]
    fn tangency_points_lie_on_both_circles() {
        for cfg in [standard(), fig1()] {
            let radii = choose_radii(&cfg, [1, 1, 1]).unwrap();
            for sol in solve_all(&cfg, &radii).unwrap() {
                for (i, t) in sol.tangency.iter().enumerate() {
                    let (a, b) = cfg.objects[i].center();
                    let d1 = &(&t.tau.x - &a).square() + &(&t.tau.y - &b).square();
                    assert_eq!(d1, cfg.objects[i].r2());
                    let d2 = &(&t.tau.x - &sol.alpha).square() + &(&t.tau.y - &sol.beta).square();
                    assert_eq!(d2, sol.rho.square());
                    let cross = &(&(&t.tau.x - &a) * &(&sol.beta - &b)) - &(&(&t.tau.y - &b) * &(&sol.alpha - &a));
                    assert!(cross.is_zero());
                }
            }
        }
    }

    #[test]
    fn figure_one_has_four_real_circles() {
        let cfg = fig1();
        let radii = choose_radii(&cfg, [1, 1, 1]).unwrap();
        let sols = solve_all(&cfg, &radii).unwrap();
        assert_eq!(sols.len(), 8);
        assert_eq!(sols.iter().filter(|s| s.is_real()).count(), 4);
    }

    #[test]
    fn negated_radii_give_same_circles() {
        let cfg = fig1();
        let radii = choose_radii(&cfg, [1, 1, 1]).unwrap();
        let a = solve_all(&cfg, &radii).unwrap();
        let b = solve_all(&cfg, &radii.negated()).unwrap();
        for s in &a {
            assert_eq!(b.iter().filter(|t| t.circle == s.circle).count(), 1);
        }
        // f_{−s}(x) = f_s(−x)
        for s in SignVector::ALL {
            let p = coaklay_poly(&coaklay_coefficients(&cfg.centers(), &radii.r, s).unwrap());
            let n = coaklay_poly(&coaklay_coefficients(&cfg.centers(), &radii.negated().r, s).unwrap());
            assert_eq!(n, [p[0].clone(), -&p[1], p[2].clone()]);
        }
    }

    #[test]
    fn irrational_radii_build_towers() {
        let cfg = Configuration::circles(&q(), [("0", "0", "2"), ("5", "0", "3"), ("1", "4", "1")]).unwrap();
        let radii = choose_radii(&cfg, [1, 1, 1]).unwrap();
        assert!(!radii.is_split());
        assert_eq!(radii.field.depth(), 2);
        let sols = solve_all(&cfg, &radii).unwrap();
        assert_eq!(sols.len(), 8);
    }

    #[test]
    fn errors() {
        let col = Configuration::circles(&q(), [("0", "0", "1"), ("1", "0", "1"), ("2", "0", "1")]).unwrap();
        let radii = choose_radii(&col, [1, 1, 1]).unwrap();
        assert_eq!(solve_all(&col, &radii).unwrap_err(), Error::CollinearCenters);
        let tan = Configuration::circles(&q(), [("0", "0", "1"), ("2", "0", "1"), ("1", "5", "1")]).unwrap();
        let radii = choose_radii(&tan, [1, 1, 1]).unwrap();
        assert_eq!(solve_all(&tan, &radii).unwrap_err(), Error::TangentPair(1, 2));
        // all three rest on the x-axis
        let line = Configuration::circles(&q(), [("0", "1", "1"), ("4", "2", "4"), ("1", "1/2", "1/4")]).unwrap();
        let radii = choose_radii(&line, [1, 1, 1]).unwrap();
        assert_eq!(solve_all(&line, &radii).unwrap_err(), Error::InfiniteRadius);
    }

    #[test]
    fn point_inputs() {
        // three points: f_s is monic with roots ±circumradius
        let objs = [("0", "0"), ("1", "0"), ("0", "1")].map(|(x, y)| InputObject::point(&e(x), &e(y)));
        let cfg = Configuration::new(objs).unwrap();
        let radii = choose_radii(&cfg, [1, 1, 1]).unwrap();
        let co = coaklay_coefficients(&cfg.centers(), &radii.r, SignVector([1, 1, 1])).unwrap();
        assert!(co.a1.is_zero() && co.b1.is_zero());
        let p = coaklay_poly(&co);
        assert_eq!(p, [e("-1/2"), e("0"), e("1")]);
    }
}
