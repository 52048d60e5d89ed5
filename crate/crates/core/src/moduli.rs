//! The moduli space ℙ³ of circles: C(p) = p₀(x²+y²) + z(p₁x + p₂y + p₃z),
//! the cone of circles tangent to a circle, and the plane of circles
//! through a point.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactfield::{FieldDescriptor, FieldElement};

/// A point of the affine plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl Point {
    pub fn new(x: FieldElement, y: FieldElement) -> Self {
        Point { x, y }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [&self.x, &self.y].serialize(s)
    }
}

/// A point [c0:c1:c2:c3] of ℙ³, first nonzero coordinate scaled to 1.
#[derive(Clone, Debug)]
pub struct Circle {
    coords: [FieldElement; 4],
}

impl Circle {
    pub fn new(coords: [FieldElement; 4]) -> Result<Self> {
        let lead = coords.iter().find(|c| !c.is_zero()).ok_or(Error::Invalid("all circle coordinates vanish".into()))?;
        let inv = lead.inv().unwrap();
        let coords = coords.each_ref().map(|c| c * &inv);
        Ok(Circle { coords })
    }

    pub fn coords(&self) -> &[FieldElement; 4] {
        &self.coords
    }

    pub fn c(&self, i: usize) -> &FieldElement {
        &self.coords[i]
    }

    pub fn is_degenerate(&self) -> bool {
        self.coords[0].is_zero()
    }

    /// Smallest prefix tower holding every coordinate.
    pub fn field(&self) -> FieldDescriptor {
        self.coords
            .iter()
            .map(|c| c.descend().field().clone())
            .max_by_key(|f| f.depth())
            .unwrap()
    }

    /// The same circle with coordinates moved into the minimal tower.
    pub fn descended(&self) -> Circle {
        let f = self.field();
        Circle { coords: self.coords.each_ref().map(|c| c.lift_to(&f).unwrap_or_else(|_| c.clone())) }
    }
}

impl PartialEq for Circle {
    fn eq(&self, o: &Self) -> bool {
        self.coords.iter().zip(&o.coords).all(|(a, b)| a == b)
    }
}

impl fmt::Display for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.coords;
        write!(f, "[{a} : {b} : {c} : {d}]")
    }
}

impl Serialize for Circle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Circle", 1)?;
        st.serialize_field("coords", &self.coords)?;
        st.end()
    }
}

/// Center and radius squared of a non-degenerate circle.
pub fn center_radius(c: &Circle) -> Result<(FieldElement, FieldElement, FieldElement)> {
    if c.is_degenerate() {
        return Err(Error::DegenerateCircle);
    }
    let [c0, c1, c2, c3] = &c.coords;
    let f = c0.field();
    let two = f.from_i64(2);
    let a = -(c1 / &(&two * c0));
    let b = -(c2 / &(&two * c0));
    let r2 = &(&a.square() + &b.square()) - &(c3 / c0);
    Ok((a, b, r2))
}

/// [1 : −2a : −2b : a²+b²−r²].
pub fn circle_from(a: &FieldElement, b: &FieldElement, r2: &FieldElement) -> Circle {
    let one = a.field().one();
    let m2 = a.field().from_i64(-2);
    let c3 = &(&a.square() + &b.square()) - r2;
    Circle::new([one, &m2 * a, &m2 * b, c3]).unwrap()
}

/// Symmetric 4×4 form in (c0, c1, c2, c3).
#[derive(Clone, Debug)]
pub struct QuadricCone {
    pub gram: [[FieldElement; 4]; 4],
    pub apex: Circle,
}

fn outer(u: &[FieldElement; 4], v: &[FieldElement; 4]) -> [[FieldElement; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| &u[i] * &v[j]))
}

impl QuadricCone {
    pub fn eval(&self, x: &[FieldElement; 4]) -> FieldElement {
        let mut s = x[0].field().zero();
        for i in 0..4 {
            for j in 0..4 {
                s = &s + &(&(&self.gram[i][j] * &x[i]) * &x[j]);
            }
        }
        s
    }

    /// ∂/∂c_j of the form, j = 0..3.
    pub fn gradient(&self, x: &[FieldElement; 4]) -> [FieldElement; 4] {
        std::array::from_fn(|j| {
            let s = (0..4).fold(x[0].field().zero(), |s, i| &s + &(&self.gram[j][i] * &x[i]));
            &s + &s
        })
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<FieldElement>> = self.gram.iter().map(|r| r.to_vec()).collect();
        fe_rank(rows)
    }
}

/// Rank of a small matrix of tower elements.
pub fn fe_rank(mut m: Vec<Vec<FieldElement>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[r][c];
            for j in c..cols {
                let t = &m[r][j] * &f;
                m[i][j] = &m[i][j] - &t;
            }
        }
        r += 1;
    }
    r
}

/// The cone Q(p) of circles tangent to c: (aX+bY+Z)² − r²(X²+Y²).
pub fn cone_of(c: &Circle) -> Result<QuadricCone> {
    let (a, b, r2) = center_radius(c)?;
    let f = a.field().clone();
    let p = circle_from(&a, &b, &r2);
    let [_, p1, p2, p3] = p.coords.clone();
    let (zero, one) = (f.zero(), f.one());
    let l0 = -(&(&(&a * &p1) + &(&b * &p2)) + &p3);
    let ell = [l0, a.clone(), b.clone(), one.clone()];
    let xv = [-&p1, one.clone(), zero.clone(), zero.clone()];
    let yv = [-&p2, zero.clone(), one.clone(), zero];
    let ll = outer(&ell, &ell);
    let xx = outer(&xv, &xv);
    let yy = outer(&yv, &yv);
    let gram = std::array::from_fn(|i| std::array::from_fn(|j| &ll[i][j] - &(&r2 * &(&xx[i][j] + &yy[i][j]))));
    Ok(QuadricCone { gram, apex: p })
}

/// Coefficients of the plane of circles through a point.
#[derive(Clone, Debug)]
pub struct Hyperplane {
    pub coeffs: [FieldElement; 4],
}

impl Hyperplane {
    pub fn eval(&self, x: &[FieldElement; 4]) -> FieldElement {
        (0..4).fold(x[0].field().zero(), |s, i| &s + &(&self.coeffs[i] * &x[i]))
    }
}

/// [(a²+b²) : a : b : 1].
pub fn plane_through(a: &FieldElement, b: &FieldElement) -> Hyperplane {
    let f = a.field();
    Hyperplane { coeffs: [&a.square() + &b.square(), a.clone(), b.clone(), f.one()] }
}

/// Membership of `c2` in the cone of `c1`.
pub fn tangency_test(c1: &Circle, c2: &Circle) -> Result<bool> {
    if c2.is_degenerate() {
        return Err(Error::DegenerateCircle);
    }
    Ok(cone_of(c1)?.eval(&c2.coords).is_zero())
}

/// Δ = (a₁−a₂)(b₁−b₃) − (a₁−a₃)(b₁−b₂).
pub fn delta(z: &[(FieldElement, FieldElement); 3]) -> FieldElement {
    let [(a1, b1), (a2, b2), (a3, b3)] = z;
    &(&(a1 - a2) * &(b1 - b3)) - &(&(a1 - a3) * &(b1 - b2))
}

/// Transversality diagnosis of three input circles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ConfigStatus {
    Ok,
    CollinearCenters,
    TangentPair(usize, usize),
    DegenerateInput,
}

pub fn config_check(c: &[Circle; 3]) -> ConfigStatus {
    if c.iter().any(Circle::is_degenerate) {
        return ConfigStatus::DegenerateInput;
    }
    let z: Vec<(FieldElement, FieldElement)> =
        c.iter().map(|ci| center_radius(ci).map(|(a, b, _)| (a, b)).unwrap()).collect();
    if delta(&[z[0].clone(), z[1].clone(), z[2].clone()]).is_zero() {
        return ConfigStatus::CollinearCenters;
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if tangency_test(&c[i], &c[j]).unwrap() {
            return ConfigStatus::TangentPair(i + 1, j + 1);
        }
    }
    ConfigStatus::Ok
}

pub fn det3(m: &[[FieldElement; 3]; 3]) -> FieldElement {
    let t = |i: usize, j: usize, k: usize| &(&m[0][i] * &m[1][j]) * &m[2][k];
    let pos = &(&t(0, 1, 2) + &t(1, 2, 0)) + &t(2, 0, 1);
    let neg = &(&t(2, 1, 0) + &t(0, 2, 1)) + &t(1, 0, 2);
    &pos - &neg
}

/// The circle through three points; collinear points give the
/// degenerate circle containing their line.
pub fn circle_through_points(p: &[Point; 3]) -> Result<Circle> {
    let rows: Vec<[FieldElement; 4]> = p.iter().map(|q| plane_through(&q.x, &q.y).coeffs).collect();
    let minor = |skip: usize| {
        let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
        let m: [[FieldElement; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| rows[i][cols[j]].clone()));
        det3(&m)
    };
    let coords: [FieldElement; 4] = std::array::from_fn(|j| if j % 2 == 0 { minor(j) } else { -minor(j) });
    if coords.iter().all(FieldElement::is_zero) {
        return Err(Error::UnderDetermined);
    }
    Circle::new(coords)
}

/// Parameter of a directrix member: a field value or ∞.
#[derive(Clone, Debug)]
pub enum DirectrixParam {
    Finite(FieldElement),
    Infinity,
}

/// E_t: radius squared (2r)², center (a + r(1−t²)/(1+t²), b + 2rt/(1+t²)).
pub fn directrix_member(c: &Circle, t: &DirectrixParam) -> Result<Circle> {
    let (a, b, r2) = center_radius(c)?;
    let r = r2.sqrt().ok_or(Error::SquareRootUnavailable)?;
    let f = a.field().clone();
    let (ux, uy) = match t {
        DirectrixParam::Infinity => (f.from_i64(-1), f.zero()),
        DirectrixParam::Finite(t) => {
            let den = &f.one() + &t.square();
            if den.is_zero() {
                return Err(Error::PoleAtT);
            }
            (&(&f.one() - &t.square()) / &den, &(&f.from_i64(2) * t) / &den)
        }
    };
    let four = f.from_i64(4);
    Ok(circle_from(&(&a + &(&r * &ux)), &(&b + &(&r * &uy)), &(&four * &r2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{BaseField, Scalar};
    use crate::linalg;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    fn e(s: &str) -> FieldElement {
        q().parse(s).unwrap()
    }

    fn circ(a: &str, b: &str, r2: &str) -> Circle {
        circle_from(&e(a), &e(b), &e(r2))
    }

    fn coords(v: [&str; 4]) -> Circle {
        Circle::new(v.map(e)).unwrap()
    }

    fn pt(x: &str, y: &str) -> Point {
        Point::new(e(x), e(y))
    }

    #[test]
    fn center_radius_examples() {
        let (a, b, r2) = center_radius(&coords(["1", "-2", "-4", "1"])).unwrap();
        assert_eq!((a, b, r2), (e("1"), e("2"), e("4")));
        let (a, b, r2) = center_radius(&coords(["1", "0", "0", "0"])).unwrap();
        assert_eq!((a, b, r2), (e("0"), e("0"), e("0")));
        assert_eq!(coords(["2", "-4", "-8", "2"]), coords(["1", "-2", "-4", "1"]));
        assert_eq!(center_radius(&coords(["0", "0", "1", "0"])).unwrap_err(), Error::DegenerateCircle);
    }

    #[test]
    fn circle_from_examples() {
        assert_eq!(circ("0", "0", "1"), coords(["1", "0", "0", "-1"]));
        assert_eq!(circ("1", "2", "4"), coords(["1", "-2", "-4", "1"]));
        assert_eq!(circ("1/2", "1/2", "1/2"), coords(["1", "-1", "-1", "0"]));
    }

    #[test]
    fn cone_examples() {
        let cone = cone_of(&circ("0", "0", "1")).unwrap();
        assert!(cone.eval(circ("3", "0", "4").coords()).is_zero());
        assert!(!cone.eval(circ("5", "0", "1").coords()).is_zero());
        assert_eq!(cone.rank(), 3);
        let pc = cone_of(&circ("2", "-3", "0")).unwrap();
        let h = plane_through(&e("2"), &e("-3"));
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(pc.gram[i][j], &h.coeffs[i] * &h.coeffs[j]);
            }
        }
        assert_eq!(pc.rank(), 1);
    }

    #[test]
    fn plane_examples() {
        let h = plane_through(&e("0"), &e("0"));
        assert_eq!(h.coeffs.clone().map(|c| c.to_string()), ["0", "0", "0", "1"]);
        let h = plane_through(&e("1"), &e("0"));
        assert_eq!(h.coeffs.clone().map(|c| c.to_string()), ["1", "1", "0", "1"]);
        assert!(h.eval(circ("3", "0", "4").coords()).is_zero());
    }

    #[test]
    fn tangency_examples() {
        assert!(tangency_test(&circ("0", "0", "1"), &circ("2", "0", "1")).unwrap());
        assert!(!tangency_test(&circ("0", "0", "1"), &circ("1", "0", "1")).unwrap());
        assert!(!tangency_test(&circ("0", "0", "1"), &circ("0", "0", "4")).unwrap());
    }

    #[test]
    fn config_examples() {
        let c = [circ("0", "0", "1"), circ("1", "0", "1"), circ("2", "0", "1")];
        assert_eq!(config_check(&c), ConfigStatus::CollinearCenters);
        let c = [circ("0", "0", "1"), circ("2", "0", "1"), circ("1", "5", "1")];
        assert_eq!(config_check(&c), ConfigStatus::TangentPair(1, 2));
        let c = [circ("0", "0", "1"), circ("4", "0", "1"), circ("2", "3", "1")];
        assert_eq!(config_check(&c), ConfigStatus::Ok);
        let z = [(e("0"), e("0")), (e("4"), e("0")), (e("2"), e("3"))];
        assert_eq!(delta(&z), e("12"));
    }

    #[test]
    fn circle_through_points_examples() {
        let c = circle_through_points(&[pt("0", "0"), pt("1", "0"), pt("0", "1")]).unwrap();
        assert_eq!(c, circ("1/2", "1/2", "1/2"));
        let c = circle_through_points(&[pt("0", "0"), pt("1", "0"), pt("2", "0")]).unwrap();
        assert_eq!(c, coords(["0", "0", "1", "0"]));
        assert!(c.is_degenerate());
        let err = circle_through_points(&[pt("0", "0"), pt("0", "0"), pt("1", "1")]).unwrap_err();
        assert_eq!(err, Error::UnderDetermined);
    }

    #[test]
    fn directrix_examples() {
        let unit = circ("0", "0", "1");
        let at = |t: &str| directrix_member(&unit, &DirectrixParam::Finite(e(t))).unwrap();
        assert_eq!(at("0"), circ("1", "0", "4"));
        assert_eq!(at("1"), circ("0", "1", "4"));
        assert_eq!(at("2"), circ("-3/5", "4/5", "4"));
        let cone = cone_of(&unit).unwrap();
        assert!(cone.eval(at("2").coords()).is_zero());
        let inf = directrix_member(&unit, &DirectrixParam::Infinity).unwrap();
        assert!(cone.eval(inf.coords()).is_zero());
        let irr = circ("0", "0", "2");
        assert_eq!(
            directrix_member(&irr, &DirectrixParam::Finite(e("1"))).unwrap_err(),
            Error::SquareRootUnavailable
        );
        let f5 = FieldDescriptor::new(BaseField::prime(5).unwrap());
        let c5 = circle_from(&f5.zero(), &f5.zero(), &f5.one());
        // 2² = −1 in 𝔽₅
        let err = directrix_member(&c5, &DirectrixParam::Finite(f5.from_i64(2))).unwrap_err();
        assert_eq!(err, Error::PoleAtT);
    }

    fn rnd(rng: &mut ChaCha8Rng) -> FieldElement {
        let n: i64 = rng.gen_range(-12..=12);
        let d: i64 = rng.gen_range(1..=4);
        q().parse(&format!("{n}/{d}")).unwrap()
    }

    #[test]
    fn sampled_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let (a, b) = (rnd(&mut rng), rnd(&mut rng));
            let r = rnd(&mut rng);
            if r.is_zero() {
                continue;
            }
            let c = circle_from(&a, &b, &r.square());
            let (a2, b2, r2) = center_radius(&c).unwrap();
            assert_eq!((a2, b2, r2), (a.clone(), b.clone(), r.square()));
            let cone = cone_of(&c).unwrap();
            assert!(cone.eval(c.coords()).is_zero(), "apex lies on its cone");
            for _ in 0..3 {
                let t = rnd(&mut rng);
                let m = directrix_member(&c, &DirectrixParam::Finite(t)).unwrap();
                assert!(cone.eval(m.coords()).is_zero());
            }
            let d = circle_from(&rnd(&mut rng), &rnd(&mut rng), &rnd(&mut rng).square());
            assert_eq!(tangency_test(&c, &d).unwrap(), tangency_test(&d, &c).unwrap());
        }
    }

    /// Solve the 6×6 system of the cone derivation and compare with the
    /// expanded cone polynomial.
    #[test]
    fn cone_coefficients_from_directrix() {
        let qf = BaseField::Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let (a, b) = (rnd(&mut rng), rnd(&mut rng));
            let r2 = rnd(&mut rng).square();
            if r2.is_zero() {
                continue;
            }
            let s = |x: &FieldElement| x.in_base().unwrap();
            let (a, b, r2) = (s(&a), s(&b), s(&r2));
            let x: [Scalar; 3] = [&qf.from_i64(2) * &a, qf.one(), qf.zero()];
            let y: [Scalar; 3] = [&qf.from_i64(2) * &b, qf.zero(), qf.one()];
            let z: [Scalar; 3] = std::array::from_fn(|i| {
                let base = &(-&(&a * &x[i])) - &(&b * &y[i]);
                if i == 0 { &base - &(&qf.from_i64(2) * &r2) } else { base }
            });
            // coefficient vector (c0², c1², c2², c0c1, c0c2, c1c2) of u·v
            let prod = |u: &[Scalar; 3], v: &[Scalar; 3]| -> Vec<Scalar> {
                let m = |i: usize, j: usize| &u[i] * &v[j];
                vec![m(0, 0), m(1, 1), m(2, 2), &m(0, 1) + &m(1, 0), &m(0, 2) + &m(2, 0), &m(1, 2) + &m(2, 1)]
            };
            let terms = [prod(&x, &x), prod(&y, &y), prod(&z, &z), prod(&x, &z), prod(&y, &z), prod(&x, &y)];
            let mat: linalg::Matrix = (0..6).map(|row| (0..6).map(|k| terms[k][row].clone()).collect()).collect();
            let four = qf.from_i64(4);
            let rhs = vec![
                &four * &(&(&(&a * &a) + &(&b * &b)) - &r2),
                qf.one(),
                qf.one(),
                &four * &a,
                &four * &b,
                qf.zero(),
            ];
            let sol = linalg::solve(&mat, &rhs).expect("unique solution");
            // (aX+bY+Z)² − r²(X²+Y²) has X², Y², Z², XZ, YZ, XY coefficients
            let cone = [
                &(&a * &a) - &r2,
                &(&b * &b) - &r2,
                qf.one(),
                &qf.from_i64(2) * &a,
                &qf.from_i64(2) * &b,
                &qf.from_i64(2) * &(&a * &b),
            ];
            let k = -&r2.inv().unwrap();
            for i in 0..6 {
                assert_eq!(sol[i], &cone[i] * &k);
            }
        }
    }
}
