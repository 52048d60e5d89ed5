//! Local indices of tangent circles: the intersection volume, the
//! weighted area formula, and β = Tr⟨·⟩.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfield::{FieldDescriptor, FieldElement};
use crate::moduli::{cone_of, plane_through, Circle, Point, QuadricCone};
use crate::quadform::{sum_forms, trace_class, FormClass};
use crate::solver::{ApolloniusSolution, Configuration, InputObject};

/// τ_i with its weights u_i, v_i.
#[derive(Clone, Debug, Serialize)]
pub struct TangencyData {
    pub tau: Point,
    pub u: FieldElement,
    pub v: FieldElement,
}

fn dot(x: (&FieldElement, &FieldElement), y: (&FieldElement, &FieldElement)) -> FieldElement {
    &(x.0 * y.0) + &(x.1 * y.1)
}

/// u_i = (z_i−τ_i)·(z_i−γ), v_i = (z_i−τ_i)·(τ_i−γ); (1, 1) for points.
pub fn uv(cfg: &Configuration, sol: &ApolloniusSolution, i: usize, tau: &Point) -> (FieldElement, FieldElement) {
    let f = &sol.field;
    if cfg.objects[i].is_point() {
        return (f.one(), f.one());
    }
    let (a, b) = cfg.objects[i].center();
    let (a, b) = (a.lift_to(f).unwrap(), b.lift_to(f).unwrap());
    let zt = (&a - &tau.x, &b - &tau.y);
    let zg = (&a - &sol.alpha, &b - &sol.beta);
    let tg = (&tau.x - &sol.alpha, &tau.y - &sol.beta);
    (dot((&zt.0, &zt.1), (&zg.0, &zg.1)), dot((&zt.0, &zt.1), (&tg.0, &tg.1)))
}

/// A hypersurface of ℙ³ through which the solution passes.
#[derive(Clone, Debug)]
pub enum Hypersurface {
    Cone(QuadricCone),
    Plane([FieldElement; 4]),
}

impl Hypersurface {
    /// Cones for circles, planes for points.
    pub fn of(obj: &InputObject) -> Hypersurface {
        match obj {
            InputObject::Circle(c) => Hypersurface::Cone(cone_of(c).unwrap()),
            InputObject::Point(p) => Hypersurface::Plane(plane_through(&p.x, &p.y).coeffs),
        }
    }

    /// ∂/∂(c1, c2, c3) at c.
    pub fn gradient(&self, c: &[FieldElement; 4]) -> [FieldElement; 3] {
        match self {
            Hypersurface::Cone(q) => {
                let g = q.gradient(c);
                [g[1].clone(), g[2].clone(), g[3].clone()]
            }
            Hypersurface::Plane(h) => {
                let f = c[0].field();
                [h[1].lift_to(f).unwrap(), h[2].lift_to(f).unwrap(), h[3].lift_to(f).unwrap()]
            }
        }
    }
}

fn det3(m: &[[FieldElement; 3]; 3]) -> FieldElement {
    crate::moduli::det3(m)
}

/// Determinant of the three gradients at a circle in the patch c0 = 1.
pub fn vol_at(objects: &[Hypersurface; 3], circle: &Circle) -> Result<FieldElement> {
    if circle.is_degenerate() {
        return Err(Error::DegenerateSolution);
    }
    let c = circle.coords();
    Ok(det3(&std::array::from_fn(|i| objects[i].gradient(c))))
}

pub fn vol(cfg: &Configuration, sol: &ApolloniusSolution) -> Result<FieldElement> {
    let objs = cfg.objects.each_ref().map(Hypersurface::of);
    vol_at(&objs, &sol.circle)
}

/// Σ (−1)^{i+1} u_i v_m v_n ((a_m−α)(b_n−β) − (a_n−α)(b_m−β)).
pub fn area(cfg: &Configuration, sol: &ApolloniusSolution) -> Result<FieldElement> {
    let w = weighted_rows(cfg, sol)?;
    let f = &sol.field;
    let mut s = f.zero();
    for (i, (m, n)) in [(0, (1, 2)), (1, (0, 2)), (2, (0, 1))] {
        let minor = &(&w[m][0] * &w[n][1]) - &(&w[n][0] * &w[m][1]);
        let term = &w[i][2] * &minor;
        s = if i == 1 { &s - &term } else { &s + &term };
    }
    Ok(s)
}

/// det of the rows (v_i(a_i−α), v_i(b_i−β), u_i).
pub fn area_det(cfg: &Configuration, sol: &ApolloniusSolution) -> Result<FieldElement> {
    Ok(det3(&weighted_rows(cfg, sol)?))
}

fn weighted_rows(cfg: &Configuration, sol: &ApolloniusSolution) -> Result<[[FieldElement; 3]; 3]> {
    if sol.circle.is_degenerate() || sol.tangency.len() != 3 {
        return Err(Error::DegenerateSolution);
    }
    let f = &sol.field;
    Ok(std::array::from_fn(|i| {
        let (a, b) = cfg.objects[i].center();
        let t = &sol.tangency[i];
        let v = &t.v;
        [v * &(&a.lift_to(f).unwrap() - &sol.alpha), v * &(&b.lift_to(f).unwrap() - &sol.beta), t.u.clone()]
    }))
}

/// Tr_{k(s)/k}⟨value⟩ with k(s) the field of the circle's coordinates.
pub fn beta(sol: &ApolloniusSolution, value: &FieldElement) -> Result<FormClass> {
    if value.is_zero() {
        return Err(Error::ZeroIndex);
    }
    let v = value.lift_to(&sol.residue_field())?;
    trace_class(&v)
}

/// True iff x/y is a square in their common tower.
pub fn square_class_equal(x: &FieldElement, y: &FieldElement) -> Result<bool> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let (x, y) = x.try_common(y)?;
    Ok((&x / &y).is_square())
}

/// Image under √d_last ↦ −√d_last.
pub fn conjugate_last(x: &FieldElement) -> FieldElement {
    let f = x.field();
    let m = f.depth();
    if m == 0 {
        return x.clone();
    }
    let top = 1 << (m - 1);
    let coords = x.coords().iter().enumerate().map(|(i, c)| if i & top != 0 { -c } else { c.clone() }).collect();
    f.element(coords).unwrap()
}

fn conjugate_circle(c: &Circle) -> Circle {
    Circle::new(c.coords().each_ref().map(conjugate_last)).unwrap()
}

/// One representative per closed point: coincident outputs collapse and
/// a conjugate pair over a quadratic residue field counts once.
pub fn closed_points(sols: &[ApolloniusSolution]) -> Result<Vec<&ApolloniusSolution>> {
    let mut out: Vec<&ApolloniusSolution> = Vec::new();
    for s in sols {
        let k = s.residue_field();
        if k.depth() > 1 {
            return Err(Error::Invalid("per-point indices need residue fields of degree at most 2".into()));
        }
        let c = s.circle.descended();
        let conj = conjugate_circle(&c);
        if out.iter().any(|o| o.circle == c || o.circle == conj) {
            continue;
        }
        out.push(s);
    }
    Ok(out)
}

/// Per-point index report.
#[derive(Clone, Debug, Serialize)]
pub struct IndexReport {
    pub solution_id: usize,
    pub residue_field: FieldDescriptor,
    pub vol: FieldElement,
    pub area: FieldElement,
    pub same_square_class: bool,
    pub beta: FormClass,
}

pub fn index_report(cfg: &Configuration, sol: &ApolloniusSolution) -> Result<IndexReport> {
    let k = sol.residue_field();
    let v = vol(cfg, sol)?.lift_to(&k)?;
    let a = area(cfg, sol)?.lift_to(&k)?;
    if v.is_zero() || a.is_zero() {
        return Err(Error::ZeroIndex);
    }
    Ok(IndexReport {
        solution_id: sol.label(),
        residue_field: k,
        same_square_class: square_class_equal(&v, &a)?,
        beta: beta(sol, &v)?,
        vol: v,
        area: a,
    })
}

/// Σ β over closed points (split-radii path).
pub fn beta_sum(cfg: &Configuration, sols: &[ApolloniusSolution]) -> Result<(Vec<IndexReport>, FormClass)> {
    let reps = closed_points(sols)?;
    let reports: Vec<IndexReport> = reps.iter().map(|s| index_report(cfg, s)).collect::<Result<_>>()?;
    let total = sum_forms(cfg.field().base(), reports.iter().map(|r| &r.beta))?;
    Ok((reports, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::{hyperbolic, is_multiple_of_h};
    use crate::solver::{choose_radii, solve_all};
    use crate::BaseField;

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    fn e(s: &str) -> FieldElement {
        q().parse(s).unwrap()
    }

    fn standard() -> Configuration {
        Configuration::circles(&q(), [("0", "0", "1"), ("4", "0", "1"), ("2", "3", "1")]).unwrap()
    }

    #[test]
    fn worked_uv() {
        let cfg = standard();
        let sols = solve_all(&cfg, &choose_radii(&cfg, [1, 1, 1]).unwrap()).unwrap();
        let outer = sols.iter().find(|s| s.rho == e("-7/6")).unwrap();
        assert_eq!((outer.tangency[0].u.clone(), outer.tangency[0].v.clone()), (e("13/6"), e("7/6")));
        let v = vol(&cfg, outer).unwrap();
        let a = area(&cfg, outer).unwrap();
        assert!(!v.is_zero());
        assert_eq!(v.sign().unwrap(), a.sign().unwrap());
        assert_eq!(v, &e("64") * &a);
    }

    #[test]
    fn planes_give_delta() {
        let objs = [("0", "0"), ("4", "0"), ("2", "3")].map(|(x, y)| Hypersurface::Plane(plane_through(&e(x), &e(y)).coeffs));
        let c = crate::moduli::circle_from(&e("7"), &e("-1"), &e("5"));
        // rows (a_i, b_i, 1)
        assert_eq!(vol_at(&objs, &c).unwrap(), e("12"));
        let rep = [objs[0].clone(), objs[0].clone(), objs[2].clone()];
        assert!(vol_at(&rep, &c).unwrap().is_zero());
    }

    #[test]
    fn main_identity_on_worked_config() {
        let cfg = standard();
        let sols = solve_all(&cfg, &choose_radii(&cfg, [1, 1, 1]).unwrap()).unwrap();
        let (reports, total) = beta_sum(&cfg, &sols).unwrap();
        assert!(reports.iter().all(|r| r.same_square_class));
        assert_eq!(total, hyperbolic(BaseField::Rationals, 4));
        for s in &sols {
            assert_eq!(area(&cfg, s).unwrap(), area_det(&cfg, s).unwrap());
        }
    }

    #[test]
    fn beta_examples() {
        let cfg = standard();
        let sols = solve_all(&cfg, &choose_radii(&cfg, [1, 1, 1]).unwrap()).unwrap();
        let rational = sols.iter().find(|s| s.residue_field().is_base()).unwrap();
        let b = beta(rational, &e("5")).unwrap();
        assert_eq!(b.rank, 1);
        assert!(matches!(beta(rational, &e("0")), Err(Error::ZeroIndex)));
        let (_, r) = q().with_sqrt(&e("2")).unwrap();
        let tf = trace_class(&r).unwrap();
        assert!(is_multiple_of_h(&tf, 1).holds);
        assert!(square_class_equal(&e("8"), &e("2")).unwrap());
        assert!(!square_class_equal(&e("2"), &e("3")).unwrap());
        assert_eq!(square_class_equal(&e("0"), &e("3")).unwrap_err(), Error::ZeroArgument);
    }
}
