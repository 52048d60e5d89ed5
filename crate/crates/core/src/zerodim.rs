//! The intersection scheme in the patch c0 = 1 as a finite algebra
//! A = k[c1,c2,c3]/(f1,f2,f3), with its trace and Bezoutian forms.

use std::collections::HashMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactfield::{BaseField, Scalar};
use crate::linalg::{self, Matrix};
use crate::moduli::{cone_of, plane_through};
use crate::mpoly::{groebner, reduce, MPoly, Mono};
use crate::factor::irreducible_factors;
use crate::poly::UniPoly;
use crate::quadform::{sum_forms, FormClass, GramForm};
use crate::solver::{Configuration, InputObject};

/// How point inputs enter the system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointMode {
    /// The plane of circles through the point.
    Plane,
    /// The cone of the radius-zero circle, a doubled plane.
    DoubledCone,
}

fn base(x: &crate::FieldElement) -> Scalar {
    x.in_base().expect("input data lies in the base field")
}

/// Affine equations of the three hypersurfaces in (c1, c2, c3).
pub fn system_for(cfg: &Configuration, mode: PointMode) -> [MPoly; 3] {
    let f = cfg.field().base();
    std::array::from_fn(|i| match (&cfg.objects[i], mode) {
        (InputObject::Point(p), PointMode::Plane) => {
            let h = plane_through(&p.x, &p.y).coeffs.map(|x| base(&x));
            MPoly::linear(f, &[h[1].clone(), h[2].clone(), h[3].clone(), h[0].clone()])
        }
        (obj, _) => {
            let g = cone_of(&obj.as_circle()).unwrap().gram;
            let mut p = MPoly::zero(f, 3);
            let mono = |k: usize| if k == 0 { Mono::one(3) } else { Mono::var(3, k - 1) };
            for a in 0..4 {
                for b in 0..4 {
                    let m = mono(a).mul(&mono(b));
                    p = &p + &MPoly::term(f, m, base(&g[a][b]));
                }
            }
            p
        }
    })
}

/// Jacobian determinant of three polynomials in three variables.
pub fn jacobian(eqs: &[MPoly; 3]) -> MPoly {
    let d: Vec<Vec<MPoly>> = eqs.iter().map(|f| (0..3).map(|j| f.derivative(j)).collect()).collect();
    det3(&d)
}

fn det3(m: &[Vec<MPoly>]) -> MPoly {
    let t = |i: usize, j: usize, k: usize| &(&m[0][i] * &m[1][j]) * &m[2][k];
    let pos = &(&t(0, 1, 2) + &t(1, 2, 0)) + &t(2, 0, 1);
    let neg = &(&t(2, 1, 0) + &t(0, 2, 1)) + &t(1, 0, 2);
    &pos - &neg
}

fn has_all_pure_powers(gb: &[MPoly], n: usize) -> Option<Vec<u32>> {
    (0..n)
        .map(|i| {
            gb.iter()
                .filter_map(|p| {
                    let m = p.lead()?.0;
                    (m.0.iter().enumerate().all(|(k, e)| k == i || *e == 0)).then_some(m.0[i])
                })
                .min()
        })
        .collect()
}

/// k[c1,c2,c3]/I with a degrevlex Gröbner basis and its standard monomials.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    pub field: BaseField,
    pub equations: Vec<MPoly>,
    pub gb: Vec<MPoly>,
    pub basis: Vec<Mono>,
    index: HashMap<Mono, usize>,
    /// Multiplication by c1, c2, c3 (column j is the product with basis j).
    pub mult: Vec<Matrix>,
}

pub fn build_algebra(eqs: &[MPoly; 3]) -> Result<QuotientAlgebra> {
    let field = eqs[0].field();
    let n = 3;
    let tops: Vec<MPoly> = eqs.iter().map(|f| f.component(f.degree().unwrap_or(0))).collect();
    if has_all_pure_powers(&groebner(&tops), n).is_none() {
        return Err(Error::SolutionsAtInfinity);
    }
    let gb = groebner(eqs);
    let bounds = has_all_pure_powers(&gb, n).ok_or(Error::NotZeroDimensional)?;
    let leads: Vec<Mono> = gb.iter().map(|p| p.lead().unwrap().0.clone()).collect();
    let mut basis = Vec::new();
    for a in 0..bounds[0] {
        for b in 0..bounds[1] {
            for c in 0..bounds[2] {
                let m = Mono(vec![a, b, c]);
                if !leads.iter().any(|l| l.divides(&m)) {
                    basis.push(m);
                }
            }
        }
    }
    basis.sort();
    let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut alg = QuotientAlgebra { field, equations: eqs.to_vec(), gb, basis, index, mult: Vec::new() };
    alg.mult = (0..n).map(|k| alg.mult_matrix(&MPoly::var(field, n, k))).collect();
    Ok(alg)
}

impl QuotientAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of the normal form on the standard monomials.
    pub fn nf(&self, p: &MPoly) -> Vec<Scalar> {
        let r = reduce(p, &self.gb);
        let mut v = vec![self.field.zero(); self.dim()];
        for (m, c) in r.terms() {
            v[self.index[m]] = c.clone();
        }
        v
    }

    fn basis_poly(&self, j: usize) -> MPoly {
        MPoly::term(self.field, self.basis[j].clone(), self.field.one())
    }

    pub fn mult_matrix(&self, p: &MPoly) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim()).map(|j| self.nf(&(p * &self.basis_poly(j)))).collect();
        linalg::transpose(&cols)
    }

    /// Tr_{A/k} of each basis element.
    pub fn traces(&self) -> Vec<Scalar> {
        (0..self.dim()).map(|j| linalg::trace(&self.mult_matrix(&self.basis_poly(j)))).collect()
    }

    /// (x, y) ↦ Tr_{A/k}(w·x·y).
    pub fn trace_form(&self, w: &MPoly) -> GramForm {
        let tau = self.traces();
        let n = self.dim();
        let mut g = linalg::zeros(self.field, n, n);
        let wr = reduce(w, &self.gb);
        for i in 0..n {
            let wi = &wr * &self.basis_poly(i);
            for j in i..n {
                let v = self.nf(&(&wi * &self.basis_poly(j)));
                let t = v.iter().zip(&tau).fold(self.field.zero(), |s, (a, b)| &s + &(a * b));
                g[i][j] = t.clone();
                g[j][i] = t;
            }
        }
        GramForm::new(self.field, g).unwrap()
    }

    /// The Bezoutian (Scheja–Storch) form: the inverse of the Bezoutian's
    /// coefficient matrix on standard monomials.
    pub fn bezoutian_form(&self) -> Result<GramForm> {
        let f = self.field;
        let xs = [0usize, 1, 2];
        let mut rows = Vec::new();
        for eq in &self.equations {
            let mut row = Vec::new();
            for j in 0..3 {
                let map: Vec<usize> = xs.iter().map(|&k| if k < j { k + 3 } else { k }).collect();
                let h = eq.embed(6, &map);
                row.push(h.divided_difference(j, j + 3));
            }
            rows.push(row);
        }
        let bez = det3(&rows);
        let n = self.dim();
        let mut cache: HashMap<Mono, Vec<Scalar>> = HashMap::new();
        let mut nf_mono = |m: Mono| -> Vec<Scalar> {
            cache.entry(m.clone()).or_insert_with(|| self.nf(&MPoly::term(f, m, f.one()))).clone()
        };
        let mut c = linalg::zeros(f, n, n);
        for (m, coef) in bez.terms() {
            let u = nf_mono(Mono(m.0[..3].to_vec()));
            let w = nf_mono(Mono(m.0[3..].to_vec()));
            for (a, ua) in u.iter().enumerate() {
                if ua.is_zero() {
                    continue;
                }
                let s = ua * coef;
                for (b, wb) in w.iter().enumerate() {
                    if !wb.is_zero() {
                        c[a][b] = &c[a][b] + &(&s * wb);
                    }
                }
            }
        }
        let g = linalg::inverse(&linalg::transpose(&c)).ok_or(Error::DegenerateForm { rank: linalg::rank(&c), dim: n })?;
        GramForm::new(f, g)
    }
}

/// Tr_{A/k}(J·x·y) with J the normal form of `volpoly`; degenerate
/// forms signal a non-transverse intersection.
pub fn global_trace_form(a: &QuotientAlgebra, volpoly: &MPoly) -> Result<GramForm> {
    let g = a.trace_form(volpoly);
    let r = g.rank();
    if r < g.dim() {
        return Err(Error::DegenerateForm { rank: r, dim: g.dim() });
    }
    Ok(g)
}

/// One summand of A cut out by a factor of the separating form's
/// characteristic polynomial.
#[derive(Clone, Debug)]
pub struct Block {
    pub dim: usize,
    /// Value of the separating form, when the factor is linear.
    pub value: Option<Scalar>,
    /// Coordinates (c1, c2, c3) of the point, when it is rational.
    pub point: Option<[Scalar; 3]>,
    pub form: GramForm,
    pub class: FormClass,
}

impl Block {
    pub fn rank(&self) -> usize {
        self.class.rank
    }
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Block", 4)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("rank", &self.class.rank)?;
        let pt = self.point.as_ref().map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        st.serialize_field("point", &pt)?;
        st.serialize_field("formclass", &self.class)?;
        st.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitReport {
    pub separating_form: [i64; 3],
    pub separating: bool,
    pub blocks: Vec<Block>,
}

fn linear_form(field: BaseField, w: [i64; 3]) -> MPoly {
    MPoly::linear(field, &[field.from_i64(w[0]), field.from_i64(w[1]), field.from_i64(w[2]), field.zero()])
}

fn restrict(form: &GramForm, cols: &[Vec<Scalar>]) -> GramForm {
    let g = form.matrix();
    let f = form.field();
    let gv: Vec<Vec<Scalar>> = cols.iter().map(|v| linalg::mul_vec(g, v)).collect();
    let m: Matrix = cols
        .iter()
        .map(|u| gv.iter().map(|gvj| u.iter().zip(gvj).fold(f.zero(), |s, (a, b)| &s + &(a * b))).collect())
        .collect();
    GramForm::new(f, m).unwrap()
}

impl QuotientAlgebra {
    /// Number of geometric points: the rank of (x, y) ↦ Tr(xy).
    pub fn point_count(&self) -> usize {
        self.trace_form(&MPoly::constant(self.field, 3, self.field.one())).rank()
    }

    fn is_separating(&self, w: [i64; 3], points: usize) -> bool {
        let chi = linalg::char_poly(&self.mult_matrix(&linear_form(self.field, w)));
        chi.squarefree().degree() == Some(points)
    }

    fn point_at(&self, m: &Matrix, lambda: &Scalar) -> Option<[Scalar; 3]> {
        let n = self.dim();
        let shifted: Matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { &m[j][i] - lambda } else { m[j][i].clone() }).collect())
            .collect();
        let left = linalg::kernel(&shifted);
        if left.len() != 1 {
            return None;
        }
        let w = &left[0];
        let j = w.iter().position(|x| !x.is_zero())?;
        Some(std::array::from_fn(|k| {
            let row = linalg::mul_vec(&linalg::transpose(&self.mult[k]), w);
            &row[j] / &w[j]
        }))
    }
}

/// Splits A along the characteristic polynomial of a separating linear
/// form, reporting `form` restricted to each block. Over ℚ the
/// polynomial is factored completely, so each block is one closed point
/// (or its local algebra).
pub fn idempotent_split(a: &QuotientAlgebra, form: &GramForm) -> SplitReport {
    let points = a.point_count();
    // over small prime fields the first choices can collide
    let candidates = [[1, 2, 4], [1, 3, 9]].into_iter().chain((0..12).flat_map(|b| (0..12).map(move |c| [1, b, c])));
    let chosen = candidates.into_iter().find(|w| a.is_separating(*w, points));
    let w = chosen.unwrap_or([1, 3, 9]);
    let m = a.mult_matrix(&linear_form(a.field, w));
    let chi = linalg::char_poly(&m);
    // (factor, multiplicity, value when linear)
    let mut factors: Vec<(UniPoly, usize, Option<Scalar>)> = Vec::new();
    if a.field == BaseField::Rationals {
        let mut rest = chi.clone();
        for q in irreducible_factors(&chi.squarefree()) {
            let mut mult = 0;
            while rest.degree().unwrap_or(0) > 0 && rest.rem(&q).is_zero() {
                rest = rest.div_rem(&q).0;
                mult += 1;
            }
            let value = (q.degree() == Some(1)).then(|| -q.coeff(0));
            factors.push((q, mult, value));
        }
    } else {
        let mut rest = chi.clone();
        for (lambda, mult) in chi.roots_with_multiplicity() {
            let lin = UniPoly::new(vec![-&lambda, a.field.one()]);
            for _ in 0..mult {
                rest = rest.div_rem(&lin).0;
            }
            factors.push((lin, mult, Some(lambda)));
        }
        if rest.degree().unwrap_or(0) > 0 {
            factors.push((rest.monic(), 1, None));
        }
    }
    let spaces: Vec<Vec<Vec<Scalar>>> = factors
        .iter()
        .map(|(q, mult, _)| {
            let fac = (0..*mult).fold(UniPoly::constant(a.field.one()), |acc, _| &acc * q);
            linalg::kernel(&linalg::eval_poly(&fac, &m))
        })
        .collect();
    // components of 1 give the idempotents; the powers of the separating
    // form times e span the block whenever the block is monogenic, and keep
    // the Gram entries small
    let all: Matrix = linalg::transpose(&spaces.iter().flatten().cloned().collect::<Vec<_>>());
    let one = a.nf(&MPoly::constant(a.field, 3, a.field.one()));
    let coeffs = if all.len() == a.dim() && all.iter().all(|r| r.len() == a.dim()) { linalg::solve(&all, &one) } else { None };
    let mut offset = 0;
    let mut blocks = Vec::new();
    for ((_, _, value), space) in factors.into_iter().zip(spaces) {
        let d = space.len();
        let mut cols = space;
        if let Some(c) = &coeffs {
            let e = (0..d).fold(vec![a.field.zero(); a.dim()], |acc, k| {
                acc.iter().zip(&cols[k]).map(|(x, y)| x + &(y * &c[offset + k])).collect()
            });
            let mut power = vec![e];
            while power.len() < d {
                power.push(linalg::mul_vec(&m, power.last().unwrap()));
            }
            if linalg::rank(&linalg::transpose(&power)) == d {
                cols = power;
            }
        }
        offset += d;
        let bform = restrict(form, &cols);
        let point = match (&value, chosen.is_some()) {
            (Some(lambda), true) => a.point_at(&m, lambda),
            _ => None,
        };
        blocks.push(Block { dim: d, value, point, class: bform.class(), form: bform });
    }
    SplitReport { separating_form: w, separating: chosen.is_some(), blocks }
}

impl SplitReport {
    /// Class of the whole form as the orthogonal sum of the blocks.
    pub fn total(&self, field: BaseField) -> Result<FormClass> {
        sum_forms(field, self.blocks.iter().map(|b| &b.class))
    }
}

/// Rational points of the scheme with the dimension of their local algebra.
pub fn rational_points(a: &QuotientAlgebra) -> Vec<([Scalar; 3], usize)> {
    let one = MPoly::constant(a.field, 3, a.field.one());
    let rep = idempotent_split(a, &a.trace_form(&one));
    rep.blocks.into_iter().filter_map(|b| b.point.map(|p| (p, b.dim))).collect()
}

/// Report of the zero-dimensional computation.
#[derive(Clone, Debug)]
pub struct ZeroDimReport {
    pub dim: usize,
    pub gram: GramForm,
    pub class: FormClass,
    pub split: SplitReport,
}

impl Serialize for ZeroDimReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ZeroDimReport", 4)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("gram", &self.gram.to_strings())?;
        st.serialize_field("formclass", &self.class)?;
        st.serialize_field("blocks", &self.split.blocks)?;
        st.end()
    }
}

/// Which global form to report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlobalForm {
    /// Tr(J·x·y); requires an étale algebra.
    Trace,
    /// The Bezoutian form; valid for any complete intersection.
    Bezoutian,
}

pub fn analyze(cfg: &Configuration, mode: PointMode, which: GlobalForm) -> Result<ZeroDimReport> {
    let eqs = system_for(cfg, mode);
    let a = build_algebra(&eqs)?;
    let gram = match which {
        GlobalForm::Trace => global_trace_form(&a, &jacobian(&eqs))?,
        GlobalForm::Bezoutian => a.bezoutian_form()?,
    };
    let split = idempotent_split(&a, &gram);
    Ok(ZeroDimReport { dim: a.dim(), class: split.total(a.field)?, gram, split })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::FieldDescriptor;
    use crate::localindex::beta_sum;
    use crate::quadform::{hyperbolic, sum_forms};
    use crate::solver::{choose_radii, solve_all};

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    fn standard(f: &FieldDescriptor) -> Configuration {
        Configuration::circles(f, [("0", "0", "1"), ("4", "0", "1"), ("2", "3", "1")]).unwrap()
    }

    fn points(f: &FieldDescriptor, p: [(&str, &str); 3]) -> [InputObject; 3] {
        p.map(|(x, y)| InputObject::point(&f.parse(x).unwrap(), &f.parse(y).unwrap()))
    }

    #[test]
    fn three_points_give_one_point() {
        let cfg = Configuration::new(points(&q(), [("0", "0"), ("1", "0"), ("0", "1")])).unwrap();
        let eqs = system_for(&cfg, PointMode::Plane);
        let a = build_algebra(&eqs).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.basis, vec![Mono::one(3)]);
        let g = global_trace_form(&a, &jacobian(&eqs)).unwrap();
        assert_eq!(g.rank(), 1);
        // rows (a_i, b_i, 1)
        assert_eq!(g.matrix()[0][0], BaseField::Rationals.from_i64(1));
        let pts = rational_points(&a);
        let c = &pts[0].0;
        assert_eq!([c[0].to_string(), c[1].to_string(), c[2].to_string()], ["-1", "-1", "0"]);
    }

    #[test]
    fn worked_config_global_forms() {
        let cfg = standard(&q());
        let rep = analyze(&cfg, PointMode::Plane, GlobalForm::Trace).unwrap();
        assert_eq!(rep.dim, 8);
        assert_eq!(rep.class, hyperbolic(BaseField::Rationals, 4));
        let bez = analyze(&cfg, PointMode::Plane, GlobalForm::Bezoutian).unwrap();
        assert_eq!(bez.class, rep.class);
        // per-block classes agree with per-point β
        let sols = solve_all(&cfg, &choose_radii(&cfg, [1, 1, 1]).unwrap()).unwrap();
        let (reports, total) = beta_sum(&cfg, &sols).unwrap();
        assert_eq!(total, rep.class);
        let blocks = sum_forms(BaseField::Rationals, rep.split.blocks.iter().map(|b| &b.class)).unwrap();
        assert_eq!(blocks, total);
        let rational = reports.iter().filter(|r| r.residue_field.is_base()).count();
        assert_eq!(rep.split.blocks.iter().filter(|b| b.point.is_some()).count(), rational);
    }

    #[test]
    fn finite_field_rank_and_disc() {
        // mod 5 one f_s loses its leading coefficient; mod 7 the point
        // (2, 5/6) lies on all three circles; mod 13 circles 1 and 3 touch
        for p in [5u64, 7, 11, 13, 17] {
            let f = FieldDescriptor::new(BaseField::prime(p).unwrap());
            let cfg = standard(&f);
            let rep = analyze(&cfg, PointMode::Plane, GlobalForm::Trace);
            match p {
                5 => assert_eq!(rep.unwrap_err(), Error::SolutionsAtInfinity),
                7 | 13 => assert!(matches!(rep.unwrap_err(), Error::DegenerateForm { .. })),
                _ => {
                    let rep = rep.unwrap();
                    assert_eq!(rep.dim, 8);
                    assert_eq!(rep.class, hyperbolic(f.base(), 4), "p = {p}");
                }
            }
            assert_eq!(cfg.check() == crate::moduli::ConfigStatus::Ok, p != 13);
        }
    }

    #[test]
    fn common_tangent_line_is_at_infinity() {
        let cfg = Configuration::circles(&q(), [("0", "1", "1"), ("4", "2", "4"), ("1", "1/2", "1/4")]).unwrap();
        let eqs = system_for(&cfg, PointMode::Plane);
        assert_eq!(build_algebra(&eqs).unwrap_err(), Error::SolutionsAtInfinity);
    }

    #[test]
    fn scaling_an_equation_by_a_square() {
        let cfg = standard(&q());
        let mut eqs = system_for(&cfg, PointMode::Plane);
        let base = global_trace_form(&build_algebra(&eqs).unwrap(), &jacobian(&eqs)).unwrap().class();
        eqs[1] = eqs[1].scale(&BaseField::Rationals.from_i64(9));
        let a = build_algebra(&eqs).unwrap();
        assert_eq!(global_trace_form(&a, &jacobian(&eqs)).unwrap().class(), base);
    }
}
