//! Brute-force enumeration of ℙ³(𝔽p) as an independent check on the
//! solver and the zero-dimensional pipeline.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::moduli::{cone_of, plane_through};
use crate::solver::{choose_radii, solve_all, Configuration, InputObject};
use crate::zerodim::{build_algebra, rational_points, system_for, PointMode};
use crate::FieldElement;

/// A point of ℙ³(𝔽p) with first nonzero coordinate 1.
pub type ProjPoint = [u64; 4];

fn residue(x: &FieldElement) -> Result<u64> {
    x.in_base().and_then(|s| s.residue()).ok_or_else(|| Error::Invalid("expected an 𝔽p element".into()))
}

enum Form {
    Quadric([[u64; 4]; 4]),
    Linear([u64; 4]),
}

impl Form {
    fn of(obj: &InputObject) -> Result<Form> {
        Ok(match obj {
            InputObject::Point(p) => {
                let h = plane_through(&p.x, &p.y).coeffs;
                Form::Linear([residue(&h[0])?, residue(&h[1])?, residue(&h[2])?, residue(&h[3])?])
            }
            InputObject::Circle(c) => {
                let g = cone_of(c)?.gram;
                let mut m = [[0u64; 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        m[i][j] = residue(&g[i][j])?;
                    }
                }
                Form::Quadric(m)
            }
        })
    }

    fn eval(&self, x: &ProjPoint, p: u64) -> u64 {
        match self {
            Form::Linear(h) => (0..4).fold(0, |s, i| (s + h[i] * x[i]) % p),
            Form::Quadric(g) => {
                let mut s = 0;
                for i in 0..4 {
                    for j in 0..4 {
                        s = (s + g[i][j] * x[i] % p * x[j]) % p;
                    }
                }
                s
            }
        }
    }
}

/// Every point of ℙ³(𝔽p) on the three hypersurfaces. `corrupt` shifts the
/// first equation by a constant (test mode).
pub fn enumerate(cfg: &Configuration, corrupt: bool) -> Result<BTreeSet<ProjPoint>> {
    let p = cfg.field().base().characteristic();
    if p == 0 {
        return Err(Error::Invalid("enumeration needs a prime field".into()));
    }
    let forms: Vec<Form> = cfg.objects.iter().map(Form::of).collect::<Result<_>>()?;
    let mut out = BTreeSet::new();
    for lead in 0..4 {
        let free = 3 - lead;
        let total = p.pow(free as u32);
        for n in 0..total {
            let mut x = [0u64; 4];
            x[lead] = 1;
            let mut m = n;
            for k in lead + 1..4 {
                x[k] = m % p;
                m /= p;
            }
            let hit = forms.iter().enumerate().all(|(i, f)| {
                let v = f.eval(&x, p);
                let v = if corrupt && i == 0 { (v + 1) % p } else { v };
                v == 0
            });
            if hit {
                out.insert(x);
            }
        }
    }
    Ok(out)
}

/// Rational tangent circles reported by the solver, as projective points.
pub fn solver_points(cfg: &Configuration) -> Result<BTreeSet<ProjPoint>> {
    let radii = choose_radii(cfg, [1, 1, 1])?;
    let sols = solve_all(cfg, &radii)?;
    let mut out = BTreeSet::new();
    for s in sols {
        let c = s.circle.descended();
        if c.field().is_base() {
            let x = c.coords();
            out.insert([residue(&x[0])?, residue(&x[1])?, residue(&x[2])?, residue(&x[3])?]);
        }
    }
    Ok(out)
}

/// Rational points of the affine scheme c0 = 1.
pub fn zerodim_points(cfg: &Configuration) -> Result<BTreeSet<ProjPoint>> {
    let a = build_algebra(&system_for(cfg, PointMode::Plane))?;
    rational_points(&a)
        .into_iter()
        .map(|(c, _)| {
            let r = |i: usize| c[i].residue().ok_or_else(|| Error::Invalid("expected an 𝔽p element".into()));
            Ok([1, r(0)?, r(1)?, r(2)?])
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub p: u64,
    pub enumerated: BTreeSet<ProjPoint>,
    pub solver: std::result::Result<BTreeSet<ProjPoint>, String>,
    pub zerodim: std::result::Result<BTreeSet<ProjPoint>, String>,
    pub agree: bool,
}

/// PASS iff every pipeline that runs reports the enumerated set, and at
/// least one runs.
pub fn compare(cfg: &Configuration, corrupt: bool) -> Result<OracleReport> {
    let enumerated = enumerate(cfg, corrupt)?;
    let solver = solver_points(cfg).map_err(|e| e.to_string());
    let zerodim = zerodim_points(cfg).map_err(|e| e.to_string());
    let runs: Vec<&BTreeSet<ProjPoint>> = [&solver, &zerodim].into_iter().filter_map(|r| r.as_ref().ok()).collect();
    let agree = !runs.is_empty() && runs.iter().all(|s| **s == enumerated);
    Ok(OracleReport { p: cfg.field().base().characteristic(), enumerated, solver, zerodim, agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::FieldDescriptor;
    use crate::BaseField;

    fn worked(p: u64) -> Configuration {
        let f = FieldDescriptor::new(BaseField::prime(p).unwrap());
        Configuration::circles(&f, [("0", "0", "1"), ("4", "0", "1"), ("2", "3", "1")]).unwrap()
    }

    #[test]
    fn enumeration_matches_pipelines() {
        for p in [11, 13, 17] {
            let rep = compare(&worked(p), false).unwrap();
            assert!(rep.agree, "p = {p}: {rep:?}");
        }
    }

    #[test]
    fn corruption_is_detected() {
        let rep = compare(&worked(11), true).unwrap();
        assert!(!rep.agree);
    }

    #[test]
    fn three_points_mod_seven() {
        let f = FieldDescriptor::new(BaseField::prime(7).unwrap());
        let objs = [("0", "0"), ("1", "0"), ("0", "1")].map(|(x, y)| InputObject::point(&f.parse(x).unwrap(), &f.parse(y).unwrap()));
        let cfg = Configuration::new(objs).unwrap();
        let pts = enumerate(&cfg, false).unwrap();
        // three planes meet in a single point of ℙ³
        assert_eq!(pts.len(), 1);
        assert_eq!(pts, zerodim_points(&cfg).unwrap());
    }
}
