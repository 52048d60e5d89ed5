//! Degenerative and inversive dualities on the eight tangent circles,
//! the cube they span, and the conditional index checks built on them.

use std::collections::VecDeque;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactfield::{FieldDescriptor, FieldElement, Scalar};
use crate::localindex::{closed_points, index_report, IndexReport};
use crate::moduli::{circle_from, Circle};
use crate::poly::UniPoly;
use crate::quadform::{is_multiple_of_h, sum_forms, FormClass};
use crate::solver::{
    family_coefficients, family_quadratic, quadratic_roots, solve_all, ApolloniusSolution, Configuration, Radii,
    SignVector, TPoly,
};

/// 8×8 matrix over {0, 1}; rows and columns follow the solution labels 1..8.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThetaMatrix(pub [[u8; 8]; 8]);

impl ThetaMatrix {
    pub fn identity() -> Self {
        Self::from_permutation(&[0, 1, 2, 3, 4, 5, 6, 7])
    }

    /// Matrix sending e_n to e_{p[n]} (0-based).
    pub fn from_permutation(p: &[usize; 8]) -> Self {
        let mut m = [[0u8; 8]; 8];
        for (n, &k) in p.iter().enumerate() {
            m[k][n] = 1;
        }
        ThetaMatrix(m)
    }

    /// Parses eight rows such as "00000001".
    pub fn from_rows(rows: [&str; 8]) -> Self {
        ThetaMatrix(rows.map(|r| {
            let b = r.as_bytes();
            std::array::from_fn(|j| (b[j] == b'1') as u8)
        }))
    }

    pub fn as_permutation(&self) -> Option<[usize; 8]> {
        let mut p = [0usize; 8];
        for n in 0..8 {
            let col: Vec<usize> = (0..8).filter(|&k| self.0[k][n] == 1).collect();
            if col.len() != 1 {
                return None;
            }
            p[n] = col[0];
        }
        let mut seen = [false; 8];
        for &k in &p {
            if std::mem::replace(&mut seen[k], true) {
                return None;
            }
        }
        Some(p)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..8).all(|i| (0..8).all(|j| self.0[i][j] == self.0[j][i]))
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..8).filter(|&i| self.0[i][i] == 1).map(|i| i + 1).collect()
    }

    pub fn is_involution(&self) -> bool {
        *self * *self == Self::identity()
    }

    /// Image of the 1-based label n, when a permutation.
    pub fn image(&self, n: usize) -> Option<usize> {
        self.as_permutation().map(|p| p[n - 1] + 1)
    }
}

impl std::ops::Mul for ThetaMatrix {
    type Output = ThetaMatrix;

    fn mul(self, o: ThetaMatrix) -> ThetaMatrix {
        let mut m = [[0u8; 8]; 8];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..8).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        ThetaMatrix(m)
    }
}

impl fmt::Display for ThetaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            let r: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(f, "[{}]", r.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ThetaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ThetaMatrix(\n{self})")
    }
}

impl Serialize for ThetaMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<String> = self.0.iter().map(|r| r.iter().map(u8::to_string).collect()).collect();
        rows.serialize(s)
    }
}

/// Position of (sign class, root index) in the labeling; 0-based.
pub type SolutionLabeling = [(usize, usize); 8];

pub const STANDARD_LABELING: SolutionLabeling = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1), (3, 0), (3, 1)];

/// f^i_{s,t} as [x⁰, x¹, x²] with coefficients in t; i is 0-based.
pub fn family_poly(cfg: &Configuration, radii: &Radii, s: SignVector, i: usize) -> Result<[TPoly; 3]> {
    Ok(family_quadratic(&family_coefficients(&cfg.centers(), &radii.r, s, Some(i))?))
}

/// The eight circles of the t = 0 fiber in one tower, indexed by
/// (sign class, root index).
fn fiber_at_zero(cfg: &Configuration, radii: &Radii, i: usize) -> Result<Vec<Vec<Circle>>> {
    let zero = radii.field.zero();
    let mut field = radii.field.clone();
    let mut raw = Vec::new();
    for s in SignVector::ALL {
        let fc = family_coefficients(&cfg.centers(), &radii.r, s, Some(i))?;
        let f = family_quadratic(&fc).map(|p| p.eval(&zero).lift_to(&field).unwrap());
        let (ext, roots) = quadratic_roots(&f).map_err(|e| match e {
            Error::DegenerateSolution | Error::InfiniteRadius => Error::DegenerateMerge(s.to_string()),
            e => e,
        })?;
        field = ext;
        let a1 = fc.a1.eval(&zero);
        let b1 = fc.b1.eval(&zero);
        let a2 = fc.a2.eval(&zero);
        let b2 = fc.b2.eval(&zero);
        raw.push(roots.map(|rho| {
            let l = |x: &FieldElement| x.lift_to(rho.field()).unwrap();
            let alpha = &(&l(&a1) * &rho) + &l(&a2);
            let beta = &(&l(&b1) * &rho) + &l(&b2);
            circle_from(&alpha, &beta, &rho.square())
        }));
    }
    Ok(raw
        .into_iter()
        .map(|pair| pair.iter().map(|c| Circle::new(c.coords().each_ref().map(|x| x.lift_to(&field).unwrap())).unwrap()).collect())
        .collect())
}

/// θ_i from exact equality of the t = 0 specializations.
pub fn theta(cfg: &Configuration, radii: &Radii, i: usize) -> Result<ThetaMatrix> {
    theta_with(cfg, radii, i, &STANDARD_LABELING)
}

pub fn theta_with(cfg: &Configuration, radii: &Radii, i: usize, labeling: &SolutionLabeling) -> Result<ThetaMatrix> {
    let fiber = fiber_at_zero(cfg, radii, i)?;
    let at = |n: usize| {
        let (c, j) = labeling[n];
        &fiber[c][j]
    };
    let mut m = [[0u8; 8]; 8];
    for (a, row) in m.iter_mut().enumerate() {
        for (b, x) in row.iter_mut().enumerate() {
            *x = (a != b && at(a) == at(b)) as u8;
        }
    }
    let theta = ThetaMatrix(m);
    if theta.as_permutation().is_none() {
        return Err(Error::DegenerateMerge(format!("θ{} is not a perfect matching", i + 1)));
    }
    Ok(theta)
}

pub fn thetas(cfg: &Configuration, radii: &Radii) -> Result<[ThetaMatrix; 3]> {
    Ok([theta(cfg, radii, 0)?, theta(cfg, radii, 1)?, theta(cfg, radii, 2)?])
}

/// The three matrices expected for θ1, θ2, θ3 under the standard labeling.
pub fn reference_thetas() -> [ThetaMatrix; 3] {
    [
        ThetaMatrix::from_permutation(&[7, 6, 5, 4, 3, 2, 1, 0]),
        ThetaMatrix::from_permutation(&[4, 5, 6, 7, 0, 1, 2, 3]),
        ThetaMatrix::from_permutation(&[2, 3, 0, 1, 6, 7, 4, 5]),
    ]
}

/// The two roots of each f_s: {1,2}, {3,4}, {5,6}, {7,8}.
pub fn inversive_pairs() -> [(usize, usize); 4] {
    [(1, 2), (3, 4), (5, 6), (7, 8)]
}

pub fn inversive_matrix() -> ThetaMatrix {
    ThetaMatrix::from_permutation(&[1, 0, 3, 2, 5, 4, 7, 6])
}

#[derive(Clone, Debug, Serialize)]
pub struct CubeReport {
    pub involutions: bool,
    pub no_fixed_points: bool,
    pub distinct_images: bool,
    pub commuting: bool,
    pub product_fixed_point_free: bool,
    pub product_is_inversive: bool,
    pub connected: bool,
    pub trivalent: bool,
    pub bipartite: bool,
    pub failures: Vec<String>,
}

impl CubeReport {
    pub fn is_cube(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn cube_check(th: &[ThetaMatrix; 3]) -> CubeReport {
    let mut failures = Vec::new();
    let perms: Vec<Option<[usize; 8]>> = th.iter().map(ThetaMatrix::as_permutation).collect();
    let involutions = th.iter().all(|t| t.is_symmetric() && t.is_involution() && t.as_permutation().is_some());
    if !involutions {
        failures.push("(0) some θ_i is not a symmetric involutive permutation".to_string());
    }
    let no_fixed_points = th.iter().all(|t| t.fixed_points().is_empty());
    if !no_fixed_points {
        for (i, t) in th.iter().enumerate() {
            if !t.fixed_points().is_empty() {
                failures.push(format!("(i) θ{} fixes {:?}", i + 1, t.fixed_points()));
            }
        }
    }
    let distinct_images = perms.iter().all(Option::is_some)
        && (0..8).all(|n| {
            let im: Vec<usize> = perms.iter().map(|p| p.unwrap()[n]).collect();
            im[0] != im[1] && im[0] != im[2] && im[1] != im[2]
        });
    if !distinct_images {
        failures.push("(ii) θ_i e_n = θ_j e_n for some n".to_string());
    }
    let commuting = (0..3).all(|i| (i + 1..3).all(|j| th[i] * th[j] == th[j] * th[i]));
    if !commuting {
        failures.push("(iii) some θ_i, θ_j do not commute".to_string());
    }
    let prod = th[0] * th[1] * th[2];
    let product_fixed_point_free = prod.fixed_points().is_empty();
    if !product_fixed_point_free {
        failures.push(format!("(iv) θ1θ2θ3 fixes {:?}", prod.fixed_points()));
    }
    let product_is_inversive = prod == inversive_matrix();
    if !product_is_inversive {
        failures.push("θ1θ2θ3 differs from the inversive pairing".to_string());
    }

    let mut adj = vec![Vec::new(); 8];
    for t in th {
        for (a, row) in t.0.iter().enumerate() {
            for (b, &x) in row.iter().enumerate() {
                if x == 1 && a != b && !adj[a].contains(&b) {
                    adj[a].push(b);
                }
            }
        }
    }
    let trivalent = adj.iter().all(|v| v.len() == 3);
    let mut color = [None::<bool>; 8];
    let mut bipartite = true;
    let mut queue = VecDeque::from([0usize]);
    color[0] = Some(false);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            match color[w] {
                None => {
                    color[w] = Some(!color[v].unwrap());
                    queue.push_back(w);
                }
                Some(c) if c == color[v].unwrap() => bipartite = false,
                _ => {}
            }
        }
    }
    let connected = color.iter().all(Option::is_some);
    for (ok, what) in [(connected, "connected"), (trivalent, "trivalent"), (bipartite, "bipartite")] {
        if !ok {
            failures.push(format!("union graph is not {what}"));
        }
    }
    CubeReport {
        involutions,
        no_fixed_points,
        distinct_images,
        commuting,
        product_fixed_point_free,
        product_is_inversive,
        connected,
        trivalent,
        bipartite,
        failures,
    }
}

/// Outcome of a conditional identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "state", content = "detail")]
pub enum CheckState {
    Pass,
    Fail(String),
    HypothesisNotMet(String),
}

impl CheckState {
    pub fn passed(&self) -> bool {
        *self == CheckState::Pass
    }

    pub fn gated(&self) -> bool {
        matches!(self, CheckState::HypothesisNotMet(_))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub labels: (usize, usize),
    /// Residue field of q; a conjugate pair is a single closed point.
    pub residue_field: FieldDescriptor,
    pub conjugate: bool,
    pub sum: Option<FormClass>,
    pub state: CheckState,
}

struct Indexed {
    sols: Vec<ApolloniusSolution>,
    reports: Vec<Option<IndexReport>>,
}

impl Indexed {
    fn new(cfg: &Configuration, radii: &Radii) -> Result<Self> {
        let sols = solve_all(cfg, radii)?;
        let reports = sols.iter().map(|s| index_report(cfg, s).ok()).collect();
        Ok(Indexed { sols, reports })
    }

    fn sol(&self, label: usize) -> &ApolloniusSolution {
        self.sols.iter().find(|s| s.label() == label).unwrap()
    }

    /// β summed over the closed points among the given labels.
    fn beta_sum(&self, labels: &[usize]) -> Result<FormClass> {
        let chosen: Vec<ApolloniusSolution> = labels.iter().map(|&n| self.sol(n).clone()).collect();
        let reps = closed_points(&chosen)?;
        let mut forms = Vec::new();
        for r in reps {
            let k = self.sols.iter().position(|s| s.label() == r.label()).unwrap();
            match &self.reports[k] {
                Some(rep) => forms.push(rep.beta.clone()),
                None => return Err(Error::ZeroIndex),
            }
        }
        sum_forms(self.sols[0].field.base(), forms.iter())
    }

    fn is_conjugate_pair(&self, a: usize, b: usize) -> Result<bool> {
        let pair = [self.sol(a).clone(), self.sol(b).clone()];
        Ok(closed_points(&pair)?.len() == 1 && pair[0].circle != pair[1].circle)
    }
}

fn split_gate(radii: &Radii) -> Option<CheckState> {
    (!radii.is_split()).then(|| CheckState::HypothesisNotMet("radii are not in the base field".into()))
}

/// β_q + β_q′ against Tr_{k(q)/k}𝐇 for each inversive pair.
pub fn inversive_sum_check(cfg: &Configuration, radii: &Radii) -> Result<Vec<PairCheck>> {
    let idx = Indexed::new(cfg, radii)?;
    let mut out = Vec::new();
    for (a, b) in inversive_pairs() {
        let (q, q2) = (idx.sol(a), idx.sol(b));
        let k = q.residue_field();
        let conjugate = idx.is_conjugate_pair(a, b)?;
        let mut check = PairCheck { labels: (a, b), residue_field: k.clone(), conjugate, sum: None, state: CheckState::Pass };
        if let Some(g) = split_gate(radii) {
            check.state = g;
        } else if q.circle == q2.circle {
            check.state = CheckState::HypothesisNotMet("C(q) = C(q′)".into());
        } else if !conjugate && q2.residue_field() != k {
            check.state = CheckState::HypothesisNotMet("k(q) and k(q′) differ".into());
        } else {
            match idx.beta_sum(&[a, b]) {
                Err(e) => check.state = CheckState::HypothesisNotMet(format!("index unavailable: {e}")),
                Ok(sum) => {
                    // a conjugate pair is one closed point of degree 2: its index
                    // is the pair sum, of rank 2
                    let m = if conjugate { 1 } else { k.degree() };
                    let h = is_multiple_of_h(&sum, m);
                    if !h.holds {
                        check.state = CheckState::Fail(format!("sum is not {m}𝐇: {:?}", h.mismatches));
                    }
                    check.sum = Some(sum);
                }
            }
        }
        out.push(check);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadrupleCheck {
    pub theta: usize,
    pub labels: [usize; 4],
    pub sum: Option<FormClass>,
    pub state: CheckState,
}

/// β over {q, q′, θ_i q, θ_i q′} against 2𝐇 (the rank-4 hyperbolic form).
pub fn degen_dual_sum_check(cfg: &Configuration, radii: &Radii, i: usize) -> Result<Vec<QuadrupleCheck>> {
    let th = theta(cfg, radii, i)?;
    let idx = Indexed::new(cfg, radii)?;
    let fiber = fiber_at_zero(cfg, radii, i)?;
    let mut out = Vec::new();
    let mut done: Vec<[usize; 4]> = Vec::new();
    for (a, b) in inversive_pairs() {
        let (ta, tb) = (th.image(a).unwrap(), th.image(b).unwrap());
        let mut labels = [a, b, ta, tb];
        labels.sort();
        if done.contains(&labels) {
            continue;
        }
        done.push(labels);
        let mut check = QuadrupleCheck { theta: i + 1, labels, sum: None, state: CheckState::Pass };
        let lab = |n: usize| STANDARD_LABELING[n - 1];
        let (ca, ja) = lab(a);
        let (cb, jb) = lab(b);
        let d = fiber[ca][ja].descended();
        let d2 = fiber[cb][jb].descended();
        if let Some(g) = split_gate(radii) {
            check.state = g;
        } else if d.field() != d2.field() {
            check.state = CheckState::HypothesisNotMet("k(d) and k(d′) differ".into());
        } else {
            match idx.beta_sum(&labels) {
                Err(e) => check.state = CheckState::HypothesisNotMet(format!("index unavailable: {e}")),
                Ok(sum) => {
                    let h = is_multiple_of_h(&sum, 2);
                    if !h.holds {
                        check.state = CheckState::Fail(format!("sum is not 2𝐇: {:?}", h.mismatches));
                    }
                    check.sum = Some(sum);
                }
            }
        }
        out.push(check);
    }
    Ok(out)
}

/// Discriminant of f^i_{s,t} in t for one sign class.
#[derive(Clone, Debug, Serialize)]
pub struct DiscriminantScan {
    pub sign: SignVector,
    /// Coefficients low degree first.
    pub disc: Vec<FieldElement>,
    pub identically_zero: bool,
    pub rational_roots: Vec<String>,
    /// Degree left after removing the rational roots of the common factor.
    pub irrational_degree: usize,
    pub vanishes_at: Vec<(String, bool)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RamificationReport {
    pub theta: usize,
    pub classes: Vec<DiscriminantScan>,
    /// Pairs of sign classes whose t = 0 quadratics coincide.
    pub merges_at_zero: Vec<(SignVector, SignVector, bool)>,
}

fn disc_poly(f: &[TPoly; 3]) -> TPoly {
    let four = f[2].0.first().map(|c| c.field().from_i64(4)).unwrap();
    &(&f[1] * &f[1]) - &(&f[0] * &f[2]).scale(&four)
}

/// Base-field polynomials whose common roots are the base roots of p.
fn coordinate_gcd(p: &TPoly) -> UniPoly {
    let base = p.0[0].field().base();
    let width = p.0.iter().map(|c| c.coords().len()).max().unwrap_or(1);
    let mut g = UniPoly::zero(base);
    for k in 0..width {
        let cs: Vec<Scalar> = p.0.iter().map(|c| c.coords().get(k).cloned().unwrap_or_else(|| base.zero())).collect();
        g = g.gcd(&UniPoly::with_field(base, cs));
    }
    g
}

pub fn ramification_scan(cfg: &Configuration, radii: &Radii, i: usize, t_values: &[FieldElement]) -> Result<RamificationReport> {
    let mut classes = Vec::new();
    let mut at_zero = Vec::new();
    for s in SignVector::ALL {
        let f = family_poly(cfg, radii, s, i)?;
        let disc = disc_poly(&f);
        let g = coordinate_gcd(&disc);
        let zero = disc.is_zero();
        let (roots, rest) = if zero {
            (Vec::new(), 0)
        } else {
            let roots = g.base_roots();
            let mut rest = g.clone();
            for r in &roots {
                for _ in 0..g.multiplicity(r) {
                    let lin = UniPoly::with_field(g.field(), vec![-r, g.field().one()]);
                    rest = rest.div_rem(&lin).0;
                }
            }
            (roots, rest.degree().unwrap_or(0))
        };
        let vanishes_at = t_values
            .iter()
            .map(|t| (t.to_string(), disc.eval(&t.lift_to(&radii.field).unwrap()).is_zero()))
            .collect();
        classes.push(DiscriminantScan {
            sign: s,
            disc: disc.0.clone(),
            identically_zero: zero,
            rational_roots: roots.iter().map(|r| r.to_string()).collect(),
            irrational_degree: rest,
            vanishes_at,
        });
        at_zero.push(f.map(|p| p.eval(&radii.field.zero())));
    }
    let mut merges = Vec::new();
    for (c, s) in SignVector::ALL.iter().enumerate() {
        let partner = s.flip(i).normalized();
        let d = partner.class();
        if d <= c {
            continue;
        }
        let (f, g) = (&at_zero[c], &at_zero[d]);
        // for i = 1 the partner is −s, so the quadratic is f(−x)
        let same = if i == 0 { f[0] == g[0] && f[1] == -&g[1] && f[2] == g[2] } else { f == g };
        merges.push((*s, partner, same));
    }
    Ok(RamificationReport { theta: i + 1, classes, merges_at_zero: merges })
}
