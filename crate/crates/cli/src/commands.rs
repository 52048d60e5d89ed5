use std::path::Path;

use apollonius_core::duality::{
    cube_check, degen_dual_sum_check, inversive_sum_check, ramification_scan, reference_thetas, theta_with,
    CubeReport, PairCheck, QuadrupleCheck, RamificationReport, SolutionLabeling, ThetaMatrix, STANDARD_LABELING,
};
use apollonius_core::localindex::{beta_sum, IndexReport};
use apollonius_core::moduli::{circle_through_points, ConfigStatus};
use apollonius_core::oracle;
use apollonius_core::quadform::{is_multiple_of_h, FormClass, HyperbolicCheck};
use apollonius_core::solver::{choose_radii, solve_all, ApolloniusSolution, Configuration, Radii};
use apollonius_core::zerodim::{analyze, GlobalForm, PointMode, ZeroDimReport};
use apollonius_core::{BaseField, Error, FieldDescriptor};
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ProblemConfig;
use crate::{render, sample, CliError, Kind};

/// A finished command: the JSON report, human-readable lines and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub summary: Vec<String>,
    pub code: i32,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn precondition(cfg: &Configuration) -> Result<(), CliError> {
    match cfg.check() {
        ConfigStatus::Ok => Ok(()),
        ConfigStatus::CollinearCenters => Err(Error::CollinearCenters.into()),
        ConfigStatus::TangentPair(i, j) => Err(Error::TangentPair(i, j).into()),
        ConfigStatus::DegenerateInput => Err(Error::DegenerateCircle.into()),
    }
}

fn distinct(sols: &[ApolloniusSolution]) -> usize {
    let mut seen: Vec<_> = Vec::new();
    for s in sols {
        let c = s.circle.descended();
        if !seen.contains(&c) {
            seen.push(c);
        }
    }
    seen.len()
}

pub fn solve(pc: &ProblemConfig, cfg: &Configuration) -> Result<Outcome, CliError> {
    precondition(cfg)?;
    let radii = choose_radii(cfg, pc.branches())?;
    let sols = solve_all(cfg, &radii)?;
    let real = sols.iter().filter(|s| s.is_real()).count();
    let mut report = json!({
        "kind": Kind::of(cfg),
        "field": cfg.field().to_string(),
        "radii": radii.r.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "solutions": sols,
        "real_count": real,
        "distinct": distinct(&sols),
    });
    let mut summary = vec![format!("{} solutions ({} distinct), {real} real", sols.len(), distinct(&sols))];
    for s in &sols {
        summary.push(format!("  {} {} ρ = {}  center ({}, {})", s.label(), s.sign, s.rho, s.alpha, s.beta));
    }
    if pc.options.duality {
        let th = thetas_with(cfg, &radii, &STANDARD_LABELING)?;
        report["thetas"] = to_value(&th);
    }
    if let Some(path) = &pc.options.svg {
        let svg = render::svg(cfg, &sols, 800)?;
        std::fs::write(path, svg).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
        summary.push(format!("wrote {path}"));
    }
    Ok(Outcome { report, summary, code: 0 })
}

/// Σβ over closed points from the solver.
#[derive(Clone, Debug, Serialize)]
pub struct PerPointPath {
    pub points: Vec<IndexReport>,
    pub total: FormClass,
    pub vol_area_agree: bool,
}

pub fn per_point_path(cfg: &Configuration, branches: [i8; 3]) -> Result<PerPointPath, Error> {
    let radii = choose_radii(cfg, branches)?;
    if !radii.is_split() {
        return Err(Error::Invalid("radii are not in the base field".into()));
    }
    let sols = solve_all(cfg, &radii)?;
    let (points, total) = beta_sum(cfg, &sols)?;
    let vol_area_agree = points.iter().all(|r| r.same_square_class);
    Ok(PerPointPath { points, total, vol_area_agree })
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub kind: Kind,
    pub field: String,
    pub expected: Option<String>,
    pub per_point: Result<PerPointPath, String>,
    pub zerodim: Result<ZeroDimReport, String>,
    /// CCP only: the point read as a radius-zero circle.
    pub doubled_cone: Option<Result<ZeroDimReport, String>>,
    pub checks: Vec<(String, HyperbolicCheck)>,
    pub paths_agree: Option<bool>,
    pub verdict: String,
}

pub fn verify_report(pc: &ProblemConfig, cfg: &Configuration) -> Result<VerifyReport, CliError> {
    let kind = Kind::of(cfg);
    match cfg.check() {
        ConfigStatus::TangentPair(i, j) => return Err(Error::TangentPair(i, j).into()),
        ConfigStatus::DegenerateInput => return Err(Error::DegenerateCircle.into()),
        _ => {}
    }
    if kind == Kind::PPP {
        let pts: Vec<_> = cfg.objects.iter().map(|o| apollonius_core::moduli::Point::new(o.center().0, o.center().1)).collect();
        let c = circle_through_points(&[pts[0].clone(), pts[1].clone(), pts[2].clone()])?;
        if c.is_degenerate() {
            return Err(CliError::Math(Error::Invalid(format!("points are collinear: the circle through them is the line {c}"))));
        }
    }
    let per_point = if pc.options.per_point && kind != Kind::PPP {
        per_point_path(cfg, pc.branches()).map_err(|e| e.to_string())
    } else {
        Err("not requested".to_string())
    };
    let zerodim = analyze(cfg, PointMode::Plane, GlobalForm::Trace).map_err(|e| e.to_string());
    let doubled_cone = (kind == Kind::CCP).then(|| analyze(cfg, PointMode::DoubledCone, GlobalForm::Bezoutian).map_err(|e| e.to_string()));
    if per_point.is_err() && zerodim.is_err() {
        let why = zerodim.as_ref().err().cloned().unwrap_or_default();
        return Err(CliError::Math(match cfg.check() {
            ConfigStatus::CollinearCenters if why.is_empty() => Error::CollinearCenters,
            _ => Error::Invalid(format!("no path completed: {why}")),
        }));
    }
    let mut checks = Vec::new();
    let classes: Vec<(&str, &FormClass)> = [("per_point", per_point.as_ref().ok().map(|p| &p.total)), ("zerodim", zerodim.as_ref().ok().map(|z| &z.class))]
        .into_iter()
        .filter_map(|(n, c)| c.map(|c| (n, c)))
        .collect();
    let paths_agree = (classes.len() == 2).then(|| classes[0].1 == classes[1].1);
    let expected = match kind {
        Kind::PPP => Some("rank 1".to_string()),
        k => k.expected_h().map(|m| if m == 1 { "H".to_string() } else { format!("{m}H") }),
    };
    let verdict = if !pc.options.check_main {
        "REPORT".to_string()
    } else if let Some(m) = kind.expected_h() {
        for (n, c) in &classes {
            checks.push((n.to_string(), is_multiple_of_h(c, m)));
        }
        let ok = checks.iter().all(|(_, h)| h.holds) && paths_agree != Some(false);
        if ok { "PASS" } else { "FAIL" }.to_string()
    } else if kind == Kind::PPP {
        let ok = zerodim.as_ref().is_ok_and(|z| z.dim == 1 && z.class.rank == 1);
        if ok { "PASS" } else { "FAIL" }.to_string()
    } else {
        "REPORT".to_string()
    };
    Ok(VerifyReport {
        kind,
        field: cfg.field().to_string(),
        expected,
        per_point,
        zerodim,
        doubled_cone,
        checks,
        paths_agree,
        verdict,
    })
}

pub fn verify(pc: &ProblemConfig, cfg: &Configuration) -> Result<Outcome, CliError> {
    let rep = verify_report(pc, cfg)?;
    let mut summary = vec![format!("{:?} over {}", rep.kind, rep.field)];
    if let Ok(p) = &rep.per_point {
        summary.push(format!("per-point Σβ: {}", p.total));
    }
    if let Ok(z) = &rep.zerodim {
        summary.push(format!("global form (dim {}): {}", z.dim, z.class));
    }
    if let Some(Ok(z)) = &rep.doubled_cone {
        let blocks: Vec<String> = z.split.blocks.iter().map(|b| format!("{}/{}", b.dim, b.rank())).collect();
        summary.push(format!("doubled cone (dim {}): {}; blocks dim/rank {}", z.dim, z.class, blocks.join(" ")));
    }
    match &rep.expected {
        Some(e) => summary.push(format!("{} against {e}", rep.verdict)),
        None => summary.push(rep.verdict.clone()),
    }
    let code = if rep.verdict == "FAIL" { 2 } else { 0 };
    Ok(Outcome { report: to_value(&rep), summary, code })
}

fn thetas_with(cfg: &Configuration, radii: &Radii, labeling: &SolutionLabeling) -> Result<[ThetaMatrix; 3], CliError> {
    Ok([theta_with(cfg, radii, 0, labeling)?, theta_with(cfg, radii, 1, labeling)?, theta_with(cfg, radii, 2, labeling)?])
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub thetas: [ThetaMatrix; 3],
    pub matches_reference: [bool; 3],
    pub product: ThetaMatrix,
    pub cube: CubeReport,
    pub inversive: Vec<PairCheck>,
    pub degenerate_sums: Vec<QuadrupleCheck>,
    pub ramification: Vec<RamificationReport>,
    pub trials: Option<TrialReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialReport {
    pub seed: u64,
    pub trials: usize,
    pub matched: usize,
    pub merged: usize,
}

pub fn duality_report(cfg: &Configuration, branches: [i8; 3], labeling: &SolutionLabeling) -> Result<DualityReport, CliError> {
    precondition(cfg)?;
    let radii = choose_radii(cfg, branches)?;
    let thetas = thetas_with(cfg, &radii, labeling)?;
    let reference = reference_thetas();
    let cube = cube_check(&thetas);
    let mut inversive = Vec::new();
    let mut degenerate_sums = Vec::new();
    if cfg.point_count() == 0 {
        inversive = inversive_sum_check(cfg, &radii)?;
        for i in 0..3 {
            degenerate_sums.extend(degen_dual_sum_check(cfg, &radii, i)?);
        }
    }
    let one = cfg.field().one();
    let ramification = (0..3).map(|i| ramification_scan(cfg, &radii, i, &[one.clone()])).collect::<Result<_, _>>()?;
    Ok(DualityReport {
        matches_reference: [0, 1, 2].map(|i| thetas[i] == reference[i]),
        product: thetas[0] * thetas[1] * thetas[2],
        thetas,
        cube,
        inversive,
        degenerate_sums,
        ramification,
        trials: None,
    })
}

/// θ matrices for `trials` seeded random split configurations; counts how
/// many equal the reference.
pub fn theta_trials(seed: u64, trials: usize) -> TrialReport {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (mut matched, mut merged) = (0, 0);
    for _ in 0..trials {
        let cfg = sample::split_circles(&mut rng);
        let radii = choose_radii(&cfg, [1, 1, 1]).unwrap();
        match thetas_with(&cfg, &radii, &STANDARD_LABELING) {
            Ok(th) if th == reference_thetas() && cube_check(&th).is_cube() => matched += 1,
            Ok(_) => {}
            Err(_) => merged += 1,
        }
    }
    TrialReport { seed, trials, matched, merged }
}

pub fn duality(pc: &ProblemConfig, cfg: &Configuration, trials: usize, seed: u64, sabotage: bool) -> Result<Outcome, CliError> {
    let labeling: SolutionLabeling = if sabotage {
        [(0, 0), (0, 1), (2, 0), (1, 1), (1, 0), (2, 1), (3, 0), (3, 1)]
    } else {
        STANDARD_LABELING
    };
    let mut rep = duality_report(cfg, pc.branches(), &labeling)?;
    if trials > 0 {
        rep.trials = Some(theta_trials(seed, trials));
    }
    let mut summary = Vec::new();
    for (i, t) in rep.thetas.iter().enumerate() {
        summary.push(format!("θ{} ({}):", i + 1, if rep.matches_reference[i] { "matches reference" } else { "DIFFERS from reference" }));
        summary.extend(t.to_string().lines().map(|l| format!("  {l}")));
    }
    summary.push(if rep.cube.is_cube() { "cube: PASS".to_string() } else { format!("cube: FAIL {:?}", rep.cube.failures) });
    let state = |s: &apollonius_core::duality::CheckState| format!("{s:?}");
    for p in &rep.inversive {
        summary.push(format!("inversive {:?}: {}", p.labels, state(&p.state)));
    }
    for q in &rep.degenerate_sums {
        summary.push(format!("θ{} quadruple {:?}: {}", q.theta, q.labels, state(&q.state)));
    }
    if let Some(t) = &rep.trials {
        summary.push(format!("trials: {}/{} matched (seed {}, {} merged)", t.matched, t.trials, t.seed, t.merged));
    }
    let ok = rep.cube.is_cube() && rep.matches_reference.iter().all(|&b| b) && rep.trials.as_ref().is_none_or(|t| t.matched + t.merged == t.trials);
    Ok(Outcome { report: to_value(&rep), summary, code: if ok { 0 } else { 2 } })
}

/// One CSV row per prime.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub p: u64,
    pub status: String,
    pub rational_solutions: Option<usize>,
    pub rank: Option<usize>,
    pub disc: Option<String>,
    pub verdict: Option<String>,
    pub reason: Option<String>,
}

impl SweepRow {
    fn skipped(p: u64, reason: impl Into<String>) -> Self {
        SweepRow { p, status: "skipped".into(), rational_solutions: None, rank: None, disc: None, verdict: None, reason: Some(reason.into()) }
    }
}

pub fn sweep_prime(pc: &ProblemConfig, p: u64) -> SweepRow {
    if p == 2 {
        return SweepRow::skipped(p, "char 2 excluded");
    }
    let field = match BaseField::prime(p) {
        Ok(f) => FieldDescriptor::new(f),
        Err(e) => return SweepRow::skipped(p, e.to_string()),
    };
    let cfg = match pc.build_over(&field) {
        Ok(c) => c,
        Err(e) => return SweepRow::skipped(p, format!("reduction fails: {e}")),
    };
    match cfg.check() {
        ConfigStatus::Ok => {}
        ConfigStatus::CollinearCenters => return SweepRow::skipped(p, "centers collinear mod p"),
        ConfigStatus::TangentPair(i, j) => return SweepRow::skipped(p, format!("circles {i} and {j} tangent mod p")),
        ConfigStatus::DegenerateInput => return SweepRow::skipped(p, "degenerate input mod p"),
    }
    let z = match analyze(&cfg, PointMode::Plane, GlobalForm::Trace) {
        Ok(z) => z,
        Err(e) => return SweepRow::skipped(p, e.to_string()),
    };
    let kind = Kind::of(&cfg);
    let verdict = match kind.expected_h() {
        Some(m) => if is_multiple_of_h(&z.class, m).holds { "PASS" } else { "FAIL" },
        None if kind == Kind::PPP => if z.class.rank == 1 { "PASS" } else { "FAIL" },
        None => "REPORT",
    };
    SweepRow {
        p,
        status: "ok".into(),
        rational_solutions: Some(z.split.blocks.iter().filter(|b| b.point.is_some()).count()),
        rank: Some(z.class.rank),
        disc: Some(z.class.disc.to_string()),
        verdict: Some(verdict.into()),
        reason: None,
    }
}

/// "lo..hi" (inclusive) or a single prime.
pub fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("bad prime range `{s}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().trim_start_matches('=').parse().map_err(|_| bad())?),
        None => {
            let p = s.trim().parse().map_err(|_| bad())?;
            (p, p)
        }
    };
    Ok((lo, hi))
}

pub fn sweep_rows(pc: &ProblemConfig, lo: u64, hi: u64) -> Result<Vec<SweepRow>, CliError> {
    let primes: Vec<u64> = (lo..=hi).filter(|&n| n == 2 || BaseField::prime(n).is_ok()).collect();
    if primes.is_empty() {
        return Err(CliError::Usage(format!("no primes in {lo}..{hi}")));
    }
    let mut rows: Vec<SweepRow> = primes.par_iter().map(|&p| sweep_prime(pc, p)).collect();
    rows.sort_by_key(|r| r.p);
    Ok(rows)
}

pub fn sweep(pc: &ProblemConfig, range: &str, csv_path: Option<&Path>) -> Result<Outcome, CliError> {
    let (lo, hi) = parse_range(range)?;
    let rows = sweep_rows(pc, lo, hi)?;
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        for r in &rows {
            w.serialize(r).map_err(|e| CliError::Usage(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let summary = rows
        .iter()
        .map(|r| match &r.reason {
            Some(why) => format!("p = {}: skipped ({why})", r.p),
            None => format!(
                "p = {}: {} rational, rank {}, disc {}, {}",
                r.p,
                r.rational_solutions.unwrap_or(0),
                r.rank.unwrap_or(0),
                r.disc.as_deref().unwrap_or("?"),
                r.verdict.as_deref().unwrap_or("?")
            ),
        })
        .collect();
    let failed = rows.iter().any(|r| r.verdict.as_deref() == Some("FAIL"));
    Ok(Outcome { report: to_value(&rows), summary, code: if failed { 2 } else { 0 } })
}

pub fn oracle(cfg: &Configuration, corrupt: bool) -> Result<Outcome, CliError> {
    if cfg.field().base().characteristic() == 0 {
        return Err(CliError::Usage("oracle needs --field Fp:p".into()));
    }
    let rep = oracle::compare(cfg, corrupt)?;
    let fmt = |s: &std::collections::BTreeSet<[u64; 4]>| s.iter().map(|x| format!("[{}:{}:{}:{}]", x[0], x[1], x[2], x[3])).collect::<Vec<_>>().join(" ");
    let mut summary = vec![format!("p = {}: {} points of P^3 on all three hypersurfaces", rep.p, rep.enumerated.len())];
    summary.push(format!("  enumerated: {}", fmt(&rep.enumerated)));
    for (name, r) in [("solver", &rep.solver), ("zerodim", &rep.zerodim)] {
        summary.push(match r {
            Ok(s) => format!("  {name}: {}", fmt(s)),
            Err(e) => format!("  {name}: not run ({e})"),
        });
    }
    summary.push(if rep.agree { "PASS".into() } else { "FAIL: sets differ".into() });
    Ok(Outcome { report: to_value(&rep), summary, code: if rep.agree { 0 } else { 2 } })
}

pub fn render_cmd(cfg: &Configuration, branches: [i8; 3], svg_path: &Path, width: u32) -> Result<Outcome, CliError> {
    if cfg.field().base().characteristic() != 0 {
        return Err(CliError::Usage("nothing to draw over a finite field".into()));
    }
    if width < 100 {
        return Err(CliError::Usage("--width must be at least 100".into()));
    }
    precondition(cfg)?;
    let radii = choose_radii(cfg, branches)?;
    let sols = solve_all(cfg, &radii)?;
    let svg = render::svg(cfg, &sols, width)?;
    std::fs::write(svg_path, &svg).map_err(|e| CliError::Usage(format!("{}: {e}", svg_path.display())))?;
    let real = render::real_circles(&sols)?.len();
    Ok(Outcome {
        report: json!({"svg": svg_path.display().to_string(), "inputs": 3, "real_circles": real}),
        summary: vec![format!("wrote {} (3 inputs, {real} real tangent circles)", svg_path.display())],
        code: 0,
    })
}
