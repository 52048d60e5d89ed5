use apollonius_core::localindex::beta_sum;
use apollonius_core::oracle;
use apollonius_core::quadform::is_multiple_of_h;
use apollonius_core::solver::{choose_radii, solve_all, Configuration};
use apollonius_core::zerodim::{analyze, GlobalForm, PointMode};
use apollonius_core::{BaseField, FieldDescriptor};

fn q() -> FieldDescriptor {
    FieldDescriptor::rationals()
}

#[test]
fn eight_real_solutions_both_paths() {
    let cfg = Configuration::circles(&q(), [("0", "0", "4/25"), ("21/20", "3/20", "1/16"), ("7/10", "4/5", "1/100")]).unwrap();
    let sols = solve_all(&cfg, &choose_radii(&cfg, [1, 1, 1]).unwrap()).unwrap();
    assert_eq!(sols.iter().filter(|s| s.is_real()).count(), 8);
    let (_, total) = beta_sum(&cfg, &sols).unwrap();
    let z = analyze(&cfg, PointMode::Plane, GlobalForm::Trace).unwrap();
    assert!(is_multiple_of_h(&total, 4).holds);
    assert_eq!(total, z.class);
}

#[test]
fn irrational_radii_global_class() {
    let cfg = Configuration::circles(&q(), [("0", "0", "2"), ("5", "1", "3"), ("2", "4", "5/2")]).unwrap();
    let sols = solve_all(&cfg, &choose_radii(&cfg, [1, 1, 1]).unwrap()).unwrap();
    assert_eq!(sols.len(), 8);
    let z = analyze(&cfg, PointMode::Plane, GlobalForm::Trace).unwrap();
    assert!(z.class.is_complete());
    assert!(is_multiple_of_h(&z.class, 4).holds, "{}", z.class);
}

#[test]
fn oracle_agrees_at_larger_primes() {
    for p in [31, 41, 43] {
        let f = FieldDescriptor::new(BaseField::prime(p).unwrap());
        let cfg = Configuration::circles(&f, [("0", "0", "1"), ("4", "0", "1"), ("2", "3", "1")]).unwrap();
        let rep = oracle::compare(&cfg, false).unwrap();
        assert!(rep.agree, "p = {p}");
    }
}
