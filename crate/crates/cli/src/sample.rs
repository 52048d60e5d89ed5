//! Seeded random configurations for trials and tests.

use apollonius_core::duality::family_poly;
use apollonius_core::moduli::ConfigStatus;
use apollonius_core::solver::{choose_radii, Configuration, InputObject, SignVector};
use apollonius_core::FieldDescriptor;
use rand::Rng;

fn rational<R: Rng>(rng: &mut R, span: i64, den: i64) -> String {
    format!("{}/{}", rng.gen_range(-span * den..=span * den), den)
}

/// True when every t = 0 fiber of the three degenerations has two distinct
/// finite roots per sign class. A vanishing x² coefficient puts a line in
/// the fiber and a vanishing discriminant merges two solutions.
pub fn degenerations_are_generic(cfg: &Configuration) -> bool {
    let Ok(radii) = choose_radii(cfg, [1, 1, 1]) else {
        return false;
    };
    let zero = radii.field.zero();
    (0..3).all(|i| {
        SignVector::ALL.iter().all(|&s| match family_poly(cfg, &radii, s, i) {
            Ok(f) => {
                let [c, b, a] = f.map(|p| p.eval(&zero));
                let disc = &b.square() - &(&(&a * &c) * &radii.field.from_i64(4));
                !a.is_zero() && !disc.is_zero()
            }
            Err(_) => false,
        })
    })
}

/// Three circles with rational centers and rational radii (so the radii
/// split), retried until the configuration is transverse and its
/// degenerations are generic.
pub fn split_circles<R: Rng>(rng: &mut R) -> Configuration {
    let q = FieldDescriptor::rationals();
    loop {
        let objs = [0, 1, 2].map(|_| {
            let r = rng.gen_range(1..=24) as i64;
            let r2 = q.parse(&format!("{}/16", r * r)).unwrap();
            InputObject::circle(&q.parse(&rational(rng, 6, 4)).unwrap(), &q.parse(&rational(rng, 6, 4)).unwrap(), &r2)
        });
        let cfg = Configuration::new(objs).unwrap();
        if cfg.check() == ConfigStatus::Ok && degenerations_are_generic(&cfg) {
            return cfg;
        }
    }
}

/// Three circles whose squared radii are arbitrary positive rationals.
pub fn circles<R: Rng>(rng: &mut R) -> Configuration {
    let q = FieldDescriptor::rationals();
    loop {
        let objs = [0, 1, 2].map(|_| {
            let r2 = q.parse(&format!("{}/{}", rng.gen_range(1..=60), rng.gen_range(1..=9))).unwrap();
            InputObject::circle(&q.parse(&rational(rng, 6, 4)).unwrap(), &q.parse(&rational(rng, 6, 4)).unwrap(), &r2)
        });
        let cfg = Configuration::new(objs).unwrap();
        if cfg.check() == ConfigStatus::Ok {
            return cfg;
        }
    }
}

/// One circle with a rational radius and two points off it.
pub fn circle_and_two_points<R: Rng>(rng: &mut R) -> Configuration {
    let q = FieldDescriptor::rationals();
    loop {
        let r = rng.gen_range(1..=12) as i64;
        let c = InputObject::circle(
            &q.parse(&rational(rng, 4, 2)).unwrap(),
            &q.parse(&rational(rng, 4, 2)).unwrap(),
            &q.parse(&format!("{}/4", r * r)).unwrap(),
        );
        let mut p = || InputObject::point(&q.parse(&rational(rng, 8, 2)).unwrap(), &q.parse(&rational(rng, 8, 2)).unwrap());
        let (p1, p2) = (p(), p());
        let cfg = Configuration::new([c, p1, p2]).unwrap();
        if cfg.check() == ConfigStatus::Ok {
            return cfg;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_seeded_and_valid() {
        let a = split_circles(&mut ChaCha8Rng::seed_from_u64(5));
        let b = split_circles(&mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a.as_circles(), b.as_circles());
        let c = circle_and_two_points(&mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(c.point_count(), 2);
    }
}
