//! Fixed inputs shared by the benchmarks.

use apollonius_core::solver::Configuration;
use apollonius_core::{BaseField, FieldDescriptor};

/// Unit circles at (0,0), (4,0), (2,3).
pub fn worked() -> Configuration {
    Configuration::circles(&FieldDescriptor::rationals(), [("0", "0", "1"), ("4", "0", "1"), ("2", "3", "1")]).unwrap()
}

/// A configuration with four real tangent circles.
pub fn four_real() -> Configuration {
    Configuration::circles(&FieldDescriptor::rationals(), [("0", "1/8", "49/64"), ("5/4", "0", "1"), ("1", "2", "1/4")]).unwrap()
}

/// Radii whose squares are not squares, so the solutions need a deep tower.
pub fn irrational_radii() -> Configuration {
    Configuration::circles(&FieldDescriptor::rationals(), [("0", "0", "2"), ("5", "1", "3"), ("2", "4", "5/2")]).unwrap()
}

/// The worked configuration reduced modulo p.
pub fn worked_mod(p: u64) -> Configuration {
    let f = FieldDescriptor::new(BaseField::prime(p).unwrap());
    Configuration::circles(&f, [("0", "0", "1"), ("4", "0", "1"), ("2", "3", "1")]).unwrap()
}
