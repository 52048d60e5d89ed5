//! Exact arithmetic over ℚ, 𝔽p and towers of quadratic extensions.

mod scalar;
mod tower;

pub use scalar::{isqrt_exact, BaseField, Scalar};
pub use tower::{label, Adjoined, FieldDescriptor, FieldElement, MAX_DEPTH};
