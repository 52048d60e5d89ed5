//! Exact Apollonius engine with Grothendieck–Witt valued tangency counts.

pub mod error;
pub mod exactfield;

pub use error::{Error, Result};
pub use exactfield::{BaseField, FieldDescriptor, FieldElement, Scalar};
pub mod linalg;
pub mod poly;
pub mod factor;
pub mod arith;
pub mod quadform;
pub mod moduli;
pub mod solver;
pub mod localindex;
pub mod mpoly;
pub mod zerodim;
pub mod duality;
pub mod oracle;
