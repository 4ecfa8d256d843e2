//! Isomorphisms of doubles: certificates, the shear construction and search.

mod certificate;
mod rsolve;
mod search;

pub use certificate::*;
pub use rsolve::*;
pub use search::*;
