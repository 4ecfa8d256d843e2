//! Exact computations with Lie superbialgebras and their Drinfel'd doubles.

pub mod algebra;
pub mod catalog;
pub mod classify;
pub mod error;
pub mod form;
pub mod iso;
pub mod linalg;
pub mod scalar;
pub mod solver;
pub mod text;
pub mod triple;

pub use error::{Error, Result};
