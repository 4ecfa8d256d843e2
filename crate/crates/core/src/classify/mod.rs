//! Classification of doubles: sampled triples, certificate-backed grouping,
//! dual enumeration and the table and theorem reports.

pub mod claims;
mod group;

pub use group::*;
mod report;

pub use report::*;
mod enumerate;

pub use enumerate::*;
