//! The catalog file format.

pub mod ast;
mod lexer;
mod parser;
mod writer;

pub use parser::{parse_expr, parse_file};
pub use writer::{format_expr, write_items};
