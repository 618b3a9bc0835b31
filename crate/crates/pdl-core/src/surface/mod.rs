//! Concrete syntax: the formula grammar (lexer, parser, printer) and the
//! JSON document formats for models, tile sets, machines, and tilings.

pub(crate) mod lexer;
mod parser;
mod printer;

pub mod files;

pub use parser::{parse_prop, ParseError, SourceText};
pub use printer::{print_prog, print_prop};
