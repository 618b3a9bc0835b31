//! Workbench for a strict dialect of propositional dynamic logic whose
//! programs are deterministic-style compositions (sequencing, tests, skip,
//! conditionals, loops) and whose formulas can say that two programs agree
//! (`~`), that a program fixes a point (`fix`), or that it moves nowhere
//! (`Fix`).
//!
//! The crate model-checks such formulas over finite Kripke models, compiles
//! tile sets and Turing machines into them, searches for tilings and for
//! small satisfying models, and reads and writes all of these as plain
//! files.

pub mod gen;
pub mod laws;
pub mod reduction;
pub mod semantics;
pub mod surface;
pub mod syntax;
pub mod tiling;
pub mod tm;
pub mod witness;

pub use semantics::{denote, truth_set, truth_set_named, validate_model, KripkeModel, Relation};
pub use surface::{parse_prop, print_prog, print_prop, SourceText};
pub use syntax::{Program, Proposition};
