//! Special coverings of sets under special decompositions, and their
//! polynomial-time equivalence with CNF satisfiability.
//!
//! - [`model`]: ground sets, block pairs, decompositions, selections, and
//!   the covering predicates, transformations and forced-block inference.
//! - [`cnf`]: formulas whose clauses are literal sets over variables `1..=n`.
//! - [`codec`]: the single-line text encodings and their recognizers.
//! - [`reduce`]: the forward and backward reductions and their total
//!   string-level wrappers.
//! - [`solve`]: truth-table and DPLL satisfiability, brute-force and
//!   inference-pruned covering search.
//! - [`generate`] and [`verify`]: seeded instances and the equivalence
//!   harness behind `spcover verify`.

pub mod cli;
pub mod cnf;
pub mod codec;
pub mod generate;
pub mod model;
pub mod reduce;
pub mod solve;
pub mod verify;

pub use cnf::{Clause, CnfFormula, Literal};
pub use codec::{parse_cnf, parse_decomp, serialize_cnf, serialize_decomp, ParseError};
pub use model::{
    validate_decomposition, BlockPair, Decomposition, Element, GroundSet, Selection, Side,
};
