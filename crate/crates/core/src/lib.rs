//! Computability and complexity in an executable symmetric monoidal category.
//!
//! Values and programs live in one untyped calculus with a fuel-bounded universal
//! evaluator, a partial evaluator and Kleene fixed programs. On top of it sit processes
//! and their universal process, Turing processes with time and space meters, and a
//! finite-depth treatment of Mealy machines and their final behaviours.

pub mod category;
pub mod check;
pub mod coalgebra;
pub mod complexity;
pub mod encode;
pub mod eval;
pub mod gen;
pub mod kleene;
pub mod process;
pub mod prog;
pub mod registry;
pub mod syntax;
pub mod turing;
pub mod value;

pub use category::{Computation, Fuel, Outcome};
pub use prog::Prog;
pub use registry::Registry;
pub use value::{Shape, Value};

/// Space counters at arbitrary precision.
pub type Counters = complexity::SpaceCounters<num_bigint::BigInt>;
