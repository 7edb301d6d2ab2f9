//! Finite preferential structures with copies.
//!
//! The crate covers choice functions over explicit domain families and the
//! algebraic conditions on them, preferential structures (minimization,
//! smoothness, rankedness, layered rankedness), four representation
//! constructions that turn a choice function back into a structure, the
//! bridge to nonmonotonic consequence over a propositional vocabulary, and
//! layered contrary-to-duty conditionals evaluated along an accessibility
//! relation.
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --example conditions`
//! is a good first stop.

pub mod bridge;
pub mod choice;
pub mod error;
pub mod general;
pub mod generate;
pub mod hierarchy;
pub mod instance;
pub mod logic;
pub mod points;
pub mod report;
pub mod run;
pub mod smooth;
pub mod structure;

pub use choice::{ChoiceFunction, Domain, Layering};
pub use error::{Error, Result};
pub use points::PointSet;
pub use report::{ConditionReport, Witness};
pub use structure::PreferentialStructure;
