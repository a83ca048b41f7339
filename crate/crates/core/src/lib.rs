//! Executable coalgebra at finite scale.
//!
//! * [`signatures`]: signatures, terms, regular trees, flat basic equations.
//! * [`transition`]: finitely branching systems, unfoldings, extensional trees.
//! * [`bisim`]: the relational refinement operator, bisimilarity, minimisation.
//! * [`barr`]: level-n cut comparison and its agreement with bisimilarity.
//! * [`chains`]: initial and terminal chains, hereditarily finite sets.
//! * [`citm`]: guarded equation systems and their unique solutions.
//! * [`gallery`]: schematic infinitely branching trees separating the stratified equivalences.
//! * [`selftest`]: the acceptance criteria as runnable checks.

pub mod barr;
pub mod bisim;
pub mod chains;
pub mod citm;
pub mod exec;
pub mod gallery;
pub mod random;
pub mod selftest;
pub mod signatures;
pub mod text;
pub mod transition;

pub use text::ParseError;
