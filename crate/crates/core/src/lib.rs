//! Finite Płonka sums: semilattice direct systems of algebras, their sums,
//! partition functions, congruences, free algebras and identity checking.

pub mod algebra;
pub mod cli;
pub mod congruence;
pub mod direct_system;
pub mod dot;
pub mod error;
pub mod free;
pub mod io;
pub mod partition;
pub mod plonka;
pub mod semilattice;
pub mod term;
pub mod varieties;

pub use algebra::{FiniteAlgebra, Homomorphism, Operation, Signature};
pub use direct_system::{DirectSystem, SystemMorphism};
pub use error::{Diagnostic, Error, Result};
pub use partition::{Partition, Relation};
pub use plonka::{PartitionFunction, PlonkaSum};
pub use semilattice::JoinSemilattice;
pub use term::{Identity, Term};
