//! Random assignment mechanisms, axiom checkers and machine-checked
//! impossibility proofs, all in exact rational arithmetic.

pub mod assignment;
pub mod cli;
pub mod axioms;
pub mod codec;
pub mod dominance;
pub mod error;
pub mod mechanisms;
pub mod polytope;
pub mod profile;
pub mod proofkit;
pub mod rational;

pub use assignment::{Assignment, AssignmentRow};
pub use dominance::{fosd_compare, ordinal_dominance, DominanceRelation, DominanceVerdict, DominanceWitness};
pub use error::{Error, Result};
pub use mechanisms::{Mechanism, Ps, Rsd, TableMechanism};
pub use profile::{PreferenceOrder, PreferenceProfile, Universe};
pub use rational::Rational;
