//! Machine-checked replay of the two impossibility proofs, and an independent
//! search over the same profiles.

mod certify;
mod entry;
mod replay;
mod script;
mod search;

pub use certify::{
    certify_by_faces, certify_by_vertices, certify_efficiency_zero, efficient_faces, order_zero_set, rows_text,
    LocalEqualities, ZeroCertificate,
};
pub use entry::{EntryValue, ExpectedEntry};
pub use replay::{replay, ConstraintSystem, NodeReport, ProofReport, Provenance, StepReport, StepStatus};
pub use script::{
    builtin_script, pad_script, EntryRef, InferenceStep, Invariance, NodeSpec, NullScope, ParameterSpec, ProofScript,
};
pub use search::{
    fragment_satisfies, independent_search, theorem_axioms, InfeasibilityCertificate, SearchOptions, SearchReport,
    SearchVerdict, DEFAULT_BRANCH_LIMIT,
};
