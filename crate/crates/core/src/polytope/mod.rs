//! Exact rational linear algebra: simplex, vertex enumeration, Birkhoff-von
//! Neumann decomposition and an incremental equality store.

mod bvn;
mod linalg;
mod lp;
mod vertices;

pub use bvn::{bvn_decompose, BvnComponent, BvnDecomposition};
pub use linalg::{AffineExpr, EqualitySystem, InsertOutcome};
pub use lp::{lp_solve, Constraint, InfeasibilityCertificate, LinearSystem, LpOutcome, Relation, Sense};
pub use vertices::{enumerate_vertices, MAX_VERTEX_DIMENSION};

use crate::rational::one;

/// Variable index of matrix entry `(i, j)` in an `n`-by-`n` system.
pub fn entry_var(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}

/// Row and column sum equalities over `n * n` nonnegative variables.
pub fn birkhoff_system(n: usize) -> LinearSystem {
    let mut s = LinearSystem::new(n * n);
    for i in 0..n {
        s.add_eq((0..n).map(|j| (entry_var(n, i, j), one())).collect(), one()).expect("in range");
    }
    for j in 0..n {
        s.add_eq((0..n).map(|i| (entry_var(n, i, j), one())).collect(), one()).expect("in range");
    }
    s
}
