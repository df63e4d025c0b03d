//! Exact computations in graph monoids of finite directed graphs.
//!
//! The crate decides equalities in the graph monoid `M_E` and the talented
//! monoid `T_E` by bounded confluence search, computes `K₀` with its order
//! unit through integer Smith normal form, and runs the Serre-property
//! classification of Leavitt path algebras built on those pieces.

pub mod classify;
pub mod cli;
pub mod element;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod k0;
pub mod monoid;
pub mod search;
pub mod snf;
pub mod talented;

pub use element::MonoidElement;
pub use error::{ClassifyError, ElementError, GraphError};
pub use graph::{Graph, VertexIndex, VertexSet};
pub use k0::{class_in_k0, k0_of_graph, relation_matrix, unit_generates_k0, K0Data};
pub use monoid::{
    decide_equal, enumerate_monoid, one_step_rewrites, reachable, Certificate, Enumeration,
    MonoidEngine, MonoidVerdict, Verdict, VerdictKind, Witness,
};
pub use search::SearchBudget;
pub use snf::{smith_normal_form, IntMatrix, SmithForm};
