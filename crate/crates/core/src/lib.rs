//! Separability and entanglement analysis of multipartite states in
//! generalized Bloch form.
//!
//! A state is expanded over products of scaled SU(n) generators. Necessary
//! conditions on the resulting correlation tensor ([`criteria`]) detect
//! entanglement; sufficient conditions ([`certificates`]) certify full
//! separability and return an explicit product-state decomposition. Party
//! indices are 0-based throughout.

pub mod bloch;
pub mod catalog;
pub mod certificates;
pub mod characters;
pub mod criteria;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod pipeline;
pub mod ppt;
pub mod witness;

pub use bloch::{from_bloch, to_bloch, BasisConvention, BlochVector, CorrelationTensor, MultiIndex};
pub use certificates::{verify_decomposition, Certification, SeparableDecomposition};
pub use criteria::{CriterionVerdict, Verdict, DECISION_TOL};
pub use error::{Error, Result};
pub use linalg::{validate_density, ComplexMatrix, DensityMatrix, SystemShape};
pub use pipeline::{analyze, Analysis, AnalysisOptions, Criterion};
