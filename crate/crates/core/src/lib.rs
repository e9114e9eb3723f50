//! Recognition of 3-manifold geometries from finite group presentations.
//!
//! Each geometry gets a pair of semi-decision procedures: one searching for a
//! certificate that the group belongs to the class, one searching for a
//! certificate that it does not. Every certificate is re-verified before it
//! is reported.

pub mod abelian;
pub mod cosets;
pub mod driver;
pub mod geometry;
pub mod hyperbolic;
pub mod isomorphism;
pub mod meter;
pub mod nilpotent;
pub mod oracle;
pub mod presentation;
pub mod torsion;

pub use abelian::{abelianization, AbelianInvariants, IntMatrix};
pub use cosets::{low_index_subgroups, rs_presentation, todd_coxeter, CosetTable, SubgroupRecord};
pub use meter::Meter;
pub use oracle::{Decision, OracleHandle, PromiseSet};
pub use presentation::{parse_presentation, FinitePresentation, Letter, Word};
pub use driver::{classify, run_corpus, ClassifyOptions, Overall, Report};
pub use geometry::{Budget, Certificate, ClassId, Side, Verdict};
pub use oracle::OracleSpec;
