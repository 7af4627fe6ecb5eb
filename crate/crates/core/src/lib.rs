//! Exact decision procedures for classical invariants of closed oriented
//! 4-manifolds: intersection forms, homology from presentations, almost
//! complex structures, and symplectic / complex exclusion.

pub mod abelian;
pub mod analysis;
pub mod classification;
pub mod error;
pub mod families;
pub mod forms;
pub mod json;
pub mod manifold_file;
pub mod obstruction;

pub use abelian::{abelianize, smith_normal_form, AbelianGroup, Presentation, SmithForm};
pub use analysis::{analyze, enumerate, validate, AnalysisOptions, AnalysisReport, EnumerationReport, ValidationReport};
pub use error::{Error, Result};
pub use families::{family_invariants, published_witness, FamilyId};
pub use forms::{build_form, FormSpec, IntegerMatrix, IntersectionForm};
pub use manifold_file::{parse_manifold, render_manifold};
pub use obstruction::{
    decide_almost_complex, enumerate_chern_classes, is_spin, validate_invariants, ChernEnumeration,
    ChernWitness, ManifoldInvariants, SpinStatus, Status, StructureVerdict, Violation,
};
