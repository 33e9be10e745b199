//! Bieberbach groups with diagonal holonomy over the standard lattice ℤⁿ.

mod affine;
mod group;
mod invariants;
mod presentation;

use thiserror::Error;

use crate::linalg::rational::Rational;
use crate::signs::SignError;

pub use affine::AffineElement;
pub(crate) use affine::format_vector;
pub use group::{build_group, BieberbachGroup};
pub use invariants::{betti, betti_profile, h1_elementary_divisors, holonomy_characters, H1Group, HolonomyCharacter};
pub use presentation::{derived_relation_check, presentation, Letter, Presentation, Relation, RelationGroup, RelationKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrystalError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("generator {}: expected dimension {expected}, found {found}", .index + 1)]
    GeneratorDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Signs(#[from] SignError),
    #[error(
        "generator {} has holonomy spanned by earlier generators but differs from its normal form by the non-lattice translation {}",
        .index + 1,
        format_vector(.offset)
    )]
    InconsistentGenerator { index: usize, offset: Vec<Rational> },
    #[error("relation {relation} has non-integral translation {}; the lattice is not preserved", format_vector(.vector))]
    NonIntegralRelation { relation: String, vector: Vec<Rational> },
    #[error("degree {degree} out of range 0..={dim}")]
    DegreeOutOfRange { degree: usize, dim: usize },
}
