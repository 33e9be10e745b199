//! Flat manifolds with diagonal holonomy: Bieberbach group construction,
//! invariants, and spin / spin^c structure decisions.

pub mod catalog;
pub mod clifford;
pub mod crystal;
pub mod lifting;
pub mod linalg;
pub mod signs;
