//! Critical schemes of Landau-Ginzburg potentials for toric Fano manifolds.
//!
//! The crate is organized bottom-up:
//!
//! - [`toric`]: exact lattice-polytope, Picard-group and line-bundle
//!   cohomology computations;
//! - [`catalog`]: the supported manifold families, their reference
//!   exceptional collections, LG coefficient families and asymptotic seeds;
//! - [`solver`]: Newton refinement, complete solving of the critical systems
//!   and parameter sweeps;
//! - [`emap`]: the map from critical points to line-bundle classes, its
//!   verification, and the Frobenius (toric power map) image;
//! - [`monodromy`]: coefficient-space loops, permutation tracking and the
//!   alignment checks between Hom spaces and monodromy.

pub mod linalg;
pub mod toric;
pub mod catalog;
pub mod solver;
pub mod emap;
pub mod monodromy;
