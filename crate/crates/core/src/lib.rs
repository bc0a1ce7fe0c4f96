//! Dantzig selector by an alternating direction method.
//!
//! Solves `min ||β||_1  s.t.  ||D⁻¹Xᵀ(Xβ − y)||_∞ ≤ δ` where `D` holds the
//! column norms of `X`. The outer loop ([`adm`]) splits off the box
//! constraint through `z = XᵀXβ − Xᵀy`, and the β-subproblem is handled by a
//! nonmonotone spectral gradient method ([`subsolver`]).
//!
//! [`datagen`] builds simulated instances, [`eval`] post-processes and scores
//! solutions, [`io`] and [`cli`] provide the file formats and command-line
//! front end.

pub mod adm;
pub mod bench;
pub mod cli;
pub mod datagen;
pub mod error;
pub mod eval;
pub mod io;
pub mod problem;
pub mod subsolver;
pub mod vector;

pub use adm::{solve, AdmConfig, AdmSolution, AdmState, AdmStatus, RunReport};
pub use datagen::{DesignKind, GenSpec};
pub use error::{Error, Result};
pub use problem::{DesignMatrix, Instance};
pub use subsolver::{SubproblemObjective, SubsolverConfig};
pub use vector::{box_clamp, soft_thresh, Vector};
