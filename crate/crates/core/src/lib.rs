//! Exhaustive verification of Erdős–Ko–Rado results for the groups
//! SL(2,q) < G <= GL(2,q) acting on the nonzero vectors of F_q^2.
//!
//! The pipeline is: [`gf::Field`] → [`groups::GroupTable`] →
//! [`intersect::FixingGraph`] → exact clique searches in [`clique`], with
//! the sweeps that tie them together in [`verify`].

pub mod bitset;
pub mod cli;
pub mod clique;
pub mod error;
pub mod exec;
pub mod gf;
pub mod groups;
pub mod intersect;
pub mod linalg2;
pub mod verify;

pub use error::{Error, Result};
pub use exec::{Budget, Exec};
pub use gf::{Field, Scalar};
pub use groups::{GroupSpec, GroupTable, Subset};
pub use intersect::{FixingGraph, Method};
pub use linalg2::{Line, Mat2, Vec2};
