//! Graphs `G_U` on a finite field F_{q^n}: two distinct elements are adjacent
//! when their product lies in a fixed F_q-subspace `U`.
//!
//! The crate builds the field tower and the graphs, computes clique numbers
//! exactly with a bit-parallel branch and bound, and evaluates the closed
//! forms and bounds known for these clique numbers so the two can be
//! reconciled instance by instance.

pub mod error;
pub mod forms;
pub mod gf;
pub mod graph;
pub mod linalg;
mod poly;
pub mod theorems;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{Elem, FieldCtx, FieldSpec, SquareLevel};
pub use graph::{BitGraph, CliqueResult, GraphGU, SolverOptions};
pub use linalg::{FqMatrix, Subspace, SubspaceSpec};
