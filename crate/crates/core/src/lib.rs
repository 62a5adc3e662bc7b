//! Spectral computations on the circle: fragmentation in `Diff⁺(S¹)` and loop
//! groups, the Bott and Gelfand–Fuks cocycles, and exact Virasoro module algebra.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cocycle;
pub mod diffeo;
pub mod error;
pub mod frag_diff;
pub mod loop_group;
pub mod periodic;
pub mod quad;
pub mod report;
pub mod sample;
pub mod verify;
pub mod verma;

pub use error::{Error, Result};
