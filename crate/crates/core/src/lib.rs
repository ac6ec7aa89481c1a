//! Hard-instance generation and lower-bound precondition checking for
//! polynomial-slab and annulus range searching in the plane.

// `!(x > 0.0)` is the NaN-rejecting form used for parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod constructions;
pub mod frameworks;
pub mod geom;
pub mod io;
pub mod poly;
