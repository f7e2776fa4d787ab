//! Certified construction and analysis of piecewise log-linear functions.

pub mod numerics;
pub mod piecewise;
pub mod construction;
pub mod theorems;
