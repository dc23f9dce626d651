//! Shared numerical kernels: special functions and adaptive quadrature.

pub mod quad;
pub mod special;
