//! Surfaces with prescribed Gauss map built from two holomorphic functions
//! `f`, `g` and a real profile `ℓ`, together with the machinery to check the
//! generalized Weingarten relation they satisfy.
//!
//! - [`expr`]: parse, differentiate and evaluate one-variable expressions.
//! - [`geometry`]: pointwise closed forms (Gauss map, `V`, curvatures, fundamental forms).
//! - [`surface`]: surface points and sampled meshes.
//! - [`verify`]: finite-difference oracle and residual reports.
//! - [`cli`]: the `grt` command-line front end.

pub mod cli;
pub mod expr;
pub mod geometry;
pub mod surface;
pub mod verify;
