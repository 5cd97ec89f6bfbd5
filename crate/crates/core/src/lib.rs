//! Almost Hermitian curvature algebra.
//!
//! The crate builds the star projection `R*`, the generalized Bochner tensor
//! `B*` and the RK Bochner tensor `B` from curvature data at a point, provides
//! the standard model spaces (flat, round `S⁶` with its octonionic structure,
//! complex projective and hyperbolic spaces, products) both as algebraic
//! tensors and as finite-difference coordinate charts, and runs
//! theorem-level verification scenarios with machine-readable reports.
//!
//! Sign convention: `R(X,Y,Z,U) = g(∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z, U)`, so a
//! space of constant sectional curvature `c` has `R = c·π₁` and the
//! holomorphic sectional curvature of a unit `X` is `R(X,JX,JX,X)`.

pub mod bochner;
pub mod charts;
pub mod curvature;
pub mod error;
pub mod exec;
pub mod multilinear;
pub mod scenario;
pub mod tol;

pub use error::{Error, Result};
pub use tol::Tolerances;
