//! Numerical differential geometry on the model charts: finite-difference
//! connection and curvature, covariant derivatives of `J`, and residuals of
//! the nearly Kähler identities.

mod fd;
mod geometry;
mod model;
pub mod octonion;
mod suites;

pub use fd::{derivative, FdConfig};
pub use geometry::{christoffel_at, curvature_at, j_derivatives_at, Christoffel, JDerivatives};
pub use model::{make_chart, Chart, ChartModel, ModelDefaults, ModelSpec, SAMPLE_RADIUS};
pub use suites::{
    bianchi_suite, identities_at, nk_identity_suite, BianchiDefects, NkIdentityDefects,
    PointIdentities,
};

#[cfg(test)]
mod tests;
