use serde::{Deserialize, Serialize};

/// Tolerance policy shared by the algebraic and finite-difference layers.
///
/// `tol_alg` bounds exact-formula algebra in `f64`. `tol_fd1` and `tol_fd2`
/// bound identities at first- and second-derivative level on charts, relative
/// to the chart's curvature scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol_alg: f64,
    pub tol_fd1: f64,
    pub tol_fd2: f64,
    pub h: f64,
    pub richardson: bool,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_alg: 1e-12,
            tol_fd1: 1e-6,
            tol_fd2: 1e-4,
            h: 1e-3,
            richardson: true,
        }
    }
}
