//! Pointwise almost Hermitian curvature algebra.
//!
//! Everything here acts on a single [`HermitianPoint`]: the σ-forms `π₁, π₂`,
//! the operators `φ, ψ`, the star projection `R ↦ R*`, the Ricci family
//! `S, S', S*, τ, τ', τ*`, sectional curvatures, model tensors and direct sums.
//!
//! Frame sums such as `S(X,Y) = Σ R(X,Eᵢ,Eᵢ,Y)` are evaluated as inverse-metric
//! contractions, so any coordinate basis works.

mod forms;
mod identities;
mod models;
mod point;
pub(crate) mod ricci;
mod sectional;

pub use forms::{phi_psi, sigma_forms, star};
pub use identities::{identity_defects, IdentityDefects};
pub use models::{
    complex_space_form_tensor, direct_sum, kulkarni_nomizu, random_curvature_tensor,
    random_rk_tensor, space_form_tensor,
};
pub use point::{standard_j, validate_point, HermitianPoint, TOL_ALG};
pub use ricci::{ricci_contraction, ricci_family, trace, RicciFamily};
pub use sectional::{ahsc, constant_hsc_estimate, hsc, HscEstimate};
