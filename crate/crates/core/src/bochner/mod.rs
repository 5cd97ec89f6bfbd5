//! The generalized Bochner tensor `B*`, the RK Bochner tensor `B`, the closed
//! forms obtained from their vanishing, and the antiholomorphic 4-frame
//! obstruction.

mod antiholo;

use std::collections::BTreeMap;

use crate::curvature::{
    phi_psi, ricci::ricci_family_with_star, sigma_forms, star, HermitianPoint, RicciFamily,
};
use crate::error::{Error, Result};
use crate::multilinear::{invariant_norm, CurvTensor, SymBilinear};

pub use antiholo::{antiholo_4frame_defect, random_antiholomorphic_frame, DEFAULT_SAMPLES};

/// A Bochner-type tensor with its invariant norm and the scalar prefactors
/// that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct BochnerOutput {
    pub tensor: CurvTensor,
    pub norm: f64,
    pub coefficients: BTreeMap<&'static str, f64>,
    /// `false` when the RK formula was forced onto a non-RK tensor.
    pub in_domain: bool,
}

/// `B* = R* − (φ+ψ)(S*)/(2(m+2)) + τ*/(4(m+1)(m+2)) (π₁+π₂)`.
pub fn generalized_bochner(point: &HermitianPoint, r: &CurvTensor) -> Result<BochnerOutput> {
    let r_star = star(point, r)?;
    let fam = ricci_family_with_star(point, r, &r_star);
    let rhs = rhs_2_1(point, &fam.s_star, fam.tau_star)?;
    let tensor = &r_star - &rhs;
    let m = point.m() as f64;
    let coefficients = BTreeMap::from([
        ("phi_psi_s_star", -1.0 / (2.0 * (m + 2.0))),
        ("pi1_plus_pi2", fam.tau_star / (4.0 * (m + 1.0) * (m + 2.0))),
    ]);
    Ok(BochnerOutput {
        norm: invariant_norm(point, &tensor)?,
        tensor,
        coefficients,
        in_domain: true,
    })
}

/// The curvature-class tensor `R*` must equal when `B* = 0`:
/// `(φ+ψ)(S*)/(2(m+2)) − τ*/(4(m+1)(m+2)) (π₁+π₂)`.
pub fn rhs_2_1(point: &HermitianPoint, s_star: &SymBilinear, tau_star: f64) -> Result<CurvTensor> {
    let m = point.m() as f64;
    let (phi, psi) = phi_psi(point, s_star)?;
    let (pi1, pi2) = sigma_forms(point);
    Ok(CurvTensor::combination(&[
        (1.0 / (2.0 * (m + 2.0)), &phi),
        (1.0 / (2.0 * (m + 2.0)), &psi),
        (-tau_star / (4.0 * (m + 1.0) * (m + 2.0)), &pi1),
        (-tau_star / (4.0 * (m + 1.0) * (m + 2.0)), &pi2),
    ]))
}

fn require_m_above_two(point: &HermitianPoint) -> Result<()> {
    if point.m() <= 2 {
        return Err(Error::DimensionTooSmall {
            m: point.m(),
            min: 3,
        });
    }
    Ok(())
}

/// The Bochner tensor of an RK tensor (`R = R(J·,J·,J·,J·)`), `m ≥ 3`:
///
/// ```text
/// B = R − (φ+ψ)(S+3S')/(8(m+2)) − (3φ−ψ)(S−S')/(8(m−2))
///       + (τ+3τ')/(16(m+1)(m+2)) (π₁+π₂) + (τ−τ')/(16(m−1)(m−2)) (3π₁−π₂)
/// ```
///
/// Non-RK input is refused; see [`rk_bochner_unchecked`].
pub fn rk_bochner(point: &HermitianPoint, r: &CurvTensor) -> Result<BochnerOutput> {
    require_m_above_two(point)?;
    point.require_curvature_class(r)?;
    let defect = (r - &r.with_j(point.j(), [true; 4])).max_abs();
    let tol = point.tol() * (1.0 + r.max_abs());
    if defect > tol {
        return Err(Error::NotRk { defect, tol });
    }
    rk_bochner_formula(point, r, true)
}

/// Evaluates the RK Bochner formula without the RK precondition. The output
/// is flagged `in_domain = false` when the input is not RK.
pub fn rk_bochner_unchecked(point: &HermitianPoint, r: &CurvTensor) -> Result<BochnerOutput> {
    require_m_above_two(point)?;
    point.require_curvature_class(r)?;
    let defect = (r - &r.with_j(point.j(), [true; 4])).max_abs();
    rk_bochner_formula(point, r, defect <= point.tol() * (1.0 + r.max_abs()))
}

fn rk_bochner_formula(
    point: &HermitianPoint,
    r: &CurvTensor,
    in_domain: bool,
) -> Result<BochnerOutput> {
    let r_star = star(point, r)?;
    let fam = ricci_family_with_star(point, r, &r_star);
    let tensor = rk_bochner_from_family(point, r, &fam)?;
    let m = point.m() as f64;
    let coefficients = BTreeMap::from([
        ("phi_psi_s_plus_3s_prime", -1.0 / (8.0 * (m + 2.0))),
        (
            "three_phi_minus_psi_s_minus_s_prime",
            -1.0 / (8.0 * (m - 2.0)),
        ),
        (
            "pi1_plus_pi2",
            (fam.tau + 3.0 * fam.tau_prime) / (16.0 * (m + 1.0) * (m + 2.0)),
        ),
        (
            "three_pi1_minus_pi2",
            (fam.tau - fam.tau_prime) / (16.0 * (m - 1.0) * (m - 2.0)),
        ),
    ]);
    Ok(BochnerOutput {
        norm: invariant_norm(point, &tensor)?,
        tensor,
        coefficients,
        in_domain,
    })
}

fn rk_bochner_from_family(
    point: &HermitianPoint,
    r: &CurvTensor,
    fam: &RicciFamily,
) -> Result<CurvTensor> {
    let m = point.m() as f64;
    let sum = &fam.s + &(&fam.s_prime * 3.0);
    let diff = &fam.s - &fam.s_prime;
    let (phi_a, psi_a) = phi_psi(point, &sum)?;
    let (phi_b, psi_b) = phi_psi(point, &diff)?;
    let (pi1, pi2) = sigma_forms(point);
    let a = -1.0 / (8.0 * (m + 2.0));
    let b = -1.0 / (8.0 * (m - 2.0));
    let c = (fam.tau + 3.0 * fam.tau_prime) / (16.0 * (m + 1.0) * (m + 2.0));
    let d = (fam.tau - fam.tau_prime) / (16.0 * (m - 1.0) * (m - 2.0));
    Ok(CurvTensor::combination(&[
        (1.0, r),
        (a, &phi_a),
        (a, &psi_a),
        (3.0 * b, &phi_b),
        (-b, &psi_b),
        (c + 3.0 * d, &pi1),
        (c - d, &pi2),
    ]))
}

/// The curvature a nearly Kähler `B = 0` manifold with `S − S'` a multiple of
/// `g` and `τ = 5τ'` must have:
/// `(φ+ψ)(S)/(2(m+2)) − (4m+3)τ/(10m(m+1)(m+2)) (π₁+π₂) + τ/(20m(m−1)) (3π₁−π₂)`.
pub fn nk_flat_form_3_4(point: &HermitianPoint, s: &SymBilinear, tau: f64) -> Result<CurvTensor> {
    require_m_above_two(point)?;
    let m = point.m() as f64;
    let (phi, psi) = phi_psi(point, s)?;
    let (pi1, pi2) = sigma_forms(point);
    let a = 1.0 / (2.0 * (m + 2.0));
    let b = -(4.0 * m + 3.0) * tau / (10.0 * m * (m + 1.0) * (m + 2.0));
    let c = tau / (20.0 * m * (m - 1.0));
    Ok(CurvTensor::combination(&[
        (a, &phi),
        (a, &psi),
        (b + 3.0 * c, &pi1),
        (b - c, &pi2),
    ]))
}
