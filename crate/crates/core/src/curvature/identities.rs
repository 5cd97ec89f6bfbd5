use crate::error::Result;
use crate::multilinear::{invariant_norm, CurvTensor};

use super::ricci::ricci_family_with_star;
use super::{star, HermitianPoint};

/// Residuals of the algebraic almost Hermitian curvature identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityDefects {
    /// `max |R(X,Y,Z,U) − R(X,Y,JZ,JU)|`.
    pub kahler: f64,
    /// `max |R − R(J·,J·,J·,J·)|`.
    pub rk: f64,
    /// `‖4S* − (S + 3S')‖`.
    pub star_relation: f64,
    /// `|⟨S − S', S − 5S'⟩|`. Only asserted for nearly Kähler curvature.
    pub id_1_5: f64,
}

pub fn identity_defects(point: &HermitianPoint, r: &CurvTensor) -> Result<IdentityDefects> {
    let r_star = star(point, r)?;
    let fam = ricci_family_with_star(point, r, &r_star);
    let j = point.j();
    let kahler = (r - &r.with_j(j, [false, false, true, true])).max_abs();
    let rk = (r - &r.with_j(j, [true; 4])).max_abs();
    let rel = &(&fam.s_star * 4.0) - &(&fam.s + &(&fam.s_prime * 3.0));
    let star_relation = invariant_norm(point, &rel)?;
    let d = (&fam.s - &fam.s_prime).into_matrix();
    let e = (&fam.s - &(&fam.s_prime * 5.0)).into_matrix();
    let gi = point.g_inv();
    let id_1_5 = (gi * d * gi).component_mul(&e).sum().abs();
    Ok(IdentityDefects {
        kahler,
        rk,
        star_relation,
        id_1_5,
    })
}
