use crate::error::Result;
use crate::multilinear::{CurvTensor, SymBilinear};

use super::HermitianPoint;

/// The σ-forms `π₁(X,Y,Z,U) = g(X,U)g(Y,Z) − g(X,Z)g(Y,U)` and
/// `π₂(X,Y,Z,U) = g(X,JU)g(Y,JZ) − g(X,JZ)g(Y,JU) − 2g(X,JY)g(Z,JU)`.
pub fn sigma_forms(point: &HermitianPoint) -> (CurvTensor, CurvTensor) {
    let g = point.g();
    let w = point.omega();
    let n = point.dim();
    let pi1 = CurvTensor::from_fn(n, |i, j, k, l| {
        g[(i, l)] * g[(j, k)] - g[(i, k)] * g[(j, l)]
    });
    let pi2 = CurvTensor::from_fn(n, |i, j, k, l| {
        w[(i, l)] * w[(j, k)] - w[(i, k)] * w[(j, l)] - 2.0 * w[(i, j)] * w[(k, l)]
    });
    (pi1, pi2)
}

/// `φ(Q)` and `ψ(Q)` for a symmetric `(0,2)` tensor `Q`.
pub fn phi_psi(point: &HermitianPoint, q: &SymBilinear) -> Result<(CurvTensor, CurvTensor)> {
    point.check_dim(q.dim())?;
    let g = point.g();
    let w = point.omega();
    let q = q.as_matrix();
    // qj[(a, b)] = Q(e_a, J e_b)
    let qj = q * point.j();
    let n = point.dim();
    let phi = CurvTensor::from_fn(n, |i, j, k, l| {
        g[(i, l)] * q[(j, k)] - g[(i, k)] * q[(j, l)] + g[(j, k)] * q[(i, l)]
            - g[(j, l)] * q[(i, k)]
    });
    let psi = CurvTensor::from_fn(n, |i, j, k, l| {
        w[(i, l)] * qj[(j, k)] - w[(i, k)] * qj[(j, l)] - 2.0 * w[(i, j)] * qj[(k, l)]
            + w[(j, k)] * qj[(i, l)]
            - w[(j, l)] * qj[(i, k)]
            - 2.0 * w[(k, l)] * qj[(i, j)]
    });
    Ok((phi, psi))
}

const T: bool = true;
const F: bool = false;
const ID: [usize; 4] = [0, 1, 2, 3];
/// Argument order (X, Z, Y, U).
const XZY: [usize; 4] = [0, 2, 1, 3];
/// Argument order (Y, Z, X, U).
const YZX: [usize; 4] = [1, 2, 0, 3];

/// Terms of the star projection as (coefficient numerator over 16, J mask on
/// the slots of R, argument order).
const STAR_TERMS: [(f64, [bool; 4], [usize; 4]); 12] = [
    (3.0, [F, F, F, F], ID),
    (3.0, [F, F, T, T], ID),
    (3.0, [T, T, F, F], ID),
    (3.0, [T, T, T, T], ID),
    // R(JX,JZ,Y,U) − R(JY,JZ,X,U)
    (1.0, [T, T, F, F], XZY),
    (-1.0, [T, T, F, F], YZX),
    // R(X,Z,JY,JU) − R(Y,Z,JX,JU)
    (1.0, [F, F, T, T], XZY),
    (-1.0, [F, F, T, T], YZX),
    // R(Y,JZ,JX,U) − R(X,JZ,JY,U)
    (1.0, [F, T, T, F], YZX),
    (-1.0, [F, T, T, F], XZY),
    // R(JY,Z,X,JU) − R(JX,Z,Y,JU)
    (1.0, [T, F, F, T], YZX),
    (-1.0, [T, F, F, T], XZY),
];

/// The star projection `R ↦ R*`: the unique curvature-class tensor that is
/// invariant under `(X,Y) ↦ (JX,JY)` and agrees with `R` on `(X,JX,JX,X)`.
pub fn star(point: &HermitianPoint, r: &CurvTensor) -> Result<CurvTensor> {
    point.require_curvature_class(r)?;
    let j = point.j();
    let mut out = CurvTensor::zeros(point.dim());
    for (c, mask, order) in STAR_TERMS {
        let term = r.with_j(j, mask).permuted(order);
        out += &(term * (c / 16.0));
    }
    Ok(out)
}
