use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::multilinear::{CurvTensor, SymBilinear};

use super::{sigma_forms, validate_point, HermitianPoint};

/// Constant sectional curvature `c`: `c·π₁`.
pub fn space_form_tensor(point: &HermitianPoint, c: f64) -> CurvTensor {
    sigma_forms(point).0 * c
}

/// Constant holomorphic sectional curvature `μ` (Kähler type):
/// `(μ/4)(π₁ + π₂)`.
pub fn complex_space_form_tensor(point: &HermitianPoint, mu: f64) -> CurvTensor {
    let (pi1, pi2) = sigma_forms(point);
    (pi1 + pi2) * (mu / 4.0)
}

/// Kulkarni–Nomizu product
/// `(A⊙B)(X,Y,Z,U) = A(X,U)B(Y,Z) + A(Y,Z)B(X,U) − A(X,Z)B(Y,U) − A(Y,U)B(X,Z)`.
/// Curvature-class for symmetric `A, B`.
pub fn kulkarni_nomizu(a: &SymBilinear, b: &SymBilinear) -> CurvTensor {
    let (a, b) = (a.as_matrix(), b.as_matrix());
    CurvTensor::from_fn(a.nrows(), |i, j, k, l| {
        a[(i, l)] * b[(j, k)] + a[(j, k)] * b[(i, l)]
            - a[(i, k)] * b[(j, l)]
            - a[(j, l)] * b[(i, k)]
    })
}

/// Seeded generic curvature-class tensor: a sum of Kulkarni–Nomizu products
/// of random symmetric matrices (these span all curvature-class tensors).
pub fn random_curvature_tensor(point: &HermitianPoint, seed: u64) -> CurvTensor {
    let n = point.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sym = || {
        let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        SymBilinear::from_matrix((&m + m.transpose()) * 0.5)
    };
    let mut out = CurvTensor::zeros(n);
    for _ in 0..n.max(3) {
        let (a, b) = (sym(), sym());
        out += &kulkarni_nomizu(&a, &b);
    }
    out
}

/// Seeded RK tensor: the `J`-average `(R + R(J·,J·,J·,J·))/2` of a random
/// curvature-class tensor.
pub fn random_rk_tensor(point: &HermitianPoint, seed: u64) -> CurvTensor {
    let r = random_curvature_tensor(point, seed);
    let rj = r.with_j(point.j(), [true; 4]);
    (r + rj) * 0.5
}

/// Riemannian product at a point: block-diagonal `g` and `J`, and the
/// curvature that is nonzero only on index tuples from a single factor.
pub fn direct_sum(
    p1: &HermitianPoint,
    r1: &CurvTensor,
    p2: &HermitianPoint,
    r2: &CurvTensor,
) -> Result<(HermitianPoint, CurvTensor)> {
    p1.check_dim(r1.dim())?;
    p2.check_dim(r2.dim())?;
    let (n1, n2) = (p1.dim(), p2.dim());
    let n = n1 + n2;
    let block = |a: &DMatrix<f64>, b: &DMatrix<f64>| {
        let mut out = DMatrix::zeros(n, n);
        out.view_mut((0, 0), (n1, n1)).copy_from(a);
        out.view_mut((n1, n1), (n2, n2)).copy_from(b);
        out
    };
    let point = validate_point(
        block(p1.g(), p2.g()),
        block(p1.j(), p2.j()),
        p1.tol().max(p2.tol()),
    )?
    .with_tol(p1.tol().max(p2.tol()));
    let r = CurvTensor::from_fn(n, |i, j, k, l| {
        if i < n1 && j < n1 && k < n1 && l < n1 {
            r1.get(i, j, k, l)
        } else if i >= n1 && j >= n1 && k >= n1 && l >= n1 {
            r2.get(i - n1, j - n1, k - n1, l - n1)
        } else {
            0.0
        }
    });
    Ok((point, r))
}
