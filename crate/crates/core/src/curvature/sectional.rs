use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::multilinear::{gram_schmidt, invariant_norm, CurvTensor};

use super::{complex_space_form_tensor, ricci_family, star, HermitianPoint};

/// Holomorphic sectional curvature `R(X,JX,JX,X) / g(X,X)²`.
pub fn hsc(point: &HermitianPoint, r: &CurvTensor, x: &DVector<f64>) -> Result<f64> {
    point.check_dim(r.dim())?;
    point.check_dim(x.len())?;
    let gxx = x.dot(&(point.g() * x));
    if gxx.is_nan() || gxx <= 0.0 {
        return Err(Error::ZeroVector);
    }
    let jx = point.j() * x;
    Ok(r.eval(x, &jx, &jx, x) / (gxx * gxx))
}

/// Sectional curvature of an antiholomorphic plane `span{X, Y}`.
pub fn ahsc(
    point: &HermitianPoint,
    r: &CurvTensor,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<f64> {
    point.check_dim(r.dim())?;
    point.check_dim(x.len())?;
    point.check_dim(y.len())?;
    let frame = gram_schmidt(point, &[x.clone(), y.clone()]).ok_or(Error::DegeneratePlane)?;
    let (e1, e2) = (&frame.vectors()[0], &frame.vectors()[1]);
    let pairing = e1.dot(&(point.omega() * e2)).abs();
    if pairing > point.tol() {
        return Err(Error::NotAntiholomorphic { defect: pairing });
    }
    Ok(r.eval(e1, e2, e2, e1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HscEstimate {
    pub mu_hat: f64,
    /// `‖R* − (μ̂/4)(π₁+π₂)‖`; zero iff the holomorphic sectional curvature
    /// is pointwise constant `μ̂`.
    pub defect: f64,
}

/// Estimates a constant holomorphic sectional curvature from `τ*` and
/// measures how far `R*` is from the corresponding complex space form.
pub fn constant_hsc_estimate(point: &HermitianPoint, r: &CurvTensor) -> Result<HscEstimate> {
    let m = point.m() as f64;
    let fam = ricci_family(point, r)?;
    let mu_hat = fam.tau_star / (m * (m + 1.0));
    let r_star = star(point, r)?;
    let defect = invariant_norm(
        point,
        &(&r_star - &complex_space_form_tensor(point, mu_hat)),
    )?;
    Ok(HscEstimate { mu_hat, defect })
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::curvature::{sigma_forms, space_form_tensor};

    fn random_vec(n: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
        DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn hsc_of_complex_space_form_is_constant() {
        let p = HermitianPoint::random(3, 2);
        let r = complex_space_form_tensor(&p, 2.5);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let x = random_vec(6, &mut rng);
            assert!((hsc(&p, &r, &x).unwrap() - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn hsc_of_space_form_is_c() {
        // Oracle: π₁(X,JX,JX,X) = g(X,X)² − g(X,JX)² = g(X,X)².
        let p = HermitianPoint::random(2, 3);
        let r = space_form_tensor(&p, -0.7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let x = random_vec(4, &mut rng);
            assert!((hsc(&p, &r, &x).unwrap() + 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn hsc_scale_and_j_invariant() {
        let p = HermitianPoint::random(3, 4);
        let r = crate::curvature::random_curvature_tensor(&p, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = random_vec(6, &mut rng);
        let h = hsc(&p, &r, &x).unwrap();
        assert!((hsc(&p, &r, &(&x * 2.0)).unwrap() - h).abs() < 1e-12 * (1.0 + h.abs()));
        let jx = p.j() * &x;
        assert!((hsc(&p, &r, &jx).unwrap() - h).abs() < 1e-11 * (1.0 + h.abs()));
    }

    #[test]
    fn hsc_zero_vector() {
        let p = HermitianPoint::standard(1);
        assert!(matches!(
            hsc(&p, &CurvTensor::zeros(2), &DVector::zeros(2)),
            Err(Error::ZeroVector)
        ));
    }

    fn e(n: usize, i: usize) -> DVector<f64> {
        DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })
    }

    #[test]
    fn ahsc_values() {
        let p = HermitianPoint::standard(3);
        let c = 0.6;
        // e₁ and e₃ span an antiholomorphic plane; a non-orthogonal pair too.
        let x = e(6, 0);
        let y = e(6, 2) + e(6, 0) * 0.4;
        assert!((ahsc(&p, &space_form_tensor(&p, c), &x, &y).unwrap() - c).abs() < 1e-12);
        assert!(
            (ahsc(&p, &complex_space_form_tensor(&p, c), &x, &y).unwrap() - c / 4.0).abs() < 1e-12
        );
    }

    #[test]
    fn ahsc_rejects_holomorphic_and_degenerate() {
        let p = HermitianPoint::standard(2);
        let (pi1, _) = sigma_forms(&p);
        let x = e(4, 0);
        let jx = p.j() * &x;
        assert!(matches!(
            ahsc(&p, &pi1, &x, &jx),
            Err(Error::NotAntiholomorphic { .. })
        ));
        assert!(matches!(
            ahsc(&p, &pi1, &x, &(&x * 2.0)),
            Err(Error::DegeneratePlane)
        ));
    }

    #[test]
    fn estimate_on_models() {
        let p = HermitianPoint::random(3, 9);
        let est = constant_hsc_estimate(&p, &complex_space_form_tensor(&p, 1.25)).unwrap();
        assert!((est.mu_hat - 1.25).abs() < 1e-12);
        assert!(est.defect < 1e-12);
        let zero = constant_hsc_estimate(&p, &CurvTensor::zeros(6)).unwrap();
        assert_eq!((zero.mu_hat, zero.defect), (0.0, 0.0));
        let sp = constant_hsc_estimate(&p, &space_form_tensor(&p, 1.0)).unwrap();
        assert!((sp.mu_hat - 1.0).abs() < 1e-12);
        assert!(sp.defect < 1e-12);
    }

    #[test]
    fn estimate_detects_perturbation() {
        // 0.1·(e₁∧e₃ ⊗ e₁∧e₃): R(X,Y,Z,U) = 0.1 (X∧Y)(e₁,e₃)(U∧Z)(e₁,e₃).
        let p = HermitianPoint::standard(3);
        let mut r = space_form_tensor(&p, 1.0);
        let wedge = |a: usize, b: usize| -> f64 {
            match (a, b) {
                (0, 2) => 1.0,
                (2, 0) => -1.0,
                _ => 0.0,
            }
        };
        let pert = CurvTensor::from_fn(6, |i, j, k, l| 0.1 * wedge(i, j) * wedge(l, k));
        assert!(pert.symmetry_defects().max() < 1e-15);
        r += &pert;
        let est = constant_hsc_estimate(&p, &r).unwrap();
        // Oracle: direct evaluation of the residual norm.
        let rs = star(&p, &r).unwrap();
        let direct =
            invariant_norm(&p, &(&rs - &complex_space_form_tensor(&p, est.mu_hat))).unwrap();
        assert!(est.defect > 1e-3);
        assert!((est.defect - direct).abs() < 1e-14);
    }
}
