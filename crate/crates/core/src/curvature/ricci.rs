use nalgebra::DMatrix;

use crate::error::Result;
use crate::multilinear::{CurvTensor, SymBilinear};

use super::{star, HermitianPoint};

/// The six contractions of one curvature tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct RicciFamily {
    pub s: SymBilinear,
    pub s_prime: SymBilinear,
    pub s_star: SymBilinear,
    pub tau: f64,
    pub tau_prime: f64,
    pub tau_star: f64,
}

/// `S(X,Y) = Σ T(X,Eᵢ,Eᵢ,Y)` as `S_ad = g^{bc} T_abcd`.
pub fn ricci_contraction(t: &CurvTensor, g_inv: &DMatrix<f64>) -> SymBilinear {
    let n = t.dim();
    let mut s = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let w = g_inv[(b, c)];
                if w == 0.0 {
                    continue;
                }
                for d in 0..n {
                    s[(a, d)] += w * t.get(a, b, c, d);
                }
            }
        }
    }
    SymBilinear::from_matrix(s)
}

/// Trace of a `(0,2)` tensor against the inverse metric.
pub fn trace(q: &SymBilinear, g_inv: &DMatrix<f64>) -> f64 {
    q.as_matrix().component_mul(g_inv).sum()
}

/// `S, S', S*` and their traces. `S'(X,Y) = Σ R(X,Eᵢ,JEᵢ,JY)`; `S*` is the
/// Ricci contraction of `R*`.
pub fn ricci_family(point: &HermitianPoint, r: &CurvTensor) -> Result<RicciFamily> {
    let r_star = star(point, r)?;
    Ok(ricci_family_with_star(point, r, &r_star))
}

pub(crate) fn ricci_family_with_star(
    point: &HermitianPoint,
    r: &CurvTensor,
    r_star: &CurvTensor,
) -> RicciFamily {
    let gi = point.g_inv();
    let s = ricci_contraction(r, gi);
    let s_prime = ricci_contraction(&r.with_j(point.j(), [false, false, true, true]), gi);
    let s_star = ricci_contraction(r_star, gi);
    RicciFamily {
        tau: trace(&s, gi),
        tau_prime: trace(&s_prime, gi),
        tau_star: trace(&s_star, gi),
        s,
        s_prime,
        s_star,
    }
}

#[cfg(test)]
mod tests {
    use nalgebra::DVector;

    use super::*;
    use crate::curvature::{complex_space_form_tensor, random_curvature_tensor, space_form_tensor};
    use crate::multilinear::orthonormalize;

    /// Frame-sum oracle for S and S' on an orthonormal frame.
    fn frame_sums(
        point: &HermitianPoint,
        r: &CurvTensor,
        seed: u64,
    ) -> (DMatrix<f64>, DMatrix<f64>) {
        let f = orthonormalize(point, seed).unwrap();
        let n = point.dim();
        let e: Vec<DVector<f64>> = (0..n)
            .map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
        let mut s = DMatrix::zeros(n, n);
        let mut sp = DMatrix::zeros(n, n);
        for a in 0..n {
            for d in 0..n {
                for v in f.vectors() {
                    let jv = point.j() * v;
                    let jd = point.j() * &e[d];
                    s[(a, d)] += r.eval(&e[a], v, v, &e[d]);
                    sp[(a, d)] += r.eval(&e[a], v, &jv, &jd);
                }
            }
        }
        (s, sp)
    }

    #[test]
    fn space_form_family_dim6() {
        let p = HermitianPoint::standard(3);
        let c = 1.3;
        let r = space_form_tensor(&p, c);
        let f = ricci_family(&p, &r).unwrap();
        let (s, sp) = frame_sums(&p, &r, 0);
        let g = p.g();
        assert!((&s - g * (5.0 * c)).amax() < 1e-12);
        assert!((&sp - g * c).amax() < 1e-12);
        assert!((f.s.as_matrix() - &s).amax() < 1e-12);
        assert!((f.s_prime.as_matrix() - &sp).amax() < 1e-12);
        assert!((f.s_star.as_matrix() - g * (2.0 * c)).amax() < 1e-12);
        assert!((f.tau - 30.0 * c).abs() < 1e-12);
        assert!((f.tau_prime - 6.0 * c).abs() < 1e-12);
        assert!((f.tau_star - 12.0 * c).abs() < 1e-12);
    }

    #[test]
    fn complex_space_form_family_m3() {
        let p = HermitianPoint::standard(3);
        let mu = 0.9;
        let r = complex_space_form_tensor(&p, mu);
        let f = ricci_family(&p, &r).unwrap();
        let (s, sp) = frame_sums(&p, &r, 3);
        assert!((&s - p.g() * (2.0 * mu)).amax() < 1e-12);
        assert!((&sp - p.g() * (2.0 * mu)).amax() < 1e-12);
        assert!((f.tau - 12.0 * mu).abs() < 1e-12);
        assert!((f.tau_prime - 12.0 * mu).abs() < 1e-12);
        assert!((f.tau_star - 12.0 * mu).abs() < 1e-12);
    }

    #[test]
    fn zero_family() {
        let p = HermitianPoint::standard(2);
        let f = ricci_family(&p, &CurvTensor::zeros(4)).unwrap();
        assert_eq!(
            f.s.max_abs() + f.s_prime.max_abs() + f.s_star.max_abs(),
            0.0
        );
        assert_eq!(f.tau.abs() + f.tau_prime.abs() + f.tau_star.abs(), 0.0);
    }

    #[test]
    fn frame_independent_on_random_input() {
        let p = HermitianPoint::random(3, 8);
        let r = random_curvature_tensor(&p, 21);
        let f = ricci_family(&p, &r).unwrap();
        let scale = 1.0 + r.max_abs();
        for seed in 0..10 {
            let (s, sp) = frame_sums(&p, &r, 500 + seed);
            assert!((f.s.as_matrix() - s).amax() < 1e-12 * scale);
            assert!((f.s_prime.as_matrix() - sp).amax() < 1e-12 * scale);
        }
    }

    #[test]
    fn s_star_symmetric_and_j_invariant() {
        for seed in 0..6 {
            let p = HermitianPoint::random(3, seed);
            let r = random_curvature_tensor(&p, seed * 3 + 1);
            let f = ricci_family(&p, &r).unwrap();
            let q = f.s_star.as_matrix();
            let scale = 1.0 + q.amax();
            assert!(f.s_star.symmetry_defect() < 1e-12 * scale);
            let jq = p.j().transpose() * q * p.j();
            assert!((jq - q).amax() < 1e-12 * scale);
        }
    }
}
