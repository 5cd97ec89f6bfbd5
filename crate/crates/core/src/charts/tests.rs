use nalgebra::DMatrix;

use super::*;
use crate::curvature::{complex_space_form_tensor, ricci_family, space_form_tensor};
use crate::error::Error;
use crate::multilinear::orthonormalize;

fn chart(text: &str) -> ChartModel {
    make_chart(&text.parse::<ModelSpec>().unwrap()).unwrap()
}

fn rel(a: &crate::multilinear::CurvTensor, b: &crate::multilinear::CurvTensor) -> f64 {
    (a - b).max_abs() / b.max_abs().max(1e-300)
}

#[test]
fn flat_chart_has_no_connection() {
    let ch = chart("ce(3)");
    let cfg = FdConfig::default();
    let x = vec![0.1, -0.2, 0.3, 0.0, 0.2, 0.1];
    assert!(christoffel_at(&ch, &x, &cfg).unwrap().max_abs() < 1e-12);
    let (_, r) = curvature_at(&ch, &x, &cfg).unwrap();
    assert!(r.max_abs() < 1e-10);
}

#[test]
fn sphere_connection_vanishes_at_origin() {
    let ch = chart("s6(1)");
    let gamma = christoffel_at(&ch, &[0.0; 7][..6], &FdConfig::default()).unwrap();
    assert!(gamma.max_abs() < 1e-9);
}

#[test]
fn christoffel_symmetric_in_lower_indices() {
    let ch = chart("cp(2,3)");
    let x = ch.sample_points(5, 1).remove(0);
    let gamma = christoffel_at(&ch, &x, &FdConfig::default()).unwrap();
    let n = gamma.dim();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                assert!((gamma.get(k, i, j) - gamma.get(k, j, i)).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn sphere_curvature_has_constant_sectional_curvature() {
    // sign convention lock: the round sphere gives c·π₁
    for c in [1.0, 2.5] {
        let ch = chart(&format!("s6({c})"));
        for x in ch.sample_points(11, 3) {
            let (p, r) = curvature_at(&ch, &x, &FdConfig::default()).unwrap();
            let want = space_form_tensor(&p, c);
            assert!(rel(&r, &want) < 1e-4, "c={c}: {}", rel(&r, &want));
        }
    }
}

#[test]
fn complex_space_form_curvature_matches_model() {
    for (text, mu) in [("cp(3,4)", 4.0), ("cd(2,-2)", -2.0)] {
        let ch = chart(text);
        for x in ch.sample_points(3, 2) {
            let (p, r) = curvature_at(&ch, &x, &FdConfig::default()).unwrap();
            let want = complex_space_form_tensor(&p, mu);
            assert!(rel(&r, &want) < 1e-4, "{text}: {}", rel(&r, &want));
        }
    }
}

#[test]
fn kahler_charts_have_parallel_j() {
    for text in ["cp(2,1)", "cd(2,-1)", "ce(2)"] {
        let ch = chart(text);
        let x = ch.sample_points(9, 1).remove(0);
        let jd = j_derivatives_at(&ch, &x, &FdConfig::default()).unwrap();
        let n = ch.dim();
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    assert!(jd.first(i, k, j).abs() < 1e-7, "{text}");
                }
            }
        }
    }
}

#[test]
fn sphere_is_strictly_nearly_kahler() {
    let ch = chart("s6(1)");
    for x in ch.sample_points(21, 3) {
        let d = nk_identity_suite(&ch, &x, &FdConfig::default()).unwrap();
        assert!(d.nk < 1e-6, "{d:?}");
        assert!(d.nabla_j_max > 0.1, "{d:?}");
        for v in [d.id_1_1, d.id_1_2, d.id_1_3, d.id_1_5, d.id_3_2, d.id_3_3] {
            assert!(v < 1e-4, "{d:?}");
        }
    }
}

#[test]
fn ricci_difference_is_a_square_of_nabla_j() {
    // (S − S')(X,Y) = Σᵢ g((∇_X J)Eᵢ, (∇_Y J)Eᵢ) on a nearly Kähler manifold
    let ch = chart("s6(2)");
    let cfg = FdConfig::default();
    let x = ch.sample_points(4, 1).remove(0);
    let (p, r) = curvature_at(&ch, &x, &cfg).unwrap();
    let fam = ricci_family(&p, &r).unwrap();
    let jd = j_derivatives_at(&ch, &x, &cfg).unwrap();
    let frame = orthonormalize(&p, 1).unwrap();
    let n = ch.dim();
    let ev = |a: usize, e: &nalgebra::DVector<f64>| -> nalgebra::DVector<f64> {
        nalgebra::DVector::from_fn(n, |k, _| (0..n).map(|j| jd.first(a, k, j) * e[j]).sum())
    };
    for a in 0..n {
        for b in 0..n {
            let mut sum = 0.0;
            for e in frame.vectors() {
                sum += p.g().dot(&(ev(a, e) * ev(b, e).transpose()));
            }
            let want = fam.s.get(a, b) - fam.s_prime.get(a, b);
            assert!(
                (sum - want).abs() < 1e-4 * (1.0 + want.abs()),
                "{a}{b}: {sum} vs {want}"
            );
        }
    }
}

#[test]
fn bianchi_consequences_hold_on_models() {
    for text in ["s6(1)", "cp(2,2)", "cd(1,-1)*s6(1)"] {
        let ch = chart(text);
        let x = ch.sample_points(8, 1).remove(0);
        let b = bianchi_suite(&ch, &x, &FdConfig::default()).unwrap();
        assert!(
            b.id_1_4 < 1e-4 && b.id_1_6 < 1e-4 && b.id_1_7 < 1e-4,
            "{text}: {b:?}"
        );
    }
}

#[test]
fn fd_error_shrinks_with_step() {
    let ch = chart("s6(1)");
    let x = ch.sample_points(2, 1).remove(0);
    let err = |h: f64| {
        let cfg = FdConfig {
            h,
            richardson: false,
            ..FdConfig::default()
        };
        let (p, r) = curvature_at(&ch, &x, &cfg).unwrap();
        (&r - &space_form_tensor(&p, 1.0)).max_abs()
    };
    let ratio = err(2e-2) / err(1e-2);
    assert!(ratio >= 3.0, "ratio {ratio}");
}

/// Flat metric with a complex structure rotating along x₀; not nearly Kähler.
struct TwistedFlat;

impl Chart for TwistedFlat {
    fn dim(&self) -> usize {
        4
    }
    fn metric_at(&self, _x: &[f64]) -> DMatrix<f64> {
        DMatrix::identity(4, 4)
    }
    fn j_at(&self, x: &[f64]) -> DMatrix<f64> {
        let (s, c) = x[0].sin_cos();
        let mut rot = DMatrix::identity(4, 4);
        rot[(0, 0)] = c;
        rot[(0, 2)] = -s;
        rot[(2, 0)] = s;
        rot[(2, 2)] = c;
        let j0 = crate::curvature::standard_j(2);
        &rot * j0 * rot.transpose()
    }
    fn margin_at(&self, _x: &[f64]) -> f64 {
        1.0
    }
    fn sample_points(&self, _seed: u64, count: usize) -> Vec<Vec<f64>> {
        vec![vec![0.3, 0.0, 0.0, 0.0]; count]
    }
    fn scale(&self) -> f64 {
        0.0
    }
    fn label(&self) -> String {
        "twisted".into()
    }
}

#[test]
fn non_nearly_kahler_chart_is_rejected() {
    let err =
        nk_identity_suite(&TwistedFlat, &[0.3, 0.0, 0.0, 0.0], &FdConfig::default()).unwrap_err();
    assert!(matches!(err, Error::NotNearlyKahler { .. }), "{err}");
}

#[test]
fn points_near_the_boundary_are_rejected() {
    let ch = chart("cd(1,-1)");
    let err = curvature_at(&ch, &[0.9999, 0.0], &FdConfig::default()).unwrap_err();
    assert!(matches!(err, Error::MarginViolation { .. }), "{err}");
}
