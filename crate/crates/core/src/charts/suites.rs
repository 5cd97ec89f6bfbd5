//! Residuals of the nearly Kähler and Bianchi-derived identities on charts.
//!
//! Every residual is a max-abs over all components in a seeded orthonormal
//! frame at the point, divided by the chart's curvature scale raised to the
//! identity's weight, so tolerances are relative.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::curvature::{ricci_contraction, trace, HermitianPoint};
use crate::error::{Error, Result};
use crate::multilinear::{contract_slot_raw, orthonormalize, CurvTensor};

use super::fd::{derivative, FdConfig};
use super::geometry::{
    chart_point, check_margin, christoffel_raw, curvature_raw, j_derivatives_at, Christoffel,
    JDerivatives,
};
use super::model::Chart;

/// Residuals of the nearly Kähler identities at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NkIdentityDefects {
    /// `max |(∇_X J)X|` (symmetric part of `∇J`).
    pub nk: f64,
    /// Largest `|(∇_{Eₐ}J)E_b|` over frame pairs.
    pub nabla_j_max: f64,
    /// Invariant norm of `∇J`.
    pub nabla_j_norm: f64,
    /// `R(X,Y,Z,U) − R(X,Y,JZ,JU) + g((∇_X J)Y, (∇_Z J)U)`.
    pub id_1_1: f64,
    /// `2g((∇_X(∇_Y J))Z,U) − σ_{Y,U,Z} R(X,JY,U,Z)`.
    pub id_1_2: f64,
    /// `2(∇_X(S−S'))(Y,Z) − (S−S')((∇_X J)Y,JZ) − (S−S')(JY,(∇_X J)Z)`.
    pub id_1_3: f64,
    /// `⟨S−S', S−5S'⟩`.
    pub id_1_5: f64,
    /// `S − S' − (τ−τ')/(2m) g`.
    pub id_3_2: f64,
    /// `τ − 5τ'`.
    pub id_3_3: f64,
}

/// Residuals of the second-Bianchi consequences at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BianchiDefects {
    /// Directional derivatives of `τ − τ'`.
    pub id_1_4: f64,
    /// `Σ (∇_{Eᵢ}R)(X,Y,Z,Eᵢ) − (∇_X S)(Y,Z) + (∇_Y S)(X,Z)`.
    pub id_1_6: f64,
    /// `Σ (∇_{Eᵢ}S)(X,Eᵢ) − ½ X(τ)`.
    pub id_1_7: f64,
}

/// Step multiplier for differencing the curvature field itself. The field is
/// already a second difference, so at step `h` its rounding noise swamps the
/// third derivative.
const OUTER_STEP: f64 = 4.0;
/// Boundary margin in units of `h` needed by the widest stencil.
const MARGIN_STEPS: f64 = 2.0 * OUTER_STEP + 4.0;

/// All derivative data at one chart point.
struct Jet {
    n: usize,
    point: HermitianPoint,
    gamma: Christoffel,
    r: CurvTensor,
    s: DMatrix<f64>,
    s_prime: DMatrix<f64>,
    tau: f64,
    tau_prime: f64,
    frame: DMatrix<f64>,
    scale: f64,
}

/// `R, S, S', τ, τ'` flattened, for differencing.
fn curvature_field(chart: &dyn Chart, y: &[f64], cfg: &FdConfig) -> Result<Vec<f64>> {
    let r = curvature_raw(chart, y, cfg)?;
    let g = chart.metric_at(y);
    let j = chart.j_at(y);
    let gi = super::geometry::inverse_metric(&g)?;
    let s = ricci_contraction(&r, &gi);
    let sp = ricci_contraction(&r.with_j(&j, [false, false, true, true]), &gi);
    let tau = trace(&s, &gi);
    let tau_p = trace(&sp, &gi);
    let n = g.nrows();
    let mut out = r.into_vec();
    for q in [s.as_matrix(), sp.as_matrix()] {
        for a in 0..n {
            for b in 0..n {
                out.push(q[(a, b)]);
            }
        }
    }
    out.push(tau);
    out.push(tau_p);
    Ok(out)
}

impl Jet {
    fn new(chart: &dyn Chart, x: &[f64], cfg: &FdConfig) -> Result<Self> {
        let n = chart.dim();
        let point = chart_point(chart, x, cfg)?;
        let gamma = christoffel_raw(chart, x, cfg)?;
        let r = curvature_raw(chart, x, cfg)?;
        let s = ricci_contraction(&r, point.g_inv()).into_matrix();
        let s_prime = ricci_contraction(
            &r.with_j(point.j(), [false, false, true, true]),
            point.g_inv(),
        )
        .into_matrix();
        let tau = s.component_mul(point.g_inv()).sum();
        let tau_prime = s_prime.component_mul(point.g_inv()).sum();
        let frame = orthonormalize(&point, cfg.frame_seed)?.matrix();
        let scale = if chart.scale() > 0.0 {
            chart.scale()
        } else {
            1.0
        };
        Ok(Self {
            n,
            point,
            gamma,
            r,
            s,
            s_prime,
            tau,
            tau_prime,
            frame,
            scale,
        })
    }

    /// Max-abs of a covariant rank-`rank` array in the orthonormal frame.
    fn frame_max(&self, data: &[f64], rank: usize) -> f64 {
        let mut v = data.to_vec();
        for slot in 0..rank {
            v = contract_slot_raw(&v, rank, self.n, slot, &self.frame);
        }
        v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Derivatives of `R, S, S', τ, τ'` at the point.
    fn curvature_derivatives(
        &self,
        chart: &dyn Chart,
        x: &[f64],
        cfg: &FdConfig,
    ) -> Result<Vec<Vec<f64>>> {
        let len = self.n.pow(4) + 2 * self.n * self.n + 2;
        let field =
            |y: &[f64]| curvature_field(chart, y, cfg).unwrap_or_else(|_| vec![f64::NAN; len]);
        let d = derivative(&field, x, cfg.h * OUTER_STEP, cfg.richardson);
        if d.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("finite-difference curvature derivatives"));
        }
        Ok(d)
    }

    /// `(∇_a Q)_ij` for a `(0,2)` field with partials `dq[a][i*n+j]`.
    fn covariant_2(&self, q: &DMatrix<f64>, dq: impl Fn(usize, usize, usize) -> f64) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n * n];
        for a in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = dq(a, i, j);
                    for p in 0..n {
                        v -= self.gamma.get(p, a, i) * q[(p, j)]
                            + self.gamma.get(p, a, j) * q[(i, p)];
                    }
                    out[(a * n + i) * n + j] = v;
                }
            }
        }
        out
    }
}

fn lowered_nabla_j(jet: &Jet, jd: &JDerivatives) -> Vec<f64> {
    // g((∇ᵢJ)eⱼ, e_k) at [i][j][k].
    let n = jet.n;
    let g = jet.point.g();
    let mut out = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[(i * n + j) * n + k] = (0..n).map(|q| g[(k, q)] * jd.first(i, q, j)).sum();
            }
        }
    }
    out
}

fn nearly_kahler_measures(jet: &Jet, jd: &JDerivatives) -> (f64, f64, f64) {
    let n = jet.n;
    let low = lowered_nabla_j(jet, jd);
    let sym: Vec<f64> = (0..n * n * n)
        .map(|idx| {
            let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
            0.5 * (low[(i * n + j) * n + k] + low[(j * n + i) * n + k])
        })
        .collect();
    let root = jet.scale.sqrt();
    let nk = jet.frame_max(&sym, 3) / root;
    // |(∇_{Eₐ}J)E_b| = sqrt Σ_c g((∇_{Eₐ}J)E_b, E_c)² in an orthonormal frame.
    let mut in_frame = low;
    for slot in 0..3 {
        in_frame = contract_slot_raw(&in_frame, 3, n, slot, &jet.frame);
    }
    let mut max_pair = 0.0_f64;
    for ab in 0..n * n {
        let norm = in_frame[ab * n..(ab + 1) * n]
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
        max_pair = max_pair.max(norm);
    }
    let norm = in_frame.iter().map(|v| v * v).sum::<f64>().sqrt();
    (nk, max_pair / root, norm / root)
}

/// Residuals of the nearly Kähler identities at `x`.
///
/// Fails with [`Error::NotNearlyKahler`] when `max |(∇_X J)X|` exceeds
/// `cfg.tol_fd1`, since the remaining identities presuppose it.
pub fn nk_identity_suite(
    chart: &dyn Chart,
    x: &[f64],
    cfg: &FdConfig,
) -> Result<NkIdentityDefects> {
    check_margin(chart, x, MARGIN_STEPS, cfg)?;
    let jet = Jet::new(chart, x, cfg)?;
    let jd = j_derivatives_at(chart, x, cfg)?;
    nk_from_jet(chart, x, cfg, &jet, &jd)
}

fn nk_from_jet(
    chart: &dyn Chart,
    x: &[f64],
    cfg: &FdConfig,
    jet: &Jet,
    jd: &JDerivatives,
) -> Result<NkIdentityDefects> {
    let n = jet.n;
    let (nk, nabla_j_max, nabla_j_norm) = nearly_kahler_measures(jet, jd);
    if nk > cfg.tol_fd1 {
        return Err(Error::NotNearlyKahler {
            defect: nk,
            tol: cfg.tol_fd1,
        });
    }
    let g = jet.point.g();
    let j = jet.point.j();
    let low = lowered_nabla_j(jet, jd);
    let sc = jet.scale;

    // g((∇ᵢJ)eⱼ, (∇ₖJ)e_l) = Σ_pq g_pq (∇ᵢJ)^p_j (∇ₖJ)^q_l = Σ_q low[i][j][q] (∇ₖJ)^q_l.
    let mut d11 = (&jet.r - &jet.r.with_j(j, [false, false, true, true])).into_vec();
    for i in 0..n {
        for jj in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v: f64 = (0..n)
                        .map(|q| low[(i * n + jj) * n + q] * jd.first(k, q, l))
                        .sum();
                    d11[((i * n + jj) * n + k) * n + l] += v;
                }
            }
        }
    }
    let id_1_1 = jet.frame_max(&d11, 4) / sc;

    // 2 g((∇_a∇ᵢJ)eⱼ, e_l) − [R(a,Ji,l,j) + R(a,Jl,j,i) + R(a,Jj,i,l)].
    let rj = jet.r.with_j(j, [false, true, false, false]);
    let sigma = CurvTensor::combination(&[
        (1.0, &rj.permuted([0, 1, 3, 2])),
        (1.0, &rj.permuted([0, 3, 2, 1])),
        (1.0, &rj.permuted([0, 2, 1, 3])),
    ]);
    let mut d12 = vec![0.0; n.pow(4)];
    for a in 0..n {
        for i in 0..n {
            for jj in 0..n {
                for l in 0..n {
                    let lhs: f64 = 2.0
                        * (0..n)
                            .map(|q| g[(l, q)] * jd.second(a, i, q, jj))
                            .sum::<f64>();
                    d12[((a * n + i) * n + jj) * n + l] = lhs - sigma.get(a, i, jj, l);
                }
            }
        }
    }
    let id_1_2 = jet.frame_max(&d12, 4) / sc;

    let d = jet.curvature_derivatives(chart, x, cfg)?;
    let off_s = n.pow(4);
    let off_sp = off_s + n * n;
    let delta = &jet.s - &jet.s_prime;
    let ddelta =
        |a: usize, i: usize, jj: usize| d[a][off_s + i * n + jj] - d[a][off_sp + i * n + jj];
    let nabla_delta = jet.covariant_2(&delta, ddelta);
    // (S−S')((∇ₐJ)eᵢ, Jeⱼ) + (S−S')(Jeᵢ, (∇ₐJ)eⱼ)
    let dj = &delta * j;
    let jtd = j.transpose() * &delta;
    let mut d13 = vec![0.0; n * n * n];
    for a in 0..n {
        for i in 0..n {
            for jj in 0..n {
                let mut rhs = 0.0;
                for p in 0..n {
                    rhs += jd.first(a, p, i) * dj[(p, jj)] + jtd[(i, p)] * jd.first(a, p, jj);
                }
                d13[(a * n + i) * n + jj] = 2.0 * nabla_delta[(a * n + i) * n + jj] - rhs;
            }
        }
    }
    let id_1_3 = jet.frame_max(&d13, 3) / sc.powf(1.5);

    let gi = jet.point.g_inv();
    let five = &jet.s - &jet.s_prime * 5.0;
    let id_1_5 = (gi * &delta * gi).component_mul(&five).sum().abs() / (sc * sc);

    let m = (n / 2) as f64;
    let d32 = &delta - g * ((jet.tau - jet.tau_prime) / (2.0 * m));
    let id_3_2 = jet.frame_max(&flat(&d32), 2) / sc;
    let id_3_3 = (jet.tau - 5.0 * jet.tau_prime).abs() / sc;

    Ok(NkIdentityDefects {
        nk,
        nabla_j_max,
        nabla_j_norm,
        id_1_1,
        id_1_2,
        id_1_3,
        id_1_5,
        id_3_2,
        id_3_3,
    })
}

fn flat(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    (0..n * n).map(|k| m[(k / n, k % n)]).collect()
}

/// Residuals of the contracted second Bianchi identities at `x`.
pub fn bianchi_suite(chart: &dyn Chart, x: &[f64], cfg: &FdConfig) -> Result<BianchiDefects> {
    check_margin(chart, x, MARGIN_STEPS, cfg)?;
    let jet = Jet::new(chart, x, cfg)?;
    bianchi_from_jet(chart, x, cfg, &jet)
}

fn bianchi_from_jet(
    chart: &dyn Chart,
    x: &[f64],
    cfg: &FdConfig,
    jet: &Jet,
) -> Result<BianchiDefects> {
    let n = jet.n;
    let d = jet.curvature_derivatives(chart, x, cfg)?;
    let off_s = n.pow(4);
    let off_tau = off_s + 2 * n * n;
    let sc15 = jet.scale.powf(1.5);

    let dtau: Vec<f64> = (0..n).map(|a| d[a][off_tau]).collect();
    let dtau_diff: Vec<f64> = (0..n).map(|a| d[a][off_tau] - d[a][off_tau + 1]).collect();
    let id_1_4 = jet.frame_max(&dtau_diff, 1) / sc15;

    let nabla_s = jet.covariant_2(&jet.s, |a, i, j| d[a][off_s + i * n + j]);
    let ns = |a: usize, i: usize, j: usize| nabla_s[(a * n + i) * n + j];

    // (∇ₐR)_ijkl
    let idx = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
    let nabla_r = |a: usize, i: usize, j: usize, k: usize, l: usize| -> f64 {
        let mut v = d[a][idx(i, j, k, l)];
        for p in 0..n {
            v -= self_gamma(jet, p, a, i) * jet.r.get(p, j, k, l)
                + self_gamma(jet, p, a, j) * jet.r.get(i, p, k, l)
                + self_gamma(jet, p, a, k) * jet.r.get(i, j, p, l)
                + self_gamma(jet, p, a, l) * jet.r.get(i, j, k, p);
        }
        v
    };
    let gi = jet.point.g_inv();
    let mut d16 = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut lhs = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        let w = gi[(a, b)];
                        if w != 0.0 {
                            lhs += w * nabla_r(a, i, j, k, b);
                        }
                    }
                }
                d16[(i * n + j) * n + k] = lhs - ns(i, j, k) + ns(j, i, k);
            }
        }
    }
    let id_1_6 = jet.frame_max(&d16, 3) / sc15;

    let d17: Vec<f64> = (0..n)
        .map(|i| {
            let mut v = 0.0;
            for a in 0..n {
                for b in 0..n {
                    v += gi[(a, b)] * ns(a, i, b);
                }
            }
            v - 0.5 * dtau[i]
        })
        .collect();
    let id_1_7 = jet.frame_max(&d17, 1) / sc15;

    Ok(BianchiDefects {
        id_1_4,
        id_1_6,
        id_1_7,
    })
}

#[inline]
fn self_gamma(jet: &Jet, k: usize, i: usize, j: usize) -> f64 {
    jet.gamma.get(k, i, j)
}

/// Both suites at one point, sharing the derivative computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointIdentities {
    pub nk: NkIdentityDefects,
    pub bianchi: BianchiDefects,
}

pub fn identities_at(chart: &dyn Chart, x: &[f64], cfg: &FdConfig) -> Result<PointIdentities> {
    check_margin(chart, x, MARGIN_STEPS, cfg)?;
    let jet = Jet::new(chart, x, cfg)?;
    let jd = j_derivatives_at(chart, x, cfg)?;
    Ok(PointIdentities {
        nk: nk_from_jet(chart, x, cfg, &jet, &jd)?,
        bianchi: bianchi_from_jet(chart, x, cfg, &jet)?,
    })
}
