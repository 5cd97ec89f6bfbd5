//! Levi-Civita connection, curvature and derivatives of `J` on a chart by
//! nested central differences.
//!
//! Index layouts (row-major):
//! * Christoffel symbols `Γ^k_ij` at `[k][i][j]`;
//! * `(∇ᵢJ)^k_j` at `[i][k][j]`;
//! * `(∇_a∇ᵢJ)^k_j` at `[a][i][k][j]`.

use nalgebra::{Cholesky, DMatrix};

use crate::curvature::{validate_point, HermitianPoint};
use crate::error::{Error, Result};
use crate::multilinear::CurvTensor;

use super::fd::{derivative, FdConfig};
use super::model::Chart;

pub(crate) fn check_margin(chart: &dyn Chart, x: &[f64], steps: f64, cfg: &FdConfig) -> Result<()> {
    if x.len() != chart.dim() {
        return Err(Error::DimensionMismatch {
            expected: chart.dim(),
            found: x.len(),
        });
    }
    let margin = chart.margin_at(x);
    let required = steps * cfg.h;
    if margin < required {
        return Err(Error::MarginViolation { margin, required });
    }
    Ok(())
}

fn flatten(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            out.push(m[(a, b)]);
        }
    }
    out
}

/// Christoffel symbols of the chart metric at `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.dim + i) * self.dim + j]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

pub(crate) fn inverse_metric(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    Cholesky::new(g.clone())
        .map(|c| c.inverse())
        .ok_or(Error::SingularMetric)
}

pub(crate) fn christoffel_raw(chart: &dyn Chart, x: &[f64], cfg: &FdConfig) -> Result<Christoffel> {
    let n = chart.dim();
    let g_inv = inverse_metric(&chart.metric_at(x))?;
    let metric = |y: &[f64]| flatten(&chart.metric_at(y));
    let dg = derivative(&metric, x, cfg.h, cfg.richardson);
    let d = |l: usize, a: usize, b: usize| dg[l][a * n + b];
    let mut data = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for l in 0..n {
                    let w = g_inv[(k, l)];
                    if w != 0.0 {
                        acc += w * (d(i, j, l) + d(j, i, l) - d(l, i, j));
                    }
                }
                data[(k * n + i) * n + j] = 0.5 * acc;
                data[(k * n + j) * n + i] = 0.5 * acc;
            }
        }
    }
    Ok(Christoffel { dim: n, data })
}

/// `Γ^k_ij = ½ g^{kl}(∂ᵢg_jl + ∂ⱼg_il − ∂_l g_ij)`, symmetric in `(i, j)` by
/// construction.
pub fn christoffel_at(chart: &dyn Chart, x: &[f64], cfg: &FdConfig) -> Result<Christoffel> {
    check_margin(chart, x, 2.0, cfg)?;
    christoffel_raw(chart, x, cfg)
}

pub(crate) fn chart_point(chart: &dyn Chart, x: &[f64], cfg: &FdConfig) -> Result<HermitianPoint> {
    Ok(validate_point(chart.metric_at(x), chart.j_at(x), 1e-10)?.with_tol(cfg.tol_fd2))
}

pub(crate) fn curvature_raw(chart: &dyn Chart, x: &[f64], cfg: &FdConfig) -> Result<CurvTensor> {
    let n = chart.dim();
    let gamma = christoffel_raw(chart, x, cfg)?;
    let field = |y: &[f64]| {
        christoffel_raw(chart, y, cfg)
            .map(|c| c.data)
            .unwrap_or_else(|_| vec![f64::NAN; n * n * n])
    };
    let dgamma = derivative(&field, x, cfg.h, cfg.richardson);
    let dg = |a: usize, k: usize, i: usize, j: usize| dgamma[a][(k * n + i) * n + j];
    let g = chart.metric_at(x);
    // A^l_{ijk}: R(∂ᵢ,∂ⱼ)∂ₖ = A^l_{ijk} ∂_l.
    let mut a = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = dg(i, l, j, k) - dg(j, l, i, k);
                    for m in 0..n {
                        v += gamma.get(m, j, k) * gamma.get(l, i, m)
                            - gamma.get(m, i, k) * gamma.get(l, j, m);
                    }
                    a[((i * n + j) * n + k) * n + l] = v;
                }
            }
        }
    }
    let r = CurvTensor::from_fn(n, |i, j, k, l| {
        (0..n)
            .map(|p| g[(l, p)] * a[((i * n + j) * n + k) * n + p])
            .sum()
    });
    if !r.is_finite() {
        return Err(Error::NonFinite("finite-difference curvature"));
    }
    Ok(r)
}

/// Finite-difference curvature `R(∂ᵢ,∂ⱼ,∂ₖ,∂_l)` and the almost Hermitian
/// point at `x`. The point's tolerance is widened to `cfg.tol_fd2`.
pub fn curvature_at(
    chart: &dyn Chart,
    x: &[f64],
    cfg: &FdConfig,
) -> Result<(HermitianPoint, CurvTensor)> {
    check_margin(chart, x, 4.0, cfg)?;
    let point = chart_point(chart, x, cfg)?;
    let r = curvature_raw(chart, x, cfg)?;
    Ok((point, r))
}

/// First and second covariant derivatives of `J`.
#[derive(Debug, Clone, PartialEq)]
pub struct JDerivatives {
    pub dim: usize,
    /// `(∇ᵢJ)^k_j` at `[i][k][j]`.
    pub nabla_j: Vec<f64>,
    /// `(∇_a∇ᵢJ)^k_j` at `[a][i][k][j]`.
    pub nabla2_j: Vec<f64>,
}

impl JDerivatives {
    #[inline]
    pub fn first(&self, i: usize, k: usize, j: usize) -> f64 {
        let n = self.dim;
        self.nabla_j[(i * n + k) * n + j]
    }

    #[inline]
    pub fn second(&self, a: usize, i: usize, k: usize, j: usize) -> f64 {
        let n = self.dim;
        self.nabla2_j[((a * n + i) * n + k) * n + j]
    }
}

pub(crate) fn nabla_j_raw(chart: &dyn Chart, x: &[f64], cfg: &FdConfig) -> Result<Vec<f64>> {
    let n = chart.dim();
    let gamma = christoffel_raw(chart, x, cfg)?;
    let jf = |y: &[f64]| flatten(&chart.j_at(y));
    let dj = derivative(&jf, x, cfg.h, cfg.richardson);
    let j = chart.j_at(x);
    let mut out = vec![0.0; n * n * n];
    for i in 0..n {
        for k in 0..n {
            for jj in 0..n {
                let mut v = dj[i][k * n + jj];
                for l in 0..n {
                    v += gamma.get(k, i, l) * j[(l, jj)] - gamma.get(l, i, jj) * j[(k, l)];
                }
                out[(i * n + k) * n + jj] = v;
            }
        }
    }
    Ok(out)
}

/// `(∇ᵢJ)^k_j = ∂ᵢJ^k_j + Γ^k_il J^l_j − Γ^l_ij J^k_l`, and `∇²J` by
/// differencing the `∇J` field with connection corrections on all slots.
pub fn j_derivatives_at(chart: &dyn Chart, x: &[f64], cfg: &FdConfig) -> Result<JDerivatives> {
    check_margin(chart, x, 4.0, cfg)?;
    let n = chart.dim();
    let nabla_j = nabla_j_raw(chart, x, cfg)?;
    let field =
        |y: &[f64]| nabla_j_raw(chart, y, cfg).unwrap_or_else(|_| vec![f64::NAN; n * n * n]);
    let d = derivative(&field, x, cfg.h, cfg.richardson);
    let gamma = christoffel_raw(chart, x, cfg)?;
    let nj = |i: usize, k: usize, j: usize| nabla_j[(i * n + k) * n + j];
    let mut nabla2_j = vec![0.0; n.pow(4)];
    for a in 0..n {
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    let mut v = d[a][(i * n + k) * n + j];
                    for p in 0..n {
                        v += -gamma.get(p, a, i) * nj(p, k, j) + gamma.get(k, a, p) * nj(i, p, j)
                            - gamma.get(p, a, j) * nj(i, k, p);
                    }
                    nabla2_j[((a * n + i) * n + k) * n + j] = v;
                }
            }
        }
    }
    if nabla2_j.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("finite-difference derivatives of J"));
    }
    Ok(JDerivatives {
        dim: n,
        nabla_j,
        nabla2_j,
    })
}
