use nalgebra::{Cholesky, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, PointInvariant, PointViolation, Result};
use crate::multilinear::CurvTensor;

/// Default tolerance for exact-formula algebra.
pub const TOL_ALG: f64 = 1e-12;

/// Metric `g` and almost complex structure `J` on a `2m`-dimensional tangent
/// space, in coordinate components. `J[(k, j)]` is `(J e_j)^k`.
///
/// The point also carries the tolerance used to admit curvature tensors into
/// the algebra (`tol`): exact algebra uses `1e-12`, finite-difference charts
/// widen it.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianPoint {
    g: DMatrix<f64>,
    g_inv: DMatrix<f64>,
    j: DMatrix<f64>,
    tol: f64,
}

/// Checks the almost Hermitian invariants of `(g, J)` at tolerance `tol`
/// (relative to the size of `g`) and reports each violation separately.
pub fn validate_point(g: DMatrix<f64>, j: DMatrix<f64>, tol: f64) -> Result<HermitianPoint> {
    let n = g.nrows();
    if !g.is_square() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.ncols(),
        });
    }
    if j.nrows() != n || j.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: j.nrows(),
        });
    }
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("dimension 0".into()));
    }
    if g.iter().chain(j.iter()).any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("metric or complex structure"));
    }
    let scale = 1.0 + g.amax();
    let mut violations = Vec::new();

    let j2 = (&j * &j + DMatrix::identity(n, n)).amax();
    if j2 > tol * (1.0 + j.amax().powi(2)) {
        violations.push(PointViolation {
            invariant: PointInvariant::ComplexStructure,
            defect: j2,
        });
    }
    let sym = (&g - g.transpose()).amax();
    if sym > tol * scale {
        violations.push(PointViolation {
            invariant: PointInvariant::MetricSymmetry,
            defect: sym,
        });
    }
    let gs = (&g + g.transpose()) * 0.5;
    if Cholesky::new(gs.clone()).is_none() {
        let min_eig = gs.symmetric_eigenvalues().min();
        violations.push(PointViolation {
            invariant: PointInvariant::MetricPositivity,
            defect: -min_eig,
        });
    }
    let compat = (j.transpose() * &g * &j - &g).amax();
    if compat > tol * scale {
        violations.push(PointViolation {
            invariant: PointInvariant::Compatibility,
            defect: compat,
        });
    }
    if !violations.is_empty() {
        return Err(Error::InvalidPoint(violations));
    }
    let g_inv = Cholesky::new(gs).ok_or(Error::SingularMetric)?.inverse();
    Ok(HermitianPoint {
        g,
        g_inv,
        j,
        tol: TOL_ALG,
    })
}

/// The standard complex structure `J e₂ᵢ₋₁ = e₂ᵢ, J e₂ᵢ = −e₂ᵢ₋₁` (1-based).
pub fn standard_j(m: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        j[(2 * i + 1, 2 * i)] = 1.0;
        j[(2 * i, 2 * i + 1)] = -1.0;
    }
    j
}

impl HermitianPoint {
    pub fn new(g: DMatrix<f64>, j: DMatrix<f64>) -> Result<Self> {
        validate_point(g, j, TOL_ALG)
    }

    /// Flat metric with the standard block complex structure.
    pub fn standard(m: usize) -> Self {
        Self::new(DMatrix::identity(2 * m, 2 * m), standard_j(m)).expect("standard point is valid")
    }

    /// A seeded non-orthonormal point: `g = AᵀA` for a random complex-linear
    /// `A`, with the standard `J`.
    pub fn random(m: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        let n = 2 * m;
        let mut a = DMatrix::zeros(n, n);
        for p in 0..m {
            for q in 0..m {
                let re: f64 = rng.random_range(-0.5..0.5);
                let im: f64 = rng.random_range(-0.5..0.5);
                let diag = if p == q { 1.0 } else { 0.0 };
                // Real form of the complex entry (re + diag) + i·im.
                a[(2 * p, 2 * q)] = re + diag;
                a[(2 * p + 1, 2 * q + 1)] = re + diag;
                a[(2 * p + 1, 2 * q)] = im;
                a[(2 * p, 2 * q + 1)] = -im;
            }
        }
        let g = a.transpose() * &a;
        let g = (&g + g.transpose()) * 0.5;
        Self::new(g, standard_j(m)).expect("random point is valid")
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    /// Complex dimension `m`.
    pub fn m(&self) -> usize {
        self.dim() / 2
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn g_inv(&self) -> &DMatrix<f64> {
        &self.g_inv
    }

    pub fn j(&self) -> &DMatrix<f64> {
        &self.j
    }

    /// Kähler form components `Ω[(i, l)] = g(eᵢ, J e_l)`.
    pub fn omega(&self) -> DMatrix<f64> {
        &self.g * &self.j
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        Ok(())
    }

    /// Rejects tensors whose defining symmetry defects exceed the point
    /// tolerance, relative to the tensor's magnitude.
    pub(crate) fn require_curvature_class(&self, r: &CurvTensor) -> Result<()> {
        self.check_dim(r.dim())?;
        if !r.is_finite() {
            return Err(Error::NonFinite("curvature tensor"));
        }
        let tol = self.tol * (1.0 + r.max_abs());
        let defect = r.symmetry_defects().max_defining();
        if defect > tol {
            return Err(Error::NotCurvatureClass { defect, tol });
        }
        Ok(())
    }
}
