use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curvature::HermitianPoint;
use crate::error::{Error, Result};

const MAX_ATTEMPTS: usize = 16;
/// Relative residual below which a Gram–Schmidt step counts as degenerate.
const DEGENERACY: f64 = 1e-8;

/// A basis of tangent vectors in coordinate components.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSet {
    dim: usize,
    vectors: Vec<DVector<f64>>,
}

impl FrameSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[DVector<f64>] {
        &self.vectors
    }

    /// Frame vectors as the columns of a matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_columns(&self.vectors)
    }

    /// Max-abs entry of `Fᵀ g F − I`.
    pub fn gram_defect(&self, point: &HermitianPoint) -> f64 {
        let f = self.matrix();
        let gram = f.transpose() * point.g() * &f;
        (gram - DMatrix::identity(self.vectors.len(), self.vectors.len())).amax()
    }
}

/// Modified Gram–Schmidt in the metric of `point`, with one
/// reorthogonalization pass. Returns `None` on a degenerate input.
pub fn gram_schmidt(point: &HermitianPoint, vectors: &[DVector<f64>]) -> Option<FrameSet> {
    let g = point.g();
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let scale = g_norm(g, v);
        if scale == 0.0 || !scale.is_finite() {
            return None;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for e in &out {
                let c = e.dot(&(g * &w));
                w -= e * c;
            }
        }
        let n = g_norm(g, &w);
        if n < DEGENERACY * scale {
            return None;
        }
        out.push(w / n);
    }
    Some(FrameSet {
        dim: point.dim(),
        vectors: out,
    })
}

fn g_norm(g: &DMatrix<f64>, v: &DVector<f64>) -> f64 {
    v.dot(&(g * v)).max(0.0).sqrt()
}

/// Seeded random `g`-orthonormal basis.
pub fn orthonormalize(point: &HermitianPoint, seed: u64) -> Result<FrameSet> {
    let n = point.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let basis: Vec<DVector<f64>> = (0..n)
            .map(|_| DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)))
            .collect();
        if let Some(frame) = gram_schmidt(point, &basis) {
            return Ok(frame);
        }
    }
    Err(Error::DegenerateBasis {
        attempts: MAX_ATTEMPTS,
    })
}
