//! Dense tensor storage, metric contractions, invariant norms and symmetry
//! diagnostics.
//!
//! Components are stored in coordinate indices. Every contraction raises
//! indices with the inverse metric explicitly, so nothing here assumes an
//! orthonormal basis.

mod bilinear;
mod frame;
mod tensor;

pub use bilinear::SymBilinear;
pub use frame::{gram_schmidt, orthonormalize, FrameSet};
pub use tensor::{contract_slot_raw, curvature_symmetry_defects, CurvTensor, SymmetryDefects};

use nalgebra::DMatrix;

use crate::curvature::HermitianPoint;
use crate::error::{Error, Result};

/// Tensors whose metric self-contraction defines an invariant norm.
pub trait InvariantNorm {
    fn dim(&self) -> usize;
    fn all_finite(&self) -> bool;
    /// Full contraction of `self` with itself, every index raised by `ginv`.
    fn raised_square(&self, ginv: &DMatrix<f64>) -> f64;
}

/// `sqrt` of the full self-contraction of `t` with the inverse metric of
/// `point` on every index. Frame independent.
pub fn invariant_norm<T: InvariantNorm + ?Sized>(point: &HermitianPoint, t: &T) -> Result<f64> {
    if t.dim() != point.dim() {
        return Err(Error::DimensionMismatch {
            expected: point.dim(),
            found: t.dim(),
        });
    }
    if !t.all_finite() {
        return Err(Error::NonFinite("tensor"));
    }
    // Rounding can push an exact zero slightly negative.
    Ok(t.raised_square(point.g_inv()).max(0.0).sqrt())
}

impl InvariantNorm for CurvTensor {
    fn dim(&self) -> usize {
        CurvTensor::dim(self)
    }

    fn all_finite(&self) -> bool {
        self.is_finite()
    }

    fn raised_square(&self, ginv: &DMatrix<f64>) -> f64 {
        let mut up = self.clone();
        for slot in 0..4 {
            up = up.contract_slot(slot, ginv);
        }
        up.as_slice()
            .iter()
            .zip(self.as_slice())
            .map(|(a, b)| a * b)
            .sum()
    }
}

impl InvariantNorm for SymBilinear {
    fn dim(&self) -> usize {
        SymBilinear::dim(self)
    }

    fn all_finite(&self) -> bool {
        self.as_matrix().iter().all(|x| x.is_finite())
    }

    fn raised_square(&self, ginv: &DMatrix<f64>) -> f64 {
        let q = self.as_matrix();
        let up = ginv * q * ginv;
        up.component_mul(q).sum()
    }
}
