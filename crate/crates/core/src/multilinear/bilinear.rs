use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

/// Symmetric `(0,2)` tensor in coordinate components.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBilinear {
    m: DMatrix<f64>,
}

impl SymBilinear {
    pub fn from_matrix(m: DMatrix<f64>) -> Self {
        debug_assert!(m.is_square());
        Self { m }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_matrix(DMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn eval(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.m * y))
    }

    /// Max-abs of `Q − Qᵀ`.
    pub fn symmetry_defect(&self) -> f64 {
        (&self.m - self.m.transpose()).amax()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.amax()
    }
}

impl Add for &SymBilinear {
    type Output = SymBilinear;
    fn add(self, rhs: &SymBilinear) -> SymBilinear {
        SymBilinear::from_matrix(&self.m + &rhs.m)
    }
}

impl Sub for &SymBilinear {
    type Output = SymBilinear;
    fn sub(self, rhs: &SymBilinear) -> SymBilinear {
        SymBilinear::from_matrix(&self.m - &rhs.m)
    }
}

impl Mul<f64> for &SymBilinear {
    type Output = SymBilinear;
    fn mul(self, c: f64) -> SymBilinear {
        SymBilinear::from_matrix(&self.m * c)
    }
}

impl Neg for &SymBilinear {
    type Output = SymBilinear;
    fn neg(self) -> SymBilinear {
        self * -1.0
    }
}
