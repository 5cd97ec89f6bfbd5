use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Dense rank-4 covariant tensor, row-major, with
/// `T(X,Y,Z,U) = Σ X^i Y^j Z^k U^l T[i][j][k][l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvTensor {
    dim: usize,
    data: Vec<f64>,
}

/// Max-abs violation of each curvature-class symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct SymmetryDefects {
    pub antisym12: f64,
    pub antisym34: f64,
    pub pair_symmetry: f64,
    pub first_bianchi: f64,
}

impl SymmetryDefects {
    /// Largest of the three defining defects (pair symmetry is a consequence).
    pub fn max_defining(&self) -> f64 {
        self.antisym12.max(self.antisym34).max(self.first_bianchi)
    }

    pub fn max(&self) -> f64 {
        self.max_defining().max(self.pair_symmetry)
    }
}

/// Contracts one slot of a dense rank-`rank` array with `m`:
/// `out[.., a, ..] = Σ_b m[(b, a)] · data[.., b, ..]`.
///
/// With `m = J` this inserts `J` into that slot (`T(.., JX, ..)`); with a
/// frame matrix whose columns are the frame vectors it evaluates the slot on
/// the frame; with `m = g⁻¹` it raises the index.
pub fn contract_slot_raw(
    data: &[f64],
    rank: usize,
    dim: usize,
    slot: usize,
    m: &DMatrix<f64>,
) -> Vec<f64> {
    assert!(slot < rank);
    assert_eq!(data.len(), dim.pow(rank as u32));
    let inner = dim.pow((rank - 1 - slot) as u32);
    let outer = dim.pow(slot as u32);
    let mut out = vec![0.0; data.len()];
    for o in 0..outer {
        let base = o * dim * inner;
        for b in 0..dim {
            let src = &data[base + b * inner..base + (b + 1) * inner];
            for a in 0..dim {
                let w = m[(b, a)];
                if w == 0.0 {
                    continue;
                }
                let dst = &mut out[base + a * inner..base + (a + 1) * inner];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += w * s;
                }
            }
        }
    }
    out
}

impl CurvTensor {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim.pow(4)],
        }
    }

    pub fn from_vec(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim.pow(4) {
            return Err(Error::DimensionMismatch {
                expected: dim.pow(4),
                found: data.len(),
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("curvature tensor"));
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim.pow(4));
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        data.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.idx(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let n = self.idx(i, j, k, l);
        self.data[n] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Slot contraction, see [`contract_slot_raw`].
    pub fn contract_slot(&self, slot: usize, m: &DMatrix<f64>) -> Self {
        Self {
            dim: self.dim,
            data: contract_slot_raw(&self.data, 4, self.dim, slot, m),
        }
    }

    /// `T` with `J` inserted in every slot flagged in `mask`.
    pub fn with_j(&self, j: &DMatrix<f64>, mask: [bool; 4]) -> Self {
        let mut out = self.clone();
        for (slot, on) in mask.into_iter().enumerate() {
            if on {
                out = out.contract_slot(slot, j);
            }
        }
        out
    }

    /// `out[i₀,i₁,i₂,i₃] = T[i_{p₀}, i_{p₁}, i_{p₂}, i_{p₃}]`.
    pub fn permuted(&self, p: [usize; 4]) -> Self {
        Self::from_fn(self.dim, |i, j, k, l| {
            let ix = [i, j, k, l];
            self.get(ix[p[0]], ix[p[1]], ix[p[2]], ix[p[3]])
        })
    }

    /// Evaluates `T(x, y, z, u)`.
    pub fn eval(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        z: &DVector<f64>,
        u: &DVector<f64>,
    ) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let xyz = xy * z[k];
                    if xyz == 0.0 {
                        continue;
                    }
                    let row = &self.data[self.idx(i, j, k, 0)..self.idx(i, j, k, 0) + n];
                    acc += xyz * row.iter().zip(u.iter()).map(|(a, b)| a * b).sum::<f64>();
                }
            }
        }
        acc
    }

    /// Evaluates the tensor on every tuple of a frame (columns of `frame`).
    pub fn in_frame(&self, frame: &DMatrix<f64>) -> Self {
        let mut out = self.clone();
        for slot in 0..4 {
            out = out.contract_slot(slot, frame);
        }
        out
    }

    pub fn symmetry_defects(&self) -> SymmetryDefects {
        let n = self.dim;
        let mut d = SymmetryDefects::default();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let t = self.get(i, j, k, l);
                        d.antisym12 = d.antisym12.max((t + self.get(j, i, k, l)).abs());
                        d.antisym34 = d.antisym34.max((t + self.get(i, j, l, k)).abs());
                        d.pair_symmetry = d.pair_symmetry.max((t - self.get(k, l, i, j)).abs());
                        let cyc = t + self.get(j, k, i, l) + self.get(k, i, j, l);
                        d.first_bianchi = d.first_bianchi.max(cyc.abs());
                    }
                }
            }
        }
        d
    }

    /// Componentwise linear combination `Σ cᵢ Tᵢ`.
    pub fn combination(terms: &[(f64, &CurvTensor)]) -> Self {
        let dim = terms.first().map_or(0, |(_, t)| t.dim);
        let mut out = Self::zeros(dim);
        for (c, t) in terms {
            assert_eq!(t.dim, dim);
            for (o, x) in out.data.iter_mut().zip(&t.data) {
                *o += c * x;
            }
        }
        out
    }
}

/// Free-function form of [`CurvTensor::symmetry_defects`].
pub fn curvature_symmetry_defects(t: &CurvTensor) -> crate::Result<SymmetryDefects> {
    if !t.is_finite() {
        return Err(Error::NonFinite("curvature tensor"));
    }
    Ok(t.symmetry_defects())
}

impl Add for &CurvTensor {
    type Output = CurvTensor;
    fn add(self, rhs: &CurvTensor) -> CurvTensor {
        CurvTensor::combination(&[(1.0, self), (1.0, rhs)])
    }
}

impl Add for CurvTensor {
    type Output = CurvTensor;
    fn add(mut self, rhs: CurvTensor) -> CurvTensor {
        self += &rhs;
        self
    }
}

impl AddAssign<&CurvTensor> for CurvTensor {
    fn add_assign(&mut self, rhs: &CurvTensor) {
        assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Sub for &CurvTensor {
    type Output = CurvTensor;
    fn sub(self, rhs: &CurvTensor) -> CurvTensor {
        CurvTensor::combination(&[(1.0, self), (-1.0, rhs)])
    }
}

impl Sub for CurvTensor {
    type Output = CurvTensor;
    fn sub(self, rhs: CurvTensor) -> CurvTensor {
        &self - &rhs
    }
}

impl Mul<f64> for &CurvTensor {
    type Output = CurvTensor;
    fn mul(self, c: f64) -> CurvTensor {
        CurvTensor {
            dim: self.dim,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }
}

impl Mul<f64> for CurvTensor {
    type Output = CurvTensor;
    fn mul(mut self, c: f64) -> CurvTensor {
        self.data.iter_mut().for_each(|x| *x *= c);
        self
    }
}

impl Neg for &CurvTensor {
    type Output = CurvTensor;
    fn neg(self) -> CurvTensor {
        self * -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{sigma_forms, HermitianPoint};

    #[test]
    fn pi1_is_curvature_class() {
        for m in 1..=4 {
            let p = HermitianPoint::random(m, 3);
            let (pi1, _) = sigma_forms(&p);
            assert!(pi1.symmetry_defects().max() < 1e-12);
        }
    }

    #[test]
    fn constructed_violation_is_detected() {
        let mut t = CurvTensor::zeros(4);
        t.set(0, 1, 0, 1, 1.0);
        let d = curvature_symmetry_defects(&t).unwrap();
        assert_eq!(d.antisym12, 1.0);
        assert_eq!(d.antisym34, 1.0);
    }

    #[test]
    fn non_finite_defects_error() {
        let mut t = CurvTensor::zeros(2);
        t.set(0, 0, 0, 0, f64::INFINITY);
        assert!(curvature_symmetry_defects(&t).is_err());
    }

    #[test]
    fn contract_slot_matches_eval() {
        let t = CurvTensor::from_fn(3, |i, j, k, l| {
            (i + 2 * j + 3 * k + 5 * l) as f64 * 0.1 - (i * l) as f64
        });
        let m = DMatrix::from_fn(3, 3, |r, c| (r as f64 - 0.5 * c as f64).sin());
        let c = t.contract_slot(2, &m);
        let e: Vec<DVector<f64>> = (0..3)
            .map(|i| DVector::from_fn(3, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let mk = m.column(k).into_owned();
                        let direct = t.eval(&e[i], &e[j], &mk, &e[l]);
                        assert!((c.get(i, j, k, l) - direct).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn from_vec_checks_length_and_finiteness() {
        assert!(CurvTensor::from_vec(2, vec![0.0; 15]).is_err());
        let mut v = vec![0.0; 16];
        v[3] = f64::NAN;
        assert!(CurvTensor::from_vec(2, v).is_err());
    }
}
