use serde::{Deserialize, Serialize};

use crate::tol::Tolerances;

/// Finite-difference settings for chart geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    /// Central-difference step in coordinate units.
    pub h: f64,
    /// Combine steps `h` and `h/2` as `(4D(h/2) − D(h))/3`.
    pub richardson: bool,
    pub tol_fd1: f64,
    pub tol_fd2: f64,
    /// Seed of the orthonormal frame residuals are evaluated in.
    pub frame_seed: u64,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self::from_tolerances(&Tolerances::default(), 0)
    }
}

impl FdConfig {
    pub fn from_tolerances(t: &Tolerances, frame_seed: u64) -> Self {
        Self {
            h: t.h,
            richardson: t.richardson,
            tol_fd1: t.tol_fd1,
            tol_fd2: t.tol_fd2,
            frame_seed,
        }
    }
}

/// Central differences of a vector-valued field along every coordinate
/// direction: `out[i][c] ≈ ∂ᵢ f_c(x)`.
pub fn derivative<F>(f: &F, x: &[f64], h: f64, richardson: bool) -> Vec<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    let central = |i: usize, step: f64| -> Vec<f64> {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[i] += step;
        xm[i] -= step;
        let (fp, fm) = (f(&xp), f(&xm));
        fp.iter()
            .zip(&fm)
            .map(|(a, b)| (a - b) / (2.0 * step))
            .collect()
    };
    (0..x.len())
        .map(|i| {
            let coarse = central(i, h);
            if !richardson {
                return coarse;
            }
            let fine = central(i, h / 2.0);
            fine.iter()
                .zip(&coarse)
                .map(|(f, c)| (4.0 * f - c) / 3.0)
                .collect()
        })
        .collect()
}
