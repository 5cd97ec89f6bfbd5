use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curvature::HermitianPoint;
use crate::error::{Error, Result};
use crate::exec;
use crate::multilinear::CurvTensor;

pub const DEFAULT_SAMPLES: usize = 512;
const MAX_ATTEMPTS: usize = 32;
/// Constraint residual a sampled frame must meet before `R` is evaluated.
const FRAME_RESIDUAL: f64 = 1e-10;

/// A `g`-orthonormal 4-frame `(x, y, z, u)` whose span is orthogonal to its
/// own `J`-image. Needs `dim ≥ 8`.
pub fn random_antiholomorphic_frame(
    point: &HermitianPoint,
    rng: &mut ChaCha8Rng,
) -> Result<[DVector<f64>; 4]> {
    let n = point.dim();
    let g = point.g();
    let j = point.j();
    let dot = |a: &DVector<f64>, b: &DVector<f64>| a.dot(&(g * b));
    'attempt: for _ in 0..MAX_ATTEMPTS {
        // Orthonormal set {e₁, Je₁, e₂, Je₂, ...} grown one pair at a time.
        let mut span: Vec<DVector<f64>> = Vec::with_capacity(8);
        let mut frame: Vec<DVector<f64>> = Vec::with_capacity(4);
        for _ in 0..4 {
            let v = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let scale = dot(&v, &v).sqrt();
            let mut w = v;
            for _ in 0..2 {
                for b in &span {
                    let c = dot(b, &w);
                    w -= b * c;
                }
            }
            let len = dot(&w, &w).sqrt();
            if len < 1e-8 * scale {
                continue 'attempt;
            }
            let e = w / len;
            let je = j * &e;
            span.push(e.clone());
            span.push(je);
            frame.push(e);
        }
        let omega = point.omega();
        let mut residual = 0.0_f64;
        for (a, x) in frame.iter().enumerate() {
            for (b, y) in frame.iter().enumerate() {
                let delta = if a == b { 1.0 } else { 0.0 };
                residual = residual.max((dot(x, y) - delta).abs());
                residual = residual.max(x.dot(&(&omega * y)).abs());
            }
        }
        if residual < FRAME_RESIDUAL {
            let [x, y, z, u]: [DVector<f64>; 4] = frame.try_into().expect("four vectors");
            return Ok([x, y, z, u]);
        }
    }
    Err(Error::FrameConstruction {
        attempts: MAX_ATTEMPTS,
    })
}

/// Max `|R(x,y,z,u)|` over `samples` seeded antiholomorphic orthonormal
/// 4-frames, or `None` when `dim < 8` (no such frame exists).
///
/// Sample `i` draws from stream `i` of the seeded generator, so the result
/// does not depend on how samples are scheduled.
pub fn antiholo_4frame_defect(
    point: &HermitianPoint,
    r: &CurvTensor,
    samples: usize,
    seed: u64,
) -> Result<Option<f64>> {
    point.require_curvature_class(r)?;
    if point.dim() < 8 {
        return Ok(None);
    }
    let values = exec::try_map(&(0..samples as u64).collect::<Vec<_>>(), |&i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let [x, y, z, u] = random_antiholomorphic_frame(point, &mut rng)?;
        Ok::<f64, Error>(r.eval(&x, &y, &z, &u).abs())
    })?;
    Ok(Some(exec::max_of(&values)))
}
