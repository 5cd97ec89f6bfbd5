//! The seven-dimensional cross product from the imaginary octonions.

/// Oriented triples `(i, j, k)` (0-based) with `eᵢ × eⱼ = e_k`.
const TRIPLES: [(usize, usize, usize); 7] = [
    (0, 1, 2),
    (0, 3, 4),
    (0, 6, 5),
    (1, 3, 5),
    (1, 4, 6),
    (2, 3, 6),
    (2, 5, 4),
];

/// Structure constants `ε[i][j][k]` with `(eᵢ × eⱼ)_k = ε[i][j][k]`.
pub fn structure_constants() -> [[[f64; 7]; 7]; 7] {
    let mut eps = [[[0.0; 7]; 7]; 7];
    for (i, j, k) in TRIPLES {
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            eps[a][b][c] = 1.0;
            eps[b][a][c] = -1.0;
        }
    }
    eps
}

pub fn cross(a: &[f64; 7], b: &[f64; 7]) -> [f64; 7] {
    let eps = structure_constants();
    let mut out = [0.0; 7];
    for i in 0..7 {
        if a[i] == 0.0 {
            continue;
        }
        for j in 0..7 {
            let w = a[i] * b[j];
            if w == 0.0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += w * eps[i][j][k];
            }
        }
    }
    out
}
