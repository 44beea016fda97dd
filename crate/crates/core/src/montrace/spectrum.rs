use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::linalg::Mat;

#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Monic, highest degree first.
    pub charpoly: Vec<Complex64>,
    pub eigenvalues: Vec<Complex64>,
    /// `min ‖(m − λI)v‖` over unit `v`, per eigenvalue.
    pub residuals: Vec<f64>,
}

pub fn spectrum(m: &Mat<Complex64>) -> Spectrum {
    assert!(m.is_square(), "spectrum needs a square matrix");
    let n = m.rows();
    let dm = DMatrix::from_fn(n, n, |i, j| *m.get(i, j));
    let eigenvalues: Vec<Complex64> = dm
        .clone()
        .schur()
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .unwrap_or_default();
    let residuals = eigenvalues
        .iter()
        .map(|&l| {
            let shifted = &dm - DMatrix::<Complex64>::identity(n, n) * l;
            shifted
                .singular_values()
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    Spectrum {
        charpoly: m.charpoly(),
        eigenvalues,
        residuals,
    }
}

/// Smallest max-distance over all pairings of two equally sized multisets.
pub fn match_multisets(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    fn go(a: &[Complex64], b: &[Complex64], used: &mut Vec<bool>, i: usize, cur: f64, best: &mut f64) {
        if cur >= *best {
            return;
        }
        if i == a.len() {
            *best = cur;
            return;
        }
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(a, b, used, i + 1, cur.max((a[i] - b[j]).norm()), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(a, b, &mut vec![false; b.len()], 0, 0.0, &mut best);
    best
}
