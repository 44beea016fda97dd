use num_complex::Complex64;

use super::operator::DiffOperator;
use super::rational::RationalFunc;
use crate::error::{invalid, Result};
use crate::linalg::Mat;

/// First-order system `δY = B(z)·Y`.
#[derive(Clone, Debug)]
pub struct MatrixSystem {
    b: Mat<RationalFunc>,
    finite_singularities: Vec<Complex64>,
    singular_at_zero: bool,
    singular_at_infinity: bool,
}

const POLE_MERGE: f64 = 1e-9;

impl MatrixSystem {
    pub fn new(b: Mat<RationalFunc>) -> Result<Self> {
        if !b.is_square() || b.rows() == 0 {
            return invalid("system matrix must be square and nonempty");
        }
        let mut finite: Vec<Complex64> = Vec::new();
        for e in b.entries() {
            for p in e.poles() {
                if !finite.iter().any(|q| (q - p).norm() < POLE_MERGE) {
                    finite.push(p);
                }
            }
        }
        finite.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
        // δY = BY is dY/dz = (B/z)Y: 0 is singular unless B vanishes there,
        // ∞ is singular unless B vanishes at ∞ (dY/dw = −(B/w)Y with w = 1/z).
        let singular_at_zero = b
            .entries()
            .any(|e| !e.is_zero() && (e.has_pole_at_zero() || !vanishes_at_zero(e)));
        let singular_at_infinity = b
            .entries()
            .any(|e| e.degree().is_some_and(|d| d >= 0));
        Ok(MatrixSystem {
            b,
            finite_singularities: finite,
            singular_at_zero,
            singular_at_infinity,
        })
    }

    pub fn dim(&self) -> usize {
        self.b.rows()
    }

    pub fn matrix(&self) -> &Mat<RationalFunc> {
        &self.b
    }

    /// Poles of `B` in `C \ {0}`.
    pub fn finite_singularities(&self) -> &[Complex64] {
        &self.finite_singularities
    }

    pub fn singular_at_zero(&self) -> bool {
        self.singular_at_zero
    }

    pub fn singular_at_infinity(&self) -> bool {
        self.singular_at_infinity
    }

    /// All singular points in `C`, including `0` when applicable.
    pub fn singular_points(&self) -> Vec<Complex64> {
        let mut v = Vec::new();
        if self.singular_at_zero {
            v.push(Complex64::new(0.0, 0.0));
        }
        v.extend(self.finite_singularities.iter().copied().filter(|p| p.norm() > POLE_MERGE));
        v
    }

    pub fn eval(&self, z: Complex64) -> Mat<Complex64> {
        self.b.map(|e| e.eval(z))
    }
}

fn vanishes_at_zero(e: &RationalFunc) -> bool {
    e.num().valuation().is_some_and(|v| v > 0)
}

/// Companion system of a δ-operator: `Y = (y, δy, …, δ^{d−1}y)`.
pub fn to_system(op: &DiffOperator) -> Result<MatrixSystem> {
    let d = op.degree();
    if op.is_zero() || d == 0 {
        return invalid("operator must have degree at least 1");
    }
    let lead = op.leading().expect("nonzero operator").clone();
    let inv = lead.inv()?;
    let b = Mat::from_fn(d, d, |i, j| {
        if i + 1 == j {
            RationalFunc::one()
        } else if i + 1 == d {
            op.coeff(j).mul(&inv).neg()
        } else {
            RationalFunc::zero()
        }
    });
    MatrixSystem::new(b)
}
