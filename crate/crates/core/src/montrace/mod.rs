//! Numerical analytic continuation of fundamental matrices along paths in `C \ {singularities}`.

mod dop853;
mod path;
mod spectrum;

use std::f64::consts::TAU;

use num_complex::Complex64;

pub use path::{Path, Segment};
pub use spectrum::{match_multisets, spectrum, Spectrum};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::opcore::MatrixSystem;

/// Smallest admissible tolerance in double precision.
pub const TOL_FLOOR: f64 = 1e-15;

#[derive(Clone, Debug)]
pub struct TransportOptions {
    pub tol: f64,
    /// Minimum distance the path must keep from every singular point.
    pub min_clearance: f64,
    /// Cap on attempted steps per segment.
    pub max_steps: usize,
}

impl TransportOptions {
    pub fn new(tol: f64) -> Self {
        TransportOptions {
            tol,
            min_clearance: 1e-6,
            max_steps: 200_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TransportResult {
    pub matrix: Mat<Complex64>,
    pub error_estimate: f64,
    pub step_count: usize,
}

/// `B(z)` with coefficients pre-converted to doubles.
struct NumericSystem {
    n: usize,
    entries: Vec<Option<(Vec<(i32, Complex64)>, Vec<(i32, Complex64)>)>>,
}

impl NumericSystem {
    fn new(sys: &MatrixSystem) -> Self {
        let conv = |p: &crate::opcore::LaurentPoly| -> Vec<(i32, Complex64)> {
            p.terms().map(|(k, c)| (k, c.to_complex())).collect()
        };
        NumericSystem {
            n: sys.dim(),
            entries: sys
                .matrix()
                .entries()
                .map(|e| (!e.is_zero()).then(|| (conv(e.num()), conv(e.den()))))
                .collect(),
        }
    }

    fn eval_into(&self, z: Complex64, out: &mut [Complex64]) {
        let ev = |terms: &[(i32, Complex64)]| -> Complex64 {
            terms.iter().map(|(k, c)| c * z.powi(*k)).sum()
        };
        for (o, e) in out.iter_mut().zip(&self.entries) {
            *o = match e {
                None => Complex64::new(0.0, 0.0),
                Some((num, den)) => ev(num) / ev(den),
            };
        }
    }
}

fn identity_state(n: usize) -> Vec<Complex64> {
    let mut y = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        y[i * n + i] = Complex64::new(1.0, 0.0);
    }
    y
}

fn check_clearance(sys: &MatrixSystem, path: &Path, min: f64) -> Result<()> {
    let mut points = sys.singular_points();
    if !points.iter().any(|p| p.norm() == 0.0) {
        // dY/dz = (B/z)Y always has a potential pole at the origin
        points.push(Complex64::new(0.0, 0.0));
    }
    for p in points {
        let d = path.distance_to(p);
        if !(d > 0.0 && d >= min) {
            return Err(Error::ClearanceViolation {
                point: format!("{}{:+}i", p.re, p.im),
                distance: d,
                clearance: min,
            });
        }
    }
    Ok(())
}

/// Continue the fundamental matrix of `δY = BY` along `path`; `Y(end) = T·Y(start)`.
pub fn transport(sys: &MatrixSystem, path: &Path, tol: f64) -> Result<TransportResult> {
    transport_with(sys, path, &TransportOptions::new(tol))
}

/// `opts.tol` bounds the error of the transported matrix, not of a single step:
/// the per-step tolerance is tightened until the halved-step estimate meets it
/// or reaches [`TOL_FLOOR`].
pub fn transport_with(
    sys: &MatrixSystem,
    path: &Path,
    opts: &TransportOptions,
) -> Result<TransportResult> {
    if !(opts.tol >= TOL_FLOOR && opts.tol.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be at least {TOL_FLOOR}"
        )));
    }
    check_clearance(sys, path, opts.min_clearance)?;
    let num = NumericSystem::new(sys);
    let mut local = opts.tol;
    let mut steps = 0;
    loop {
        let mut run = integrate_path(&num, path, local, opts.max_steps)?;
        steps += run.step_count;
        run.step_count = steps;
        if run.error_estimate <= opts.tol || local <= TOL_FLOOR {
            return Ok(run);
        }
        local = (local * 0.5 * opts.tol / run.error_estimate).max(TOL_FLOOR);
    }
}

fn integrate_path(
    num: &NumericSystem,
    path: &Path,
    tol: f64,
    max_steps: usize,
) -> Result<TransportResult> {
    let n = num.n;
    let mut y = identity_state(n);
    let mut y_check = y.clone();
    let mut steps = 0;
    for seg in path.segments() {
        let rhs = |t: f64, y: &[Complex64], out: &mut [Complex64]| {
            let (z, dz) = seg.point_and_derivative(t);
            let mut b = vec![Complex64::new(0.0, 0.0); n * n];
            num.eval_into(z, &mut b);
            let w = dz / z;
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        acc += b[i * n + k] * y[k * n + j];
                    }
                    out[i * n + j] = acc * w;
                }
            }
        };
        let run = dop853::integrate(&rhs, &y, 0.0, 1.0, tol, max_steps)?;
        steps += run.grid.len() - 1 + run.rejected;
        y_check = dop853::replay_halved(&rhs, &y_check, &run.grid);
        y = run.y;
    }
    let error_estimate = y
        .iter()
        .zip(&y_check)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(TransportResult {
        matrix: Mat::from_vec(n, n, y),
        error_estimate,
        step_count: steps,
    })
}

/// Once counterclockwise around `0`, based at `z = radius`.
pub fn loop_monodromy(sys: &MatrixSystem, radius: f64, tol: f64) -> Result<TransportResult> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    transport(sys, &Path::circle(radius, 1.0), tol)
}

/// `1` when the only singularities are `0` and `∞`; otherwise the geometric mean of
/// the moduli of the nearest singularities inside and outside the unit circle.
pub fn default_radius(sys: &MatrixSystem) -> f64 {
    let moduli: Vec<f64> = sys
        .finite_singularities()
        .iter()
        .map(|p| p.norm())
        .filter(|m| *m > 0.0)
        .collect();
    if moduli.is_empty() {
        return 1.0;
    }
    let inner = moduli.iter().copied().filter(|m| *m <= 1.0).fold(None, |a: Option<f64>, m| {
        Some(a.map_or(m, |a| a.max(m)))
    });
    let outer = moduli.iter().copied().filter(|m| *m > 1.0).fold(None, |a: Option<f64>, m| {
        Some(a.map_or(m, |a| a.min(m)))
    });
    match (inner, outer) {
        (Some(i), Some(o)) => (i * o).sqrt(),
        (Some(i), None) => 2.0 * i,
        (None, Some(o)) => o / 2.0,
        (None, None) => 1.0,
    }
}

fn circle_sup_norm(num: &NumericSystem, r: f64) -> f64 {
    let n = num.n;
    let mut b = vec![Complex64::new(0.0, 0.0); n * n];
    (0..64)
        .map(|k| {
            num.eval_into(Complex64::from_polar(r, TAU * k as f64 / 64.0), &mut b);
            b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
        })
        .fold(0.0, f64::max)
}

/// A radius in the annulus of [`default_radius`] where `‖B‖` on the circle is close to
/// its limit at `0`. Loops there grow less, so characteristic polynomials of the
/// monodromy keep more digits.
pub fn quiet_radius(sys: &MatrixSystem) -> f64 {
    let num = NumericSystem::new(sys);
    let r0 = default_radius(sys);
    let floor = sys
        .finite_singularities()
        .iter()
        .map(|p| p.norm())
        .filter(|m| *m > 0.0 && *m < r0)
        .fold(0.0, f64::max)
        * 2.0;
    let limit = circle_sup_norm(&num, (r0 * 1e-6).max(floor));
    let mut r = r0;
    while r / 2.0 > floor.max(r0 * 1e-6) && circle_sup_norm(&num, r) > 1.25 * limit + 0.25 {
        r /= 2.0;
    }
    r
}
