//! Dormand–Prince 8(5,3) for complex vector ODEs on a real parameter interval.

use num_complex::Complex64;

use crate::error::{Error, Result};

const A: [[f64; 12]; 12] = [
    [0.0; 12],
    [5.260_015_195_876_773E-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.972_505_698_453_79E-2, 5.917_517_095_361_37E-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.958_758_547_680_685E-2, 0.0, 8.876_275_643_042_054E-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [
        2.413_651_341_592_667E-1,
        0.0,
        -8.845_494_793_282_861E-1,
        9.248_340_032_617_92E-1,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        3.703_703_703_703_703_5E-2,
        0.0,
        0.0,
        1.708_286_087_294_738_6E-1,
        1.254_676_875_668_224_2E-1,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        3.7109375E-2,
        0.0,
        0.0,
        1.702_522_110_195_440_5E-1,
        6.021_653_898_045_596E-2,
        -1.7578125E-2,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        3.709_200_011_850_479E-2,
        0.0,
        0.0,
        1.703_839_257_122_399_8E-1,
        1.072_620_304_463_732_8E-1,
        -1.531_943_774_862_440_2E-2,
        8.273_789_163_814_023E-3,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        6.241_109_587_160_757E-1,
        0.0,
        0.0,
        -3.360_892_629_446_941_4,
        -8.682_193_468_417_26E-1,
        2.759_209_969_944_671E1,
        2.015_406_755_047_789_4E1,
        -4.348_988_418_106_996E1,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        4.776_625_364_382_643_4E-1,
        0.0,
        0.0,
        -2.488_114_619_971_667_7,
        -5.902_908_268_368_43E-1,
        2.123_005_144_818_119_3E1,
        1.527_923_363_288_242_3E1,
        -3.328_821_096_898_486E1,
        -2.033_120_170_850_862_7E-2,
        0.0,
        0.0,
        0.0,
    ],
    [
        -9.371_424_300_859_873E-1,
        0.0,
        0.0,
        5.186_372_428_844_064,
        1.091_437_348_996_729_5,
        -8.149_787_010_746_927,
        -1.852_006_565_999_696E1,
        2.273_948_709_935_050_5E1,
        2.493_605_552_679_652_3,
        -3.046_764_471_898_219_6,
        0.0,
        0.0,
    ],
    [
        2.273_310_147_516_538,
        0.0,
        0.0,
        -1.053_449_546_673_725E1,
        -2.000_872_058_224_862_5,
        -1.795_893_186_311_88E1,
        2.794_888_452_941_996E1,
        -2.858_998_277_135_023_5,
        -8.872_856_933_530_63,
        1.236_056_717_579_430_3E1,
        6.433_927_460_157_636E-1,
        0.0,
    ],
];

const C: [f64; 12] = [
    0.0,
    5.260_015_195_876_773E-2,
    7.890_022_793_815_16E-2,
    1.183_503_419_072_274E-1,
    2.816_496_580_927_726E-1,
    3.333_333_333_333_333E-1,
    0.25,
    3.076_923_076_923_077E-1,
    6.512_820_512_820_513E-1,
    0.6,
    8.571_428_571_428_571E-1,
    1.0,
];

const B: [f64; 12] = [
    5.429_373_411_656_876_5E-2,
    0.0,
    0.0,
    0.0,
    0.0,
    4.450_312_892_752_409,
    1.891_517_899_314_500_3,
    -5.801_203_960_010_585,
    3.111_643_669_578_199E-1,
    -1.521_609_496_625_161E-1,
    2.013_654_008_040_303_4E-1,
    4.471_061_572_777_259E-2,
];

const ER: [f64; 12] = [
    1.312_004_499_419_488E-2,
    0.0,
    0.0,
    0.0,
    0.0,
    -1.225_156_446_376_204_4,
    -4.957_589_496_572_502E-1,
    1.664_377_182_454_986_4,
    -3.503_288_487_499_736_6E-1,
    3.341_791_187_130_175E-1,
    8.192_320_648_511_571E-2,
    -2.235_530_786_388_629_4E-2,
];

const BHH: [f64; 3] = [
    2.440_944_881_889_764E-1,
    7.338_466_882_816_118E-1,
    2.205_882_352_941_176_6E-2,
];

const SAFE: f64 = 0.9;
const FACC1: f64 = 1.0 / 0.333;
const FACC2: f64 = 1.0 / 6.0;
const EXPO1: f64 = 1.0 / 8.0;

/// Right-hand side `f(t, y, out)`.
pub trait Rhs {
    fn eval(&self, t: f64, y: &[Complex64], out: &mut [Complex64]);
}

impl<F: Fn(f64, &[Complex64], &mut [Complex64])> Rhs for F {
    fn eval(&self, t: f64, y: &[Complex64], out: &mut [Complex64]) {
        self(t, y, out)
    }
}

struct Stages {
    k: Vec<Vec<Complex64>>,
    tmp: Vec<Complex64>,
}

impl Stages {
    fn new(n: usize) -> Self {
        Stages {
            k: vec![vec![Complex64::new(0.0, 0.0); n]; 12],
            tmp: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Evaluate all twelve stages; returns the new state.
    fn step(&mut self, f: &impl Rhs, t: f64, h: f64, y: &[Complex64]) -> Vec<Complex64> {
        let n = y.len();
        for s in 0..12 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, a) in A[s].iter().enumerate().take(s) {
                    if *a != 0.0 {
                        acc += self.k[j][i] * (a * h);
                    }
                }
                self.tmp[i] = acc;
            }
            let (tmp, k) = (&self.tmp, &mut self.k[s]);
            f.eval(t + C[s] * h, tmp, k);
        }
        (0..n)
            .map(|i| {
                let incr: Complex64 = (0..12).map(|s| self.k[s][i] * B[s]).sum();
                y[i] + incr * h
            })
            .collect()
    }

    /// Scaled error norm of the last step, in Hairer's combined 5th/3rd-order form.
    fn error(&self, h: f64, y: &[Complex64], y_new: &[Complex64], tol: f64) -> f64 {
        let n = y.len();
        let (mut err5, mut err3) = (0.0, 0.0);
        for i in 0..n {
            let sk = tol + tol * y[i].norm().max(y_new[i].norm());
            let incr: Complex64 = (0..12).map(|s| self.k[s][i] * B[s]).sum();
            let e3 = incr - self.k[0][i] * BHH[0] - self.k[8][i] * BHH[1] - self.k[11][i] * BHH[2];
            err3 += (e3.norm() / sk).powi(2);
            let e5: Complex64 = (0..12).map(|s| self.k[s][i] * ER[s]).sum();
            err5 += (e5.norm() / sk).powi(2);
        }
        let mut deno = err5 + 0.01 * err3;
        if deno <= 0.0 {
            deno = 1.0;
        }
        h.abs() * err5 * (1.0 / (deno * n as f64)).sqrt()
    }
}

pub struct Integration {
    pub y: Vec<Complex64>,
    /// Accepted grid, including both endpoints.
    pub grid: Vec<f64>,
    pub rejected: usize,
}

/// Adaptive integration from `t0` to `t1 > t0`.
pub fn integrate(
    f: &impl Rhs,
    y0: &[Complex64],
    t0: f64,
    t1: f64,
    tol: f64,
    max_steps: usize,
) -> Result<Integration> {
    let n = y0.len();
    let mut st = Stages::new(n);
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut h = ((t1 - t0) / 16.0).min(0.05 * (t1 - t0).max(1e-3));
    let mut grid = vec![t0];
    let mut rejected = 0;
    let mut last_rejected = false;
    let mut steps = 0;
    while t < t1 {
        if steps >= max_steps {
            return Err(Error::StepExplosion(max_steps));
        }
        steps += 1;
        let last = t + h >= t1 - 1e-14 * (t1 - t0).abs();
        if last {
            h = t1 - t;
        }
        let y_new = st.step(f, t, h, &y);
        let err = st.error(h, &y, &y_new, tol);
        let fac11 = err.powf(EXPO1);
        let fac = FACC2.max(FACC1.min(fac11 / SAFE));
        let mut h_new = h / fac;
        if !err.is_finite() {
            h *= 0.1;
            rejected += 1;
            continue;
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            y = y_new;
            grid.push(t);
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
            h = h_new;
        } else {
            h_new = h / FACC1.min(fac11 / SAFE);
            h = h_new;
            rejected += 1;
            last_rejected = true;
        }
        if h.abs() < 1e-14 * (t1 - t0).abs().max(1.0) {
            return Err(Error::StepExplosion(steps));
        }
    }
    Ok(Integration { y, grid, rejected })
}

/// Fixed-grid replay with every interval split in two.
pub fn replay_halved(f: &impl Rhs, y0: &[Complex64], grid: &[f64]) -> Vec<Complex64> {
    let mut st = Stages::new(y0.len());
    let mut y = y0.to_vec();
    for w in grid.windows(2) {
        let h = (w[1] - w[0]) / 2.0;
        y = st.step(f, w[0], h, &y);
        y = st.step(f, w[0] + h, h, &y);
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let f = |_t: f64, y: &[Complex64], out: &mut [Complex64]| {
            out[0] = y[0] * Complex64::new(0.0, 1.0);
        };
        let r = integrate(&f, &[Complex64::new(1.0, 0.0)], 0.0, 3.0, 1e-12, 10_000).unwrap();
        let exact = Complex64::new(0.0, 3.0).exp();
        assert!((r.y[0] - exact).norm() < 1e-10);
        let again = replay_halved(&f, &[Complex64::new(1.0, 0.0)], &r.grid);
        assert!((again[0] - exact).norm() < 1e-10);
    }

    #[test]
    fn weights_are_consistent() {
        let s: f64 = B.iter().sum();
        assert!((s - 1.0).abs() < 1e-14);
        for (row, c) in A.iter().zip(C) {
            let r: f64 = row.iter().sum();
            assert!((r - c).abs() < 1e-13, "row sum {r} vs node {c}");
        }
    }
}
