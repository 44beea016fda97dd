//! Coefficient arithmetic.
//!
//! Three layers are used throughout the crate:
//!
//! * [`Scalar`]: Gaussian rationals, the constants of operator coefficients.
//! * [`Cyclo`]: exact elements of a cyclotomic field `Q(ζ_N)`, which is where
//!   formal monodromies `e^{2πiμ}` with rational `μ` live.
//! * [`Value`]: either an exact cyclotomic number or a complex float. Mixed
//!   arithmetic falls back to floats.
//!
//! The [`Ring`] and [`Field`] traits let the dense linear algebra and the
//! characteristic polynomial routines run over all of them, and over
//! multivariate polynomials.

mod cyclo;
mod ratpoly;
mod scalar;
mod value;

pub use cyclo::{rat, Cyclo};
pub(crate) use cyclo::rationalize;
pub use scalar::Scalar;
pub use value::Value;

use num_complex::Complex64;

/// Commutative ring containing `Q`, so that division by a nonzero integer is defined.
pub trait Ring: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn div_int(&self, n: i64) -> Self;
}

pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    /// Size used for pivot selection; any nonzero element has positive magnitude.
    fn magnitude(&self) -> f64;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn div_int(&self, n: i64) -> Self {
        self / n as f64
    }
}

impl Field for Complex64 {
    fn inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// `n choose k` as an `i64`; panics on overflow, which is far outside the sizes used here.
pub fn binomial(n: u64, k: u64) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    i64::try_from(acc).expect("binomial coefficient overflow")
}
