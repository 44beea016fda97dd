use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;

use super::{Cyclo, Field, Ring, Scalar};

/// A number that is exact when it can be and a complex double otherwise.
#[derive(Clone)]
pub enum Value {
    Exact(Cyclo),
    Float(Complex64),
}

impl Value {
    pub fn int(n: i64) -> Self {
        Value::Exact(Cyclo::from_int(n))
    }

    pub fn zero() -> Self {
        Value::int(0)
    }

    pub fn one() -> Self {
        Value::int(1)
    }

    pub fn float(re: f64, im: f64) -> Self {
        Value::Float(Complex64::new(re, im))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Value::Exact(c) => c.to_complex(),
            Value::Float(z) => *z,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Cyclo> {
        match self {
            Value::Exact(c) => Some(c),
            Value::Float(_) => None,
        }
    }

    /// `e^{2πi s}`; exact for real rational `s`, where it is a root of unity.
    pub fn exp_2pi_i(s: &Scalar) -> Self {
        if s.is_real() {
            Value::Exact(Cyclo::exp_2pi_i(&s.re))
        } else {
            let w = s.to_complex() * Complex64::new(0.0, std::f64::consts::TAU);
            Value::Float(w.exp())
        }
    }

    pub fn exp_2pi_i_f64(s: f64) -> Self {
        Value::Float(Complex64::from_polar(1.0, std::f64::consts::TAU * s))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Value::Exact(Cyclo::from_rational(q))
    }

    /// Exact square root when one exists among Gaussian rationals, else a float.
    pub fn sqrt(&self) -> Self {
        if let Value::Exact(c) = self {
            if let Some(r) = c.sqrt_gaussian() {
                return Value::Exact(r);
            }
        }
        Value::Float(self.to_complex().sqrt())
    }

    /// Drop exactness.
    pub fn to_float(&self) -> Self {
        Value::Float(self.to_complex())
    }

    pub fn dist(&self, other: &Value) -> f64 {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => {
                if a == b {
                    0.0
                } else {
                    (a.to_complex() - b.to_complex()).norm().max(f64::MIN_POSITIVE)
                }
            }
            _ => (self.to_complex() - other.to_complex()).norm(),
        }
    }
}

impl From<Scalar> for Value {
    fn from(s: Scalar) -> Self {
        Value::Exact(s.to_cyclo())
    }
}

impl From<&Scalar> for Value {
    fn from(s: &Scalar) -> Self {
        Value::Exact(s.to_cyclo())
    }
}

impl From<Cyclo> for Value {
    fn from(c: Cyclo) -> Self {
        Value::Exact(c)
    }
}

impl From<Complex64> for Value {
    fn from(z: Complex64) -> Self {
        Value::Float(z)
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a == b,
            (Value::Float(a), Value::Float(b)) => a == b,
            _ => false,
        }
    }
}

fn lift2(
    a: &Value,
    b: &Value,
    exact: impl Fn(&Cyclo, &Cyclo) -> Cyclo,
    float: impl Fn(Complex64, Complex64) -> Complex64,
) -> Value {
    match (a, b) {
        (Value::Exact(x), Value::Exact(y)) => Value::Exact(exact(x, y)),
        _ => Value::Float(float(a.to_complex(), b.to_complex())),
    }
}

impl Ring for Value {
    fn zero() -> Self {
        Value::int(0)
    }
    fn one() -> Self {
        Value::int(1)
    }
    fn from_i64(n: i64) -> Self {
        Value::int(n)
    }
    fn add(&self, other: &Self) -> Self {
        lift2(self, other, |x, y| x.add(y), |x, y| x + y)
    }
    fn sub(&self, other: &Self) -> Self {
        lift2(self, other, |x, y| x.sub(y), |x, y| x - y)
    }
    fn mul(&self, other: &Self) -> Self {
        lift2(self, other, |x, y| x.mul(y), |x, y| x * y)
    }
    fn neg(&self) -> Self {
        match self {
            Value::Exact(c) => Value::Exact(c.neg()),
            Value::Float(z) => Value::Float(-z),
        }
    }
    fn is_zero(&self) -> bool {
        match self {
            Value::Exact(c) => c.is_zero(),
            Value::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }
    fn div_int(&self, n: i64) -> Self {
        match self {
            Value::Exact(c) => Value::Exact(c.div_int(n)),
            Value::Float(z) => Value::Float(z / n as f64),
        }
    }
}

impl Field for Value {
    fn inv(&self) -> Option<Self> {
        match self {
            Value::Exact(c) => c.inv().map(Value::Exact),
            Value::Float(z) => Field::inv(z).map(Value::Float),
        }
    }
    fn magnitude(&self) -> f64 {
        match self {
            Value::Exact(c) => c.magnitude(),
            Value::Float(z) => z.norm(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(c) => write!(f, "{c}"),
            Value::Float(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(c) => write!(f, "Exact({c})"),
            Value::Float(z) => write!(f, "Float({z})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_arithmetic_falls_back_to_float() {
        let a = Value::int(2);
        let b = Value::float(0.5, 0.0);
        let c = a.mul(&b);
        assert!(!c.is_exact());
        assert_eq!(c.to_complex(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn exp_of_rational_is_exact_root_of_unity() {
        let v = Value::exp_2pi_i(&Scalar::ratio(-1, 3));
        let w = Value::exp_2pi_i(&Scalar::ratio(1, 3));
        assert!(v.is_exact());
        assert_eq!(v.mul(&w), Value::one());
        let u = Value::exp_2pi_i(&Scalar::ratio(5, 4));
        assert_eq!(u.to_string(), "i");
    }
}
