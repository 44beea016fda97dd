//! Exact arithmetic in cyclotomic fields.
//!
//! An element of `Q(ζ_N)` is stored in the power basis `1, ζ_N, …, ζ_N^{φ(N)-1}`
//! after reduction modulo the cyclotomic polynomial `Φ_N`, so two elements of
//! the same order are equal iff their coefficient vectors are. Elements of
//! different orders are compared after lifting both to the lcm of the orders.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ratpoly::{self, RatPoly};
use super::{Field, Ring};

fn modulus(order: u32) -> Arc<Vec<BigRational>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigRational>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&order) {
        return p.clone();
    }
    let p: Arc<Vec<BigRational>> = Arc::new(
        ratpoly::cyclotomic_poly(order)
            .into_iter()
            .map(BigRational::from_integer)
            .collect(),
    );
    cache.lock().unwrap().insert(order, p.clone());
    p
}

fn reduce(order: u32, poly: &[BigRational]) -> Vec<BigRational> {
    let n = order as usize;
    let mut folded = vec![BigRational::zero(); n];
    for (k, c) in poly.iter().enumerate() {
        if !c.is_zero() {
            folded[k % n] += c;
        }
    }
    let phi = modulus(order);
    let deg = phi.len() - 1;
    for k in (deg..n).rev() {
        let c = std::mem::take(&mut folded[k]);
        if c.is_zero() {
            continue;
        }
        let shift = k - deg;
        for (j, pj) in phi.iter().enumerate().take(deg) {
            if !pj.is_zero() {
                folded[shift + j] -= &c * pj;
            }
        }
    }
    folded.truncate(deg);
    folded
}

#[derive(Clone)]
pub struct Cyclo {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl Cyclo {
    pub fn from_rational(q: BigRational) -> Self {
        Cyclo {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `ζ_n^k = e^{2πik/n}`.
    pub fn root_of_unity(k: i64, n: u32) -> Self {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![BigRational::zero(); k + 1];
        poly[k] = BigRational::one();
        Cyclo {
            order: n,
            coeffs: reduce(n, &poly),
        }
        .normalized()
    }

    /// `e^{2πi t}` for a rational number of turns `t`.
    pub fn exp_2pi_i(t: &BigRational) -> Self {
        let den = t.denom().to_u32().expect("denominator too large for a root of unity");
        let num = (t.numer() % BigInt::from(den)).to_i64().unwrap();
        Self::root_of_unity(num, den)
    }

    /// The Gaussian rational `re + im·i`.
    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        if im.is_zero() {
            return Self::from_rational(re);
        }
        Cyclo {
            order: 4,
            coeffs: vec![re, im],
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn normalized(mut self) -> Self {
        if self.order > 1 && self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            let c0 = self.coeffs.swap_remove(0);
            return Cyclo::from_rational(c0);
        }
        self
    }

    fn lift(&self, target: u32) -> Vec<BigRational> {
        if target == self.order {
            return self.coeffs.clone();
        }
        debug_assert_eq!(target % self.order, 0);
        let step = (target / self.order) as usize;
        let mut poly = vec![BigRational::zero(); step * self.coeffs.len().max(1)];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        reduce(target, &poly)
    }

    fn common(&self, other: &Self) -> (u32, Vec<BigRational>, Vec<BigRational>) {
        let l = self.order.lcm(&other.order);
        (l, self.lift(l), other.lift(l))
    }

    pub fn is_rational(&self) -> bool {
        self.order == 1
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.order == 1).then(|| &self.coeffs[0])
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut poly = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[(n - k) % n] += c;
        }
        Cyclo {
            order: self.order,
            coeffs: reduce(self.order, &poly),
        }
        .normalized()
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Real and imaginary parts as elements of the real subfield.
    pub fn re_im(&self) -> (Cyclo, Cyclo) {
        let c = self.conj();
        let re = Ring::add(self, &c).div_int(2);
        let diff = Ring::sub(self, &c);
        // (x - x̄) / (2i) = -(i/2)(x - x̄)
        let i = Cyclo::root_of_unity(1, 4);
        let im = Ring::mul(&diff, &i).neg().div_int(2);
        (re, im)
    }

    /// `(re, im)` when the element is a Gaussian rational.
    pub fn as_gaussian(&self) -> Option<(BigRational, BigRational)> {
        if let Some(q) = self.as_rational() {
            return Some((q.clone(), BigRational::zero()));
        }
        let (re, im) = self.re_im();
        match (re.as_rational(), im.as_rational()) {
            (Some(a), Some(b)) => Some((a.clone(), b.clone())),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let theta = std::f64::consts::TAU * k as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
            .sum()
    }

    /// Exact square root when `self` is the square of a Gaussian rational.
    pub fn sqrt_gaussian(&self) -> Option<Cyclo> {
        let z = self.to_complex().sqrt();
        let re = rationalize(z.re, 1 << 20)?;
        let im = rationalize(z.im, 1 << 20)?;
        let cand = Cyclo::gaussian(re, im);
        (Ring::mul(&cand, &cand) == *self).then_some(cand)
    }
}

/// Best rational approximation with bounded denominator, by continued fractions.
pub(crate) fn rationalize(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = r - a;
        if frac.abs() < 1e-14 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = self.common(other);
        a == b
    }
}

impl Ring for Cyclo {
    fn zero() -> Self {
        Cyclo::from_int(0)
    }
    fn one() -> Self {
        Cyclo::from_int(1)
    }
    fn from_i64(n: i64) -> Self {
        Cyclo::from_int(n)
    }
    fn add(&self, other: &Self) -> Self {
        let (order, mut a, b) = self.common(other);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        Cyclo { order, coeffs: a }.normalized()
    }
    fn sub(&self, other: &Self) -> Self {
        let (order, mut a, b) = self.common(other);
        for (x, y) in a.iter_mut().zip(b) {
            *x -= y;
        }
        Cyclo { order, coeffs: a }.normalized()
    }
    fn mul(&self, other: &Self) -> Self {
        if self.order == 1 && other.order == 1 {
            return Cyclo::from_rational(&self.coeffs[0] * &other.coeffs[0]);
        }
        if self.order == 1 || other.order == 1 {
            let (q, x) = if self.order == 1 {
                (&self.coeffs[0], other)
            } else {
                (&other.coeffs[0], self)
            };
            return Cyclo {
                order: x.order,
                coeffs: x.coeffs.iter().map(|c| c * q).collect(),
            }
            .normalized();
        }
        let (order, a, b) = self.common(other);
        let prod = ratpoly::mul(&a, &b);
        Cyclo {
            order,
            coeffs: reduce(order, &prod),
        }
        .normalized()
    }
    fn neg(&self) -> Self {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn div_int(&self, n: i64) -> Self {
        let d = BigRational::from_integer(BigInt::from(n));
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c / &d).collect(),
        }
    }
}

impl Field for Cyclo {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Cyclo::from_rational(q.recip()));
        }
        let mut a: RatPoly = self.coeffs.clone();
        ratpoly::trim(&mut a);
        let inv = ratpoly::inverse_mod(&a, &modulus(self.order))?;
        Some(
            Cyclo {
                order: self.order,
                coeffs: reduce(self.order, &inv),
            }
            .normalized(),
        )
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            // tiny but positive so that exact nonzero pivots are never mistaken for zero
            self.to_complex().norm().max(f64::MIN_POSITIVE)
        }
    }
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Cyclo {
    /// Rationals print as `p/q`, Gaussian rationals as `a+bi`, anything else
    /// as a sum of powers of `ζN` (the primitive root `e^{2πi/N}`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", fmt_rational(q));
        }
        if let Some((re, im)) = self.as_gaussian() {
            let sign = if im.is_negative() { "-" } else { "+" };
            let mag = im.abs();
            let imag = if mag.is_one() {
                "i".to_string()
            } else {
                format!("{}i", fmt_rational(&mag))
            };
            if re.is_zero() {
                return write!(f, "{}{}", if im.is_negative() { "-" } else { "" }, imag);
            }
            return write!(f, "{}{}{}", fmt_rational(&re), sign, imag);
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = match k {
                0 => String::new(),
                1 => format!("ζ{}", self.order),
                _ => format!("ζ{}^{}", self.order, k),
            };
            let mag = c.abs();
            let body = match (k, mag.is_one()) {
                (0, _) => fmt_rational(&mag),
                (_, true) => power,
                (_, false) => format!("{}*{}", fmt_rational(&mag), power),
            };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, "{}", if c.is_negative() { "-" } else { "+" })?;
            }
            write!(f, "{body}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo({self})")
    }
}

/// Small-integer rational helper used across the crate.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl From<Ratio<i64>> for Cyclo {
    fn from(r: Ratio<i64>) -> Self {
        Cyclo::from_rational(rat(*r.numer(), *r.denom()))
    }
}
