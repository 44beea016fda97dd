use std::fmt;

use num_complex::Complex64;

use super::laurent::LaurentPoly;
use crate::error::{Error, Result};
use crate::field::{Field, Ring, Scalar};

/// Element of `C(z)` with Gaussian-rational coefficients.
///
/// Canonical form: the denominator is `1` or a monic polynomial of positive
/// degree with nonzero constant term, coprime to the numerator. Powers of `z`
/// live in the numerator, which is a Laurent polynomial. Equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(canonical(num, den))
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        RationalFunc {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_laurent(LaurentPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_laurent(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn z() -> Self {
        Self::from_laurent(LaurentPoly::z())
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value, when this is a constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        if !self.is_laurent() {
            return None;
        }
        match self.num.degree() {
            None => Some(Scalar::zero()),
            Some(0) if self.num.valuation() == Some(0) => Some(self.num.coeff(0)),
            _ => None,
        }
    }

    /// `deg num − deg den`, the order of growth at `z = ∞`; `None` for zero.
    pub fn degree(&self) -> Option<i32> {
        Some(self.num.degree()? - self.den.degree()?)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return canonical(self.num.add(&other.num), self.den.clone());
        }
        canonical(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> Self {
        RationalFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_laurent() && other.is_laurent() {
            return Self::from_laurent(self.num.mul(&other.num));
        }
        canonical(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        RationalFunc {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `δ(f) = z·f'`.
    pub fn delta(&self) -> Self {
        if self.is_laurent() {
            return Self::from_laurent(self.num.delta());
        }
        let top = self
            .num
            .delta()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.delta()));
        canonical(top, self.den.mul(&self.den))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Complex roots of the denominator.
    pub fn poles(&self) -> Vec<Complex64> {
        if self.is_laurent() {
            return Vec::new();
        }
        let dense: Vec<Complex64> = self.den.to_dense().iter().map(Scalar::to_complex).collect();
        super::roots::polynomial_roots(&dense)
    }

    /// True when the numerator has negative powers of `z`, i.e. a pole at `0`.
    pub fn has_pole_at_zero(&self) -> bool {
        self.num.valuation().is_some_and(|v| v < 0)
    }
}

fn canonical(mut num: LaurentPoly, mut den: LaurentPoly) -> RationalFunc {
    debug_assert!(!den.is_zero());
    if num.is_zero() {
        return RationalFunc::zero();
    }
    // move z-powers of the denominator into the numerator
    let v = den.valuation().unwrap_or(0);
    if v != 0 {
        den = den.shift(-v);
        num = num.shift(-v);
    }
    if den.degree() != Some(0) {
        let nv = num.valuation().unwrap_or(0);
        let g = poly_gcd(&num.shift(-nv).to_dense(), &den.to_dense());
        if g.len() > 1 {
            num = LaurentPoly::from_dense(&poly_div_exact(&num.shift(-nv).to_dense(), &g)).shift(nv);
            den = LaurentPoly::from_dense(&poly_div_exact(&den.to_dense(), &g));
        }
    }
    let lead = den.leading().cloned().expect("nonzero denominator");
    let inv = lead.inv().expect("nonzero leading coefficient");
    RationalFunc {
        num: num.scale(&inv),
        den: den.scale(&inv),
    }
}

fn trim(p: &mut Vec<Scalar>) {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
}

fn poly_rem(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = b[db].inv().expect("nonzero leading coefficient");
    while r.len() > db {
        let k = r.len() - 1;
        let c = &r[k] * &inv;
        for (j, bj) in b.iter().enumerate() {
            r[k - db + j] = &r[k - db + j] - &(&c * bj);
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Monic gcd over `Q(i)`, dense low to high.
fn poly_gcd(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    let inv = x.last().and_then(Scalar::inv).unwrap_or_else(Scalar::one);
    x.iter().map(|c| c * &inv).collect()
}

fn poly_div_exact(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = b[db].inv().expect("nonzero leading coefficient");
    let mut q = vec![Scalar::zero(); r.len().saturating_sub(db)];
    while r.len() > db {
        let k = r.len() - 1;
        let c = &r[k] * &inv;
        for (j, bj) in b.iter().enumerate() {
            r[k - db + j] = &r[k - db + j] - &(&c * bj);
        }
        q[k - db] = c;
        r.pop();
        trim(&mut r);
    }
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

impl Ring for RationalFunc {
    fn zero() -> Self {
        RationalFunc::zero()
    }
    fn one() -> Self {
        RationalFunc::one()
    }
    fn from_i64(n: i64) -> Self {
        RationalFunc::constant(Scalar::int(n))
    }
    fn add(&self, other: &Self) -> Self {
        RationalFunc::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RationalFunc::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RationalFunc::mul(self, other)
    }
    fn neg(&self) -> Self {
        RationalFunc::neg(self)
    }
    fn is_zero(&self) -> bool {
        RationalFunc::is_zero(self)
    }
    fn div_int(&self, n: i64) -> Self {
        self.scale(&Scalar::ratio(1, n))
    }
}

impl Field for RationalFunc {
    fn inv(&self) -> Option<Self> {
        RationalFunc::inv(self).ok()
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_laurent() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_dense(&c.iter().map(|&x| Scalar::int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn common_factors_cancel() {
        // (z^2 - 1)/(2z - 2) = (z + 1)/2
        let f = RationalFunc::new(poly(&[-1, 0, 1]), poly(&[-2, 2])).unwrap();
        assert!(f.is_laurent());
        assert_eq!(f.num(), &LaurentPoly::from_dense(&[Scalar::ratio(1, 2), Scalar::ratio(1, 2)]));
    }

    #[test]
    fn z_powers_move_to_numerator() {
        let f = RationalFunc::new(poly(&[1]), poly(&[0, 0, 3])).unwrap();
        assert!(f.is_laurent());
        assert_eq!(f.num(), &LaurentPoly::monomial(Scalar::ratio(1, 3), -2));
        assert!(f.has_pole_at_zero());
    }

    #[test]
    fn delta_of_quotient() {
        // δ(1/(1+z)) = -z/(1+z)^2
        let f = RationalFunc::new(poly(&[1]), poly(&[1, 1])).unwrap();
        let expect = RationalFunc::new(poly(&[0, -1]), poly(&[1, 2, 1])).unwrap();
        assert_eq!(f.delta(), expect);
    }

    #[test]
    fn sum_with_inverse_is_one() {
        let f = RationalFunc::new(poly(&[3, 1]), poly(&[1, 0, 1])).unwrap();
        let g = f.inv().unwrap();
        assert_eq!(f.mul(&g), RationalFunc::one());
        assert_eq!(RationalFunc::zero().inv(), Err(Error::DivisionByZero));
    }
}
