use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::field::Scalar;

/// Finite sum `Σ c_k z^k` with integer `k`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, Scalar>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn z() -> Self {
        Self::monomial(Scalar::one(), 1)
    }

    pub fn monomial(c: Scalar, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (i32, Scalar)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (k, c) in it {
            p.add_term(k, &c);
        }
        p
    }

    /// Dense coefficients low to high, starting at `z^0`.
    pub fn from_dense(coeffs: &[Scalar]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(k, c)| (k as i32, c.clone())))
    }

    pub(crate) fn add_term(&mut self, k: i32, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&k) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| *c == Scalar::one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &Scalar)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i32) -> Scalar {
        self.terms.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Largest exponent; `None` for zero.
    pub fn degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Smallest exponent; `None` for zero.
    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.terms.values().next_back()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::zero();
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                out.add_term(i + j, &(a * b));
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect(),
        }
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(LaurentPoly::one(), |acc, _| acc.mul(self))
    }

    /// `δ = z·d/dz`, acting by `z^k ↦ k z^k`.
    pub fn delta(&self) -> Self {
        LaurentPoly::from_terms(self.terms().map(|(k, c)| (k, c * &Scalar::int(k as i64))))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms()
            .map(|(k, c)| c.to_complex() * z.powi(k))
            .sum()
    }

    /// Dense coefficients `z^0..z^deg`, requiring a nonnegative valuation.
    pub(crate) fn to_dense(&self) -> Vec<Scalar> {
        let Some(d) = self.degree() else {
            return Vec::new();
        };
        debug_assert!(self.valuation().unwrap_or(0) >= 0);
        let mut v = vec![Scalar::zero(); d as usize + 1];
        for (k, c) in self.terms() {
            v[k as usize] = c.clone();
        }
        v
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms().rev() {
            write_term(f, c, &z_power(k), first)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `z^k` as a multiplicative suffix: `""`, `"*z^2"`, `"/z"`.
pub(crate) fn z_power(k: i32) -> String {
    match k {
        0 => String::new(),
        1 => "*z".into(),
        k if k > 0 => format!("*z^{k}"),
        -1 => "/z".into(),
        k => format!("/z^{}", -k),
    }
}

/// Write `± c·rest` where `rest` starts with `*` or `/` (or is empty).
pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    c: &Scalar,
    rest: &str,
    first: bool,
) -> fmt::Result {
    use num_traits::Signed;
    let negative = c.is_real() && c.re.is_negative();
    let mag = if negative { -c } else { c.clone() };
    if first {
        if negative {
            write!(f, "-")?;
        }
    } else if negative {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if mag == Scalar::one() && rest.starts_with('*') {
        write!(f, "{}", &rest[1..])
    } else {
        write!(f, "{mag}{rest}")
    }
}
