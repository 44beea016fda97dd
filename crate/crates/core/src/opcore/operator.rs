use std::fmt;

use super::laurent::{write_term, z_power, LaurentPoly};
use super::rational::RationalFunc;
use crate::field::{binomial, Scalar};

/// `Σ c_i(z) δ^i` in `C(z)[δ]`, with `δ = z·d/dz`.
///
/// Coefficients are stored low to high with no trailing zeros; the zero
/// operator has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    coeffs: Vec<RationalFunc>,
}

impl DiffOperator {
    pub fn new(mut coeffs: Vec<RationalFunc>) -> Self {
        while coeffs.last().is_some_and(RationalFunc::is_zero) {
            coeffs.pop();
        }
        DiffOperator { coeffs }
    }

    pub fn zero() -> Self {
        DiffOperator { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_coeff(RationalFunc::one())
    }

    pub fn delta() -> Self {
        Self::new(vec![RationalFunc::zero(), RationalFunc::one()])
    }

    pub fn z() -> Self {
        Self::from_coeff(RationalFunc::z())
    }

    pub fn from_coeff(c: RationalFunc) -> Self {
        Self::new(vec![c])
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_coeff(RationalFunc::constant(c))
    }

    /// `δ + c` for a constant `c`.
    pub fn delta_plus(c: Scalar) -> Self {
        Self::new(vec![RationalFunc::constant(c), RationalFunc::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// δ-degree; the zero operator has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[RationalFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RationalFunc {
        self.coeffs.get(i).cloned().unwrap_or_else(RationalFunc::zero)
    }

    pub fn leading(&self) -> Option<&RationalFunc> {
        self.coeffs.last()
    }

    /// The coefficient of `δ⁰` when the operator has degree 0.
    pub fn as_coeff(&self) -> Option<RationalFunc> {
        match self.coeffs.len() {
            0 => Some(RationalFunc::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        DiffOperator {
            coeffs: self.coeffs.iter().map(RationalFunc::neg).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Left multiplication by a coefficient: `f·L`.
    pub fn scale(&self, f: &RationalFunc) -> Self {
        Self::new(self.coeffs.iter().map(|c| f.mul(c)).collect())
    }

    /// The noncommutative product, using `δ^i f = Σ_k C(i,k) δ^k(f) δ^{i−k}`.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let da = self.degree();
        let db = other.degree();
        let mut out = vec![RationalFunc::zero(); da + db + 1];
        for (j, b) in other.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            // iterated derivatives δ^k(b) for k = 0..=da
            let mut derivs = Vec::with_capacity(da + 1);
            derivs.push(b.clone());
            for k in 1..=da {
                let next = derivs[k - 1].delta();
                derivs.push(next);
            }
            for (i, a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, dk) in derivs.iter().enumerate().take(i + 1) {
                    if dk.is_zero() {
                        continue;
                    }
                    let c = binomial(i as u64, k as u64);
                    let term = a.mul(dk).scale(&Scalar::int(c));
                    let slot = i - k + j;
                    out[slot] = out[slot].add(&term);
                }
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Apply to a Laurent polynomial `y`, giving `Σ c_i δ^i(y)`.
    pub fn apply(&self, y: &RationalFunc) -> RationalFunc {
        let mut acc = RationalFunc::zero();
        let mut d = y.clone();
        for c in &self.coeffs {
            acc = acc.add(&c.mul(&d));
            d = d.delta();
        }
        acc
    }

    /// True when every coefficient is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.coeffs.iter().all(RationalFunc::is_laurent)
    }
}

impl fmt::Display for DiffOperator {
    /// Canonical text that parses back to the same operator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let dpow = match i {
                0 => String::new(),
                1 => "*delta".to_string(),
                i => format!("*delta^{i}"),
            };
            if c.is_laurent() {
                for (k, s) in c.num().terms().rev() {
                    let rest = format!("{}{}", z_power(k), dpow);
                    write_term(f, s, &rest, first)?;
                    first = false;
                }
            } else {
                let coef = format!("({})/({})", c.num(), c.den());
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "{coef}{dpow}")?;
                first = false;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<LaurentPoly> for DiffOperator {
    fn from(p: LaurentPoly) -> Self {
        Self::from_coeff(RationalFunc::from_laurent(p))
    }
}
