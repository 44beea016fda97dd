use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;

use super::Q;
use crate::field::{Cyclo, Ring};

/// `q = Σ c_s z^s` with positive rational exponents whose denominators divide `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvalue {
    ramification: i64,
    terms: BTreeMap<Q, Cyclo>,
}

impl Eigenvalue {
    pub fn zero() -> Self {
        Eigenvalue {
            ramification: 1,
            terms: BTreeMap::new(),
        }
    }

    /// `c·z^s` with `s > 0`.
    pub fn monomial(c: Cyclo, s: Q) -> Self {
        Self::from_terms([(s, c)])
    }

    /// Panics on a nonpositive exponent, which is not an eigenvalue at `∞`.
    pub fn from_terms(terms: impl IntoIterator<Item = (Q, Cyclo)>) -> Self {
        let mut map: BTreeMap<Q, Cyclo> = BTreeMap::new();
        for (s, c) in terms {
            assert!(s > Q::zero(), "eigenvalue exponents must be positive");
            let sum = match map.remove(&s) {
                Some(old) => old.add(&c),
                None => c,
            };
            if !sum.is_zero() {
                map.insert(s, sum);
            }
        }
        let ramification = map.keys().fold(1i64, |acc, s| acc.lcm(s.denom()));
        Eigenvalue {
            ramification,
            terms: map,
        }
    }

    pub fn ramification(&self) -> i64 {
        self.ramification
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Q, &Cyclo)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `deg_z q`, zero for the zero eigenvalue.
    pub fn degree(&self) -> Q {
        self.terms.keys().next_back().copied().unwrap_or_else(Q::zero)
    }

    /// Leading exponent and coefficient.
    pub fn leading(&self) -> Option<(Q, &Cyclo)> {
        self.terms.iter().next_back().map(|(s, c)| (*s, c))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(s, c)| (*s, c.clone()))
                .chain(other.terms.iter().map(|(s, c)| (*s, c.neg()))),
        )
    }

    /// Image under `z^{1/m} ↦ e^{2πi/m} z^{1/m}`: each `c_s` picks up `e^{2πis}`.
    pub fn gamma_image(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(s, c)| {
            let rot = Cyclo::root_of_unity(*s.numer(), *s.denom() as u32);
            (*s, c.mul(&rot))
        }))
    }

    /// Numeric value at `z = r·e^{2πid}`, on the principal branch of the ray.
    pub fn eval_on_ray(&self, r: f64, d: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(s, c)| {
                let s = *s.numer() as f64 / *s.denom() as f64;
                c.to_complex() * Complex64::from_polar(r.powf(s), std::f64::consts::TAU * d * s)
            })
            .sum()
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (s, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let zpart = if *s == Q::from_integer(1) {
                "z".to_string()
            } else if s.is_integer() {
                format!("z^{}", s.numer())
            } else {
                format!("z^({s})")
            };
            if c.is_rational() && c.as_rational().is_some_and(|q| q == &crate::field::rat(1, 1)) {
                write!(f, "{zpart}")?;
            } else {
                write!(f, "({c})*{zpart}")?;
            }
        }
        Ok(())
    }
}
