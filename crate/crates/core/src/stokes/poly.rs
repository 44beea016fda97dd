use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Ring, Value};

/// Product of named variables with positive exponents, sorted by name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(v, e)| (v.as_str(), *e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (v, e) in &other.0 {
            *map.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(map.into_iter().collect())
    }

    pub fn eval(&self, values: &HashMap<String, Value>) -> Result<Value> {
        let mut acc = Value::one();
        for (v, e) in &self.0 {
            let x = values
                .get(v)
                .ok_or_else(|| Error::UnboundParameter(v.clone()))?;
            for _ in 0..*e {
                acc = acc.mul(x);
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Multivariate polynomial with [`Value`] coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Value>,
}

impl Poly {
    pub fn constant(c: Value) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn var(name: &str) -> Self {
        Self::term(Monomial::var(name), Value::one())
    }

    pub fn term(m: Monomial, c: Value) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Value)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> Value {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Value::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.vars().map(|(x, _)| x.to_string()))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn eval(&self, values: &HashMap<String, Value>) -> Result<Value> {
        let mut acc = Value::zero();
        for (m, c) in &self.terms {
            acc = acc.add(&c.mul(&m.eval(values)?));
        }
        Ok(acc)
    }

    /// Substitute the variables that have values, keeping the others symbolic.
    pub fn partial_eval(&self, values: &HashMap<String, Value>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Monomial::one();
            for (v, e) in m.vars() {
                match values.get(v) {
                    Some(x) => {
                        for _ in 0..e {
                            coeff = coeff.mul(x);
                        }
                    }
                    None => rest = rest.mul(&Monomial(vec![(v.to_string(), e)])),
                }
            }
            out = out.add(&Poly::term(rest, coeff));
        }
        out
    }

    fn insert(&mut self, m: Monomial, c: Value) {
        let sum = match self.terms.remove(&m) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn one() -> Self {
        Poly::constant(Value::one())
    }
    fn from_i64(n: i64) -> Self {
        Poly::constant(Value::int(n))
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn div_int(&self, n: i64) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.div_int(n)))
                .collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    format!("{c}")
                } else if *c == Value::one() {
                    format!("{m}")
                } else if *c == Value::int(-1) {
                    format!("-{m}")
                } else {
                    format!("({c})*{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_square() {
        let x = Poly::var("x");
        let y = Poly::var("y");
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.degree(), 2);
        let mut vals = HashMap::new();
        vals.insert("x".to_string(), Value::int(2));
        vals.insert("y".to_string(), Value::int(3));
        assert_eq!(sq.eval(&vals).unwrap(), Value::int(25));
        assert!(sq.sub(&sq).is_zero());
        assert_eq!(s.to_string(), "x + y");
    }

    #[test]
    fn partial_substitution() {
        let p = Poly::var("x").mul(&Poly::var("y")).add(&Poly::var("y"));
        let mut vals = HashMap::new();
        vals.insert("x".to_string(), Value::int(-1));
        assert!(p.partial_eval(&vals).is_zero());
    }
}
