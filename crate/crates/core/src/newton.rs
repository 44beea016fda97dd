//! Newton polygon at `z = ∞`, Katz invariant and Malgrange irregularity.

use num_traits::{ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::formal::{FormalData, Q};
use crate::opcore::{DiffOperator, LaurentPoly, RationalFunc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slope {
    pub slope: Q,
    pub mult: usize,
}

#[derive(Clone, Debug)]
pub struct NewtonPolygon {
    /// `(i, deg_z c_i)` for every nonzero coefficient after clearing denominators.
    pub support: Vec<(usize, i64)>,
    /// Slopes in increasing order; multiplicities are horizontal extents.
    pub slopes: Vec<Slope>,
    /// The polynomial the operator was multiplied by on the left.
    pub clearing_factor: RationalFunc,
}

impl NewtonPolygon {
    pub fn degree(&self) -> usize {
        self.slopes.iter().map(|s| s.mult).sum()
    }

    pub fn katz(&self) -> Q {
        self.slopes.last().map_or_else(Q::zero, |s| s.slope)
    }
}

pub trait KatzInvariant {
    fn katz_invariant(&self) -> Q;
}

impl KatzInvariant for NewtonPolygon {
    fn katz_invariant(&self) -> Q {
        self.katz()
    }
}

impl KatzInvariant for FormalData {
    fn katz_invariant(&self) -> Q {
        self.katz()
    }
}

pub fn katz_invariant(x: &impl KatzInvariant) -> Q {
    x.katz_invariant()
}

/// Left factor that turns every coefficient into a polynomial in `z`.
fn clearing_factor(op: &DiffOperator) -> RationalFunc {
    let mut factor = RationalFunc::one();
    for c in op.coeffs() {
        if c.is_zero() {
            continue;
        }
        let scaled = c.mul(&factor);
        if !scaled.is_laurent() {
            factor = factor.mul(&RationalFunc::from_laurent(scaled.den().clone()));
        }
    }
    let min_val = op
        .coeffs()
        .iter()
        .filter(|c| !c.is_zero())
        .filter_map(|c| c.mul(&factor).num().valuation())
        .min()
        .unwrap_or(0);
    if min_val < 0 {
        factor = factor.mul(&RationalFunc::from_laurent(LaurentPoly::monomial(
            crate::field::Scalar::one(),
            -min_val,
        )));
    }
    factor
}

pub fn newton_polygon(op: &DiffOperator) -> Result<NewtonPolygon> {
    if op.is_zero() || op.degree() == 0 {
        return invalid("Newton polygon needs an operator of degree at least 1");
    }
    let factor = clearing_factor(op);
    let support: Vec<(usize, i64)> = op
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let d = c.mul(&factor).degree().expect("nonzero coefficient");
            (i, d as i64)
        })
        .collect();
    Ok(NewtonPolygon {
        slopes: hull_slopes(&support),
        support,
        clearing_factor: factor,
    })
}

/// Lower boundary of the union of quadrants `{x ≤ i, y ≥ −deg c_i}`, walked from
/// `x = 0` to the leading coefficient.
fn hull_slopes(support: &[(usize, i64)]) -> Vec<Slope> {
    let pts: Vec<(i64, i64)> = support.iter().map(|&(i, d)| (i as i64, -d)).collect();
    let Some(&(xmax, _)) = pts.last() else {
        return Vec::new();
    };
    let ymin = pts.iter().map(|p| p.1).min().unwrap();
    let mut cur = (0i64, ymin);
    let mut slopes: Vec<Slope> = Vec::new();
    while cur.0 < xmax {
        // next vertex: minimal slope, farthest on ties
        let mut best: Option<((i64, i64), Q)> = None;
        for &p in pts.iter().filter(|p| p.0 > cur.0) {
            let s = Q::new(p.1 - cur.1, p.0 - cur.0);
            best = match best {
                Some((bp, bs)) if bs < s || (bs == s && bp.0 > p.0) => Some((bp, bs)),
                _ => Some((p, s)),
            };
        }
        let (p, s) = best.expect("leading point lies to the right");
        let len = (p.0 - cur.0) as usize;
        match slopes.last_mut() {
            Some(last) if last.slope == s => last.mult += len,
            _ => slopes.push(Slope { slope: s, mult: len }),
        }
        cur = p;
    }
    slopes
}

/// `Σ_{q≠q̃} deg_z(q − q̃)·dim V_q·dim V_q̃` over ordered pairs.
pub fn irregularity(f: &FormalData) -> Q {
    let blocks = f.blocks();
    let mut acc = Q::zero();
    for (i, a) in blocks.iter().enumerate() {
        for (j, b) in blocks.iter().enumerate() {
            if i != j {
                let d = a.eigenvalue.sub(&b.eigenvalue).degree();
                acc += d * Q::from_integer((a.dim * b.dim) as i64);
            }
        }
    }
    acc
}

/// Slopes as `f64` pairs, for reporting.
pub fn slopes_f64(p: &NewtonPolygon) -> Vec<(f64, usize)> {
    p.slopes
        .iter()
        .map(|s| (s.slope.to_f64().unwrap_or(f64::NAN), s.mult))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Scalar, Value};
    use crate::formal::{formal_mixed, formal_pdq, formal_ramified, formal_unramified, ClosureSign};
    use crate::opcore::{build_pdq, parse_operator};
    use std::collections::HashMap;

    fn op(s: &str) -> DiffOperator {
        parse_operator(s, &HashMap::new()).unwrap()
    }

    fn slopes(p: &NewtonPolygon) -> Vec<(Q, usize)> {
        p.slopes.iter().map(|s| (s.slope, s.mult)).collect()
    }

    #[test]
    fn projective_line_operator() {
        let p = newton_polygon(&op("delta^3 - z")).unwrap();
        assert_eq!(slopes(&p), vec![(Q::new(1, 3), 3)]);
        assert_eq!(p.support, vec![(0, 1), (3, 0)]);
    }

    #[test]
    fn pdq_has_two_slopes() {
        let mu = [Scalar::ratio(1, 3), Scalar::ratio(1, 2)];
        let nu = vec![Scalar::ratio(1, 7); 5];
        let p = newton_polygon(&build_pdq(2, 5, &mu, &nu).unwrap()).unwrap();
        assert_eq!(slopes(&p), vec![(Q::zero(), 2), (Q::new(1, 3), 3)]);
    }

    #[test]
    fn regular_singular_operator_has_slope_zero() {
        let p = newton_polygon(&op("(delta+1/2)*(delta-1/3)*delta")).unwrap();
        assert_eq!(slopes(&p), vec![(Q::zero(), 3)]);
        assert_eq!(p.katz(), Q::zero());
    }

    #[test]
    fn v5_operator() {
        let p = newton_polygon(&op("delta^4 - 11*z*delta^2 - 11*z*delta - 3*z - z^2")).unwrap();
        assert_eq!(slopes(&p), vec![(Q::new(1, 2), 4)]);
    }

    #[test]
    fn denominators_are_cleared() {
        let p = newton_polygon(&op("delta^2 - 1/(z-1)*delta - z")).unwrap();
        assert_eq!(p.degree(), 2);
        assert!(!p.clearing_factor.is_laurent() || !p.clearing_factor.num().is_one());
        let q = newton_polygon(&op("delta^2 - 1/z")).unwrap();
        assert_eq!(slopes(&q), vec![(Q::zero(), 2)]);
    }

    #[test]
    fn irregularities() {
        for n in 2..=6 {
            let f = formal_ramified(n, &Value::one()).unwrap();
            assert_eq!(irregularity(&f), Q::from_integer(n as i64 - 1));
            let lambda: Vec<Scalar> = (0..n as i64).map(Scalar::int).collect();
            let g = formal_unramified(&lambda).unwrap();
            assert_eq!(irregularity(&g), Q::from_integer((n * (n - 1)) as i64));
        }
        let f = formal_mixed(&[Value::int(2), Value::int(3)], 3, &Value::one()).unwrap();
        assert_eq!(irregularity(&f), Q::from_integer(2 * 2 + 3 - 1));
    }

    #[test]
    fn katz_agrees_between_polygon_and_formal_data() {
        let mu = [Scalar::ratio(1, 5)];
        let nu = [Scalar::ratio(1, 3), Scalar::ratio(1, 2), Scalar::ratio(3, 7)];
        let p = newton_polygon(&build_pdq(1, 3, &mu, &nu).unwrap()).unwrap();
        let f = formal_pdq(1, 3, &mu, &nu, ClosureSign::Plus).unwrap();
        assert_eq!(katz_invariant(&p), Q::new(1, 2));
        assert_eq!(katz_invariant(&p), katz_invariant(&f));
    }
}
