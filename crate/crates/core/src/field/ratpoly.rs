//! Dense univariate polynomials over `Q`, coefficients low to high.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) type RatPoly = Vec<BigRational>;

pub(crate) fn trim(p: &mut RatPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn degree(p: &RatPoly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn mul(a: &RatPoly, b: &RatPoly) -> RatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

fn sub(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut r = a.clone();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            if !bj.is_zero() {
                r[shift + j] -= &c * bj;
            }
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Inverse of `a` modulo `m`, when `gcd(a, m) = 1`.
pub(crate) fn inverse_mod(a: &RatPoly, m: &RatPoly) -> Option<RatPoly> {
    let (mut r0, mut r1) = (m.clone(), a.clone());
    trim(&mut r1);
    let (mut t0, mut t1): (RatPoly, RatPoly) = (Vec::new(), vec![BigRational::one()]);
    while degree(&r1).is_some() {
        let (q, r) = divrem(&r0, &r1);
        let t2 = sub(&t0, &mul(&q, &t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t2;
    }
    // r0 is the gcd; it must be a nonzero constant
    match degree(&r0) {
        Some(0) => {
            let c = r0[0].clone();
            let mut inv: RatPoly = t0.into_iter().map(|x| x / &c).collect();
            let (_, rem) = divrem(&inv, m);
            inv = rem;
            Some(inv)
        }
        _ => None,
    }
}

/// Cyclotomic polynomial `Φ_n` with integer coefficients, low to high.
pub(crate) fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = exact_div_int(&num, &phi_d);
        }
    }
    num
}

fn exact_div_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    // b is monic
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (db..a.len()).rev() {
        let c = r[k].clone();
        if c.is_zero() {
            continue;
        }
        let shift = k - db;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        q[shift] = c;
    }
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_poly(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn inverse_modulo_x2_plus_1() {
        let r = |n: i64| BigRational::from_integer(BigInt::from(n));
        let m = vec![r(1), r(0), r(1)];
        let a = vec![r(1), r(1)]; // 1 + i
        let inv = inverse_mod(&a, &m).unwrap();
        let (_, prod) = divrem(&mul(&a, &inv), &m);
        assert_eq!(prod, vec![r(1)]);
    }
}
