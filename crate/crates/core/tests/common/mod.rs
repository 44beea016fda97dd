#![allow(dead_code)]

use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use irrstokes_core::field::Scalar;
use irrstokes_core::linalg::Mat;
use irrstokes_core::montrace::{spectrum, transport, Path};
use irrstokes_core::opcore::{
    op_multiply, ramified_family, DiffOperator, LaurentPoly, RationalFunc,
};

pub fn gaussian() -> impl Strategy<Value = Scalar> {
    (-3i64..4, 1i64..4, -2i64..3, 1i64..3).prop_map(|(a, b, c, d)| {
        Scalar::new(BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into()))
    })
}

pub fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-2i32..3, gaussian()), 0..3).prop_map(LaurentPoly::from_terms)
}

/// Operators of degree at most 4 with Gaussian-rational Laurent coefficients.
pub fn operator() -> impl Strategy<Value = DiffOperator> {
    prop::collection::vec(laurent(), 1..6).prop_map(|cs| {
        DiffOperator::new(cs.into_iter().map(RationalFunc::from_laurent).collect())
    })
}

pub fn polynomial_operator() -> impl Strategy<Value = DiffOperator> {
    (prop::collection::vec(prop::collection::vec(-3i64..4, 1..4), 1..5), 1i64..4).prop_map(
        |(cs, lead)| {
            let mut coeffs: Vec<RationalFunc> = cs
                .into_iter()
                .map(|c| {
                    RationalFunc::from_laurent(LaurentPoly::from_dense(
                        &c.into_iter().map(Scalar::int).collect::<Vec<_>>(),
                    ))
                })
                .collect();
            coeffs.push(RationalFunc::constant(Scalar::int(lead)));
            DiffOperator::new(coeffs)
        },
    )
}

pub fn complex_matrix() -> impl Strategy<Value = Mat<Complex64>> {
    (1usize..6).prop_flat_map(|n| {
        prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), n * n).prop_map(move |v| {
            Mat::from_vec(n, n, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
        })
    })
}

pub fn max_abs(m: &Mat<Complex64>) -> f64 {
    m.entries().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn associativity_holds(a: &DiffOperator, b: &DiffOperator, c: &DiffOperator) -> bool {
    op_multiply(&op_multiply(a, b), c) == op_multiply(a, &op_multiply(b, c))
}

/// Deviation of `Π eigenvalues` from `det`, and of `(−1)^n·charpoly[n]` from `det`, relative to `1 + |det|`.
pub fn determinant_identity_gap(m: &Mat<Complex64>) -> f64 {
    let n = m.rows();
    let s = spectrum(m);
    let prod: Complex64 = s.eigenvalues.iter().product();
    let det = m.det();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let gap = (prod - det).norm().max((s.charpoly[n] * sign - det).norm());
    gap / (1.0 + det.norm())
}

/// Arc around the origin followed by a radial segment, for the ramified family with exponents `(a, −a)`.
pub fn flow_case() -> impl Strategy<Value = (i64, f64, f64, f64, f64)> {
    (-1i64..2, 0.5f64..2.0, 0.5f64..2.0, 0.0f64..1.0, -1.0f64..1.0)
}

/// `‖T(p₁ then p₂) − T(p₂)T(p₁)‖` relative to `max(1, ‖T‖)`.
pub fn flow_composition_gap(case: (i64, f64, f64, f64, f64), tol: f64) -> f64 {
    let (a, r0, r1, s, turn) = case;
    let sys = ramified_family(2, &[Scalar::int(a), Scalar::int(-a)]).unwrap();
    let p1 = Path::arc(Complex64::new(0.0, 0.0), r0, s, s + turn);
    let end = p1.end_point();
    let p2 = Path::line(end, end * (r1 / r0));
    let whole = p1.then(&p2).unwrap();
    let t1 = transport(&sys, &p1, tol).unwrap();
    let t2 = transport(&sys, &p2, tol).unwrap();
    let t = transport(&sys, &whole, tol).unwrap();
    let composed = t2.matrix.mul(&t1.matrix);
    max_abs(&t.matrix.sub(&composed)) / max_abs(&t.matrix).max(1.0)
}
