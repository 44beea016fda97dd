use super::operator::DiffOperator;
use super::rational::RationalFunc;
use super::system::MatrixSystem;
use crate::error::{invalid, Result};
use crate::field::Scalar;
use crate::linalg::Mat;

/// `(−1)^{q−p} z ∏_{j≤p}(δ+μ_j) − ∏_{j≤q}(δ+ν_j−1)`.
pub fn build_pdq(p: usize, q: usize, mu: &[Scalar], nu: &[Scalar]) -> Result<DiffOperator> {
    check_pdq(p, q, mu, nu)?;
    let upper = mu
        .iter()
        .fold(DiffOperator::one(), |acc, m| acc.mul(&DiffOperator::delta_plus(m.clone())));
    let lower = nu.iter().fold(DiffOperator::one(), |acc, n| {
        acc.mul(&DiffOperator::delta_plus(n - &Scalar::one()))
    });
    let sign = if (q - p) % 2 == 0 { 1 } else { -1 };
    let z = RationalFunc::z().scale(&Scalar::int(sign));
    Ok(upper.scale(&z).sub(&lower))
}

pub(crate) fn check_pdq(p: usize, q: usize, mu: &[Scalar], nu: &[Scalar]) -> Result<()> {
    if p < 1 || p >= q {
        return invalid(format!("need 1 <= p < q, got p={p}, q={q}"));
    }
    if mu.len() != p {
        return invalid(format!("expected {p} values of mu, got {}", mu.len()));
    }
    if nu.len() != q {
        return invalid(format!("expected {q} values of nu, got {}", nu.len()));
    }
    for i in 0..p {
        for j in i + 1..p {
            if mu[i].congruent_mod_z(&mu[j]) {
                return invalid(format!(
                    "mu values must be distinct modulo Z (mu{} = {}, mu{} = {})",
                    i + 1,
                    mu[i],
                    j + 1,
                    mu[j]
                ));
            }
        }
    }
    Ok(())
}

/// The totally ramified family `δY = M·Y`, `M = diag(a) + subdiagonal 1 + z·E_{0,n−1}`.
pub fn ramified_family(n: usize, a: &[Scalar]) -> Result<MatrixSystem> {
    check_ramified(n, a)?;
    let b = Mat::from_fn(n, n, |i, j| {
        if i == j {
            RationalFunc::constant(a[i].clone())
        } else if i == j + 1 {
            RationalFunc::one()
        } else if i == 0 && j == n - 1 {
            RationalFunc::z()
        } else {
            RationalFunc::zero()
        }
    });
    MatrixSystem::new(b)
}

pub(crate) fn check_ramified(n: usize, a: &[Scalar]) -> Result<()> {
    if n < 2 {
        return invalid(format!("n must be at least 2, got {n}"));
    }
    if a.len() != n {
        return invalid(format!("expected {n} values of a, got {}", a.len()));
    }
    let sum = a.iter().fold(Scalar::zero(), |acc, x| &acc + x);
    if !sum.is_zero() {
        return invalid("sum of a must be 0");
    }
    Ok(())
}

/// The unramified family `δY = (z·diag(λ) + T)·Y`.
pub fn unramified_family(lambda: &[Scalar], t: &Mat<Scalar>) -> Result<MatrixSystem> {
    check_distinct(lambda)?;
    let n = lambda.len();
    if t.rows() != n || t.cols() != n {
        return invalid(format!("T must be {n}x{n}"));
    }
    if (0..n).any(|i| !t.get(i, i).is_zero()) {
        return invalid("T must have zero diagonal");
    }
    let b = Mat::from_fn(n, n, |i, j| {
        let c = RationalFunc::constant(t.get(i, j).clone());
        if i == j {
            c.add(&RationalFunc::z().scale(&lambda[i]))
        } else {
            c
        }
    });
    MatrixSystem::new(b)
}

pub(crate) fn check_distinct(lambda: &[Scalar]) -> Result<()> {
    if lambda.is_empty() {
        return invalid("need at least one lambda");
    }
    for i in 0..lambda.len() {
        for j in i + 1..lambda.len() {
            if lambda[i] == lambda[j] {
                return invalid(format!("lambda values must be distinct ({} repeats)", lambda[i]));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::parse::parse_operator;
    use std::collections::HashMap;

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn one_d_three_matches_its_text_form() {
        let mut b = HashMap::new();
        for (k, v) in [("mu", s(1, 5)), ("nu1", s(1, 3)), ("nu2", s(1, 2)), ("nu3", s(3, 7))] {
            b.insert(k.to_string(), v);
        }
        let text = "z*(delta+mu) - (delta+nu1-1)*(delta+nu2-1)*(delta+nu3-1)";
        let parsed = parse_operator(text, &b).unwrap();
        let built = build_pdq(1, 3, &[s(1, 5)], &[s(1, 3), s(1, 2), s(3, 7)]).unwrap();
        assert_eq!(parsed, built);
    }

    #[test]
    fn odd_codimension_flips_the_sign_of_z() {
        let op = build_pdq(1, 2, &[Scalar::zero()], &[Scalar::one(), Scalar::one()]).unwrap();
        let expect = parse_operator("-z*delta - delta^2", &HashMap::new()).unwrap();
        assert_eq!(op, expect);
    }

    #[test]
    fn mu_collision_is_rejected() {
        let e = build_pdq(2, 3, &[Scalar::zero(), Scalar::one()], &vec![Scalar::one(); 3]);
        assert!(e.is_err());
        assert!(build_pdq(2, 2, &[s(0, 1), s(1, 2)], &[s(0, 1), s(0, 1)]).is_err());
    }

    #[test]
    fn ramified_lattice_matrix() {
        let sys = ramified_family(3, &[s(-1, 3), s(0, 1), s(1, 3)]).unwrap();
        let m = sys.matrix();
        assert_eq!(m.get(0, 0), &RationalFunc::constant(s(-1, 3)));
        assert_eq!(m.get(0, 2), &RationalFunc::z());
        assert_eq!(m.get(1, 0), &RationalFunc::one());
        assert_eq!(m.get(2, 1), &RationalFunc::one());
        assert_eq!(m.get(2, 2), &RationalFunc::constant(s(1, 3)));
        let e = ramified_family(3, &[s(1, 1), s(1, 1), s(1, 1)]).unwrap_err();
        assert_eq!(e.to_string(), "sum of a must be 0");
    }

    #[test]
    fn unramified_checks() {
        let t = Mat::from_rows(vec![vec![Scalar::zero(), Scalar::int(5)], vec![Scalar::zero(), Scalar::zero()]]);
        let sys = unramified_family(&[Scalar::zero(), Scalar::one()], &t).unwrap();
        assert_eq!(sys.matrix().get(0, 1), &RationalFunc::constant(Scalar::int(5)));
        assert_eq!(sys.matrix().get(1, 1), &RationalFunc::z());
        assert!(unramified_family(&[Scalar::one(), Scalar::one()], &Mat::zeros(2, 2)).is_err());
        let bad = Mat::from_rows(vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::zero(), Scalar::zero()]]);
        assert!(unramified_family(&[Scalar::zero(), Scalar::one()], &bad).is_err());
    }
}
