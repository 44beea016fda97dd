//! Monodromy data of Painlevé III(D7): `top₀`, `top_∞`, the link `L` and the torus action.

use crate::error::{Error, Result};
use crate::field::{Field, Ring, Value};
use crate::linalg::Mat;

fn m2(a: Value, b: Value, c: Value, d: Value) -> Mat<Value> {
    Mat::from_rows(vec![vec![a, b], vec![c, d]])
}

fn nonzero(x: &Value, what: &str) -> Result<Value> {
    x.inv()
        .ok_or_else(|| Error::InvalidInput(format!("{what} must be nonzero")))
}

/// `[[−e, −1], [1, 0]]`: formal monodromy `[[0,−1],[1,0]]` times Stokes `[[1,0],[e,1]]`.
pub fn top0(e: &Value) -> Mat<Value> {
    m2(e.neg(), Value::int(-1), Value::one(), Value::zero())
}

/// `[[α, αc₂], [α⁻¹c₁, α⁻¹(1+c₁c₂)]]`.
pub fn topinf(alpha: &Value, c1: &Value, c2: &Value) -> Result<Mat<Value>> {
    let ai = nonzero(alpha, "alpha")?;
    Ok(m2(
        alpha.clone(),
        alpha.mul(c2),
        ai.mul(c1),
        ai.mul(&Value::one().add(&c1.mul(c2))),
    ))
}

/// Stokes and formal data at `0` and `∞` together with the link.
///
/// `link` is kept as solved (exact when the inputs are); `link_scale` is a square root
/// of `det link`, so the normalized link `link / link_scale` has determinant 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PIIID7Data {
    pub e: Value,
    pub alpha: Value,
    pub c1: Value,
    pub c2: Value,
    pub link: Mat<Value>,
    pub link_scale: Value,
}

impl PIIID7Data {
    pub fn new(e: Value, alpha: Value, c1: Value, c2: Value, link: Mat<Value>) -> Result<Self> {
        nonzero(&alpha, "alpha")?;
        if link.rows() != 2 || link.cols() != 2 {
            return Err(Error::InvalidInput("the link must be 2x2".into()));
        }
        let det = link.det();
        if det.is_zero() {
            return Err(Error::InvalidInput("the link must be invertible".into()));
        }
        Ok(PIIID7Data {
            e,
            alpha,
            c1,
            c2,
            link_scale: det.sqrt(),
            link,
        })
    }

    /// The link scaled to determinant 1.
    pub fn normalized_link(&self) -> Mat<Value> {
        let s = self.link_scale.inv().expect("nonzero scale");
        self.link.scale(&s)
    }

    pub fn top0(&self) -> Mat<Value> {
        top0(&self.e)
    }

    pub fn topinf(&self) -> Mat<Value> {
        topinf(&self.alpha, &self.c1, &self.c2).expect("alpha is nonzero")
    }
}

#[derive(Clone, Debug)]
pub struct LinkSolution {
    pub data: PIIID7Data,
    /// Dimension of `{L : L·top₀ = top_∞⁻¹·L}`.
    pub kernel_dim: usize,
}

/// `e` from the trace condition, then `L` from `L·top₀ = top_∞⁻¹·L`.
pub fn solve_link(alpha: &Value, c1: &Value, c2: &Value) -> Result<LinkSolution> {
    let ai = nonzero(alpha, "alpha")?;
    let e = alpha.add(&ai.mul(&Value::one().add(&c1.mul(c2)))).neg();
    let t0 = top0(&e);
    let ti = topinf(alpha, c1, c2)?;
    let ti_inv = ti
        .inverse()
        .ok_or_else(|| Error::SingularSystem("top_inf is singular".into()))?;
    // column k of the map L ↦ L·top₀ − top_∞⁻¹·L on the basis E_{ij}, k = 2i + j
    let mut a = Mat::<Value>::zeros(4, 4);
    for k in 0..4 {
        let mut basis = Mat::<Value>::zeros(2, 2);
        basis.set(k / 2, k % 2, Value::one());
        let img = basis.mul(&t0).sub(&ti_inv.mul(&basis));
        for r in 0..4 {
            a.set(r, k, img.get(r / 2, r % 2).clone());
        }
    }
    let kernel = a.kernel();
    let kernel_dim = kernel.len();
    let to_mat = |v: &[Value]| Mat::from_fn(2, 2, |i, j| v[2 * i + j].clone());
    let mut candidates: Vec<Mat<Value>> = kernel.iter().map(|v| to_mat(v)).collect();
    if kernel.len() == 2 {
        let sum: Vec<Value> = kernel[0].iter().zip(&kernel[1]).map(|(x, y)| x.add(y)).collect();
        candidates.push(to_mat(&sum));
    }
    let link = candidates
        .into_iter()
        .find(|l| !l.det().is_zero())
        .ok_or_else(|| {
            Error::NoSolution(format!(
                "top_0 and top_inf^-1 are not conjugate (kernel dimension {kernel_dim}, no invertible link)"
            ))
        })?;
    Ok(LinkSolution {
        data: PIIID7Data::new(e, alpha.clone(), c1.clone(), c2.clone(), link)?,
        kernel_dim,
    })
}

fn max_norm_minus_identity(m: &Mat<Value>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let target = if i == j { Value::one() } else { Value::zero() };
            worst = worst.max(m.get(i, j).dist(&target));
        }
    }
    worst
}

/// `‖top₀·L⁻¹·t_∞·L − I‖_max` for explicit matrices.
pub fn relation_residual_of(t0: &Mat<Value>, tinf: &Mat<Value>, l: &Mat<Value>) -> Result<f64> {
    let li = l
        .inverse()
        .ok_or_else(|| Error::SingularSystem("the link is singular".into()))?;
    Ok(max_norm_minus_identity(&t0.mul(&li).mul(tinf).mul(l)))
}

/// The relation is invariant under scaling `L`, so the stored link is used directly.
pub fn relation_residual(data: &PIIID7Data) -> Result<f64> {
    relation_residual_of(&data.top0(), &data.topinf(), &data.link)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusElement {
    pub l0: Value,
    pub l1: Value,
    pub l2: Value,
}

impl TorusElement {
    pub fn new(l0: Value, l1: Value, l2: Value) -> Result<Self> {
        for (x, name) in [(&l0, "lambda0"), (&l1, "lambda1"), (&l2, "lambda2")] {
            nonzero(x, name)?;
        }
        Ok(TorusElement { l0, l1, l2 })
    }
}

/// Base change `e_i ↦ λ₀e_i` at `0` and `f_j ↦ λ_j f_j` at `∞`.
///
/// Data at `∞` is conjugated by `diag(λ₁, λ₂)`, so `c₁ ↦ c₁λ₁/λ₂`, `c₂ ↦ c₂λ₂/λ₁`, and
/// `L ↦ diag(λ₁,λ₂)⁻¹·L·λ₀`. The determinant picks up `λ₀²/(λ₁λ₂)`, which the
/// new `link_scale` absorbs.
pub fn torus_act(data: &PIIID7Data, t: &TorusElement) -> Result<PIIID7Data> {
    let TorusElement { l0, l1, l2 } = TorusElement::new(t.l0.clone(), t.l1.clone(), t.l2.clone())?;
    let i1 = l1.inv().expect("checked");
    let i2 = l2.inv().expect("checked");
    let c1 = data.c1.mul(&l1).mul(&i2);
    let c2 = data.c2.mul(&l2).mul(&i1);
    let dinv = m2(i1, Value::zero(), Value::zero(), i2);
    let link = dinv.mul(&data.link).scale(&l0);
    PIIID7Data::new(data.e.clone(), data.alpha.clone(), c1, c2, link)
}

/// `ℓ₁₃ℓ₂₃e + ℓ₁₃² + ℓ₂₃² + αℓ₁₃ + ℓ₂₃`.
pub fn cubic_residual(l13: &Value, l23: &Value, alpha: &Value, e: &Value) -> Value {
    l13.mul(l23)
        .mul(e)
        .add(&l13.mul(l13))
        .add(&l23.mul(l23))
        .add(&alpha.mul(l13))
        .add(l23)
}

/// Coordinates `(ℓ₁₃, ℓ₂₃)` of a datum on the cubic surface.
///
/// Their relation to the entries of `L` is not specified, so this always fails;
/// evaluate the surface directly with [`cubic_residual`].
pub fn cubic_coordinates(_data: &PIIID7Data) -> Result<(Value, Value)> {
    Err(Error::InvalidInput(
        "the map from link entries to (l13, l23) is not defined".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Scalar;

    fn q(n: i64, d: i64) -> Value {
        Value::from(Scalar::ratio(n, d))
    }

    fn gi(re: i64, im: i64) -> Value {
        Value::from(Scalar::new(Scalar::int(re).re, Scalar::int(im).re))
    }

    #[test]
    fn displayed_matrices() {
        assert_eq!(
            top0(&Value::zero()),
            m2(Value::zero(), Value::int(-1), Value::one(), Value::zero())
        );
        assert_eq!(topinf(&Value::one(), &Value::zero(), &Value::zero()).unwrap(), Mat::identity(2));
        let t = topinf(&q(3, 7), &gi(2, -1), &q(-5, 2)).unwrap();
        assert_eq!(t.det(), Value::one());
        assert_eq!(top0(&q(11, 3)).det(), Value::one());
        assert!(topinf(&Value::zero(), &Value::one(), &Value::one()).is_err());
    }

    #[test]
    fn link_solves_relation_exactly() {
        let s = solve_link(&q(2, 3), &gi(1, 2), &q(-1, 5)).unwrap();
        assert_eq!(s.kernel_dim, 2);
        assert_eq!(relation_residual(&s.data).unwrap(), 0.0);
        let l = s.data.normalized_link();
        assert!(l.det().dist(&Value::one()) < 1e-12);
        let tr = s.data.topinf().trace();
        assert_eq!(tr, s.data.e.neg());
    }

    #[test]
    fn scalar_top_inf_has_no_link() {
        assert!(matches!(
            solve_link(&Value::one(), &Value::zero(), &Value::zero()),
            Err(Error::NoSolution(_))
        ));
    }

    #[test]
    fn identity_link_for_inverse_pair() {
        let e = q(7, 4);
        let t0 = top0(&e);
        let tinf = t0.inverse().unwrap();
        assert_eq!(relation_residual_of(&t0, &tinf, &Mat::identity(2)).unwrap(), 0.0);
    }

    #[test]
    fn perturbed_link_is_detected() {
        let s = solve_link(&q(5, 2), &q(1, 3), &q(2, 1)).unwrap();
        let mut bad = s.data.clone();
        let v = bad.link.get(0, 0).add(&q(1, 10));
        bad.link.set(0, 0, v);
        assert!(relation_residual(&bad).unwrap() > 1e-3);
    }

    #[test]
    fn torus_orbit_invariants() {
        let s = solve_link(&q(-3, 2), &gi(2, 1), &q(3, 4)).unwrap();
        let t = TorusElement::new(q(2, 1), gi(0, 1), q(-1, 3)).unwrap();
        let moved = torus_act(&s.data, &t).unwrap();
        assert_eq!(moved.e, s.data.e);
        assert_eq!(moved.alpha, s.data.alpha);
        assert_eq!(moved.c1.mul(&moved.c2), s.data.c1.mul(&s.data.c2));
        assert_eq!(relation_residual(&moved).unwrap(), 0.0);
        let one = TorusElement::new(Value::one(), Value::one(), Value::one()).unwrap();
        assert_eq!(torus_act(&s.data, &one).unwrap(), s.data);
        let ratio = moved.link.det().mul(&s.data.link.det().inv().unwrap());
        let expected = t.l0.mul(&t.l0).mul(&t.l1.mul(&t.l2).inv().unwrap());
        assert_eq!(ratio, expected);
    }

    #[test]
    fn cubic_zeros() {
        let (a, e) = (q(3, 5), q(-7, 2));
        assert!(cubic_residual(&Value::zero(), &Value::zero(), &a, &e).is_zero());
        assert!(cubic_residual(&a.neg(), &Value::zero(), &a, &e).is_zero());
        assert!(cubic_residual(&Value::zero(), &Value::int(-1), &a, &e).is_zero());
        assert!(!cubic_residual(&Value::one(), &Value::one(), &a, &e).is_zero());
    }
}
