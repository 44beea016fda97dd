//! Symbolic monodromy identity `γ·St_{d_s}⋯St_{d_1}` and Stokes-entry solvers.

mod poly;

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use num_traits::{One, Zero};

pub use poly::{Monomial, Poly};

use crate::error::{Error, Result};
use crate::field::{Field, Ring, Scalar, Value};
use crate::formal::{
    formal_pdq, formal_ramified_family, singular_directions, stokes_template, ClosureSign,
    Direction, FormalData, StokesTemplate, Q,
};
use crate::linalg::{poly_from_roots, Mat};
use crate::montrace::{loop_monodromy, quiet_radius};
use crate::opcore::{build_pdq, to_system, MatrixSystem};

/// A matrix of polynomials in the template unknowns.
#[derive(Clone, Debug)]
pub struct SymbolicMatrix {
    pub matrix: Mat<Poly>,
    pub unknowns: Vec<String>,
}

impl SymbolicMatrix {
    pub fn eval(&self, values: &HashMap<String, Value>) -> Result<Mat<Value>> {
        let rows = self.matrix.rows();
        let mut out = Mat::zeros(rows, rows);
        for i in 0..rows {
            for j in 0..rows {
                out.set(i, j, self.matrix.get(i, j).eval(values)?);
            }
        }
        Ok(out)
    }
}

/// Templates for every singular direction in `[0, 1)`, in increasing order.
pub fn stokes_templates(f: &FormalData) -> Result<Vec<StokesTemplate>> {
    singular_directions(f, Q::zero(), Q::one())
        .into_iter()
        .map(|s| stokes_template(f, s.d))
        .collect()
}

fn template_matrix(t: &StokesTemplate) -> Mat<Poly> {
    let mut m = Mat::<Poly>::identity(t.dim);
    for e in &t.entries {
        m.set(e.row, e.col, Poly::term(Monomial::var(&e.name), e.coeff.clone()));
    }
    m
}

/// `γ·St_{d_s}⋯St_{d_1}` with `d₁ < … < d_s` in `[0, 1)`.
pub fn identity_product(f: &FormalData, templates: &[StokesTemplate]) -> Result<SymbolicMatrix> {
    for t in templates {
        let d = t.d.to_f64();
        if !(0.0..1.0).contains(&d) {
            return Err(Error::InvalidInput(format!("direction {} is outside [0,1)", t.d)));
        }
        if t.dim != f.dim() {
            return Err(Error::InvalidInput("template dimension mismatch".into()));
        }
    }
    for w in templates.windows(2) {
        if w[0].d.same_as(&w[1].d) {
            return Err(Error::InvalidInput(format!("duplicate direction {}", w[0].d)));
        }
        if w[0].d.to_f64() > w[1].d.to_f64() {
            return Err(Error::InvalidInput("directions must be increasing".into()));
        }
    }
    let mut m = f.gamma().map(|v| Poly::constant(v.clone()));
    for t in templates.iter().rev() {
        m = m.mul(&template_matrix(t));
    }
    let mut unknowns: Vec<String> = templates
        .iter()
        .flat_map(|t| t.entries.iter().map(|e| e.name.clone()))
        .collect();
    unknowns.sort();
    unknowns.dedup();
    Ok(SymbolicMatrix { matrix: m, unknowns })
}

/// Monic characteristic polynomial, highest degree first.
pub fn symbolic_char_poly(m: &SymbolicMatrix) -> Vec<Poly> {
    m.matrix.charpoly()
}

#[derive(Clone, Debug)]
pub struct SolvedDirection {
    pub d: Direction,
    pub template: StokesTemplate,
    pub matrix: Mat<Value>,
}

#[derive(Clone, Debug)]
pub struct StokesSolution {
    pub directions: Vec<SolvedDirection>,
    pub values: BTreeMap<String, Value>,
    /// Unknowns pinned to `1`.
    pub normalization: Vec<String>,
    /// Composite unknowns recovered by the linear solve, e.g. `x10*x02`.
    pub composites: Vec<(Monomial, Value)>,
    /// Max modulus of the charpoly mismatch after substitution.
    pub residual: f64,
    pub reducible: bool,
    pub notes: Vec<String>,
}

impl StokesSolution {
    pub fn value(&self, name: &str) -> Option<&Value> {
        self.values.get(name)
    }

    /// `γ·St_{d_s}⋯St_{d_1}` with the solved matrices.
    pub fn product(&self, f: &FormalData) -> Mat<Value> {
        let mut m = f.gamma().clone();
        for d in self.directions.iter().rev() {
            m = m.mul(&d.matrix);
        }
        m
    }
}

/// Distinguishes numerical noise from a genuine zero.
fn is_negligible(v: &Value, scale: f64) -> bool {
    match v {
        Value::Exact(c) => c.is_zero(),
        Value::Float(z) => z.norm() <= 1e-9 * scale.max(1.0),
    }
}

struct CompositeFit {
    composites: Vec<Monomial>,
    values: Vec<Value>,
}

/// Solve `eqs = 0` treating every nonconstant monomial as an independent unknown.
fn fit_composites(eqs: &[Poly]) -> Result<CompositeFit> {
    let mut composites: Vec<Monomial> = eqs
        .iter()
        .flat_map(|e| e.terms().map(|(m, _)| m.clone()))
        .filter(|m| !m.is_one())
        .collect();
    composites.sort();
    composites.dedup();
    let nc = composites.len();
    let row_of = |e: &Poly| -> Vec<Value> {
        composites
            .iter()
            .map(|m| {
                e.terms()
                    .find(|(k, _)| *k == m)
                    .map_or_else(Value::zero, |(_, c)| c.clone())
            })
            .collect()
    };
    // greedily keep independent rows, the rest are consistency checks
    let mut rows: Vec<Vec<Value>> = Vec::new();
    let mut rhs: Vec<Value> = Vec::new();
    let mut checks: Vec<&Poly> = Vec::new();
    for e in eqs {
        let r = row_of(e);
        let mut trial = rows.clone();
        trial.push(r.clone());
        if nc > 0 && Mat::from_rows(trial.clone()).rank() > rows.len() {
            rows = trial;
            rhs.push(e.constant_term().neg());
        } else {
            checks.push(e);
        }
    }
    if rows.len() < nc {
        return Err(Error::SingularSystem(format!(
            "{} independent equations for {} unknowns",
            rows.len(),
            nc
        )));
    }
    let values = if nc == 0 {
        Vec::new()
    } else {
        Mat::from_rows(rows)
            .solve(&rhs)
            .ok_or_else(|| Error::SingularSystem("coefficient matching is inconsistent".into()))?
            .x
    };
    let env: HashMap<Monomial, Value> = composites.iter().cloned().zip(values.iter().cloned()).collect();
    for e in checks {
        let mut acc = Value::zero();
        for (m, c) in e.terms() {
            let v = if m.is_one() { Value::one() } else { env[m].clone() };
            acc = acc.add(&c.mul(&v));
        }
        if acc.is_exact() && !acc.is_zero() {
            return Err(Error::NoSolution(format!(
                "coefficient equation {e} = 0 cannot be met"
            )));
        }
    }
    Ok(CompositeFit { composites, values })
}

/// Check that `f` is `V₀ ⊕ W`: an optional regular block with distinct `γ`-eigenvalues
/// followed by one-dimensional ramified blocks. Returns `dim V₀`.
fn mixed_shape(f: &FormalData) -> Result<usize> {
    let blocks = f.blocks();
    let (m, rest) = match blocks.first() {
        Some(b) if b.eigenvalue.is_zero() => (b.dim, &blocks[1..]),
        _ => (0, blocks),
    };
    if rest.is_empty() || rest.iter().any(|b| b.dim != 1 || b.eigenvalue.is_zero()) {
        return Err(Error::InvalidInput(
            "formal data must be a regular block plus a totally ramified part".into(),
        ));
    }
    let g = f.gamma();
    for i in 0..m {
        for j in 0..f.dim() {
            if i != j && (!g.get(i, j).is_zero() || !g.get(j, i).is_zero()) {
                return Err(Error::InvalidInput("gamma on the regular block must be diagonal".into()));
            }
        }
        for j in 0..i {
            if g.get(i, i).dist(g.get(j, j)) < 1e-12 {
                return Err(Error::InvalidInput(
                    "gamma eigenvalues on the regular block must be distinct".into(),
                ));
            }
        }
    }
    Ok(m)
}

fn solve_generic(
    f: &FormalData,
    target: &[Value],
    normalize: &[String],
    require_linear: bool,
) -> Result<StokesSolution> {
    let n = f.dim();
    if target.len() != n + 1 {
        return Err(Error::InvalidInput(format!(
            "target characteristic polynomial needs {} coefficients, got {}",
            n + 1,
            target.len()
        )));
    }
    let templates = stokes_templates(f)?;
    let product = identity_product(f, &templates)?;
    for name in normalize {
        if !product.unknowns.contains(name) {
            return Err(Error::UnknownEntry(name.clone()));
        }
    }
    let cp = symbolic_char_poly(&product);
    let eqs: Vec<Poly> = cp
        .iter()
        .zip(target)
        .skip(1)
        .map(|(p, t)| p.sub(&Poly::constant(t.clone())))
        .collect();
    let fit = fit_composites(&eqs)?;
    if require_linear {
        if let Some(m) = fit.composites.iter().find(|m| m.degree() > 1) {
            return Err(Error::SingularSystem(format!(
                "coefficient matching is not linear: composite {m}"
            )));
        }
    }
    let scale = target.iter().map(Field::magnitude).fold(1.0, f64::max);

    let mut values: HashMap<String, Value> =
        normalize.iter().map(|n| (n.clone(), Value::one())).collect();
    let mut notes = Vec::new();
    let mut conflicts = Vec::new();
    let mut reducible = false;
    for (m, v) in fit.composites.iter().zip(&fit.values) {
        if m.degree() > 1 && is_negligible(v, scale) {
            reducible = true;
            notes.push(format!("{m} = 0: the equation is reducible, Stokes data are not unique"));
        }
    }
    let mut pending: Vec<(Monomial, Value)> = fit
        .composites
        .iter()
        .cloned()
        .zip(fit.values.iter().cloned())
        .collect();
    loop {
        let mut progress = false;
        pending.retain(|(m, v)| {
            let free: Vec<(&str, u32)> = m.vars().filter(|(x, _)| !values.contains_key(*x)).collect();
            match free.as_slice() {
                [] => {
                    let got = m.eval(&values).expect("all bound");
                    if got.dist(v) > 1e-9 * scale {
                        if m.vars().any(|(x, _)| normalize.iter().any(|n| n == x)) {
                            conflicts.push(format!("{m} = {v}"));
                        } else {
                            notes.push(format!("inconsistent composite {m} = {v}"));
                        }
                    }
                    false
                }
                [(x, 1)] => {
                    let known = m
                        .vars()
                        .filter(|(y, _)| y != x)
                        .fold(Monomial::one(), |acc, (y, e)| {
                            (0..e).fold(acc, |a, _| a.mul(&Monomial::var(y)))
                        })
                        .eval(&values)
                        .expect("all bound");
                    if is_negligible(&known, scale) {
                        return true;
                    }
                    values.insert(x.to_string(), v.div(&known).expect("nonzero"));
                    progress = true;
                    false
                }
                _ => true,
            }
        });
        if !progress {
            break;
        }
    }
    if !conflicts.is_empty() {
        return Err(Error::InvalidInput(format!(
            "inadmissible normalization: the target fixes {}",
            conflicts.join(", ")
        )));
    }
    for (m, v) in &pending {
        notes.push(format!("{m} = {v} does not determine its factors"));
    }
    for name in &product.unknowns {
        if !values.contains_key(name) {
            notes.push(format!("{name} is free; set to 0"));
            values.insert(name.clone(), Value::zero());
        }
    }

    let directions: Vec<SolvedDirection> = templates
        .into_iter()
        .map(|t| {
            let matrix = t.instantiate(&values)?;
            Ok(SolvedDirection {
                d: t.d,
                template: t,
                matrix,
            })
        })
        .collect::<Result<_>>()?;
    let mut sol = StokesSolution {
        directions,
        values: values.into_iter().collect(),
        normalization: normalize.to_vec(),
        composites: fit.composites.into_iter().zip(fit.values).collect(),
        residual: 0.0,
        reducible,
        notes,
    };
    let got = sol.product(f).charpoly();
    sol.residual = got
        .iter()
        .zip(target)
        .map(|(a, b)| a.dist(b))
        .fold(0.0, f64::max);
    Ok(sol)
}

/// `∏(λ − e^{2πi a_j})`, exact for real rational `a_j`.
pub fn ramified_target(a: &[Scalar]) -> Vec<Value> {
    let roots: Vec<Value> = a.iter().map(Value::exp_2pi_i).collect();
    poly_from_roots(&roots)
}

/// Stokes data of the totally ramified family from its monodromy eigenvalues.
pub fn solve_ramified(n: usize, a: &[Scalar]) -> Result<StokesSolution> {
    let f = formal_ramified_family(n, a)?;
    solve_generic(&f, &ramified_target(a), &[], true)
}

/// Stokes data of a `V₀ ⊕ W` shape from a target characteristic polynomial.
pub fn solve_mixed(f: &FormalData, target: &[Value], normalize: &[String]) -> Result<StokesSolution> {
    let m = mixed_shape(f)?;
    if normalize.len() != m {
        return Err(Error::InvalidInput(format!(
            "normalization must list exactly {m} unknowns, got {}",
            normalize.len()
        )));
    }
    solve_generic(f, target, normalize, false)
}

/// One unknown per regular-block row: the first template entry landing in that row.
pub fn default_normalization(f: &FormalData) -> Result<Vec<String>> {
    let m = mixed_shape(f)?;
    let templates = stokes_templates(f)?;
    (0..m)
        .map(|row| {
            templates
                .iter()
                .flat_map(|t| t.entries.iter())
                .find(|e| e.row == row)
                .map(|e| e.name.clone())
                .ok_or_else(|| Error::SingularSystem(format!("no Stokes entry in row {row}")))
        })
        .collect()
}

/// Characteristic polynomial of the numerical loop monodromy, as float values.
pub fn monodromy_target(sys: &MatrixSystem, tol: f64) -> Result<Vec<Value>> {
    let r = loop_monodromy(sys, quiet_radius(sys), tol)?;
    Ok(r.matrix.charpoly().into_iter().map(Value::Float).collect())
}

#[derive(Clone, Debug)]
pub struct PdqSolve {
    pub formal: FormalData,
    pub system: MatrixSystem,
    pub target: Vec<Value>,
    pub solution: StokesSolution,
}

/// `ₚD_q` end to end: build the operator, take the montrace target, solve.
pub fn solve_pdq(
    p: usize,
    q: usize,
    mu: &[Scalar],
    nu: &[Scalar],
    sign: ClosureSign,
    normalize: Option<&[String]>,
    tol: f64,
) -> Result<PdqSolve> {
    let formal = formal_pdq(p, q, mu, nu, sign)?;
    let system = to_system(&build_pdq(p, q, mu, nu)?)?;
    let target = monodromy_target(&system, tol)?;
    let normalize = match normalize {
        Some(n) => n.to_vec(),
        None => default_normalization(&formal)?,
    };
    let solution = solve_mixed(&formal, &target, &normalize)?;
    Ok(PdqSolve {
        formal,
        system,
        target,
        solution,
    })
}

#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub formal_charpoly: Vec<Complex64>,
    pub numeric_charpoly: Vec<Complex64>,
    pub deviation: f64,
    pub error_estimate: f64,
    pub radius: f64,
}

/// Compare `charpoly(γ·∏St)` with the characteristic polynomial of the numerical monodromy.
pub fn cross_check(
    sys: &MatrixSystem,
    f: &FormalData,
    sol: &StokesSolution,
    tol: f64,
) -> Result<CrossCheck> {
    if sys.dim() != f.dim() {
        return Err(Error::InvalidInput("system and formal data differ in dimension".into()));
    }
    let radius = quiet_radius(sys);
    let mono = loop_monodromy(sys, radius, tol)?;
    let numeric_charpoly = mono.matrix.charpoly();
    let formal_charpoly: Vec<Complex64> =
        sol.product(f).charpoly().iter().map(Value::to_complex).collect();
    let deviation = numeric_charpoly
        .iter()
        .zip(&formal_charpoly)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(CrossCheck {
        formal_charpoly,
        numeric_charpoly,
        deviation,
        error_estimate: mono.error_estimate,
        radius,
    })
}
