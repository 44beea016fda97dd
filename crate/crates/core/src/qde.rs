//! Quantum differential equations: catalog, classification and Gram-matrix checks.

use std::collections::HashMap;

use crate::error::{invalid, Error, Result};
use crate::field::{binomial, Scalar, Value};
use crate::formal::{formal_mixed, formal_pdq, pdq_lambda, ClosureSign, FormalData, Q};
use crate::linalg::Mat;
use crate::newton::{newton_polygon, Slope};
use crate::opcore::{parse_operator, to_system, DiffOperator};
use crate::stokes::{default_normalization, monodromy_target, solve_mixed, solve_ramified, StokesSolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QdeKind {
    Projective,
    Hypersurface,
    Weighted,
    DelPezzo,
    V5,
    V22,
}

#[derive(Clone, Debug)]
pub struct QdeEntry {
    pub name: &'static str,
    pub kind: QdeKind,
    pub params: &'static [&'static str],
    pub template: &'static str,
    pub provenance: &'static str,
}

/// Parameter values for a catalog entry; unused fields are ignored.
#[derive(Clone, Debug, Default)]
pub struct QdeParams {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub weights: Vec<usize>,
    pub a: Option<Scalar>,
    pub b: Option<Scalar>,
    pub c: Option<Scalar>,
}

pub fn qde_catalog() -> Vec<QdeEntry> {
    vec![
        QdeEntry {
            name: "P^{n-1}",
            kind: QdeKind::Projective,
            params: &["n"],
            template: "delta^n - z",
            provenance: "projective space P^{n-1}",
        },
        QdeEntry {
            name: "hypersurface",
            kind: QdeKind::Hypersurface,
            params: &["n", "m"],
            template: "delta^(n+m-1) - m^m*z*(delta+(m-1)/m)...(delta+1/m)",
            provenance: "nonsingular hypersurface of degree m in P^{n+m-1}",
        },
        QdeEntry {
            name: "weighted",
            kind: QdeKind::Weighted,
            params: &["weights"],
            template: "prod_j delta*(delta-1/w_j)...(delta-(w_j-1)/w_j) - z",
            provenance: "weighted projective space P(w_0, ..., w_n)",
        },
        QdeEntry {
            name: "delPezzo",
            kind: QdeKind::DelPezzo,
            params: &["a", "b", "c"],
            template: "delta^3 - a*z*delta^2 - ((b-a)*z^2 + b*z)*delta + 2*a*z^2 - c*z^3",
            provenance: "del Pezzo surfaces, a, b, c integers",
        },
        QdeEntry {
            name: "V5",
            kind: QdeKind::V5,
            params: &[],
            template: "delta^4 - 11*z*delta^2 - 11*z*delta - 3*z - z^2",
            provenance: "Fano threefold V5",
        },
        QdeEntry {
            name: "V22",
            kind: QdeKind::V22,
            params: &[],
            template: "delta^4 - (94*z^2 + 6*z)*delta^2 - (484*z^3 + 188*z^2 + 2*z)*delta - (695*z^4 + 632*z^3 + 98*z^2)",
            provenance: "Fano threefold V22",
        },
    ]
}

pub fn lookup(name: &str) -> Result<QdeEntry> {
    let key = name.to_ascii_lowercase();
    let alias = match key.as_str() {
        "p" | "projective" | "p^{n-1}" | "pn" => "P^{n-1}",
        "del pezzo" | "delpezzo" | "del_pezzo" => "delPezzo",
        "v5" => "V5",
        "v22" => "V22",
        "hypersurface" => "hypersurface",
        "weighted" | "weighted projective" => "weighted",
        _ => "",
    };
    qde_catalog()
        .into_iter()
        .find(|e| e.name == alias)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

fn need<T: Clone>(v: &Option<T>, name: &str) -> Result<T> {
    v.clone()
        .ok_or_else(|| Error::InvalidInput(format!("missing parameter {name}")))
}

fn product_text(factors: &[String]) -> String {
    factors.iter().map(|f| format!("({f})")).collect::<Vec<_>>().join("*")
}

impl QdeEntry {
    /// Operator text with the parameters substituted.
    pub fn operator_text(&self, p: &QdeParams) -> Result<String> {
        Ok(match self.kind {
            QdeKind::Projective => {
                let n = need(&p.n, "n")?;
                if n < 1 {
                    return invalid("n must be at least 1");
                }
                format!("delta^{n} - z")
            }
            QdeKind::Hypersurface => {
                let (n, m) = (need(&p.n, "n")?, need(&p.m, "m")?);
                if n < 1 || m < 1 {
                    return invalid("n and m must be at least 1");
                }
                let factors: Vec<String> =
                    (1..m).rev().map(|k| format!("delta + {k}/{m}")).collect();
                let tail = if factors.is_empty() {
                    String::new()
                } else {
                    format!("*{}", product_text(&factors))
                };
                format!("delta^{} - {}*z{tail}", n + m - 1, (m as u64).pow(m as u32))
            }
            QdeKind::Weighted => {
                if p.weights.is_empty() || p.weights.contains(&0) {
                    return invalid("weights must be a nonempty list of positive integers");
                }
                let factors: Vec<String> = p
                    .weights
                    .iter()
                    .flat_map(|&w| {
                        (0..w).map(move |k| {
                            if k == 0 {
                                "delta".to_string()
                            } else {
                                format!("delta - {k}/{w}")
                            }
                        })
                    })
                    .collect();
                format!("{} - z", product_text(&factors))
            }
            QdeKind::DelPezzo | QdeKind::V5 | QdeKind::V22 => self.template.to_string(),
        })
    }

    pub fn operator(&self, p: &QdeParams) -> Result<DiffOperator> {
        let mut bind = HashMap::new();
        if self.kind == QdeKind::DelPezzo {
            bind.insert("a".to_string(), need(&p.a, "a")?);
            bind.insert("b".to_string(), need(&p.b, "b")?);
            bind.insert("c".to_string(), need(&p.c, "c")?);
        }
        parse_operator(&self.operator_text(p)?, &bind)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Applicability {
    PureRamified,
    MixedProp2,
    CatalogOnly,
}

impl Applicability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Applicability::PureRamified => "pureRamified",
            Applicability::MixedProp2 => "mixedProp2",
            Applicability::CatalogOnly => "catalogOnly",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub name: String,
    pub operator: DiffOperator,
    pub slopes: Vec<Slope>,
    pub katz: Q,
    pub applicability: Applicability,
    pub warnings: Vec<String>,
}

pub fn classify(entry: &QdeEntry, p: &QdeParams) -> Result<Classification> {
    let op = entry.operator(p)?;
    let poly = newton_polygon(&op)?;
    let mut warnings = Vec::new();
    let applicability = match entry.kind {
        QdeKind::Projective | QdeKind::Weighted => Applicability::PureRamified,
        QdeKind::Hypersurface => {
            let (n, m) = (need(&p.n, "n")?, need(&p.m, "m")?);
            if m > n {
                warnings.push(format!("m = {m} > n = {n} is outside the verified range m <= n"));
            }
            if m == 1 {
                Applicability::PureRamified
            } else {
                Applicability::MixedProp2
            }
        }
        QdeKind::DelPezzo | QdeKind::V5 | QdeKind::V22 => Applicability::CatalogOnly,
    };
    Ok(Classification {
        name: entry.name.to_string(),
        katz: poly.katz(),
        slopes: poly.slopes,
        operator: op,
        applicability,
        warnings,
    })
}

/// Formal data for the solvable shapes; `None` for catalog-only entries.
///
/// The hypersurface operator is `ₚD_q` with `p = m−1`, `q = n+m−1`, `μ_k = k/m`,
/// `ν = 1` after `z ↦ (−1)^n m^m z`; weighted spaces are `₀D_N` with `ν = 1 − k/w_j`.
pub fn formal_data(entry: &QdeEntry, p: &QdeParams) -> Result<Option<FormalData>> {
    match entry.kind {
        QdeKind::Projective => {
            let n = need(&p.n, "n")?;
            crate::formal::formal_ramified(n, &crate::formal::ramified_closure(n)).map(Some)
        }
        QdeKind::Hypersurface => {
            let (n, m) = (need(&p.n, "n")?, need(&p.m, "m")?);
            if m == 1 {
                return formal_data(&lookup("P^{n-1}")?, &QdeParams { n: Some(n), ..Default::default() });
            }
            let mu: Vec<Scalar> = (1..m as i64).map(|k| Scalar::ratio(k, m as i64)).collect();
            let nu = vec![Scalar::one(); n + m - 1];
            formal_pdq(m - 1, n + m - 1, &mu, &nu, ClosureSign::Plus).map(Some)
        }
        QdeKind::Weighted => {
            if p.weights.is_empty() || p.weights.contains(&0) {
                return invalid("weights must be a nonempty list of positive integers");
            }
            let nu: Vec<Scalar> = p
                .weights
                .iter()
                .flat_map(|&w| (0..w as i64).map(move |k| Scalar::one() - Scalar::ratio(k, w as i64)))
                .collect();
            let big_n = nu.len();
            let lambda = pdq_lambda(0, big_n, &[], &nu);
            formal_mixed(&[], big_n, &Value::exp_2pi_i(&lambda)).map(Some)
        }
        _ => Ok(None),
    }
}

/// End-to-end Stokes solve for a catalog entry with a montrace target.
///
/// Mixed shapes only run when `allow_mixed` is set, since the distinctness hypothesis
/// has to hold for the particular instance.
pub fn solve_entry(entry: &QdeEntry, p: &QdeParams, allow_mixed: bool, tol: f64) -> Result<StokesSolution> {
    let class = classify(entry, p)?;
    let f = formal_data(entry, p)?
        .ok_or_else(|| Error::InvalidInput(format!("{} is catalog-only", entry.name)))?;
    if class.applicability == Applicability::MixedProp2 && !allow_mixed {
        return invalid("mixed shapes need the explicit mixed flag");
    }
    let sys = to_system(&class.operator)?;
    let target = monodromy_target(&sys, tol)?;
    let normalize = default_normalization(&f)?;
    solve_mixed(&f, &target, &normalize)
}

/// `χ(O(i), O(j))` on `P^{n−1}` for the collection `O, …, O(n−1)`.
pub fn gram_projective(n: usize) -> Mat<i64> {
    Mat::from_fn(n, n, |i, j| {
        if j >= i {
            binomial((n - 1 + j - i) as u64, (n - 1) as u64)
        } else {
            0
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Mismatch,
    NotDecided,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
            Verdict::NotDecided => "not-decided",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DubrovinReport {
    pub n: usize,
    pub solution: StokesSolution,
    /// Every solved entry is `±binom(n, k)` for some `0 < k < n`.
    pub entries_are_binomial: bool,
    /// `∏_{d∈[0,1/2)} St_d`, later directions on the left.
    pub connection: Mat<Value>,
    pub gram: Mat<i64>,
    /// Sorted absolute values of the strictly upper Gram entries.
    pub gram_upper_abs: Vec<i64>,
    /// Sorted absolute values of the nonzero off-diagonal entries of the connection product.
    pub connection_offdiag_abs: Vec<f64>,
    pub multisets_agree: bool,
    pub verdict: Verdict,
}

fn as_integer(v: &Value) -> Option<i64> {
    let z = v.to_complex();
    let r = z.re.round();
    ((z.re - r).abs() < 1e-9 && z.im.abs() < 1e-9).then_some(r as i64)
}

pub fn dubrovin_check(n: usize) -> Result<DubrovinReport> {
    if n < 2 {
        return invalid("n must be at least 2");
    }
    let solution = solve_ramified(n, &vec![Scalar::zero(); n])?;
    let binoms: Vec<i64> = (1..n as u64).map(|k| binomial(n as u64, k)).collect();
    let entries_are_binomial = solution.values.values().all(|v| {
        as_integer(v).is_some_and(|x| binoms.contains(&x.abs()))
    });
    let mut connection = Mat::<Value>::identity(n);
    for d in solution.directions.iter().filter(|d| d.d.to_f64() < 0.5) {
        connection = d.matrix.mul(&connection);
    }
    let gram = gram_projective(n);
    let mut gram_upper_abs: Vec<i64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| gram.get(i, j).abs())
        .collect();
    gram_upper_abs.sort();
    let mut connection_offdiag_abs: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| connection.get(i, j).to_complex().norm())
        .filter(|x| *x > 1e-12)
        .collect();
    connection_offdiag_abs.sort_by(f64::total_cmp);
    let multisets_agree = gram_upper_abs.len() == connection_offdiag_abs.len()
        && gram_upper_abs
            .iter()
            .zip(&connection_offdiag_abs)
            .all(|(g, c)| (*g as f64 - c).abs() < 1e-9);
    let verdict = if entries_are_binomial {
        Verdict::NotDecided
    } else {
        Verdict::Mismatch
    };
    Ok(DubrovinReport {
        n,
        solution,
        entries_are_binomial,
        connection,
        gram,
        gram_upper_abs,
        connection_offdiag_abs,
        multisets_agree,
        verdict,
    })
}
