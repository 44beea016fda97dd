use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;

use super::{FormalData, Q};
use crate::error::{invalid, Error, Result};
use crate::field::{rationalize, Cyclo, Field, Ring, Value};
use crate::linalg::Mat;

const MERGE_TOL: f64 = 1e-12;

/// A direction in turns, `z = r·e^{2πid}`.
#[derive(Clone, Copy, Debug)]
pub enum Direction {
    Exact(Q),
    Approx(f64),
}

impl Direction {
    pub fn to_f64(&self) -> f64 {
        match self {
            Direction::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Direction::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<Q> {
        match self {
            Direction::Exact(q) => Some(*q),
            Direction::Approx(_) => None,
        }
    }

    pub fn same_as(&self, other: &Direction) -> bool {
        match (self, other) {
            (Direction::Exact(a), Direction::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() < MERGE_TOL,
        }
    }

    pub fn shift(&self, k: i64) -> Direction {
        match self {
            Direction::Exact(q) => Direction::Exact(q + Q::from_integer(k)),
            Direction::Approx(x) => Direction::Approx(x + k as f64),
        }
    }
}

impl PartialEq for Direction {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Exact(q) => write!(f, "{q}"),
            Direction::Approx(x) => write!(f, "{x}"),
        }
    }
}

/// Ordered pair of blocks `(q, q̃)`: a Stokes entry maps `V_q` (source) into `V_q̃` (target).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActivePair {
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct SingularDirection {
    pub d: Direction,
    pub pairs: Vec<ActivePair>,
}

/// Base direction and period data for the pair `(source, target)`.
///
/// With `q − q̃ = c·z^s + …`, the difference is negative real on the ray `d` when
/// `arg c + 2πsd ≡ π`. Returns `(d₀, s)`; all singular directions are `d₀ + k/s`.
pub fn pair_direction(f: &FormalData, source: usize, target: usize) -> Option<(Direction, Q)> {
    let blocks = f.blocks();
    let diff = blocks[source].eigenvalue.sub(&blocks[target].eigenvalue);
    let (s, c) = diff.leading()?;
    let theta = arg_turns(c);
    let d0 = match theta {
        Direction::Exact(t) => Direction::Exact((Q::new(1, 2) - t) / s),
        Direction::Approx(t) => Direction::Approx((0.5 - t) / s.to_f64().unwrap()),
    };
    Some((d0, s))
}

/// `arg(c)/2π`, exact when `c` is a positive multiple of a root of unity.
fn arg_turns(c: &Cyclo) -> Direction {
    let z = c.to_complex();
    let t = z.arg() / std::f64::consts::TAU;
    let max_den = 8 * c.order().max(1) as i64;
    if let Some(r) = rationalize(t, max_den) {
        let (num, den) = (r.numer().to_i64(), r.denom().to_i64());
        if let (Some(num), Some(den)) = (num, den) {
            let x = c.mul(&Cyclo::root_of_unity(-num, den as u32));
            if x.is_real() && x.to_complex().re > 0.0 {
                return Direction::Exact(Q::new(num, den));
            }
        }
    }
    Direction::Approx(t)
}

/// All singular directions in the half-open window `[lo, hi)`, merged and sorted.
pub fn singular_directions(f: &FormalData, lo: Q, hi: Q) -> Vec<SingularDirection> {
    let mut out: Vec<SingularDirection> = Vec::new();
    let nb = f.blocks().len();
    for source in 0..nb {
        for target in 0..nb {
            if source == target {
                continue;
            }
            let Some((d0, s)) = pair_direction(f, source, target) else {
                continue;
            };
            let pair = ActivePair { source, target };
            for d in directions_in_window(d0, s, lo, hi) {
                match out.iter_mut().find(|x| x.d.same_as(&d)) {
                    Some(x) => x.pairs.push(pair),
                    None => out.push(SingularDirection { d, pairs: vec![pair] }),
                }
            }
        }
    }
    out.sort_by(|a, b| a.d.to_f64().total_cmp(&b.d.to_f64()));
    out
}

fn directions_in_window(d0: Direction, s: Q, lo: Q, hi: Q) -> Vec<Direction> {
    let period = Q::from_integer(1) / s;
    match d0 {
        Direction::Exact(d0) => {
            // smallest k with d0 + k·period ≥ lo
            let k0 = ((lo - d0) / period).ceil().to_integer();
            let mut v = Vec::new();
            let mut k = k0;
            loop {
                let d = d0 + period * Q::from_integer(k);
                if d >= hi {
                    break;
                }
                v.push(Direction::Exact(d));
                k += 1;
            }
            v
        }
        Direction::Approx(d0) => {
            let p = period.to_f64().unwrap();
            let (lo, hi) = (lo.to_f64().unwrap(), hi.to_f64().unwrap());
            let mut k = ((lo - d0) / p).ceil() as i64;
            let mut v = Vec::new();
            loop {
                let d = d0 + p * k as f64;
                if d >= hi {
                    break;
                }
                if d >= lo - MERGE_TOL {
                    v.push(Direction::Approx(d));
                }
                k += 1;
            }
            v
        }
    }
}

/// True when `d ∈ d₀ + (1/s)ℤ`.
fn is_singular_for(d: &Direction, d0: &Direction, s: Q) -> bool {
    match (d, d0) {
        (Direction::Exact(d), Direction::Exact(d0)) => ((d - d0) * s).is_integer(),
        _ => {
            let k = (d.to_f64() - d0.to_f64()) * s.to_f64().unwrap();
            (k - k.round()).abs() < MERGE_TOL
        }
    }
}

/// One unknown entry of a template: `coeff·name` at `(row, col)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TemplateEntry {
    pub row: usize,
    pub col: usize,
    pub name: String,
    pub coeff: Value,
}

/// Identity plus one unknown per active coordinate pair.
#[derive(Clone, Debug)]
pub struct StokesTemplate {
    pub d: Direction,
    pub pairs: Vec<ActivePair>,
    pub entries: Vec<TemplateEntry>,
    pub dim: usize,
}

impl StokesTemplate {
    pub fn unknowns(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    /// Substitute values for the unknowns; unbound names are an error.
    pub fn instantiate(&self, values: &HashMap<String, Value>) -> Result<Mat<Value>> {
        let mut m = Mat::identity(self.dim);
        for e in &self.entries {
            let v = values
                .get(&e.name)
                .ok_or_else(|| Error::UnboundParameter(e.name.clone()))?;
            m.set(e.row, e.col, e.coeff.mul(v));
        }
        Ok(m)
    }
}

/// Template of `St_d`: the unknown for the pair `q → q̃` sits in the `q̃` rows and `q` columns.
pub fn stokes_template(f: &FormalData, d: Direction) -> Result<StokesTemplate> {
    let nb = f.blocks().len();
    let mut pairs = Vec::new();
    for source in 0..nb {
        for target in 0..nb {
            if source == target {
                continue;
            }
            if let Some((d0, s)) = pair_direction(f, source, target) {
                if is_singular_for(&d, &d0, s) {
                    pairs.push(ActivePair { source, target });
                }
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::NotSingular(d.to_string()));
    }
    let mut entries = Vec::new();
    for p in &pairs {
        for row in f.block_range(p.target) {
            for col in f.block_range(p.source) {
                entries.push(TemplateEntry {
                    row,
                    col,
                    name: f.unknown_name(row, col),
                    coeff: Value::one(),
                });
            }
        }
    }
    entries.sort_by_key(|e| (e.row, e.col));
    Ok(StokesTemplate {
        d,
        pairs,
        entries,
        dim: f.dim(),
    })
}

/// `γ^{−k}·m·γ^k`, which represents `St_{d+k}` when `m` represents `St_d`.
pub fn gamma_shift_matrix(f: &FormalData, m: &Mat<Value>, k: i64) -> Result<Mat<Value>> {
    let g = f.gamma();
    let gi = g
        .inverse()
        .ok_or_else(|| Error::InvalidInput("gamma is singular".into()))?;
    let (left, right) = if k >= 0 { (&gi, g) } else { (g, &gi) };
    let mut out = m.clone();
    for _ in 0..k.unsigned_abs() {
        out = left.mul(&out).mul(right);
    }
    Ok(out)
}

/// Transport a template by `γ`: positions move with the block permutation and the
/// coefficients pick up the ratio of the `γ` entries. Requires a monomial `γ`.
pub fn gamma_shift_template(f: &FormalData, t: &StokesTemplate, k: i64) -> Result<StokesTemplate> {
    let n = f.dim();
    let g = f.gamma();
    // γ e_c = w_c e_{π(c)}
    let mut pi = vec![0usize; n];
    let mut w = vec![Value::zero(); n];
    for c in 0..n {
        let nz: Vec<usize> = (0..n).filter(|&r| !g.get(r, c).is_zero()).collect();
        if nz.len() != 1 {
            return invalid("template transport needs a monomial formal monodromy");
        }
        pi[c] = nz[0];
        w[c] = g.get(nz[0], c).clone();
    }
    let mut pinv = vec![0usize; n];
    for c in 0..n {
        pinv[pi[c]] = c;
    }
    let block_perm = f.perm();
    let mut block_inv = vec![0usize; block_perm.len()];
    for (i, &j) in block_perm.iter().enumerate() {
        block_inv[j] = i;
    }
    let mut entries = t.entries.clone();
    let mut pairs = t.pairs.clone();
    for _ in 0..k.unsigned_abs() {
        for e in &mut entries {
            if k > 0 {
                // γ⁻¹ E_{rc} γ = (w_{π⁻¹c} / w_{π⁻¹r}) E_{π⁻¹r, π⁻¹c}
                let (r, c) = (pinv[e.row], pinv[e.col]);
                let ratio = w[c].div(&w[r]).expect("nonzero gamma entries");
                e.coeff = e.coeff.mul(&ratio);
                e.row = r;
                e.col = c;
            } else {
                // γ E_{rc} γ⁻¹ = (w_r / w_c) E_{πr, πc}
                let ratio = w[e.row].div(&w[e.col]).expect("nonzero gamma entries");
                e.coeff = e.coeff.mul(&ratio);
                e.row = pi[e.row];
                e.col = pi[e.col];
            }
        }
        for p in &mut pairs {
            if k > 0 {
                p.source = block_inv[p.source];
                p.target = block_inv[p.target];
            } else {
                p.source = block_perm[p.source];
                p.target = block_perm[p.target];
            }
        }
    }
    entries.sort_by_key(|e| (e.row, e.col));
    Ok(StokesTemplate {
        d: t.d.shift(k),
        pairs,
        entries,
        dim: t.dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Scalar;
    use crate::formal::{formal_pdq, formal_ramified, formal_unramified, ClosureSign};

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    fn exact(ds: &[SingularDirection]) -> Vec<Q> {
        ds.iter().map(|d| d.d.exact().expect("exact direction")).collect()
    }

    fn one_d_three() -> FormalData {
        formal_pdq(
            1,
            3,
            &[Scalar::ratio(1, 5)],
            &[Scalar::ratio(1, 3), Scalar::ratio(1, 2), Scalar::ratio(3, 7)],
            ClosureSign::Plus,
        )
        .unwrap()
    }

    #[test]
    fn ramified_three_has_two_directions() {
        let f = formal_ramified(3, &Value::one()).unwrap();
        let ds = singular_directions(&f, q(0, 1), q(1, 1));
        assert_eq!(exact(&ds), vec![q(1, 4), q(3, 4)]);
        let t = stokes_template(&f, ds[0].d).unwrap();
        assert_eq!(t.unknowns(), vec!["x01"]);
        let t = stokes_template(&f, ds[1].d).unwrap();
        assert_eq!(t.unknowns(), vec!["x21"]);
    }

    #[test]
    fn one_d_three_has_one_direction_with_three_unknowns() {
        let f = one_d_three();
        let ds = singular_directions(&f, q(0, 1), q(1, 1));
        assert_eq!(exact(&ds), vec![q(0, 1)]);
        let t = stokes_template(&f, ds[0].d).unwrap();
        let pos: Vec<(usize, usize, &str)> =
            t.entries.iter().map(|e| (e.row, e.col, e.name.as_str())).collect();
        assert_eq!(pos, vec![(0, 1, "x10"), (2, 0, "x02"), (2, 1, "x12")]);
    }

    #[test]
    fn unramified_directions() {
        let f = formal_unramified(&[Scalar::zero(), Scalar::one()]).unwrap();
        let ds = singular_directions(&f, q(0, 1), q(1, 1));
        assert_eq!(exact(&ds), vec![q(0, 1), q(1, 2)]);
    }

    #[test]
    fn non_singular_direction_is_rejected() {
        let f = formal_ramified(3, &Value::one()).unwrap();
        let e = stokes_template(&f, Direction::Exact(q(1, 3))).unwrap_err();
        assert!(matches!(e, Error::NotSingular(_)));
    }

    #[test]
    fn shifting_a_template_matches_the_next_period() {
        let f = formal_ramified(3, &Value::one()).unwrap();
        let t = stokes_template(&f, Direction::Exact(q(1, 4))).unwrap();
        let s1 = gamma_shift_template(&f, &t, 1).unwrap();
        let direct = stokes_template(&f, Direction::Exact(q(5, 4))).unwrap();
        assert_eq!(s1.d, direct.d);
        let pos = |t: &StokesTemplate| t.entries.iter().map(|e| (e.row, e.col)).collect::<Vec<_>>();
        assert_eq!(pos(&s1), pos(&direct));
        let s2 = gamma_shift_template(&f, &s1, 1).unwrap();
        let s2b = gamma_shift_template(&f, &t, 2).unwrap();
        assert_eq!(s2.entries, s2b.entries);
        let back = gamma_shift_template(&f, &s1, -1).unwrap();
        assert_eq!(back.entries, t.entries);
        let zero = gamma_shift_template(&f, &t, 0).unwrap();
        assert_eq!(zero.entries, t.entries);
    }

    #[test]
    fn matrix_shift_agrees_with_template_shift() {
        let f = one_d_three();
        let t = stokes_template(&f, Direction::Exact(q(0, 1))).unwrap();
        let mut vals = HashMap::new();
        for (i, name) in t.unknowns().iter().enumerate() {
            vals.insert(name.to_string(), Value::int(i as i64 + 2));
        }
        let m = t.instantiate(&vals).unwrap();
        let shifted = gamma_shift_matrix(&f, &m, 1).unwrap();
        let ts = gamma_shift_template(&f, &t, 1).unwrap();
        assert_eq!(ts.instantiate(&vals).unwrap(), shifted);
    }
}
