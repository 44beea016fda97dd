//! Formal classification data `(V, {V_q}, γ)`, singular directions and Stokes templates.

mod directions;
mod eigenvalue;

pub use directions::{
    gamma_shift_matrix, gamma_shift_template, pair_direction, singular_directions,
    stokes_template, ActivePair, Direction, SingularDirection, StokesTemplate, TemplateEntry,
};
pub use eigenvalue::Eigenvalue;

use num_rational::Ratio;

use crate::error::{invalid, Result};
use crate::field::{Cyclo, Ring, Scalar, Value};
use crate::linalg::Mat;
use crate::opcore::{check_distinct, check_pdq, check_ramified};

pub type Q = Ratio<i64>;

#[derive(Clone, Debug)]
pub struct Block {
    pub eigenvalue: Eigenvalue,
    pub dim: usize,
    pub labels: Vec<String>,
}

/// How unknown entries are named from their (row, column) coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Naming {
    /// `x{row}{col}`: target index first.
    TargetSource,
    /// `x{col}{row}`: source index first.
    SourceTarget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ClosureSign {
    #[default]
    Plus,
    Minus,
}

#[derive(Clone, Debug)]
pub struct FormalData {
    blocks: Vec<Block>,
    gamma: Mat<Value>,
    perm: Vec<usize>,
    naming: Naming,
}

impl FormalData {
    /// Validates that `γ` is invertible and maps each block onto the block of its
    /// transformed eigenvalue.
    pub fn new(blocks: Vec<Block>, gamma: Mat<Value>, naming: Naming) -> Result<Self> {
        if blocks.is_empty() {
            return invalid("formal data needs at least one block");
        }
        let n: usize = blocks.iter().map(|b| b.dim).sum();
        if blocks.iter().any(|b| b.dim == 0 || b.labels.len() != b.dim) {
            return invalid("every block needs a positive dimension and one label per basis vector");
        }
        if gamma.rows() != n || gamma.cols() != n {
            return invalid(format!("gamma must be {n}x{n}"));
        }
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                if blocks[i].eigenvalue == blocks[j].eigenvalue {
                    return invalid("eigenvalues of distinct blocks must differ");
                }
            }
        }
        let mut perm = Vec::with_capacity(blocks.len());
        for b in &blocks {
            let image = b.eigenvalue.gamma_image();
            match blocks.iter().position(|c| c.eigenvalue == image) {
                Some(k) if blocks[k].dim == b.dim => perm.push(k),
                _ => return invalid("the eigenvalue multiset is not stable under gamma"),
            }
        }
        let data = FormalData {
            blocks,
            gamma,
            perm,
            naming,
        };
        for (bi, &target) in data.perm.iter().enumerate() {
            for c in data.block_range(bi) {
                for r in 0..n {
                    if !data.gamma.get(r, c).is_zero() && data.block_of(r) != target {
                        return invalid("gamma does not map blocks onto the blocks of the transformed eigenvalues");
                    }
                }
            }
        }
        if data.gamma.det().is_zero() {
            return invalid("gamma must be invertible");
        }
        Ok(data)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn gamma(&self) -> &Mat<Value> {
        &self.gamma
    }

    /// `perm()[i]` is the block that `γ` maps block `i` onto.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn naming(&self) -> Naming {
        self.naming
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    pub fn offset(&self, block: usize) -> usize {
        self.blocks[..block].iter().map(|b| b.dim).sum()
    }

    pub fn block_range(&self, block: usize) -> std::ops::Range<usize> {
        let o = self.offset(block);
        o..o + self.blocks[block].dim
    }

    pub fn block_of(&self, coord: usize) -> usize {
        let mut acc = 0;
        for (i, b) in self.blocks.iter().enumerate() {
            acc += b.dim;
            if coord < acc {
                return i;
            }
        }
        panic!("coordinate {coord} out of range");
    }

    /// Name of the unknown at matrix position `(row, col)`.
    pub fn unknown_name(&self, row: usize, col: usize) -> String {
        let (a, b) = match self.naming {
            Naming::TargetSource => (row, col),
            Naming::SourceTarget => (col, row),
        };
        if a >= 10 || b >= 10 {
            format!("x{a}_{b}")
        } else {
            format!("x{a}{b}")
        }
    }

    /// Largest `z`-degree among the eigenvalues.
    pub fn katz(&self) -> Q {
        self.blocks
            .iter()
            .map(|b| b.eigenvalue.degree())
            .max()
            .unwrap_or_else(|| Q::from_integer(0))
    }
}

/// `λ = ½(σ+1) + Σμ_j − Σν_j` with `σ = q − p`.
pub fn pdq_lambda(p: usize, q: usize, mu: &[Scalar], nu: &[Scalar]) -> Scalar {
    let sigma = (q - p) as i64;
    let mut l = Scalar::ratio(sigma + 1, 2);
    for m in mu {
        l = &l + m;
    }
    for n in nu {
        l = &l - n;
    }
    l
}

/// Formal data of `ₚD_q`: a regular block of dimension `p` and a totally ramified
/// part of dimension `σ = q − p` with eigenvalues `−ζ^j z^{1/σ}`.
pub fn formal_pdq(
    p: usize,
    q: usize,
    mu: &[Scalar],
    nu: &[Scalar],
    sign: ClosureSign,
) -> Result<FormalData> {
    check_pdq(p, q, mu, nu)?;
    let lambda = pdq_lambda(p, q, mu, nu);
    let closure = match sign {
        ClosureSign::Plus => Value::exp_2pi_i(&lambda),
        ClosureSign::Minus => Value::exp_2pi_i(&-&lambda),
    };
    let regular: Vec<Value> = mu.iter().map(|m| Value::exp_2pi_i(&-m)).collect();
    formal_mixed(&regular, q - p, &closure)
}

/// The shape `V₀ ⊕ W`: `V₀` regular with `γ = diag(regular)`, `W` totally ramified
/// of dimension `sigma` with `γe_i = e_{i+1}` and `γe_σ = closure·e_1`.
pub fn formal_mixed(regular: &[Value], sigma: usize, closure: &Value) -> Result<FormalData> {
    if sigma < 1 {
        return invalid("the ramified part needs dimension at least 1");
    }
    if closure.is_zero() || regular.iter().any(Ring::is_zero) {
        return invalid("formal monodromy entries must be nonzero");
    }
    let m = regular.len();
    let mut blocks = Vec::new();
    if m > 0 {
        blocks.push(Block {
            eigenvalue: Eigenvalue::zero(),
            dim: m,
            labels: (1..=m).map(|j| format!("f{j}")).collect(),
        });
    }
    for j in 0..sigma {
        let c = Cyclo::root_of_unity(j as i64, sigma as u32).neg();
        blocks.push(Block {
            eigenvalue: Eigenvalue::monomial(c, Q::new(1, sigma as i64)),
            dim: 1,
            labels: vec![format!("e{}", j + 1)],
        });
    }
    let n = m + sigma;
    let mut gamma = Mat::<Value>::zeros(n, n);
    for (j, g) in regular.iter().enumerate() {
        gamma.set(j, j, g.clone());
    }
    for j in 0..sigma - 1 {
        gamma.set(m + j + 1, m + j, Value::one());
    }
    gamma.set(m, m + sigma - 1, closure.clone());
    FormalData::new(blocks, gamma, Naming::SourceTarget)
}

/// Closure of the cyclic formal monodromy for the totally ramified family,
/// `(−1)^{n−1}`, which makes `det γ = 1`.
pub fn ramified_closure(n: usize) -> Value {
    Value::int(if n % 2 == 1 { 1 } else { -1 })
}

/// `n` one-dimensional blocks with eigenvalues `ζⁱz^{1/n}` and cyclic `γ`.
pub fn formal_ramified(n: usize, closure: &Value) -> Result<FormalData> {
    if n < 2 {
        return invalid(format!("n must be at least 2, got {n}"));
    }
    if closure.is_zero() {
        return invalid("closure must be nonzero");
    }
    let blocks = (0..n)
        .map(|i| Block {
            eigenvalue: Eigenvalue::monomial(Cyclo::root_of_unity(i as i64, n as u32), Q::new(1, n as i64)),
            dim: 1,
            labels: vec![format!("e{i}")],
        })
        .collect();
    let mut gamma = Mat::<Value>::zeros(n, n);
    for i in 0..n - 1 {
        gamma.set(i + 1, i, Value::one());
    }
    gamma.set(0, n - 1, closure.clone());
    FormalData::new(blocks, gamma, Naming::TargetSource)
}

/// Formal data of the totally ramified universal family with parameters `a`.
pub fn formal_ramified_family(n: usize, a: &[Scalar]) -> Result<FormalData> {
    check_ramified(n, a)?;
    formal_ramified(n, &ramified_closure(n))
}

/// `n` one-dimensional blocks with eigenvalues `λ_j z` and `γ = I`.
pub fn formal_unramified(lambda: &[Scalar]) -> Result<FormalData> {
    check_distinct(lambda)?;
    let blocks = lambda
        .iter()
        .enumerate()
        .map(|(j, l)| Block {
            eigenvalue: Eigenvalue::monomial(l.to_cyclo(), Q::from_integer(1)),
            dim: 1,
            labels: vec![format!("v{}", j + 1)],
        })
        .collect();
    FormalData::new(blocks, Mat::identity(lambda.len()), Naming::TargetSource)
}
