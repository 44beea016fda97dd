//! Operators in `C(z)[δ]`, their companion systems, and the operator families.

mod families;
mod laurent;
mod operator;
mod parse;
mod rational;
pub(crate) mod roots;
mod system;

pub use families::{build_pdq, ramified_family, unramified_family};
pub(crate) use families::{check_distinct, check_pdq, check_ramified};
pub use laurent::LaurentPoly;
pub use operator::DiffOperator;
pub use parse::{parse_coefficient, parse_operator, parse_scalar};
pub use rational::RationalFunc;
pub use system::{to_system, MatrixSystem};

/// Noncommutative product of two operators.
pub fn op_multiply(a: &DiffOperator, b: &DiffOperator) -> DiffOperator {
    a.mul(b)
}
