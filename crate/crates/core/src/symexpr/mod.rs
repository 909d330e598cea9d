//! Exact polynomial arithmetic over the rationals.

mod parse;
mod poly;
mod vector;

pub use parse::{parse_expression, parse_expression_at};
pub use poly::{rat, ratio, Chart, Monomial, Polynomial, Rational};
pub use vector::{PolyMatrix, PolyVector};
