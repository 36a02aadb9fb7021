//! Exact realization calculus for noncommutative rational functions.
//!
//! Gaussian-rational linear algebra, the free *-algebra, rational expressions,
//! linear representations about matrix base points with an exact zero test,
//! rationally resolvable ideals with membership oracles, size bounds, random
//! structured matrix sampling, and sum-of-Hermitian-squares verification.

pub mod bounds;
pub mod cli;
pub mod ideals;
pub mod matrix;
pub mod ncpoly;
pub mod point;
pub mod positivity;
pub mod ratexpr;
pub mod realization;
pub mod sampler;
pub mod scalar;
pub mod selftest;

pub use matrix::{Entry, Matrix, MatrixError, MatrixExact, MatrixFloat, FLOAT_TOL};
pub use ncpoly::{Family, Letter, NcPoly, PolyError, Word};
pub use point::{EvalError, Point, PointExact, PointFloat, StarRule};
pub use ratexpr::{format_expression, parse_expression, parse_polynomial, ExprEvalError, ParseError, RatExpr};
pub use scalar::Scalar;
