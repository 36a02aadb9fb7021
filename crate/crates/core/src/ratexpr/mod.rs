//! Noncommutative rational expressions: syntax trees, height, substitution,
//! formal adjoint and matrix evaluation with domain tracking.
//!
//! Distinct trees are distinct expressions; nothing here simplifies. Semantic
//! equality is decided by the realization engine.

mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::matrix::{Entry, Matrix};
use crate::ncpoly::{Letter, NcPoly, Word};
use crate::point::{EvalError, Point};
use crate::scalar::Scalar;

pub use parse::{parse_expression, parse_polynomial, ParseError};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum RatExpr {
    Const(Scalar),
    Var(Letter),
    /// At least two summands.
    Add(Vec<RatExpr>),
    Neg(Box<RatExpr>),
    /// At least two factors, in order.
    Mul(Vec<RatExpr>),
    Inv(Box<RatExpr>),
}

/// Child-index path from the root to a node.
pub type NodePath = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprEvalError {
    #[error("point outside the domain: inverse at node {path:?} is singular")]
    Domain { path: NodePath },
    #[error(transparent)]
    Point(#[from] EvalError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("expression contains an inverse; not a polynomial")]
pub struct NotPolynomial;

impl RatExpr {
    pub fn constant(s: Scalar) -> Self {
        RatExpr::Const(s)
    }

    pub fn int(n: i64) -> Self {
        RatExpr::Const(Scalar::from_int(n))
    }

    pub fn var(l: Letter) -> Self {
        RatExpr::Var(l)
    }

    /// Sum; a single summand is returned as is.
    pub fn sum(mut items: Vec<RatExpr>) -> Self {
        match items.len() {
            0 => RatExpr::int(0),
            1 => items.pop().unwrap(),
            _ => RatExpr::Add(items),
        }
    }

    /// Product in the given order; a single factor is returned as is.
    pub fn product(mut items: Vec<RatExpr>) -> Self {
        match items.len() {
            0 => RatExpr::int(1),
            1 => items.pop().unwrap(),
            _ => RatExpr::Mul(items),
        }
    }

    pub fn neg(e: RatExpr) -> Self {
        RatExpr::Neg(Box::new(e))
    }

    pub fn inv(e: RatExpr) -> Self {
        RatExpr::Inv(Box::new(e))
    }

    /// `a - b`
    pub fn sub(a: RatExpr, b: RatExpr) -> Self {
        RatExpr::Add(vec![a, RatExpr::neg(b)])
    }

    pub fn children(&self) -> &[RatExpr] {
        match self {
            RatExpr::Const(_) | RatExpr::Var(_) => &[],
            RatExpr::Add(v) | RatExpr::Mul(v) => v,
            RatExpr::Neg(c) | RatExpr::Inv(c) => std::slice::from_ref(c.as_ref()),
        }
    }

    /// Maximal number of nested inverses.
    pub fn height(&self) -> usize {
        let below = self.children().iter().map(RatExpr::height).max().unwrap_or(0);
        match self {
            RatExpr::Inv(_) => below + 1,
            _ => below,
        }
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<Letter>) {
        if let RatExpr::Var(l) = self {
            out.insert(*l);
        }
        for c in self.children() {
            c.collect_letters(out);
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.height() == 0
    }

    /// Simultaneous substitution; letters absent from `map` stay.
    pub fn substitute(&self, map: &BTreeMap<Letter, RatExpr>) -> RatExpr {
        match self {
            RatExpr::Const(_) => self.clone(),
            RatExpr::Var(l) => map.get(l).cloned().unwrap_or_else(|| self.clone()),
            RatExpr::Add(v) => RatExpr::Add(v.iter().map(|c| c.substitute(map)).collect()),
            RatExpr::Mul(v) => RatExpr::Mul(v.iter().map(|c| c.substitute(map)).collect()),
            RatExpr::Neg(c) => RatExpr::neg(c.substitute(map)),
            RatExpr::Inv(c) => RatExpr::inv(c.substitute(map)),
        }
    }

    /// Formal adjoint: reverses products, toggles stars, conjugates constants.
    pub fn star(&self) -> RatExpr {
        match self {
            RatExpr::Const(s) => RatExpr::Const(s.conj()),
            RatExpr::Var(l) => RatExpr::Var(l.star()),
            RatExpr::Add(v) => RatExpr::Add(v.iter().map(RatExpr::star).collect()),
            RatExpr::Mul(v) => RatExpr::Mul(v.iter().rev().map(RatExpr::star).collect()),
            RatExpr::Neg(c) => RatExpr::neg(c.star()),
            RatExpr::Inv(c) => RatExpr::inv(c.star()),
        }
    }

    /// Expands an inverse-free expression.
    pub fn to_poly(&self, g: usize) -> Result<NcPoly, NotPolynomial> {
        Ok(match self {
            RatExpr::Const(s) => NcPoly::constant(g, s.clone()),
            RatExpr::Var(l) => NcPoly::monomial(g, Word(vec![*l]), Scalar::one()),
            RatExpr::Add(v) => {
                let mut acc = NcPoly::zero(g);
                for c in v {
                    acc = acc.try_add(&c.to_poly(g)?).expect("same alphabet");
                }
                acc
            }
            RatExpr::Mul(v) => {
                let mut acc = NcPoly::one(g);
                for c in v {
                    acc = acc.try_mul(&c.to_poly(g)?).expect("same alphabet");
                }
                acc
            }
            RatExpr::Neg(c) => c.to_poly(g)?.neg(),
            RatExpr::Inv(_) => return Err(NotPolynomial),
        })
    }

    /// Expression tree of a polynomial: a sum of coefficient-times-word products.
    pub fn from_poly(p: &NcPoly) -> RatExpr {
        let terms: Vec<RatExpr> = p
            .terms()
            .map(|(w, c)| {
                // negative real coefficients of nonempty words become subtractions
                let negate = !w.is_empty() && c.is_real() && *c.re() < 0;
                let c = if negate { -c } else { c.clone() };
                let mut factors: Vec<RatExpr> = Vec::new();
                if !c.is_one() || w.is_empty() {
                    factors.push(RatExpr::Const(c));
                }
                factors.extend(w.letters().iter().map(|l| RatExpr::Var(*l)));
                let term = RatExpr::product(factors);
                if negate {
                    RatExpr::neg(term)
                } else {
                    term
                }
            })
            .collect();
        RatExpr::sum(terms)
    }

    /// Value at a matrix tuple; fails with the path of the first singular inverse.
    pub fn eval<T: Entry>(&self, point: &Point<T>) -> Result<Matrix<T>, ExprEvalError> {
        let n = point.size().ok_or(EvalError::EmptyPoint)?;
        let mut path = Vec::new();
        self.eval_at(point, n, &mut path)
    }

    fn eval_at<T: Entry>(&self, point: &Point<T>, n: usize, path: &mut NodePath) -> Result<Matrix<T>, ExprEvalError> {
        match self {
            RatExpr::Const(s) => Ok(Matrix::scalar_identity(n, T::from_scalar(s))),
            RatExpr::Var(l) => Ok(point.get(*l)?.into_owned()),
            RatExpr::Add(v) => {
                let mut acc = Matrix::zeros(n, n);
                for (k, c) in v.iter().enumerate() {
                    path.push(k);
                    acc = &acc + &c.eval_at(point, n, path)?;
                    path.pop();
                }
                Ok(acc)
            }
            RatExpr::Mul(v) => {
                let mut acc: Option<Matrix<T>> = None;
                for (k, c) in v.iter().enumerate() {
                    path.push(k);
                    let val = c.eval_at(point, n, path)?;
                    path.pop();
                    acc = Some(match acc {
                        None => val,
                        Some(a) => &a * &val,
                    });
                }
                Ok(acc.unwrap_or_else(|| Matrix::identity(n)))
            }
            RatExpr::Neg(c) => {
                path.push(0);
                let v = c.eval_at(point, n, path)?;
                path.pop();
                Ok(v.neg())
            }
            RatExpr::Inv(c) => {
                path.push(0);
                let v = c.eval_at(point, n, path)?;
                path.pop();
                v.inverse().map_err(|_| ExprEvalError::Domain { path: path.clone() })
            }
        }
    }

    /// Node at `path`, if it exists.
    pub fn node(&self, path: &[usize]) -> Option<&RatExpr> {
        let mut cur = self;
        for &k in path {
            cur = cur.children().get(k)?;
        }
        Some(cur)
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", parse::format_expression(self))
    }
}

impl fmt::Debug for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatExpr({})", parse::format_expression(self))
    }
}

pub use parse::format_expression;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::MatrixExact;
    use crate::point::StarRule;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(text: &str, g: usize) -> RatExpr {
        parse_expression(text, g).unwrap()
    }

    #[test]
    fn heights() {
        assert_eq!(p("X1 + 3 X2 X1", 2).height(), 0);
        assert_eq!(p("X1^-1", 1).height(), 1);
        assert_eq!(p("(X1 + X2^-1)^-1", 2).height(), 2);
    }

    #[test]
    fn commutator_inverse_at_matrix_units() {
        let e = p("(X1*X2 - X2*X1)^-1", 2);
        let pt = Point::from_pairs(
            StarRule::Formal,
            [(Letter::x(1), MatrixExact::unit(2, 0, 1)), (Letter::x(2), MatrixExact::unit(2, 1, 0))],
        )
        .unwrap();
        assert_eq!(e.eval(&pt).unwrap(), MatrixExact::from_ints(&[&[1, 0], &[0, -1]]));
    }

    #[test]
    fn domain_errors_carry_paths() {
        let pt = Point::from_pairs(StarRule::Formal, [(Letter::x(1), MatrixExact::zeros(1, 1))]).unwrap();
        assert_eq!(p("X1^-1", 1).eval(&pt), Err(ExprEvalError::Domain { path: vec![] }));
        let e = p("1 + X1 (X1 - X1)^-1", 1);
        match e.eval(&pt) {
            Err(ExprEvalError::Domain { path }) => {
                assert!(matches!(e.node(&path), Some(RatExpr::Inv(_))));
                assert_eq!(path, vec![1, 1]);
            }
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn inverse_law_at_invertible_point() {
        let pt =
            Point::from_pairs(StarRule::Formal, [(Letter::x(1), MatrixExact::from_ints(&[&[2, 1], &[1, 1]]))]).unwrap();
        assert_eq!(p("X1 X1^-1", 1).eval(&pt).unwrap(), MatrixExact::identity(2));
    }

    #[test]
    fn substitution_examples() {
        let f = p("1 - X1^* X1", 1);
        let map = BTreeMap::from([(Letter::x_star(1), p("X1^-1", 1))]);
        let q = f.substitute(&map);
        assert_eq!(q, p("1 - X1^-1 X1", 1));
        assert_eq!(f.substitute(&BTreeMap::new()), f);
        let inv_map = BTreeMap::from([(Letter::x(1), p("X1^-1", 1))]);
        let twice = RatExpr::var(Letter::x(1)).substitute(&inv_map).substitute(&inv_map);
        assert_eq!(twice, RatExpr::inv(RatExpr::inv(RatExpr::var(Letter::x(1)))));
        assert_eq!(twice.height(), 2);
    }

    #[test]
    fn star_examples() {
        assert_eq!(p("(X1 X2)^*", 2), p("X2^* X1^*", 2));
        assert_eq!(p("X1^-1", 1).star(), p("(X1^*)^-1", 1));
        let e = p("(2i) X1 (X2 + 1)^-1", 2);
        assert_eq!(e.star().star(), e);
    }

    fn random_point(rng: &mut ChaCha8Rng, letters: &[Letter], n: usize) -> Point<Scalar> {
        let mut pt = Point::new(StarRule::Formal);
        for l in letters {
            let data = (0..n * n).map(|_| Scalar::gaussian(rng.gen_range(-3..4), rng.gen_range(-1..2))).collect();
            pt.insert(*l, Matrix::from_vec(n, n, data).unwrap()).unwrap();
        }
        pt
    }

    #[test]
    fn agrees_with_polynomial_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let letters = [Letter::x(1), Letter::x(2), Letter::x_star(1)];
        for text in ["3 X1 X2 - X1^2", "(X1 + 2)(X2 - X1^*) X1", "1 - X1^* X1 + (1/2 + 1i) X2"] {
            let e = p(text, 2);
            let poly = e.to_poly(2).unwrap();
            for n in 1..=3 {
                let pt = random_point(&mut rng, &letters, n);
                assert_eq!(e.eval(&pt).unwrap(), poly.eval(&pt).unwrap(), "{text}");
            }
        }
    }

    #[test]
    fn star_commutes_with_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let letters = [Letter::x(1), Letter::x(2)];
        let e = p("X1 (X2 + (1i))^-1 - 2 X2^-1 X1", 2);
        let mut tested = 0;
        for _ in 0..30 {
            let pt = random_point(&mut rng, &letters, 2);
            let Ok(v) = e.eval(&pt) else { continue };
            let starred = e.star().eval(&pt.star()).unwrap();
            assert_eq!(starred, v.conjugate_transpose());
            tested += 1;
        }
        assert!(tested > 10);
    }

    #[test]
    fn height_bound_under_substitution() {
        let e = p("(X1 + X2^-1)^-1", 2);
        let map = BTreeMap::from([(Letter::x(2), p("(X1 X2)^-1", 2)), (Letter::x(1), p("X2", 2))]);
        let s = e.substitute(&map);
        assert_eq!(s.height(), e.height() + 1);
        assert!(s.height() <= e.height() + 1);
    }
}
