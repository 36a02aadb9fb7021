//! Matrix tuples at which polynomials and expressions are evaluated.

use std::borrow::Cow;
use std::collections::BTreeMap;

use thiserror::Error;

use crate::matrix::{Entry, Matrix};
use crate::ncpoly::Letter;

/// How starred letters receive their values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarRule {
    /// Every letter (starred or not) is bound independently.
    Formal,
    /// `X_j^*` evaluates to the conjugate transpose of the value bound to `X_j`.
    Adjoint,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("no matrix bound to letter {0}")]
    MissingLetter(Letter),
    #[error("point matrices must be square of one common size; {letter} is {rows}x{cols}, expected {size}x{size}")]
    SizeMismatch { letter: Letter, rows: usize, cols: usize, size: usize },
    #[error("empty point: size undetermined")]
    EmptyPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point<T> {
    rule: StarRule,
    values: BTreeMap<Letter, Matrix<T>>,
}

pub type PointExact = Point<crate::scalar::Scalar>;
pub type PointFloat = Point<num_complex::Complex64>;

impl<T: Entry> Point<T> {
    pub fn new(rule: StarRule) -> Self {
        Point { rule, values: BTreeMap::new() }
    }

    pub fn from_pairs(rule: StarRule, pairs: impl IntoIterator<Item = (Letter, Matrix<T>)>) -> Result<Self, EvalError> {
        let mut p = Point::new(rule);
        for (l, m) in pairs {
            p.insert(l, m)?;
        }
        Ok(p)
    }

    pub fn rule(&self) -> StarRule {
        self.rule
    }

    /// Binds `letter`; all bound matrices must be square and share a size.
    pub fn insert(&mut self, letter: Letter, value: Matrix<T>) -> Result<(), EvalError> {
        let size = self.size().unwrap_or(value.rows());
        if value.rows() != value.cols() || value.rows() != size {
            return Err(EvalError::SizeMismatch { letter, rows: value.rows(), cols: value.cols(), size });
        }
        self.values.insert(letter, value);
        Ok(())
    }

    pub fn size(&self) -> Option<usize> {
        self.values.values().next().map(Matrix::rows)
    }

    pub fn letters(&self) -> impl Iterator<Item = &Letter> {
        self.values.keys()
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&Letter, &Matrix<T>)> {
        self.values.iter()
    }

    pub fn get(&self, letter: Letter) -> Result<Cow<'_, Matrix<T>>, EvalError> {
        if let Some(m) = self.values.get(&letter) {
            return Ok(Cow::Borrowed(m));
        }
        if self.rule == StarRule::Adjoint && letter.starred {
            if let Some(m) = self.values.get(&letter.star()) {
                return Ok(Cow::Owned(m.conjugate_transpose()));
            }
        }
        Err(EvalError::MissingLetter(letter))
    }

    /// The point `q*`: every bound matrix conjugate-transposed and every letter starred.
    pub fn star(&self) -> Self {
        Point {
            rule: self.rule,
            values: self.values.iter().map(|(l, m)| (l.star(), m.conjugate_transpose())).collect(),
        }
    }

    pub fn map<U: Entry>(&self, f: impl Fn(&Matrix<T>) -> Matrix<U>) -> Point<U> {
        Point { rule: self.rule, values: self.values.iter().map(|(l, m)| (*l, f(m))).collect() }
    }
}

impl PointExact {
    pub fn to_float(&self) -> PointFloat {
        self.map(|m| m.to_float())
    }
}
