//! Dense matrices over the exact field and over complex doubles.
//!
//! [`Matrix`] is generic over an [`Entry`] type; the two instances used
//! throughout are [`MatrixExact`] (Gaussian rationals) and [`MatrixFloat`]
//! (`Complex64`). Exact elimination takes the first nonzero pivot; float
//! elimination uses partial pivoting.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::scalar::Scalar;

/// Default residual tolerance for float checks.
pub const FLOAT_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("bad matrix json: {0}")]
    Json(String),
}

/// Field-like entry type for [`Matrix`].
pub trait Entry: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    const EXACT: bool;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn magnitude(&self) -> f64;
    fn from_scalar(s: &Scalar) -> Self;
    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }
}

impl Entry for Scalar {
    const EXACT: bool = true;
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Scalar::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
    fn magnitude(&self) -> f64 {
        self.abs_f64()
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        Scalar::add_mul(self, a, b)
    }
}

impl Entry for Complex64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        if self.norm() == 0.0 {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.to_complex()
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type MatrixExact = Matrix<Scalar>;
pub type MatrixFloat = Matrix<Complex64>;

impl<T: Entry> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn scalar_identity(n: usize, s: T) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    /// Matrix unit `E_{ij}` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = T::one();
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch { op: "from_vec", left: (rows, cols), right: (data.len(), 1) });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Json("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Entry::is_zero)
    }

    pub fn map<U: Entry>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch { op: "matmul", left: self.shape(), right: other.shape() });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if !b.is_zero() {
                        out.data[i * other.cols + j].add_mul(a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(&T, &T) -> T) -> Result<Self, MatrixError> {
        if self.shape() != other.shape() {
            return Err(MatrixError::DimensionMismatch { op, left: self.shape(), right: other.shape() });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.zip_with(other, "add", |a, b| a.add(b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.zip_with(other, "sub", |a, b| a.sub(b))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn neg(&self) -> Self {
        self.map(Entry::neg)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].clone();
            }
        }
        out
    }

    /// `(a*)_{ij} = conj(a_{ji})`.
    pub fn conjugate_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Self, MatrixError> {
        self.solve(&Self::identity(self.rows))
    }

    /// The solution `x` of `self · x = rhs` for square invertible `self`.
    pub fn solve(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare(self.rows, self.cols));
        }
        if rhs.rows != self.rows {
            return Err(MatrixError::DimensionMismatch { op: "solve", left: self.shape(), right: rhs.shape() });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = rhs.clone();
        let scale = self.data.iter().map(Entry::magnitude).fold(0.0f64, f64::max).max(1.0);
        for col in 0..n {
            let pivot_row = if T::EXACT {
                (col..n).find(|&r| !a[(r, col)].is_zero())
            } else {
                let (best, mag) =
                    (col..n)
                        .map(|r| (r, a[(r, col)].magnitude()))
                        .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
                (mag > 1e-13 * scale).then_some(best)
            };
            let p = pivot_row.ok_or(MatrixError::Singular)?;
            if p != col {
                a.swap_rows(p, col);
                inv.swap_rows(p, col);
            }
            let pinv = a[(col, col)].inv().ok_or(MatrixError::Singular)?;
            a.scale_row(col, &pinv);
            inv.scale_row(col, &pinv);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[(r, col)].clone();
                if factor.is_zero() {
                    continue;
                }
                let neg = factor.neg();
                a.axpy_row(r, col, &neg);
                inv.axpy_row(r, col, &neg);
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, i: usize, s: &T) {
        for c in 0..self.cols {
            let v = &mut self.data[i * self.cols + c];
            if !v.is_zero() {
                *v = v.mul(s);
            }
        }
    }

    /// row[dst] += s * row[src]
    fn axpy_row(&mut self, dst: usize, src: usize, s: &T) {
        for c in 0..self.cols {
            let v = self.data[src * self.cols + c].clone();
            if !v.is_zero() {
                self.data[dst * self.cols + c].add_mul(s, &v);
            }
        }
    }

    /// Copy of the block starting at `(r0, c0)` of the given shape.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.data[(r0 + i) * self.cols + c0 + j].clone();
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.data[i * block.cols + j].clone();
            }
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self.data[i * self.cols + j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * c + j * other.cols + l] =
                            a.mul(&other.data[k * other.cols + l]);
                    }
                }
            }
        }
        out
    }

    pub fn hstack(blocks: &[&Self]) -> Result<Self, MatrixError> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(MatrixError::DimensionMismatch { op: "hstack", left: (rows, 0), right: (0, 0) });
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut c0 = 0;
        for b in blocks {
            out.set_block(0, c0, b);
            c0 += b.cols;
        }
        Ok(out)
    }

    pub fn vstack(blocks: &[&Self]) -> Result<Self, MatrixError> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(MatrixError::DimensionMismatch { op: "vstack", left: (0, cols), right: (0, 0) });
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut r0 = 0;
        for b in blocks {
            out.set_block(r0, 0, b);
            r0 += b.rows;
        }
        Ok(out)
    }

    /// Frobenius norm as a float.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt()
    }
}

impl<T: Entry> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T: Entry> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Entry> std::ops::Mul for &Matrix<T> {
    type Output = Matrix<T>;
    /// Panics on shape mismatch; see [`Matrix::matmul`].
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.matmul(rhs).expect("matrix shapes do not agree")
    }
}

impl<T: Entry> std::ops::Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.try_add(rhs).expect("matrix shapes do not agree")
    }
}

impl<T: Entry> std::ops::Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.try_sub(rhs).expect("matrix shapes do not agree")
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl MatrixExact {
    /// Integer matrix from nested rows; convenient in tests and fixtures.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let data = rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect();
        Matrix::from_rows(data).expect("ragged integer rows")
    }

    pub fn to_float(&self) -> MatrixFloat {
        self.map(Scalar::to_complex)
    }

    /// `{"rows":r,"cols":c,"entries":[["re","im"],...]}`
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.data.iter().map(|s| json!([s.re().to_string(), s.im().to_string()])).collect();
        json!({"rows": self.rows, "cols": self.cols, "entries": entries})
    }

    pub fn from_json(v: &Value) -> Result<Self, MatrixError> {
        let (rows, cols, entries) = json_header(v)?;
        let mut data = Vec::with_capacity(entries.len());
        for e in entries {
            let pair = e.as_array().filter(|p| p.len() == 2);
            let parse = |x: &Value| -> Result<malachite_q::Rational, MatrixError> {
                match x {
                    Value::String(s) => Scalar::parse_rational(s).map_err(|e| MatrixError::Json(e.to_string())),
                    Value::Number(n) if n.is_i64() => Ok(malachite_q::Rational::from(n.as_i64().unwrap())),
                    _ => Err(MatrixError::Json(format!("expected rational string, got {x}"))),
                }
            };
            match pair {
                Some(p) => data.push(Scalar::new(parse(&p[0])?, parse(&p[1])?)),
                None => data.push(Scalar::from_rational(parse(e)?)),
            }
        }
        Matrix::from_vec(rows, cols, data)
    }
}

impl MatrixFloat {
    /// Float matrices use number pairs `[re, im]`.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.data.iter().map(|z| json!([z.re, z.im])).collect();
        json!({"rows": self.rows, "cols": self.cols, "entries": entries})
    }

    pub fn from_json(v: &Value) -> Result<Self, MatrixError> {
        let (rows, cols, entries) = json_header(v)?;
        let mut data = Vec::with_capacity(entries.len());
        for e in entries {
            let z = match e {
                Value::Array(p) if p.len() == 2 => Complex64::new(
                    p[0].as_f64().ok_or_else(|| MatrixError::Json("non-numeric entry".into()))?,
                    p[1].as_f64().ok_or_else(|| MatrixError::Json("non-numeric entry".into()))?,
                ),
                Value::Number(n) => Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0),
                _ => return Err(MatrixError::Json(format!("bad float entry {e}"))),
            };
            data.push(z);
        }
        Matrix::from_vec(rows, cols, data)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn json_header(v: &Value) -> Result<(usize, usize, &Vec<Value>), MatrixError> {
    let rows = v.get("rows").and_then(Value::as_u64).ok_or_else(|| MatrixError::Json("missing rows".into()))?;
    let cols = v.get("cols").and_then(Value::as_u64).ok_or_else(|| MatrixError::Json("missing cols".into()))?;
    let entries =
        v.get("entries").and_then(Value::as_array).ok_or_else(|| MatrixError::Json("missing entries".into()))?;
    if entries.len() as u64 != rows * cols {
        return Err(MatrixError::Json(format!("expected {} entries, found {}", rows * cols, entries.len())));
    }
    Ok((rows as usize, cols as usize, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_exact(rng: &mut ChaCha8Rng, r: usize, c: usize) -> MatrixExact {
        let data = (0..r * c)
            .map(|_| {
                Scalar::new(
                    malachite_q::Rational::from_signeds(rng.gen_range(-4i64..5), rng.gen_range(1i64..4)),
                    malachite_q::Rational::from(rng.gen_range(-2i64..3)),
                )
            })
            .collect();
        Matrix::from_vec(r, c, data).unwrap()
    }

    #[test]
    fn product_examples() {
        let m = MatrixExact::from_ints(&[&[1, 2], &[3, 4]]);
        assert_eq!(&MatrixExact::identity(2) * &m, m);
        let e12 = MatrixExact::unit(2, 0, 1);
        let e21 = MatrixExact::unit(2, 1, 0);
        assert_eq!(&e12 * &e21, MatrixExact::unit(2, 0, 0));
        let bad = MatrixExact::zeros(3, 1);
        assert!(matches!(m.matmul(&bad), Err(MatrixError::DimensionMismatch { .. })));
    }

    #[test]
    fn block_evaluation_by_hand() {
        // 3·A1·A2 − A1² with A1=[[1,1],[-1,0]], A2=[[1,0],[2,-1]]
        let a1 = MatrixExact::from_ints(&[&[1, 1], &[-1, 0]]);
        let a2 = MatrixExact::from_ints(&[&[1, 0], &[2, -1]]);
        let p = &(&a1 * &a2).scale(&Scalar::from_int(3)) - &(&a1 * &a1);
        assert_eq!(p, MatrixExact::from_ints(&[&[9, -4], &[-2, 1]]));
    }

    #[test]
    fn inverse_examples() {
        let u = MatrixExact::from_ints(&[&[1, 1], &[0, 1]]);
        assert_eq!(u.inverse().unwrap(), MatrixExact::from_ints(&[&[1, -1], &[0, 1]]));
        assert_eq!(MatrixExact::identity(4).inverse().unwrap(), MatrixExact::identity(4));
        let s = MatrixExact::from_ints(&[&[1, 1], &[1, 1]]);
        assert_eq!(s.inverse(), Err(MatrixError::Singular));
        assert!(matches!(MatrixExact::zeros(2, 3).inverse(), Err(MatrixError::NotSquare(2, 3))));
    }

    #[test]
    fn conjugate_transpose_examples() {
        let m = Matrix::from_vec(1, 1, vec![Scalar::i()]).unwrap();
        assert_eq!(m.conjugate_transpose()[(0, 0)], -Scalar::i());
        let sym = MatrixExact::from_ints(&[&[1, 2], &[2, 5]]);
        assert_eq!(sym.conjugate_transpose(), sym);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = random_exact(&mut rng, 3, 3);
            let b = random_exact(&mut rng, 3, 3);
            assert_eq!((&a * &b).conjugate_transpose(), &b.conjugate_transpose() * &a.conjugate_transpose());
            assert_eq!(a.conjugate_transpose().conjugate_transpose(), a);
        }
    }

    #[test]
    fn random_inverses_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 200 {
            let n = rng.gen_range(1..=6);
            let a = random_exact(&mut rng, n, n);
            let Ok(inv) = a.inverse() else { continue };
            assert_eq!(&a * &inv, MatrixExact::identity(n));
            assert_eq!(&inv * &a, MatrixExact::identity(n));
            checked += 1;
        }
    }

    #[test]
    fn float_inverse_and_json() {
        let a = MatrixExact::from_ints(&[&[2, 1], &[1, 3]]).to_float();
        let inv = a.inverse().unwrap();
        let resid = (&(&a * &inv) - &MatrixFloat::identity(2)).norm();
        assert!(resid < FLOAT_TOL);
        let back = MatrixFloat::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
        let ex = MatrixExact::from_ints(&[&[1, -2], &[0, 7]]).scale(&Scalar::from_frac(1, 3));
        assert_eq!(MatrixExact::from_json(&ex.to_json()).unwrap(), ex);
        assert!(MatrixExact::from_json(&json!({"rows": 2, "cols": 2, "entries": []})).is_err());
    }
}
