//! Generalized polynomials in reduced form: `m×m` matrices of polynomials
//! in the `g·m²` letters `𝔶^{(k)}_{ıȷ}`, where `E_{iı}·Y_k·E_{ȷj}` corresponds
//! to `𝔶^{(k)}_{ıȷ}·E_{ij}`. The letter `𝔶^{(k)}_{ıȷ}` is written `X_ℓ` with
//! `ℓ = (k·m + ı)·m + ȷ + 1` (zero-based `k, ı, ȷ`).

use std::fmt;

use crate::matrix::MatrixExact;
use crate::ncpoly::{Letter, NcPoly, Word};
use crate::point::{Point, StarRule};

#[derive(Clone, PartialEq, Debug)]
pub struct GenPoly {
    m: usize,
    g: usize,
    entries: Vec<NcPoly>,
}

impl GenPoly {
    pub fn zero(m: usize, g: usize) -> Self {
        GenPoly { m, g, entries: vec![NcPoly::zero(g * m * m); m * m] }
    }

    pub fn constant(g: usize, a: &MatrixExact) -> Self {
        let m = a.rows();
        let mut out = GenPoly::zero(m, g);
        for i in 0..m {
            for j in 0..m {
                out.entries[i * m + j] = NcPoly::constant(g * m * m, a[(i, j)].clone());
            }
        }
        out
    }

    /// The generic matrix `[𝔶^{(k)}_{ij}]_{ij}`, image of `Y_k`.
    pub fn var(m: usize, g: usize, k: usize) -> Self {
        let mut out = GenPoly::zero(m, g);
        for i in 0..m {
            for j in 0..m {
                out.entries[i * m + j] = NcPoly::letter(g * m * m, Self::letter_of(m, k, i, j));
            }
        }
        out
    }

    /// `a_0·Y_{k_1}·a_1 ⋯ Y_{k_r}·a_r`
    pub fn monomial(g: usize, first: &MatrixExact, rest: &[(usize, MatrixExact)]) -> Self {
        let m = first.rows();
        let mut acc = GenPoly::constant(g, first);
        for (k, a) in rest {
            acc = acc.mul(&GenPoly::var(m, g, *k)).mul(&GenPoly::constant(g, a));
        }
        acc
    }

    fn letter_of(m: usize, k: usize, i: usize, j: usize) -> Letter {
        Letter::x(((k * m + i) * m + j + 1) as u32)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn entry(&self, i: usize, j: usize) -> &NcPoly {
        &self.entries[i * self.m + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(NcPoly::is_zero)
    }

    /// Largest word length among all entries; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(NcPoly::degree).max()
    }

    /// Adds `coeff[i,j]·ŵ` to every entry `(i, j)`, for a word of reduced letter indices.
    pub fn add_scalar_word(&mut self, word: &[usize], coeff: &MatrixExact) {
        let w = Word(word.iter().map(|&l| Letter::x(l as u32 + 1)).collect());
        for i in 0..self.m {
            for j in 0..self.m {
                let c = &coeff[(i, j)];
                if !c.is_zero() {
                    self.entries[i * self.m + j].add_term(w.clone(), c);
                }
            }
        }
    }

    pub fn add(&self, other: &GenPoly) -> GenPoly {
        assert_eq!((self.m, self.g), (other.m, other.g), "generalized polynomial shapes");
        let entries =
            self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_add(b).expect("same alphabet")).collect();
        GenPoly { m: self.m, g: self.g, entries }
    }

    pub fn sub(&self, other: &GenPoly) -> GenPoly {
        assert_eq!((self.m, self.g), (other.m, other.g), "generalized polynomial shapes");
        let entries =
            self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_sub(b).expect("same alphabet")).collect();
        GenPoly { m: self.m, g: self.g, entries }
    }

    pub fn mul(&self, other: &GenPoly) -> GenPoly {
        assert_eq!((self.m, self.g), (other.m, other.g), "generalized polynomial shapes");
        let m = self.m;
        let mut out = GenPoly::zero(m, self.g);
        for i in 0..m {
            for j in 0..m {
                let mut acc = NcPoly::zero(self.g * m * m);
                for t in 0..m {
                    let prod = self.entry(i, t).try_mul(other.entry(t, j)).expect("same alphabet");
                    acc = acc.try_add(&prod).expect("same alphabet");
                }
                out.entries[i * m + j] = acc;
            }
        }
        out
    }

    /// Value at `Y_k = z_k` for matrices of size `m·s`, with `a ↦ a⊗I_s`.
    pub fn eval(&self, z: &[MatrixExact]) -> MatrixExact {
        assert_eq!(z.len(), self.g, "one matrix per letter");
        let m = self.m;
        let size = z.first().map_or(m, MatrixExact::rows);
        let s = size / m;
        let mut point = Point::new(StarRule::Formal);
        for (k, zk) in z.iter().enumerate() {
            for i in 0..m {
                for j in 0..m {
                    point.insert(Self::letter_of(m, k, i, j), zk.submatrix(i * s, j * s, s, s)).expect("square blocks");
                }
            }
        }
        if point.size().is_none() {
            point.insert(Letter::x(1), MatrixExact::zeros(s, s)).expect("square");
        }
        let mut out = MatrixExact::zeros(size, size);
        for i in 0..m {
            for j in 0..m {
                let v = self.entry(i, j).eval(&point).expect("all reduced letters bound");
                out.set_block(i * s, j * s, &v);
            }
        }
        out
    }
}

impl fmt::Display for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.m {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.m {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        write!(f, "]")
    }
}
