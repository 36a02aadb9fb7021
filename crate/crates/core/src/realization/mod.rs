//! Linear representations of generalized series about a matrix base point.
//!
//! A [`LinRep`] of dimension `n` about a base point `p ∈ M_m^g` is stored in
//! reduced form: the `m×m` matrix units are unfolded so that every entry of
//! the bimodule-valued state matrices becomes a block of scalar matrices, one
//! per reduced letter `𝔶^{(k)}_{ıȷ}`. The block structure is still available
//! through [`LinRep::entry`], [`LinRep::c_block`] and [`LinRep::b_block`].

mod genpoly;
mod scalar_rep;
mod sparse;

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::matrix::{MatrixError, MatrixExact};
use crate::ncpoly::Letter;
use crate::point::PointExact;
use crate::ratexpr::{NodePath, RatExpr};
use crate::scalar::Scalar;

pub use genpoly::GenPoly;
pub use scalar_rep::{Echelon, ScalarRep};
pub use sparse::SparseMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealizationError {
    #[error("realizations are about different base points")]
    BasepointMismatch,
    #[error("constant coefficient is singular; the base point is outside the domain")]
    SingularConstantTerm,
    #[error("base point outside the domain: inverse at node {path:?} has a singular constant term")]
    Domain { path: NodePath },
    #[error("letter {0} is not bound by the base point")]
    UnknownLetter(Letter),
    #[error("base point matrices must all be square of one size m ≥ 1")]
    BadBasepoint,
    #[error("evaluation point size {size} is not a positive multiple of m = {m}")]
    PointSize { size: usize, m: usize },
    #[error("the structured resolvent is singular at this point")]
    ResolventSingular,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// The expansion point: one `m×m` matrix per letter, in a fixed order. The
/// position of a letter is the index `k` of its shifted variable `Y_k`.
#[derive(Clone, PartialEq, Debug)]
pub struct Basepoint {
    m: usize,
    letters: Vec<Letter>,
    values: Vec<MatrixExact>,
}

impl Basepoint {
    pub fn new(pairs: Vec<(Letter, MatrixExact)>) -> Result<Arc<Self>, RealizationError> {
        let m = pairs.first().map_or(1, |(_, v)| v.rows());
        if m == 0 || pairs.iter().any(|(_, v)| v.shape() != (m, m)) {
            return Err(RealizationError::BadBasepoint);
        }
        let mut seen = std::collections::BTreeSet::new();
        if pairs.iter().any(|(l, _)| !seen.insert(*l)) {
            return Err(RealizationError::BadBasepoint);
        }
        let (letters, values) = pairs.into_iter().unzip();
        Ok(Arc::new(Basepoint { m, letters, values }))
    }

    /// Scalar base point (`m = 1`).
    pub fn scalar(pairs: Vec<(Letter, Scalar)>) -> Arc<Self> {
        let pairs = pairs.into_iter().map(|(l, s)| (l, MatrixExact::scalar_identity(1, s))).collect();
        Basepoint::new(pairs).expect("1x1 matrices")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of letters `g`.
    pub fn g(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn value(&self, k: usize) -> &MatrixExact {
        &self.values[k]
    }

    pub fn index_of(&self, l: Letter) -> Option<usize> {
        self.letters.iter().position(|x| *x == l)
    }

    /// Number of reduced letters, `g·m²`.
    pub fn num_scalar_letters(&self) -> usize {
        self.g() * self.m * self.m
    }

    /// Index of `𝔶^{(k)}_{ij}` (zero-based `k, i, j`).
    pub fn scalar_letter(&self, k: usize, i: usize, j: usize) -> usize {
        (k * self.m + i) * self.m + j
    }

    /// The base point as an exact point.
    pub fn to_point(&self) -> PointExact {
        PointExact::from_pairs(
            crate::point::StarRule::Formal,
            self.letters.iter().copied().zip(self.values.iter().cloned()),
        )
        .expect("square matrices of one size")
    }
}

/// An element `Σ_t a_t·Y·b_t` of the bimodule generated by one letter,
/// stored as the tensor `T[(i,j),(ı,ȷ)] = Σ_t a_t[i,ı]·b_t[ȷ,j]`.
#[derive(Clone, PartialEq, Debug)]
pub struct BimoduleElem {
    m: usize,
    tensor: MatrixExact,
}

impl BimoduleElem {
    pub fn zero(m: usize) -> Self {
        BimoduleElem { m, tensor: MatrixExact::zeros(m * m, m * m) }
    }

    /// `1·Y·1`
    pub fn identity(m: usize) -> Self {
        BimoduleElem::from_terms(m, &[(MatrixExact::identity(m), MatrixExact::identity(m))])
    }

    pub fn from_terms(m: usize, terms: &[(MatrixExact, MatrixExact)]) -> Self {
        let mut tensor = MatrixExact::zeros(m * m, m * m);
        for (a, b) in terms {
            assert!(a.shape() == (m, m) && b.shape() == (m, m), "bimodule term shape");
            for i in 0..m {
                for ii in 0..m {
                    let av = &a[(i, ii)];
                    if av.is_zero() {
                        continue;
                    }
                    for jj in 0..m {
                        for j in 0..m {
                            let bv = &b[(jj, j)];
                            if !bv.is_zero() {
                                tensor[(i * m + j, ii * m + jj)].add_mul(av, bv);
                            }
                        }
                    }
                }
            }
        }
        BimoduleElem { m, tensor }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.is_zero()
    }

    /// At most `m²` terms `E_{iı}·Y·b`, one per nonzero `(i, ı)`.
    pub fn terms(&self) -> Vec<(MatrixExact, MatrixExact)> {
        let m = self.m;
        let mut out = Vec::new();
        for i in 0..m {
            for ii in 0..m {
                let mut b = MatrixExact::zeros(m, m);
                for jj in 0..m {
                    for j in 0..m {
                        b[(jj, j)] = self.tensor[(i * m + j, ii * m + jj)].clone();
                    }
                }
                if !b.is_zero() {
                    out.push((MatrixExact::unit(m, i, ii), b));
                }
            }
        }
        out
    }

    /// Coefficient of `𝔶_{ıȷ}` in entry `(i, j)` of the reduced element.
    pub fn reduced_coeff(&self, i: usize, j: usize, ii: usize, jj: usize) -> &Scalar {
        &self.tensor[(i * self.m + j, ii * self.m + jj)]
    }

    /// Value at `Y = z` for `z` of size `m·s`, with `a ↦ a⊗I_s`.
    pub fn eval(&self, z: &MatrixExact) -> MatrixExact {
        let s = z.rows() / self.m;
        let id = MatrixExact::identity(s);
        let mut acc = MatrixExact::zeros(z.rows(), z.cols());
        for (a, b) in self.terms() {
            acc = &acc + &(&(&a.kron(&id) * z) * &b.kron(&id));
        }
        acc
    }
}

/// Linear representation `(c, A, b)` of dimension `n` about a base point.
#[derive(Clone, Debug)]
pub struct LinRep {
    basepoint: Arc<Basepoint>,
    n: usize,
    rep: ScalarRep,
}

impl PartialEq for LinRep {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rep == other.rep && same_basepoint(&self.basepoint, &other.basepoint)
    }
}

fn same_basepoint(a: &Arc<Basepoint>, b: &Arc<Basepoint>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl LinRep {
    /// Constant series `a` (Thm-style `(a, 0, 1)`), dimension 1.
    pub fn rep_const(bp: &Arc<Basepoint>, a: &MatrixExact) -> LinRep {
        LinRep { basepoint: bp.clone(), n: 1, rep: ScalarRep::constant(a, bp.num_scalar_letters()) }
    }

    /// `Y_k + shift`, dimension 2.
    pub fn rep_var(bp: &Arc<Basepoint>, k: usize, shift: &MatrixExact) -> LinRep {
        let m = bp.m();
        let id = MatrixExact::identity(m);
        let c = MatrixExact::hstack(&[&id, shift]).expect("m rows");
        let b = MatrixExact::vstack(&[&MatrixExact::zeros(m, m), &id]).expect("m cols");
        let mut mats = vec![SparseMatrix::zeros(2 * m, 2 * m); bp.num_scalar_letters()];
        for i in 0..m {
            for j in 0..m {
                mats[bp.scalar_letter(k, i, j)].add_at(i, m + j, &Scalar::one());
            }
        }
        LinRep { basepoint: bp.clone(), n: 2, rep: ScalarRep::new(c, mats, b).expect("shapes") }
    }

    /// The shifted letter `Y_k + p_k`, i.e. the letter itself about the base point.
    pub fn letter(bp: &Arc<Basepoint>, l: Letter) -> Result<LinRep, RealizationError> {
        let k = bp.index_of(l).ok_or(RealizationError::UnknownLetter(l))?;
        Ok(LinRep::rep_var(bp, k, bp.value(k)))
    }

    fn check(&self, other: &LinRep) -> Result<(), RealizationError> {
        if same_basepoint(&self.basepoint, &other.basepoint) {
            Ok(())
        } else {
            Err(RealizationError::BasepointMismatch)
        }
    }

    /// `s1 + a·s2`, dimension `n1 + n2`.
    pub fn rep_add(s1: &LinRep, a: &MatrixExact, s2: &LinRep) -> Result<LinRep, RealizationError> {
        s1.check(s2)?;
        Ok(LinRep { basepoint: s1.basepoint.clone(), n: s1.n + s2.n, rep: ScalarRep::add(&s1.rep, a, &s2.rep) })
    }

    /// `s1·s2`, dimension `n1 + n2`.
    pub fn rep_mul(s1: &LinRep, s2: &LinRep) -> Result<LinRep, RealizationError> {
        s1.check(s2)?;
        Ok(LinRep { basepoint: s1.basepoint.clone(), n: s1.n + s2.n, rep: ScalarRep::mul(&s1.rep, &s2.rep) })
    }

    /// `s^{-1}`, dimension `n + 1`.
    pub fn rep_inv(s: &LinRep) -> Result<LinRep, RealizationError> {
        let rep = s.rep.inv().map_err(|_| RealizationError::SingularConstantTerm)?;
        Ok(LinRep { basepoint: s.basepoint.clone(), n: s.n + 1, rep })
    }

    /// `−s`, same dimension.
    pub fn rep_neg(s: &LinRep) -> LinRep {
        LinRep { basepoint: s.basepoint.clone(), n: s.n, rep: s.rep.neg() }
    }

    /// Builds a representation from its blocks: `c` and `b` as lists of `n`
    /// matrices, and the nonzero state entries as `(k, p, q, element)`.
    pub fn from_blocks(
        bp: &Arc<Basepoint>,
        c: &[MatrixExact],
        entries: &[(usize, usize, usize, BimoduleElem)],
        b: &[MatrixExact],
    ) -> Result<LinRep, RealizationError> {
        let m = bp.m();
        let n = c.len();
        if b.len() != n || c.iter().chain(b).any(|x| x.shape() != (m, m)) {
            return Err(RealizationError::Matrix(MatrixError::DimensionMismatch {
                op: "from_blocks",
                left: (n, m),
                right: (b.len(), m),
            }));
        }
        let c_full = MatrixExact::hstack(&c.iter().collect::<Vec<_>>()).expect("m rows");
        let b_full = MatrixExact::vstack(&b.iter().collect::<Vec<_>>()).expect("m cols");
        let mut mats = vec![SparseMatrix::zeros(n * m, n * m); bp.num_scalar_letters()];
        for (k, p, q, e) in entries {
            assert!(*k < bp.g() && *p < n && *q < n && e.m() == m, "state entry out of range");
            for i in 0..m {
                for j in 0..m {
                    for ii in 0..m {
                        for jj in 0..m {
                            let v = e.reduced_coeff(i, j, ii, jj);
                            mats[bp.scalar_letter(*k, ii, jj)].add_at(p * m + i, q * m + j, v);
                        }
                    }
                }
            }
        }
        Ok(LinRep { basepoint: bp.clone(), n, rep: ScalarRep::new(c_full, mats, b_full)? })
    }

    pub fn basepoint(&self) -> &Arc<Basepoint> {
        &self.basepoint
    }

    /// Dimension `n` (number of `m×m` blocks).
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.basepoint.m()
    }

    pub fn g(&self) -> usize {
        self.basepoint.g()
    }

    pub fn c_block(&self, p: usize) -> MatrixExact {
        let m = self.m();
        self.rep.c().submatrix(0, p * m, m, m)
    }

    pub fn b_block(&self, p: usize) -> MatrixExact {
        let m = self.m();
        self.rep.b().submatrix(p * m, 0, m, m)
    }

    /// Entry `(p, q)` of the state matrix of letter `k`.
    pub fn entry(&self, k: usize, p: usize, q: usize) -> BimoduleElem {
        let m = self.m();
        let mut e = BimoduleElem::zero(m);
        for ii in 0..m {
            for jj in 0..m {
                let a = self.rep.a(self.basepoint.scalar_letter(k, ii, jj));
                for i in 0..m {
                    for j in 0..m {
                        e.tensor[(i * m + j, ii * m + jj)] = a.get(p * m + i, q * m + j);
                    }
                }
            }
        }
        e
    }

    /// `[S, 1] = c·b`
    pub fn constant_term(&self) -> MatrixExact {
        self.rep.constant_term()
    }

    /// The reduced representation over the `g·m²` scalar letters.
    pub fn scalarize(&self) -> ScalarRep {
        self.rep.clone()
    }

    pub fn as_scalar(&self) -> &ScalarRep {
        &self.rep
    }

    /// The coefficient `[S, w]` for a word of letter indices.
    pub fn coefficient(&self, word: &[usize]) -> GenPoly {
        let bp = &self.basepoint;
        let m = bp.m();
        let mut out = GenPoly::zero(m, bp.g());
        let mut scalar_word = Vec::with_capacity(word.len());
        let start: Vec<Vec<Scalar>> = (0..m).map(|i| self.rep.c().row(i).to_vec()).collect();
        self.collect_coefficients(word, &start, &mut scalar_word, &mut out);
        out
    }

    fn collect_coefficients(
        &self,
        word: &[usize],
        prefix: &[Vec<Scalar>],
        scalar_word: &mut Vec<usize>,
        out: &mut GenPoly,
    ) {
        if prefix.iter().all(|r| r.iter().all(Scalar::is_zero)) {
            return;
        }
        let m = self.m();
        let depth = scalar_word.len();
        if depth == word.len() {
            let coeff = &MatrixExact::from_rows(prefix.to_vec()).expect("rows") * self.rep.b();
            out.add_scalar_word(scalar_word, &coeff);
            return;
        }
        for ii in 0..m {
            for jj in 0..m {
                let l = self.basepoint.scalar_letter(word[depth], ii, jj);
                let next: Vec<Vec<Scalar>> = prefix.iter().map(|r| self.rep.a(l).left_mul_vec(r)).collect();
                scalar_word.push(l);
                self.collect_coefficients(word, &next, scalar_word, out);
                scalar_word.pop();
            }
        }
    }

    /// Exact zero test by Krylov closure on the reduced representation.
    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// Zero test by checking `[S, w] = 0` for every word with `|w| < m·n`.
    pub fn is_zero_by_enumeration(&self) -> bool {
        let bound = self.m() * self.n;
        let mut zero = true;
        self.rep.for_each_coefficient(bound.max(1), &mut |_, c| {
            zero = c.is_zero();
            zero
        });
        zero
    }

    /// Scalar-level minimization and its state dimension.
    pub fn minimize_scalar(&self) -> (ScalarRep, usize) {
        let r = self.rep.minimize();
        let d = r.dim();
        (r, d)
    }

    /// Value `c(I − ΣA)^{-1}b` with `Y_k = point_k − p_k⊗I_s`.
    pub fn eval(&self, point: &[MatrixExact]) -> Result<MatrixExact, RealizationError> {
        let bp = &self.basepoint;
        let m = bp.m();
        assert_eq!(point.len(), bp.g(), "one matrix per base point letter");
        let size = point.first().map_or(m, MatrixExact::rows);
        if size == 0 || !size.is_multiple_of(m) || point.iter().any(|x| x.shape() != (size, size)) {
            return Err(RealizationError::PointSize { size, m });
        }
        let s = size / m;
        let id = MatrixExact::identity(s);
        let mut z = Vec::with_capacity(bp.num_scalar_letters());
        for (k, x) in point.iter().enumerate() {
            let y = x - &bp.value(k).kron(&id);
            for i in 0..m {
                for j in 0..m {
                    z.push(y.submatrix(i * s, j * s, s, s));
                }
            }
        }
        self.rep.eval(&z).map_err(|e| match e {
            MatrixError::Singular => RealizationError::ResolventSingular,
            other => RealizationError::Matrix(other),
        })
    }

    /// [`LinRep::eval`] at a point binding the base point letters.
    pub fn eval_point(&self, point: &PointExact) -> Result<MatrixExact, RealizationError> {
        let mats = self
            .basepoint
            .letters()
            .iter()
            .map(|l| point.get(*l).map(|m| m.into_owned()).map_err(|_| RealizationError::UnknownLetter(*l)))
            .collect::<Result<Vec<_>, _>>()?;
        self.eval(&mats)
    }
}

/// Compiles `e` about `bp` into a realization of `e(p + y)` using the generic
/// construction rules. `leaves` overrides letters with given realizations.
pub fn compile(e: &RatExpr, bp: &Arc<Basepoint>) -> Result<LinRep, RealizationError> {
    compile_with(e, bp, &BTreeMap::new())
}

pub fn compile_with(
    e: &RatExpr,
    bp: &Arc<Basepoint>,
    leaves: &BTreeMap<Letter, LinRep>,
) -> Result<LinRep, RealizationError> {
    for leaf in leaves.values() {
        if !same_basepoint(leaf.basepoint(), bp) {
            return Err(RealizationError::BasepointMismatch);
        }
    }
    let scalar_leaves: BTreeMap<Letter, ScalarRep> = leaves.iter().map(|(l, r)| (*l, r.rep.clone())).collect();
    let rep = compile_scalar(e, bp, &scalar_leaves, false)?;
    let n = rep.dim() / bp.m();
    Ok(LinRep { basepoint: bp.clone(), n, rep })
}

/// Compilation directly on reduced representations. With `minimize`, every
/// intermediate sum and product is minimized, which keeps state dimensions
/// small for long polynomial inputs; the represented series is unchanged.
pub fn compile_scalar(
    e: &RatExpr,
    bp: &Arc<Basepoint>,
    leaves: &BTreeMap<Letter, ScalarRep>,
    minimize: bool,
) -> Result<ScalarRep, RealizationError> {
    let mut path = Vec::new();
    Compiler { bp, leaves, minimize }.run(e, &mut path)
}

struct Compiler<'a> {
    bp: &'a Arc<Basepoint>,
    leaves: &'a BTreeMap<Letter, ScalarRep>,
    minimize: bool,
}

impl Compiler<'_> {
    fn tidy(&self, r: ScalarRep) -> ScalarRep {
        if self.minimize {
            r.minimize()
        } else {
            r
        }
    }

    fn run(&self, e: &RatExpr, path: &mut NodePath) -> Result<ScalarRep, RealizationError> {
        let m = self.bp.m();
        let letters = self.bp.num_scalar_letters();
        Ok(match e {
            RatExpr::Const(s) => ScalarRep::constant(&MatrixExact::scalar_identity(m, s.clone()), letters),
            RatExpr::Var(l) => match self.leaves.get(l) {
                Some(r) => r.clone(),
                None => LinRep::letter(self.bp, *l)?.rep,
            },
            RatExpr::Add(items) => {
                let mut acc: Option<ScalarRep> = None;
                for (k, item) in items.iter().enumerate() {
                    path.push(k);
                    let (sign, rep) = match item {
                        RatExpr::Neg(inner) => {
                            path.push(0);
                            let r = self.run(inner, path)?;
                            path.pop();
                            (-1, r)
                        }
                        _ => (1, self.run(item, path)?),
                    };
                    path.pop();
                    acc = Some(match acc {
                        None if sign == 1 => rep,
                        None => rep.neg(),
                        Some(a) => {
                            let coeff = MatrixExact::scalar_identity(m, Scalar::from_int(sign));
                            self.tidy(ScalarRep::add(&a, &coeff, &rep))
                        }
                    });
                }
                acc.expect("nonempty sum")
            }
            RatExpr::Neg(inner) => {
                path.push(0);
                let r = self.run(inner, path)?;
                path.pop();
                r.neg()
            }
            RatExpr::Mul(items) => {
                let mut acc: Option<ScalarRep> = None;
                for (k, item) in items.iter().enumerate() {
                    path.push(k);
                    let rep = self.run(item, path)?;
                    path.pop();
                    acc = Some(match acc {
                        None => rep,
                        Some(a) => self.tidy(ScalarRep::mul(&a, &rep)),
                    });
                }
                acc.expect("nonempty product")
            }
            RatExpr::Inv(inner) => {
                path.push(0);
                let r = self.run(inner, path)?;
                path.pop();
                let inv = r.inv().map_err(|_| RealizationError::Domain { path: path.clone() })?;
                self.tidy(inv)
            }
        })
    }
}

#[cfg(test)]
mod tests;
