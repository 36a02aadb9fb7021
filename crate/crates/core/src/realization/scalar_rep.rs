//! Scalarized realizations `(C, Â, B)` over the reduced letters and the
//! exact algorithms that run on them: arithmetic, coefficients, the Krylov
//! zero test, minimization and evaluation.

use std::collections::VecDeque;

use super::sparse::SparseMatrix;
use crate::matrix::{MatrixError, MatrixExact};
use crate::scalar::Scalar;

/// Realization of an `m×m` matrix of series in `letters` scalar letters:
/// coefficient of the word `ℓ1…ℓr` is `C·Â_{ℓ1}⋯Â_{ℓr}·B`.
#[derive(Clone, PartialEq, Debug)]
pub struct ScalarRep {
    m: usize,
    c: MatrixExact,
    a: Vec<SparseMatrix>,
    b: MatrixExact,
}

impl ScalarRep {
    pub fn new(c: MatrixExact, a: Vec<SparseMatrix>, b: MatrixExact) -> Result<Self, MatrixError> {
        let (m, n) = c.shape();
        let bad = |right| MatrixError::DimensionMismatch { op: "scalar realization", left: (m, n), right };
        if b.shape() != (n, m) {
            return Err(bad(b.shape()));
        }
        if let Some(x) = a.iter().find(|x| (x.rows(), x.cols()) != (n, n)) {
            return Err(bad((x.rows(), x.cols())));
        }
        Ok(ScalarRep { m, c, a, b })
    }

    /// The constant series `value` (an `m×m` matrix).
    pub fn constant(value: &MatrixExact, letters: usize) -> Self {
        let m = value.rows();
        ScalarRep { m, c: value.clone(), a: vec![SparseMatrix::zeros(m, m); letters], b: MatrixExact::identity(m) }
    }

    /// The zero series with state dimension 0.
    pub fn zero(m: usize, letters: usize) -> Self {
        ScalarRep {
            m,
            c: MatrixExact::zeros(m, 0),
            a: vec![SparseMatrix::zeros(0, 0); letters],
            b: MatrixExact::zeros(0, m),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// State dimension (the `mn` of a structured realization).
    pub fn dim(&self) -> usize {
        self.c.cols()
    }

    pub fn num_letters(&self) -> usize {
        self.a.len()
    }

    pub fn c(&self) -> &MatrixExact {
        &self.c
    }

    pub fn b(&self) -> &MatrixExact {
        &self.b
    }

    pub fn a(&self, letter: usize) -> &SparseMatrix {
        &self.a[letter]
    }

    pub fn state_matrices(&self) -> &[SparseMatrix] {
        &self.a
    }

    /// `s1 + a·s2`
    pub fn add(s1: &ScalarRep, a: &MatrixExact, s2: &ScalarRep) -> ScalarRep {
        let (n1, n2) = (s1.dim(), s2.dim());
        let c2 = a * &s2.c;
        let mats =
            s1.a.iter()
                .zip(&s2.a)
                .map(|(x, y)| SparseMatrix::block2(Some(x), None, Some(y), ((n1, n1), (n2, n2))))
                .collect();
        ScalarRep {
            m: s1.m,
            c: MatrixExact::hstack(&[&s1.c, &c2]).expect("row counts agree"),
            a: mats,
            b: MatrixExact::vstack(&[&s1.b, &s2.b]).expect("column counts agree"),
        }
    }

    /// `s1·s2`
    pub fn mul(s1: &ScalarRep, s2: &ScalarRep) -> ScalarRep {
        let (n1, n2) = (s1.dim(), s2.dim());
        let q = &s1.b * &s2.c;
        let c1q = &s1.c * &q;
        let mats =
            s1.a.iter()
                .zip(&s2.a)
                .map(|(x, y)| {
                    let top_right = x.mul_dense(&q);
                    SparseMatrix::block2(Some(x), Some(&top_right), Some(y), ((n1, n1), (n2, n2)))
                })
                .collect();
        ScalarRep {
            m: s1.m,
            c: MatrixExact::hstack(&[&s1.c, &c1q]).expect("row counts agree"),
            a: mats,
            b: MatrixExact::vstack(&[&MatrixExact::zeros(n1, s1.m), &s2.b]).expect("column counts agree"),
        }
    }

    /// The constant coefficient `C·B`.
    pub fn constant_term(&self) -> MatrixExact {
        &self.c * &self.b
    }

    /// Inverse series; fails when the constant coefficient is singular.
    pub fn inv(&self) -> Result<ScalarRep, MatrixError> {
        let n = self.dim();
        let m = self.m;
        let ainv = self.constant_term().inverse()?;
        let ainv_c = &ainv * &self.c;
        let mats = self
            .a
            .iter()
            .map(|x| {
                let k = x.mul_dense(&self.b);
                let mut rows = Vec::with_capacity(n);
                for i in 0..n {
                    let mut dense = vec![Scalar::zero(); n];
                    for (j, v) in x.row(i) {
                        dense[*j] = v.clone();
                    }
                    for (t, kv) in k.row(i).iter().enumerate() {
                        if kv.is_zero() {
                            continue;
                        }
                        for (j, cv) in ainv_c.row(t).iter().enumerate() {
                            if !cv.is_zero() {
                                dense[j] -= &(kv * cv);
                            }
                        }
                    }
                    rows.push(dense);
                }
                let top_left = SparseMatrix::from_dense_rows(rows, n);
                let top_right = &k * &ainv;
                SparseMatrix::block2(Some(&top_left), Some(&top_right), None, ((n, n), (m, m)))
            })
            .collect();
        Ok(ScalarRep {
            m,
            c: MatrixExact::hstack(&[&ainv_c.neg(), &ainv]).expect("row counts agree"),
            a: mats,
            b: MatrixExact::vstack(&[&MatrixExact::zeros(n, m), &MatrixExact::identity(m)])
                .expect("column counts agree"),
        })
    }

    /// `a·self` for a constant `a`.
    pub fn scale_left(&self, a: &MatrixExact) -> ScalarRep {
        ScalarRep { c: a * &self.c, ..self.clone() }
    }

    pub fn neg(&self) -> ScalarRep {
        ScalarRep { c: self.c.neg(), ..self.clone() }
    }

    /// Coefficient `C·Â_{w1}⋯Â_{wr}·B` of a scalar-letter word.
    pub fn coefficient(&self, word: &[usize]) -> MatrixExact {
        let mut rows: Vec<Vec<Scalar>> = (0..self.m).map(|i| self.c.row(i).to_vec()).collect();
        for &l in word {
            rows = rows.iter().map(|r| self.a[l].left_mul_vec(r)).collect();
        }
        self.rows_times_b(&rows)
    }

    /// Visits every word of length `< max_len` with its coefficient, depth first
    /// in lexicographic order; stops early when `visit` returns `false`.
    pub fn for_each_coefficient(&self, max_len: usize, visit: &mut dyn FnMut(&[usize], &MatrixExact) -> bool) {
        let start: Vec<Vec<Scalar>> = (0..self.m).map(|i| self.c.row(i).to_vec()).collect();
        let mut word = Vec::new();
        self.dfs(&start, max_len, &mut word, visit);
    }

    fn dfs(
        &self,
        prefix: &[Vec<Scalar>],
        max_len: usize,
        word: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize], &MatrixExact) -> bool,
    ) -> bool {
        if word.len() >= max_len {
            return true;
        }
        let coeff = self.rows_times_b(prefix);
        if !visit(word, &coeff) {
            return false;
        }
        if word.len() + 1 >= max_len || prefix.iter().all(|r| r.iter().all(Scalar::is_zero)) {
            return true;
        }
        for l in 0..self.a.len() {
            let next: Vec<Vec<Scalar>> = prefix.iter().map(|r| self.a[l].left_mul_vec(r)).collect();
            word.push(l);
            let go_on = self.dfs(&next, max_len, word, visit);
            word.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    fn rows_times_b(&self, rows: &[Vec<Scalar>]) -> MatrixExact {
        let mut out = MatrixExact::zeros(self.m, self.m);
        for (i, r) in rows.iter().enumerate() {
            for (k, rv) in r.iter().enumerate() {
                if rv.is_zero() {
                    continue;
                }
                for (j, bv) in self.b.row(k).iter().enumerate() {
                    out[(i, j)].add_mul(rv, bv);
                }
            }
        }
        out
    }

    /// Exact zero test: the observable space spanned by the rows of
    /// `C·Â^w` must be annihilated by `B`. Stops at the first witness.
    pub fn is_zero(&self) -> bool {
        let n = self.dim();
        let mut basis = Echelon::new(n);
        let mut pending: VecDeque<(usize, usize)> = VecDeque::new();
        let mut seeds: VecDeque<Vec<Scalar>> = (0..self.m).map(|i| self.c.row(i).to_vec()).collect();
        loop {
            let candidate = if let Some(v) = seeds.pop_front() {
                v
            } else if let Some((idx, l)) = pending.pop_front() {
                self.a[l].left_mul_vec(&basis.dense(idx))
            } else {
                return true;
            };
            if let Some(idx) = basis.insert(candidate) {
                let v = basis.dense(idx);
                let vb = self.b.transpose_mul_vec(&v);
                if vb.iter().any(|x| !x.is_zero()) {
                    return false;
                }
                pending.extend((0..self.a.len()).map(|l| (idx, l)));
            }
        }
    }

    /// Zero test by checking every coefficient of length `< dim()`.
    pub fn is_zero_by_enumeration(&self) -> bool {
        let mut zero = true;
        let n = self.dim();
        self.for_each_coefficient(n.max(1), &mut |_, c| {
            zero = c.is_zero();
            zero
        });
        zero
    }

    /// Restriction to the reachable space followed by the quotient by the
    /// unobservable space. Every coefficient is preserved.
    pub fn minimize(&self) -> ScalarRep {
        let reach = self.reachable_basis();
        let restricted = self.restrict(&reach);
        let obs = restricted.observable_basis();
        restricted.corestrict(&obs)
    }

    /// Basis of the span of the columns of `Â^w·B`.
    pub fn reachable_basis(&self) -> Echelon {
        let n = self.dim();
        let mut basis = Echelon::new(n);
        let mut pending: VecDeque<(usize, usize)> = VecDeque::new();
        let mut seeds: VecDeque<Vec<Scalar>> = (0..self.m).map(|j| self.b.column(j)).collect();
        loop {
            let candidate = if let Some(v) = seeds.pop_front() {
                v
            } else if let Some((idx, l)) = pending.pop_front() {
                self.a[l].mul_vec(&basis.dense(idx))
            } else {
                return basis;
            };
            if let Some(idx) = basis.insert(candidate) {
                pending.extend((0..self.a.len()).map(|l| (idx, l)));
            }
        }
    }

    /// Basis of the span of the rows of `C·Â^w`.
    pub fn observable_basis(&self) -> Echelon {
        let n = self.dim();
        let mut basis = Echelon::new(n);
        let mut pending: VecDeque<(usize, usize)> = VecDeque::new();
        let mut seeds: VecDeque<Vec<Scalar>> = (0..self.m).map(|i| self.c.row(i).to_vec()).collect();
        loop {
            let candidate = if let Some(v) = seeds.pop_front() {
                v
            } else if let Some((idx, l)) = pending.pop_front() {
                self.a[l].left_mul_vec(&basis.dense(idx))
            } else {
                return basis;
            };
            if let Some(idx) = basis.insert(candidate) {
                pending.extend((0..self.a.len()).map(|l| (idx, l)));
            }
        }
    }

    /// Realization on an invariant subspace containing the columns of `B`.
    fn restrict(&self, basis: &Echelon) -> ScalarRep {
        let r = basis.len();
        let coords = |x: Vec<Scalar>| basis.coordinates(x).expect("vector lies in the invariant subspace");
        let mut b = MatrixExact::zeros(r, self.m);
        for j in 0..self.m {
            for (i, v) in coords(self.b.column(j)).into_iter().enumerate() {
                b[(i, j)] = v;
            }
        }
        let mats = self
            .a
            .iter()
            .map(|x| {
                let mut cols = MatrixExact::zeros(r, r);
                for k in 0..r {
                    for (i, v) in coords(x.mul_vec(&basis.dense(k))).into_iter().enumerate() {
                        cols[(i, k)] = v;
                    }
                }
                SparseMatrix::from_dense(&cols)
            })
            .collect();
        let mut c = MatrixExact::zeros(self.m, r);
        for k in 0..r {
            let col = self.c.mul_vec(&basis.dense(k));
            for (i, v) in col.into_iter().enumerate() {
                c[(i, k)] = v;
            }
        }
        ScalarRep { m: self.m, c, a: mats, b }
    }

    /// Quotient onto an invariant row space containing the rows of `C`.
    fn corestrict(&self, basis: &Echelon) -> ScalarRep {
        let o = basis.len();
        let coords = |x: Vec<Scalar>| basis.coordinates(x).expect("row lies in the invariant row space");
        let c_rows: Vec<Vec<Scalar>> = (0..self.m).map(|i| coords(self.c.row(i).to_vec())).collect();
        let c = MatrixExact::from_vec(self.m, o, c_rows.into_iter().flatten().collect()).expect("shape");
        let mats = self
            .a
            .iter()
            .map(|x| {
                let rows = (0..o).map(|k| coords(x.left_mul_vec(&basis.dense(k)))).collect();
                SparseMatrix::from_dense_rows(rows, o)
            })
            .collect();
        let mut b = MatrixExact::zeros(o, self.m);
        for k in 0..o {
            let row = self.b.transpose_mul_vec(&basis.dense(k));
            for (j, v) in row.into_iter().enumerate() {
                b[(k, j)] = v;
            }
        }
        ScalarRep { m: self.m, c, a: mats, b }
    }

    /// Value `(C⊗I)(I − Σ Â_ℓ⊗Z_ℓ)^{-1}(B⊗I)` for `s×s` letter values `Z_ℓ`.
    pub fn eval(&self, z: &[MatrixExact]) -> Result<MatrixExact, MatrixError> {
        assert_eq!(z.len(), self.a.len(), "one value per scalar letter");
        let s = z.first().map_or(1, MatrixExact::rows);
        let n = self.dim();
        let mut system = MatrixExact::identity(n * s);
        for (x, zl) in self.a.iter().zip(z) {
            if zl.is_zero() {
                continue;
            }
            for p in 0..n {
                for (q, v) in x.row(p) {
                    for al in 0..s {
                        for be in 0..s {
                            let zv = &zl[(al, be)];
                            if !zv.is_zero() {
                                let e = &mut system[(p * s + al, q * s + be)];
                                *e -= &(v * zv);
                            }
                        }
                    }
                }
            }
        }
        let id = MatrixExact::identity(s);
        let rhs = self.b.kron(&id);
        let x = system.solve(&rhs)?;
        Ok(&self.c.kron(&id) * &x)
    }
}

/// Row-echelon basis with unit pivots, kept sparse; supports exact
/// membership and coordinates relative to insertion order.
#[derive(Clone, Debug)]
pub struct Echelon {
    n: usize,
    vectors: Vec<Vec<(usize, Scalar)>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(n: usize) -> Self {
        Echelon { n, vectors: Vec::new(), pivots: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dense(&self, idx: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.n];
        for (j, v) in &self.vectors[idx] {
            out[*j] = v.clone();
        }
        out
    }

    /// Reduces `x` in place; returns the multipliers of the basis vectors.
    fn reduce(&self, x: &mut [Scalar]) -> Vec<Scalar> {
        let mut coeffs = Vec::with_capacity(self.vectors.len());
        for (vec, &p) in self.vectors.iter().zip(&self.pivots) {
            let f = x[p].clone();
            if !f.is_zero() {
                for (j, v) in vec {
                    x[*j] -= &(&f * v);
                }
            }
            coeffs.push(f);
        }
        coeffs
    }

    /// Adds `x` if independent; returns its index.
    pub fn insert(&mut self, mut x: Vec<Scalar>) -> Option<usize> {
        self.reduce(&mut x);
        let p = x.iter().position(|v| !v.is_zero())?;
        let inv = x[p].inv().expect("nonzero pivot");
        let vec: Vec<(usize, Scalar)> =
            x.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, &v * &inv)).collect();
        self.vectors.push(vec);
        self.pivots.push(p);
        Some(self.vectors.len() - 1)
    }

    /// Coordinates of `x` in the basis, or `None` if outside the span.
    pub fn coordinates(&self, mut x: Vec<Scalar>) -> Option<Vec<Scalar>> {
        let coeffs = self.reduce(&mut x);
        x.iter().all(Scalar::is_zero).then_some(coeffs)
    }
}

impl MatrixExact {
    pub(crate) fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows()).map(|i| self[(i, j)].clone()).collect()
    }

    /// `self · x`
    pub(crate) fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows())
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(x) {
                    acc.add_mul(a, b);
                }
                acc
            })
            .collect()
    }

    /// `x · self` as a row.
    pub(crate) fn transpose_mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.cols()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, v) in self.row(i).iter().enumerate() {
                out[j].add_mul(xi, v);
            }
        }
        out
    }
}
