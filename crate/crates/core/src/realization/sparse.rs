//! Row-sparse exact matrices for the per-letter state matrices of a realization.

use crate::matrix::MatrixExact;
use crate::scalar::Scalar;

/// Row-major sparse matrix; each row holds `(column, value)` pairs sorted by
/// column with no explicit zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Scalar)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn from_dense(m: &MatrixExact) -> Self {
        let data = (0..m.rows())
            .map(|i| m.row(i).iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect())
            .collect();
        SparseMatrix { rows: m.rows(), cols: m.cols(), data }
    }

    pub fn to_dense(&self) -> MatrixExact {
        let mut out = MatrixExact::zeros(self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                out[(i, *j)] = v.clone();
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, Scalar)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    /// Adds `v` at `(i, j)`.
    pub fn add_at(&mut self, i: usize, j: usize, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => {
                row[k].1 += v;
                if row[k].1.is_zero() {
                    row.remove(k);
                }
            }
            Err(k) => row.insert(k, (j, v.clone())),
        }
    }

    /// Replaces row `i` by the nonzero entries of a dense vector.
    fn set_row_dense(&mut self, i: usize, dense: Vec<Scalar>, offset: usize) {
        self.data[i].retain(|(c, _)| *c < offset || *c >= offset + dense.len());
        for (j, v) in dense.into_iter().enumerate() {
            if !v.is_zero() {
                self.data[i].push((offset + j, v));
            }
        }
        self.data[i].sort_by_key(|(c, _)| *c);
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return SparseMatrix::zeros(self.rows, self.cols);
        }
        let data = self.data.iter().map(|r| r.iter().map(|(j, v)| (*j, v * s)).collect()).collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Row vector times matrix: `u · self`.
    pub fn left_mul_vec(&self, u: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.cols];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, v) in &self.data[i] {
                out[*j].add_mul(ui, v);
            }
        }
        out
    }

    /// Matrix times column vector: `self · x`.
    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.data
            .iter()
            .map(|row| {
                let mut acc = Scalar::zero();
                for (j, v) in row {
                    acc.add_mul(v, &x[*j]);
                }
                acc
            })
            .collect()
    }

    /// `self · d` for a dense right factor, returned dense.
    pub fn mul_dense(&self, d: &MatrixExact) -> MatrixExact {
        assert_eq!(self.cols, d.rows(), "sparse-dense product shape");
        let mut out = MatrixExact::zeros(self.rows, d.cols());
        for (i, row) in self.data.iter().enumerate() {
            for (k, v) in row {
                for (j, dv) in d.row(*k).iter().enumerate() {
                    if !dv.is_zero() {
                        out[(i, j)].add_mul(v, dv);
                    }
                }
            }
        }
        out
    }

    /// `d · self` for a dense left factor, returned dense.
    pub fn dense_mul(d: &MatrixExact, s: &SparseMatrix) -> MatrixExact {
        assert_eq!(d.cols(), s.rows, "dense-sparse product shape");
        let mut out = MatrixExact::zeros(d.rows(), s.cols);
        for i in 0..d.rows() {
            let row = s.left_mul_vec(d.row(i));
            for (j, v) in row.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Block matrix `[[a, b], [c, d]]`; `None` blocks are zero.
    pub fn block2(
        a: Option<&SparseMatrix>,
        b: Option<&MatrixExact>,
        d: Option<&SparseMatrix>,
        shape: ((usize, usize), (usize, usize)),
    ) -> SparseMatrix {
        let ((r1, c1), (r2, c2)) = shape;
        let mut out = SparseMatrix::zeros(r1 + r2, c1 + c2);
        if let Some(a) = a {
            for i in 0..r1 {
                out.data[i].extend(a.data[i].iter().cloned());
            }
        }
        if let Some(b) = b {
            for i in 0..r1 {
                let dense: Vec<Scalar> = b.row(i).to_vec();
                out.set_row_dense(i, dense, c1);
            }
        }
        if let Some(d) = d {
            for i in 0..r2 {
                out.data[r1 + i].extend(d.data[i].iter().map(|(j, v)| (c1 + j, v.clone())));
            }
        }
        out
    }

    /// Copy restricted to rows/cols in the given index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut pos = vec![usize::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            pos[c] = k;
        }
        let data = rows
            .iter()
            .map(|&r| {
                let mut row: Vec<(usize, Scalar)> = self.data[r]
                    .iter()
                    .filter(|(c, _)| pos[*c] != usize::MAX)
                    .map(|(c, v)| (pos[*c], v.clone()))
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                row
            })
            .collect();
        SparseMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Builds from dense rows, dropping zeros.
    pub fn from_dense_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> SparseMatrix {
        let n = rows.len();
        let data =
            rows.into_iter().map(|r| r.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()).collect();
        SparseMatrix { rows: n, cols, data }
    }
}
