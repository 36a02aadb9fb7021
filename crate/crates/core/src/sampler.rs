//! Random structured matrix tuples and numeric falsification.
//!
//! Every random draw is keyed by `(seed, stream)`: the generator is ChaCha8
//! seeded with `seed` and positioned on stream `stream`, so trials can run
//! in parallel and still reproduce bit for bit.

use std::f64::consts::PI;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{MatrixExact, MatrixFloat};
use crate::ncpoly::{Letter, NcPoly};
use crate::point::{PointExact, PointFloat, StarRule};
use crate::ratexpr::RatExpr;
use crate::scalar::Scalar;

/// Structural residuals of sampler outputs stay below this.
pub const RESIDUAL_TOL: f64 = 1e-10;

const MAX_RESAMPLES: usize = 20;
const MAX_CONDITION: f64 = 1e4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("no well-conditioned sample after {0} attempts")]
    ConditioningFailure(usize),
    #[error("invalid domain: {0}")]
    BadDomain(String),
}

/// The generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian (`E|z|² = 1`) by Box–Muller.
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    let r = (-u1.ln()).sqrt();
    let t = 2.0 * PI * u2;
    Complex64::new(r * t.cos(), r * t.sin())
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> MatrixFloat {
    let data = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    MatrixFloat::from_vec(rows, cols, data).expect("shape")
}

pub(crate) fn to_na(a: &MatrixFloat) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.data())
}

pub(crate) fn from_na(a: &DMatrix<Complex64>) -> MatrixFloat {
    let mut data = Vec::with_capacity(a.len());
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            data.push(a[(i, j)]);
        }
    }
    MatrixFloat::from_vec(a.nrows(), a.ncols(), data).expect("shape")
}

/// Orthonormal columns from a Gaussian matrix: QR with the phases of the
/// diagonal of `R` moved into `Q`.
fn isometry(rows: usize, cols: usize, rng: &mut impl Rng) -> MatrixFloat {
    let z = to_na(&gaussian_matrix(rows, cols, rng));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..rows {
            q[(i, j)] *= phase;
        }
    }
    from_na(&q)
}

pub fn haar_unitary_with(n: usize, rng: &mut impl Rng) -> MatrixFloat {
    isometry(n, n, rng)
}

pub fn haar_unitary(n: usize, seed: u64) -> MatrixFloat {
    haar_unitary_with(n, &mut stream_rng(seed, 0))
}

pub fn spherical_isometry_tuple_with(g: usize, n: usize, rng: &mut impl Rng) -> Vec<MatrixFloat> {
    let v = isometry(g * n, n, rng);
    (0..g).map(|j| v.submatrix(j * n, 0, n, n)).collect()
}

/// `g` blocks `A_j` of size `n` with `Σ A_j^* A_j = I`.
pub fn spherical_isometry_tuple(g: usize, n: usize, seed: u64) -> Vec<MatrixFloat> {
    spherical_isometry_tuple_with(g, n, &mut stream_rng(seed, 0))
}

pub fn partitioned_unitary_with(g: usize, n: usize, rng: &mut impl Rng) -> Vec<Vec<MatrixFloat>> {
    let u = haar_unitary_with(g * n, rng);
    (0..g).map(|i| (0..g).map(|j| u.submatrix(i * n, j * n, n, n)).collect()).collect()
}

/// A Haar unitary of size `g·n` cut into a `g×g` array of `n×n` blocks.
pub fn partitioned_unitary(g: usize, n: usize, seed: u64) -> Vec<Vec<MatrixFloat>> {
    partitioned_unitary_with(g, n, &mut stream_rng(seed, 0))
}

fn condition_number(a: &MatrixFloat) -> f64 {
    let sv = to_na(a).singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn xgn_point_with(
    g: usize,
    n: usize,
    rng: &mut impl Rng,
) -> Result<(Vec<MatrixFloat>, Vec<MatrixFloat>), SamplerError> {
    let scale = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let b: Vec<MatrixFloat> = (0..g).map(|_| gaussian_matrix(n, n, rng).scale(&scale)).collect();
    let mut a: Vec<MatrixFloat> = (1..g).map(|_| gaussian_matrix(n, n, rng).scale(&scale)).collect();
    let mut rest = MatrixFloat::identity(n);
    for (ak, bk) in a.iter().zip(&b[1..]) {
        rest = &rest - &(ak * bk);
    }
    let mut b1 = b[0].clone();
    for _ in 0..MAX_RESAMPLES {
        if condition_number(&b1) <= MAX_CONDITION {
            let inv = to_na(&b1).try_inverse().ok_or(SamplerError::ConditioningFailure(MAX_RESAMPLES))?;
            a.insert(0, &rest * &from_na(&inv));
            let mut bs = b;
            bs[0] = b1;
            return Ok((a, bs));
        }
        b1 = gaussian_matrix(n, n, rng).scale(&scale);
    }
    Err(SamplerError::ConditioningFailure(MAX_RESAMPLES))
}

/// `(A, B)` with `Σ_k A_k B_k = I_n`: random `B` and `A_{k≥2}`, then solve for `A_1`.
pub fn xgn_point(g: usize, n: usize, seed: u64) -> Result<(Vec<MatrixFloat>, Vec<MatrixFloat>), SamplerError> {
    xgn_point_with(g, n, &mut stream_rng(seed, 0))
}

/// Least eigenvalue of the Hermitian part `(M + M^*)/2`.
pub fn min_hermitian_eigenvalue(m: &MatrixFloat) -> f64 {
    let herm = (m + &m.conjugate_transpose()).scale(&Complex64::new(0.5, 0.0));
    let eig = to_na(&herm).symmetric_eigenvalues();
    eig.iter().cloned().fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Unitaries,
    Spherical,
    Partitioned,
    Xgn,
    Unrestricted,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainKind::Unitaries => "unitaries",
            DomainKind::Spherical => "spherical",
            DomainKind::Partitioned => "partitioned",
            DomainKind::Xgn => "xgn",
            DomainKind::Unrestricted => "unrestricted",
        })
    }
}

impl FromStr for DomainKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "unitaries" => DomainKind::Unitaries,
            "spherical" => DomainKind::Spherical,
            "partitioned" => DomainKind::Partitioned,
            "xgn" => DomainKind::Xgn,
            "unrestricted" => DomainKind::Unrestricted,
            other => return Err(format!("unknown domain `{other}`")),
        })
    }
}

/// A family of matrix tuples. Sizes are passed per sample; for partitioned
/// unitaries the size is the block size and the letters are `X_{(i-1)g+j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDomain {
    pub kind: DomainKind,
    pub g: usize,
}

impl SampleDomain {
    pub fn new(kind: DomainKind, g: usize) -> Result<Self, SamplerError> {
        if g == 0 {
            return Err(SamplerError::BadDomain("g must be at least 1".into()));
        }
        Ok(SampleDomain { kind, g })
    }

    /// Letters bound by a sample.
    pub fn letters(&self) -> Vec<Letter> {
        let g = self.g as u32;
        match self.kind {
            DomainKind::Partitioned => (1..=g * g).map(Letter::x).collect(),
            DomainKind::Xgn => (1..=g).map(Letter::x).chain((1..=g).map(Letter::y)).collect(),
            _ => (1..=g).map(Letter::x).collect(),
        }
    }

    /// Star domains bind `X^*` to the adjoint; `xgn` points are formal.
    pub fn rule(&self) -> StarRule {
        match self.kind {
            DomainKind::Xgn => StarRule::Formal,
            _ => StarRule::Adjoint,
        }
    }

    pub fn sample_with(&self, size: usize, rng: &mut impl Rng) -> Result<PointFloat, SamplerError> {
        let (g, n) = (self.g, size);
        let mats: Vec<MatrixFloat> = match self.kind {
            DomainKind::Unitaries => (0..g).map(|_| haar_unitary_with(n, rng)).collect(),
            DomainKind::Spherical => spherical_isometry_tuple_with(g, n, rng),
            DomainKind::Partitioned => partitioned_unitary_with(g, n, rng).into_iter().flatten().collect(),
            DomainKind::Xgn => {
                let (a, b) = xgn_point_with(g, n, rng)?;
                a.into_iter().chain(b).collect()
            }
            DomainKind::Unrestricted => (0..g).map(|_| gaussian_matrix(n, n, rng)).collect(),
        };
        Ok(PointFloat::from_pairs(self.rule(), self.letters().into_iter().zip(mats))
            .expect("square matrices of one size"))
    }

    pub fn sample(&self, size: usize, seed: u64, stream: u64) -> Result<PointFloat, SamplerError> {
        self.sample_with(size, &mut stream_rng(seed, stream))
    }

    /// Distance of a point from the domain's defining relations.
    pub fn residual(&self, point: &PointFloat) -> f64 {
        let get = |l: Letter| point.get(l).expect("letter bound").into_owned();
        let g = self.g;
        match self.kind {
            DomainKind::Unitaries => (1..=g as u32)
                .map(|j| {
                    let u = get(Letter::x(j));
                    let id = MatrixFloat::identity(u.rows());
                    (&(&u.conjugate_transpose() * &u) - &id).norm().max((&(&u * &u.conjugate_transpose()) - &id).norm())
                })
                .fold(0.0, f64::max),
            DomainKind::Spherical => {
                let mut acc: Option<MatrixFloat> = None;
                for j in 1..=g as u32 {
                    let a = get(Letter::x(j));
                    let t = &a.conjugate_transpose() * &a;
                    acc = Some(match acc {
                        None => t,
                        Some(s) => &s + &t,
                    });
                }
                let s = acc.expect("g >= 1");
                (&s - &MatrixFloat::identity(s.rows())).norm()
            }
            DomainKind::Partitioned => {
                let blocks: Vec<MatrixFloat> = self.letters().into_iter().map(get).collect();
                let n = blocks[0].rows();
                let mut u = MatrixFloat::zeros(g * n, g * n);
                for i in 0..g {
                    for j in 0..g {
                        u.set_block(i * n, j * n, &blocks[i * g + j]);
                    }
                }
                let id = MatrixFloat::identity(g * n);
                (&(&u.conjugate_transpose() * &u) - &id).norm().max((&(&u * &u.conjugate_transpose()) - &id).norm())
            }
            DomainKind::Xgn => {
                let mut s = MatrixFloat::zeros(0, 0);
                for k in 1..=g as u32 {
                    let t = &get(Letter::x(k)) * &get(Letter::y(k));
                    s = if k == 1 { t } else { &s + &t };
                }
                (&s - &MatrixFloat::identity(s.rows())).norm()
            }
            DomainKind::Unrestricted => 0.0,
        }
    }

    /// An exact point of a star domain built from phased partial permutations
    /// with phases in `{±1, ±i}`. `None` for the other kinds.
    pub fn sample_exact_with(&self, size: usize, rng: &mut impl Rng) -> Option<PointExact> {
        let (g, n) = (self.g, size);
        let mats: Vec<MatrixExact> = match self.kind {
            DomainKind::Unitaries => (0..g).map(|_| phased_injection(n, n, rng)).collect(),
            DomainKind::Spherical => {
                let v = phased_injection(g * n, n, rng);
                (0..g).map(|j| v.submatrix(j * n, 0, n, n)).collect()
            }
            DomainKind::Partitioned => {
                let u = phased_injection(g * n, g * n, rng);
                (0..g).flat_map(|i| (0..g).map(move |j| (i, j))).map(|(i, j)| u.submatrix(i * n, j * n, n, n)).collect()
            }
            DomainKind::Xgn | DomainKind::Unrestricted => return None,
        };
        Some(
            PointExact::from_pairs(self.rule(), self.letters().into_iter().zip(mats))
                .expect("square matrices of one size"),
        )
    }
}

/// `rows×cols` matrix (`rows ≥ cols`) with one phase entry per column in
/// distinct rows: an exact isometry.
fn phased_injection(rows: usize, cols: usize, rng: &mut impl Rng) -> MatrixExact {
    let mut free: Vec<usize> = (0..rows).collect();
    let mut out = MatrixExact::zeros(rows, cols);
    let phases = [Scalar::one(), -Scalar::one(), Scalar::i(), -Scalar::i()];
    for j in 0..cols {
        let r = free.swap_remove(rng.gen_range(0..free.len()));
        out.set_block(r, j, &MatrixExact::scalar_identity(1, phases[rng.gen_range(0..4)].clone()));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FalsifyMode {
    /// Looks for a value with norm above the tolerance.
    Nonzero,
    /// Looks for a Hermitian part with an eigenvalue below `-tol`.
    NegativeEigenvalue,
}

/// What to evaluate.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Poly(&'a NcPoly),
    Expr(&'a RatExpr),
}

impl Target<'_> {
    /// `None` when the point is outside the domain of an expression.
    pub fn eval(&self, point: &PointFloat) -> Option<MatrixFloat> {
        match self {
            Target::Poly(p) => p.eval(point).ok(),
            Target::Expr(e) => e.eval(point).ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FloatWitness {
    pub size: usize,
    pub seed: u64,
    pub trial: u64,
    #[serde(skip)]
    pub point: PointFloat,
    #[serde(skip)]
    pub value: MatrixFloat,
    /// Norm of the value, or the least Hermitian eigenvalue.
    pub score: f64,
}

/// Stream index of trial `trial` at size `size`.
pub fn trial_stream(size: usize, trial: u64) -> u64 {
    ((size as u64) << 32) | trial
}

/// Searches sizes in increasing order; within a size the witness with the
/// smallest trial index is returned, independent of scheduling.
pub fn falsify_with<F>(
    target: Target<'_>,
    sizes: RangeInclusive<usize>,
    trials: u64,
    seed: u64,
    mode: FalsifyMode,
    tol: f64,
    sample: F,
) -> Option<FloatWitness>
where
    F: Fn(usize, &mut ChaCha8Rng) -> Option<PointFloat> + Sync,
{
    for size in sizes {
        let found = (0..trials).into_par_iter().find_map_first(|trial| {
            let mut rng = stream_rng(seed, trial_stream(size, trial));
            let point = sample(size, &mut rng)?;
            let value = target.eval(&point)?;
            if !value.is_finite() {
                return None;
            }
            let score = match mode {
                FalsifyMode::Nonzero => value.norm(),
                FalsifyMode::NegativeEigenvalue => min_hermitian_eigenvalue(&value),
            };
            let hit = match mode {
                FalsifyMode::Nonzero => score > tol,
                FalsifyMode::NegativeEigenvalue => score < -tol,
            };
            hit.then_some(FloatWitness { size, seed, trial, point, value, score })
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

pub fn falsify(
    target: Target<'_>,
    domain: &SampleDomain,
    sizes: RangeInclusive<usize>,
    trials: u64,
    seed: u64,
    mode: FalsifyMode,
    tol: f64,
) -> Option<FloatWitness> {
    falsify_with(target, sizes, trials, seed, mode, tol, |size, rng| domain.sample_with(size, rng).ok())
}

/// Nilpotent pair of size `m+n+1` with `B^m A^n ≠ 0`, `AB = 0`,
/// `B^{m+1} = 0 = A^{n+1}`. For `m = 0` the wrap-around unit of `B` would
/// break `AB = 0`, so `B = 0` there.
pub fn zero_divisor_witness(m: usize, n: usize) -> (MatrixExact, MatrixExact) {
    assert!(m + n >= 1, "m + n must be positive");
    let s = m + n + 1;
    let mut a = MatrixExact::zeros(s, s);
    let mut b = MatrixExact::zeros(s, s);
    let one = MatrixExact::identity(1);
    for i in 1..=n {
        a.set_block(i - 1, i, &one);
    }
    if m >= 1 {
        for i in n + 2..=n + m {
            b.set_block(i - 1, i, &one);
        }
        b.set_block(m + n, 0, &one);
    }
    (a, b)
}
