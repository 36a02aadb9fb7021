//! Sum-of-Hermitian-squares certificates modulo an ideal, Gram matrix
//! feasibility problems, and numeric positivity probing.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ideals::{IdealError, RRIdeal};
use crate::matrix::MatrixExact;
use crate::ncpoly::{Letter, NcPoly, Word};
use crate::sampler::{min_hermitian_eigenvalue, stream_rng, trial_stream, SampleDomain};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum PositivityError {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("f - q has degree {degree}, above 2d = {}", 2 * .d)]
    DegreeTooHigh { degree: usize, d: usize },
    #[error("cofactor refers to generator {0}, which does not exist")]
    NoSuchGenerator(usize),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error("gram file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One summand `left · f_generator · right` of an ideal combination.
#[derive(Debug, Clone, PartialEq)]
pub struct Cofactor {
    pub left: NcPoly,
    pub generator: usize,
    pub right: NcPoly,
}

/// Claims `f = Σ p_i^* p_i + q` with `q` in the ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct SohsCertificate {
    pub squares: Vec<NcPoly>,
    pub remainder: NcPoly,
    /// When present, `q` must equal this combination of generators.
    pub cofactors: Option<Vec<Cofactor>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RemainderRoute {
    /// Checked against the explicit cofactors.
    Syntactic,
    /// Checked by the membership oracle.
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub valid: bool,
    /// `f − Σ p_i^* p_i − q = 0` in the free *-algebra.
    pub identity_holds: bool,
    pub remainder_in_ideal: bool,
    pub route: RemainderRoute,
}

fn same_alphabet(a: &NcPoly, b: &NcPoly) -> Result<(), PositivityError> {
    if a.alphabet_size() == b.alphabet_size() {
        Ok(())
    } else {
        Err(PositivityError::AlphabetMismatch(format!("{} vs {} letters", a.alphabet_size(), b.alphabet_size())))
    }
}

/// `Σ p^* p`.
pub fn sum_of_squares(g: usize, squares: &[NcPoly]) -> Result<NcPoly, PositivityError> {
    let mut acc = NcPoly::zero(g);
    for p in squares {
        same_alphabet(&acc, p)?;
        acc = acc.try_add(&p.star().try_mul(p).expect("same alphabet")).expect("same alphabet");
    }
    Ok(acc)
}

pub fn verify_certificate(
    f: &NcPoly,
    cert: &SohsCertificate,
    ideal: &RRIdeal,
) -> Result<CertificateReport, PositivityError> {
    same_alphabet(f, &cert.remainder)?;
    if f.alphabet_size() != ideal.g() {
        return Err(PositivityError::AlphabetMismatch(format!("ideal {} has {} letters", ideal.name(), ideal.g())));
    }
    let sos = sum_of_squares(f.alphabet_size(), &cert.squares)?;
    let identity_holds = f.try_sub(&sos).and_then(|h| h.try_sub(&cert.remainder)).expect("same alphabet").is_zero();
    let (remainder_in_ideal, route) = match &cert.cofactors {
        Some(cofactors) => {
            let mut acc = NcPoly::zero(f.alphabet_size());
            for c in cofactors {
                let gen = ideal.generators().get(c.generator).ok_or(PositivityError::NoSuchGenerator(c.generator))?;
                same_alphabet(&c.left, gen)?;
                same_alphabet(&c.right, gen)?;
                acc = acc
                    .try_add(&c.left.try_mul(gen).and_then(|x| x.try_mul(&c.right)).expect("same alphabet"))
                    .expect("same alphabet");
            }
            (acc == cert.remainder, RemainderRoute::Syntactic)
        }
        None => (cert.remainder.is_zero() || ideal.is_member(&cert.remainder)?, RemainderRoute::Oracle),
    };
    Ok(CertificateReport { valid: identity_holds && remainder_in_ideal, identity_holds, remainder_in_ideal, route })
}

/// All words of length at most `d` in `X_j, X_j^*` (`j ≤ g`), graded-lex.
pub fn word_basis(g: usize, d: usize) -> Vec<Word> {
    let letters: Vec<Letter> = (1..=g as u32).flat_map(|j| [Letter::x(j), Letter::x_star(j)]).collect();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..d {
        layer = layer.iter().flat_map(|w| letters.iter().map(move |l| w.concat(&Word(vec![*l])))).collect();
        out.extend(layer.iter().cloned());
    }
    out.sort();
    out
}

/// `Σ_{(r,c) ∈ entries} G[r, c] = rhs`, where every pair satisfies `basis[c]^* basis[r] = word`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramConstraint {
    pub word: Word,
    pub rhs: Scalar,
    pub entries: Vec<(usize, usize)>,
}

/// Hermitian PSD solutions `G` are exactly the certificates `f − q = Σ p_i^* p_i`
/// with `deg p_i ≤ d`, via `G = Σ vec(p_i) vec(p_i)^*`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramProblem {
    pub g: usize,
    pub d: usize,
    pub basis: Vec<Word>,
    pub constraints: Vec<GramConstraint>,
}

pub fn gram_constraints(f: &NcPoly, d: usize, q: &NcPoly) -> Result<GramProblem, PositivityError> {
    same_alphabet(f, q)?;
    let g = f.alphabet_size();
    let h = f.try_sub(q).expect("same alphabet");
    if let Some(degree) = h.degree().filter(|&k| k > 2 * d) {
        return Err(PositivityError::DegreeTooHigh { degree, d });
    }
    let basis = word_basis(g, d);
    let mut by_word: BTreeMap<Word, Vec<(usize, usize)>> = BTreeMap::new();
    for (r, wr) in basis.iter().enumerate() {
        for (c, wc) in basis.iter().enumerate() {
            by_word.entry(wc.star().concat(wr)).or_default().push((r, c));
        }
    }
    let constraints =
        by_word.into_iter().map(|(word, entries)| GramConstraint { rhs: h.coeff(&word), word, entries }).collect();
    Ok(GramProblem { g, d, basis, constraints })
}

impl GramProblem {
    /// Coefficient vector of `p` on the basis; `None` if `deg p > d`.
    pub fn vectorize(&self, p: &NcPoly) -> Option<Vec<Scalar>> {
        let index: BTreeMap<&Word, usize> = self.basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut v = vec![Scalar::zero(); self.basis.len()];
        for (w, c) in p.terms() {
            v[*index.get(w)?] = c.clone();
        }
        Some(v)
    }

    /// `Σ vec(p_i) vec(p_i)^*`.
    pub fn gram_of(&self, squares: &[NcPoly]) -> Option<MatrixExact> {
        let n = self.basis.len();
        let mut g = MatrixExact::zeros(n, n);
        for p in squares {
            let v = MatrixExact::from_vec(n, 1, self.vectorize(p)?).expect("shape");
            g = &g + &(&v * &v.conjugate_transpose());
        }
        Some(g)
    }

    pub fn is_satisfied_by(&self, gram: &MatrixExact) -> bool {
        gram.shape() == (self.basis.len(), self.basis.len())
            && self.constraints.iter().all(|c| {
                let mut s = Scalar::zero();
                for &(r, col) in &c.entries {
                    s += &gram[(r, col)];
                }
                s == c.rhs
            })
    }

    /// Constraints with a nonzero right-hand side; empty exactly when `f = q`.
    pub fn inhomogeneous(&self) -> impl Iterator<Item = &GramConstraint> {
        self.constraints.iter().filter(|c| !c.rhs.is_zero())
    }

    /// A constraint on diagonal entries only forces a real nonnegative sum,
    /// so any other right-hand side rules out PSD solutions.
    pub fn trivially_infeasible(&self) -> bool {
        self.constraints
            .iter()
            .any(|c| c.entries.iter().all(|(r, col)| r == col) && (!c.rhs.is_real() || *c.rhs.re() < 0))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# d {} basis {} constraints {} g {}", self.d, self.basis.len(), self.constraints.len(), self.g)
            .unwrap();
        for c in &self.constraints {
            write!(out, "{}\t{} {}", word_text(&c.word), c.rhs.re(), c.rhs.im()).unwrap();
            for &(r, col) in &c.entries {
                write!(out, "\t{} {} 1 0", word_text(&self.basis[r]), word_text(&self.basis[col])).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, PositivityError> {
        let bad = |m: &str| PositivityError::Format(m.to_string());
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty file"))?.split_whitespace().collect();
        let field = |name: &str| -> Result<usize, PositivityError> {
            let pos = header.iter().position(|h| *h == name).ok_or_else(|| bad("header field missing"))?;
            header.get(pos + 1).and_then(|v| v.parse().ok()).ok_or_else(|| bad("bad header value"))
        };
        let (d, size, count, g) = (field("d")?, field("basis")?, field("constraints")?, field("g")?);
        let basis = word_basis(g, d);
        if basis.len() != size {
            return Err(bad("basis size does not match d and g"));
        }
        let index: BTreeMap<Word, usize> = basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut constraints = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let mut fields = line.split('\t');
            let word = parse_word(fields.next().ok_or_else(|| bad("missing word"))?).ok_or_else(|| bad("bad word"))?;
            let rhs = parse_pair(fields.next().ok_or_else(|| bad("missing rhs"))?).ok_or_else(|| bad("bad rhs"))?;
            let mut entries = Vec::new();
            for t in fields {
                let parts: Vec<&str> = t.split_whitespace().collect();
                if parts.len() != 4 || parts[2] != "1" || parts[3] != "0" {
                    return Err(bad("bad triple"));
                }
                let r = parse_word(parts[0])
                    .and_then(|w| index.get(&w).copied())
                    .ok_or_else(|| bad("row word not in basis"))?;
                let c = parse_word(parts[1])
                    .and_then(|w| index.get(&w).copied())
                    .ok_or_else(|| bad("column word not in basis"))?;
                entries.push((r, c));
            }
            constraints.push(GramConstraint { word, rhs, entries });
        }
        if constraints.len() != count {
            return Err(bad("constraint count does not match header"));
        }
        Ok(GramProblem { g, d, basis, constraints })
    }
}

fn word_text(w: &Word) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.letters().iter().map(Letter::to_string).collect::<Vec<_>>().join(".")
    }
}

fn parse_word(text: &str) -> Option<Word> {
    if text == "1" {
        return Some(Word::empty());
    }
    text.split('.').map(Letter::parse).collect::<Option<Vec<_>>>().map(Word)
}

fn parse_pair(text: &str) -> Option<Scalar> {
    let mut it = text.split_whitespace();
    let re = Scalar::parse_rational(it.next()?).ok()?;
    let im = Scalar::parse_rational(it.next()?).ok()?;
    Some(Scalar::new(re, im))
}

pub fn export_gram(p: &GramProblem, path: &Path) -> Result<(), PositivityError> {
    std::fs::write(path, p.to_text())?;
    Ok(())
}

pub fn import_gram(path: &Path) -> Result<GramProblem, PositivityError> {
    GramProblem::from_text(&std::fs::read_to_string(path)?)
}

/// Exact test that a Hermitian matrix is positive semidefinite, by symmetric
/// elimination: a zero pivot must have a zero row.
pub fn is_hermitian_psd(a: &MatrixExact) -> bool {
    if !a.is_square() || *a != a.conjugate_transpose() {
        return false;
    }
    let n = a.rows();
    let mut m: Vec<Vec<Scalar>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    for k in 0..n {
        let pivot = m[k][k].clone();
        if pivot.is_zero() {
            if m[k][k..].iter().any(|x| !x.is_zero()) {
                return false;
            }
            continue;
        }
        if *pivot.re() < 0 {
            return false;
        }
        let inv = pivot.inv().expect("nonzero");
        let pivot_row = m[k].clone();
        for row in m.iter_mut().skip(k + 1) {
            let factor = &row[k] * &inv;
            if factor.is_zero() {
                continue;
            }
            for (x, p) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *x -= &(&factor * p);
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeReport {
    pub min_eigenvalue: f64,
    pub size: usize,
    pub trial: u64,
    /// `min_eigenvalue ≥ −tol`.
    pub positive: bool,
}

/// Least eigenvalue of the Hermitian part of `f` over sampled points.
pub fn positivity_probe(
    f: &NcPoly,
    domain: &SampleDomain,
    sizes: RangeInclusive<usize>,
    trials: u64,
    seed: u64,
    tol: f64,
) -> ProbeReport {
    let mut best = ProbeReport { min_eigenvalue: f64::INFINITY, size: 0, trial: 0, positive: true };
    for size in sizes {
        let local = (0..trials)
            .into_par_iter()
            .filter_map(|trial| {
                let mut rng = stream_rng(seed, trial_stream(size, trial));
                let point = domain.sample_with(size, &mut rng).ok()?;
                Some((min_hermitian_eigenvalue(&f.eval(&point).ok()?), trial))
            })
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        if let Some((e, trial)) = local {
            if e < best.min_eigenvalue {
                best = ProbeReport { min_eigenvalue: e, size, trial, positive: true };
            }
        }
    }
    best.positive = best.min_eigenvalue >= -tol;
    best
}
