//! Rationally resolvable ideals and their membership oracles.
//!
//! An ideal is given by generators, a split of its letters into free letters
//! `x′` (bound by the base point) and resolved letters `x″`, and a resolvent
//! `x″ ↦ r(x′)` whose graph lies in the zero set. A polynomial `f` is decided
//! a member when `f(x′, r(x′))` is the zero series about the base point. For
//! the built-ins this is ideal membership; for custom ideals it is vanishing
//! on the graph of the resolvent, which can be weaker (the ideal `(1 − XY)`
//! resolves `Y = X^{-1}` but does not have the Nullstellensatz property).

mod builtin;
mod spec;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{nss_bound, star_bound, BoundError, StarKind};
use crate::matrix::{MatrixExact, MatrixFloat};
use crate::ncpoly::{Letter, NcPoly, PolyError, Word};
use crate::point::{PointExact, PointFloat, StarRule};
use crate::ratexpr::RatExpr;
use crate::realization::{compile, compile_scalar, Basepoint, RealizationError, ScalarRep};
use crate::sampler::{self, stream_rng, DomainKind, FalsifyMode, FloatWitness, SampleDomain, Target};
use crate::scalar::Scalar;

pub use builtin::{builtin_ideal, entry_index, symbolic_matrix_inverse, IdealKind};
pub use spec::{custom_ideal, BasepointSpec, IdealSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IdealError {
    #[error("ideal {kind} is not defined for g = {g}")]
    GOutOfRange { kind: IdealKind, g: usize },
    #[error("bad ideal spec: {0}")]
    Spec(String),
    #[error("generator {index} ({generator}) does not vanish on the graph of the resolvent")]
    ResolventNotVanishing { index: usize, generator: String },
    #[error("polynomial letters do not belong to the ideal's alphabet: {0}")]
    AlphabetMismatch(String),
    #[error("the zero polynomial has no witness size")]
    ZeroPolynomial,
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Construction data; validated by [`RRIdeal::build`].
pub(crate) struct Parts {
    pub name: String,
    pub kind: Option<IdealKind>,
    pub g: usize,
    /// The size parameter of the family (`g` of `U` is the block count).
    pub family_g: usize,
    pub star: bool,
    pub generators: Vec<NcPoly>,
    pub resolvent: Vec<(Letter, RatExpr)>,
    pub basepoint: Arc<Basepoint>,
    pub n: usize,
    /// Realizations of the resolvent entries to use instead of compiling them.
    pub leaves: Option<BTreeMap<Letter, ScalarRep>>,
}

/// A rationally resolvable (*-)ideal with precompiled, minimized
/// realizations of its resolvent entries.
#[derive(Clone, Debug)]
pub struct RRIdeal {
    name: String,
    kind: Option<IdealKind>,
    g: usize,
    family_g: usize,
    star: bool,
    generators: Vec<NcPoly>,
    resolved: Vec<Letter>,
    resolvent: BTreeMap<Letter, RatExpr>,
    basepoint: Arc<Basepoint>,
    n: usize,
    leaves: BTreeMap<Letter, ScalarRep>,
}

/// A point where a non-member does not vanish.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Found among exact structured points; checked by exact arithmetic.
    Exact { size: usize, point: PointExact, value: MatrixExact },
    /// Found by the float sampler.
    Numeric(FloatWitness),
}

impl Witness {
    pub fn size(&self) -> usize {
        match self {
            Witness::Exact { size, .. } => *size,
            Witness::Numeric(w) => w.size,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipVerdict {
    pub member: bool,
    pub witness: Option<Witness>,
}

/// Settings for the counterexample search attached to negative verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessSearch {
    pub seed: u64,
    pub trials: u64,
    /// Largest size tried with exact structured points.
    pub max_exact_size: usize,
    /// Largest size tried by the float sampler.
    pub max_size: usize,
    pub tol: f64,
}

impl Default for WitnessSearch {
    fn default() -> Self {
        WitnessSearch { seed: 0, trials: 200, max_exact_size: 4, max_size: 16, tol: 1e-8 }
    }
}

const COEFFICIENTS: [(i64, i64); 7] = [(1, 0), (-1, 0), (2, 0), (-2, 0), (0, 1), (0, -1), (1, 1)];

impl RRIdeal {
    pub(crate) fn build(parts: Parts) -> Result<Self, IdealError> {
        let Parts { name, kind, g, family_g, star, generators, resolvent, basepoint, n, leaves } = parts;
        let free: BTreeSet<Letter> = basepoint.letters().iter().copied().collect();
        let resolved: Vec<Letter> = resolvent.iter().map(|(l, _)| *l).collect();
        if resolved.iter().any(|l| free.contains(l)) {
            return Err(IdealError::Spec("a resolved letter is also bound by the base point".into()));
        }
        if resolved.iter().collect::<BTreeSet<_>>().len() != resolved.len() {
            return Err(IdealError::Spec("a letter is resolved twice".into()));
        }
        for (l, e) in &resolvent {
            if let Some(bad) = e.letters().into_iter().find(|x| !free.contains(x)) {
                return Err(IdealError::Spec(format!("resolvent of {l} uses {bad}, which is not a base point letter")));
            }
        }
        let letters: BTreeSet<Letter> = free.iter().chain(&resolved).copied().collect();
        if let Some(bad) = letters.iter().find(|l| l.index as usize > g) {
            return Err(IdealError::Spec(format!("letter {bad} outside alphabet of size {g}")));
        }
        for p in &generators {
            if p.alphabet_size() != g {
                return Err(IdealError::Spec("generator over a different alphabet".into()));
            }
            if let Some(bad) = p.letters().into_iter().find(|l| !letters.contains(l)) {
                return Err(IdealError::Spec(format!("generator letter {bad} is neither bound nor resolved")));
            }
        }
        let leaves = match leaves {
            Some(l) => l,
            None => resolvent
                .iter()
                .map(|(l, e)| Ok((*l, compile_scalar(e, &basepoint, &BTreeMap::new(), true)?)))
                .collect::<Result<_, RealizationError>>()?,
        };
        let ideal = RRIdeal {
            name,
            kind,
            g,
            family_g,
            star,
            generators,
            resolved,
            resolvent: resolvent.into_iter().collect(),
            basepoint,
            n,
            leaves,
        };
        for (index, p) in ideal.generators.iter().enumerate() {
            if !ideal.is_member(p)? {
                return Err(IdealError::ResolventNotVanishing { index, generator: p.to_string() });
            }
        }
        Ok(ideal)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> Option<IdealKind> {
        self.kind
    }

    /// Alphabet size: letters carry indices `1..=g`.
    pub fn g(&self) -> usize {
        self.g
    }

    /// The family parameter: `g` as passed to [`builtin_ideal`].
    pub fn family_g(&self) -> usize {
        self.family_g
    }

    pub fn is_star(&self) -> bool {
        self.star
    }

    pub fn generators(&self) -> &[NcPoly] {
        &self.generators
    }

    pub fn resolved(&self) -> &[Letter] {
        &self.resolved
    }

    pub fn resolvent(&self) -> &BTreeMap<Letter, RatExpr> {
        &self.resolvent
    }

    pub fn basepoint(&self) -> &Arc<Basepoint> {
        &self.basepoint
    }

    pub fn m(&self) -> usize {
        self.basepoint.m()
    }

    /// Dimension bound for realizations of the resolvent entries.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Realization used for a resolved letter.
    pub fn leaf(&self, l: Letter) -> Option<&ScalarRep> {
        self.leaves.get(&l)
    }

    /// All letters polynomials over this ideal may use. Star ideals have both
    /// `X_j` and `X_j^*` for every index.
    pub fn letters(&self) -> Vec<Letter> {
        if self.star {
            (1..=self.g as u32).flat_map(|j| [Letter::x(j), Letter::x_star(j)]).collect()
        } else {
            let set: BTreeSet<Letter> = self.basepoint.letters().iter().chain(&self.resolved).copied().collect();
            set.into_iter().collect()
        }
    }

    fn check_alphabet(&self, f: &NcPoly) -> Result<(), IdealError> {
        if f.alphabet_size() != self.g {
            return Err(IdealError::AlphabetMismatch(
                PolyError::AlphabetMismatch(f.alphabet_size(), self.g).to_string(),
            ));
        }
        let allowed: BTreeSet<Letter> = self.letters().into_iter().collect();
        match f.letters().into_iter().find(|l| !allowed.contains(l)) {
            Some(bad) => Err(IdealError::AlphabetMismatch(format!("{bad} is not a letter of {}", self.name))),
            None => Ok(()),
        }
    }

    /// `f(x′, r(x′))`.
    pub fn substitute_resolvent(&self, f: &NcPoly) -> Result<RatExpr, IdealError> {
        self.check_alphabet(f)?;
        Ok(RatExpr::from_poly(f).substitute(&self.resolvent))
    }

    /// Minimized realization of `f(x′, r(x′))` built from the cached leaves.
    pub fn realize(&self, f: &NcPoly) -> Result<ScalarRep, IdealError> {
        self.check_alphabet(f)?;
        Ok(compile_scalar(&RatExpr::from_poly(f), &self.basepoint, &self.leaves, true)?)
    }

    pub fn is_member(&self, f: &NcPoly) -> Result<bool, IdealError> {
        Ok(self.realize(f)?.is_zero())
    }

    /// Reference route: compiles the substituted expression from scratch,
    /// without cached leaves or minimization.
    pub fn is_member_direct(&self, f: &NcPoly) -> Result<bool, IdealError> {
        let e = self.substitute_resolvent(f)?;
        Ok(compile(&e, &self.basepoint)?.is_zero())
    }

    /// Membership with an optional counterexample search for non-members.
    pub fn membership(&self, f: &NcPoly, search: Option<&WitnessSearch>) -> Result<MembershipVerdict, IdealError> {
        let member = self.is_member(f)?;
        let witness = match (member, search) {
            (false, Some(s)) => self.find_witness(f, s)?,
            _ => None,
        };
        Ok(MembershipVerdict { member, witness })
    }

    /// The matrix size from the applicable Nullstellensatz bound.
    pub fn witness_size(&self, f: &NcPoly) -> Result<u64, IdealError> {
        let (u, v) = f.degree_and_terms().map_err(|_| IdealError::ZeroPolynomial)?;
        let (u, v) = (u.max(1) as u64, v as u64);
        let g = self.g as u64;
        Ok(match self.kind {
            Some(IdealKind::T) => star_bound(StarKind::Unitaries, g, u, v, false)?,
            Some(IdealKind::S) => star_bound(StarKind::Spherical, g, u, v, false)?,
            Some(IdealKind::U) if self.family_g == 1 => star_bound(StarKind::Unitaries, 1, u, v, false)?,
            Some(IdealKind::U) => star_bound(StarKind::Partitioned, self.family_g as u64, u, v, false)?,
            _ => nss_bound(self.m() as u64, self.n as u64, u, v)?,
        })
    }

    /// The sampling domain of the star zero set, or of `X(g, n)` for `S′`.
    pub fn sample_domain(&self) -> Option<SampleDomain> {
        let (kind, g) = match self.kind? {
            IdealKind::T => (DomainKind::Unitaries, self.g),
            IdealKind::S => (DomainKind::Spherical, self.g),
            IdealKind::U => (DomainKind::Partitioned, self.family_g),
            IdealKind::Sprime => (DomainKind::Xgn, self.g),
            _ => return None,
        };
        SampleDomain::new(kind, g).ok()
    }

    /// A float point of the zero set: from the structured domain when there
    /// is one, else `x′` Gaussian and `x″ = r(x′)`.
    pub fn sample_point(&self, size: usize, rng: &mut impl Rng) -> Option<PointFloat> {
        if let Some(d) = self.sample_domain() {
            return d.sample_with(size, rng).ok();
        }
        let mut point = PointFloat::new(StarRule::Formal);
        for l in self.basepoint.letters() {
            point.insert(*l, sampler::gaussian_matrix(size, size, rng)).ok()?;
        }
        self.complete(point)
    }

    /// An exact point of the zero set: phased partial permutations for the
    /// star built-ins, else small random integer `x′` and `x″ = r(x′)`.
    pub fn exact_point(&self, size: usize, rng: &mut impl Rng) -> Option<PointExact> {
        if let Some(d) = self.sample_domain().filter(|d| d.kind != DomainKind::Xgn) {
            return d.sample_exact_with(size, rng);
        }
        let mut point = PointExact::new(StarRule::Formal);
        for l in self.basepoint.letters() {
            let data = (0..size * size).map(|_| Scalar::from_int(rng.gen_range(-2..=2))).collect();
            point.insert(*l, MatrixExact::from_vec(size, size, data).expect("shape")).ok()?;
        }
        self.complete(point)
    }

    fn complete<T: crate::matrix::Entry>(&self, mut point: crate::point::Point<T>) -> Option<crate::point::Point<T>> {
        let values: Vec<(Letter, crate::matrix::Matrix<T>)> =
            self.resolvent.iter().map(|(l, e)| e.eval(&point).ok().map(|v| (*l, v))).collect::<Option<_>>()?;
        for (l, v) in values {
            point.insert(l, v).ok()?;
        }
        Some(point)
    }

    /// Exact structured search up to `max_exact_size`, then the float sampler
    /// up to `max_size`, both capped by the witness size.
    pub fn find_witness(&self, f: &NcPoly, s: &WitnessSearch) -> Result<Option<Witness>, IdealError> {
        let bound = usize::try_from(self.witness_size(f)?).unwrap_or(usize::MAX);
        for size in 1..=bound.min(s.max_exact_size) {
            let found = (0..s.trials).into_par_iter().find_map_first(|trial| {
                let mut rng = stream_rng(s.seed, sampler::trial_stream(size, trial));
                let point = self.exact_point(size, &mut rng)?;
                let value = f.eval(&point).ok()?;
                (!value.is_zero()).then_some((point, value))
            });
            if let Some((point, value)) = found {
                return Ok(Some(Witness::Exact { size, point, value }));
            }
        }
        let found = sampler::falsify_with(
            Target::Poly(f),
            1..=bound.min(s.max_size),
            s.trials,
            s.seed,
            FalsifyMode::Nonzero,
            s.tol,
            |size, rng| self.sample_point(size, rng),
        );
        Ok(found.map(Witness::Numeric))
    }

    /// Largest residual of the generators at a float point.
    pub fn residual(&self, point: &PointFloat) -> f64 {
        self.generators.iter().filter_map(|p| p.eval(point).ok()).map(|v: MatrixFloat| v.norm()).fold(0.0, f64::max)
    }

    /// `Σ_t c_t·a_t·f_{j_t}·b_t` with random words `a_t, b_t` of length at most
    /// `max_len` and random small Gaussian-integer coefficients. With
    /// `max_len = 0` and one term this is a multiple of a generator.
    pub fn random_element(&self, seed: u64, (max_len, terms): (usize, usize)) -> NcPoly {
        let mut rng = stream_rng(seed, u64::MAX);
        let letters = self.letters();
        let word = |rng: &mut rand_chacha::ChaCha8Rng| {
            let len = rng.gen_range(0..=max_len);
            NcPoly::monomial(
                self.g,
                Word((0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect()),
                Scalar::one(),
            )
        };
        let mut acc = NcPoly::zero(self.g);
        for _ in 0..terms {
            let gen = &self.generators[rng.gen_range(0..self.generators.len())];
            let (re, im) = COEFFICIENTS[rng.gen_range(0..COEFFICIENTS.len())];
            let left = word(&mut rng).scale(&Scalar::gaussian(re, im));
            let right = word(&mut rng);
            let term = left.try_mul(gen).and_then(|p| p.try_mul(&right)).expect("same alphabet");
            acc = acc.try_add(&term).expect("same alphabet");
        }
        acc
    }
}

/// Random two-sided combination of the generators of `ideal`.
pub fn random_ideal_element(ideal: &RRIdeal, seed: u64, complexity: (usize, usize)) -> NcPoly {
    ideal.random_element(seed, complexity)
}

#[cfg(test)]
mod tests;
