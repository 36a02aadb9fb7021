//! The free *-algebra: letters, words, noncommutative polynomials.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::matrix::{Entry, Matrix};
use crate::point::{EvalError, Point};
use crate::scalar::Scalar;

/// Letter families accepted by the text grammar: `X<n>` and `Y<n>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    X,
    Y,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub family: Family,
    /// 1-based index.
    pub index: u32,
    pub starred: bool,
}

impl Letter {
    pub const fn x(index: u32) -> Self {
        Letter { family: Family::X, index, starred: false }
    }

    pub const fn y(index: u32) -> Self {
        Letter { family: Family::Y, index, starred: false }
    }

    pub const fn x_star(index: u32) -> Self {
        Letter { family: Family::X, index, starred: true }
    }

    /// Toggles the star.
    pub fn star(self) -> Self {
        Letter { starred: !self.starred, ..self }
    }

    pub fn unstarred(self) -> Self {
        Letter { starred: false, ..self }
    }

    pub fn parse(text: &str) -> Option<Self> {
        let t = text.trim();
        let (body, starred) = match t.strip_suffix("^*") {
            Some(b) => (b, true),
            None => (t, false),
        };
        let family = match body.chars().next()? {
            'X' => Family::X,
            'Y' => Family::Y,
            _ => return None,
        };
        let index: u32 = body[1..].parse().ok()?;
        (index > 0).then_some(Letter { family, index, starred })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::X => 'X',
            Family::Y => 'Y',
        };
        write!(f, "{fam}{}{}", self.index, if self.starred { "^*" } else { "" })
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A word in the letters; the empty word is the identity. Ordered
/// graded-lexicographically (length first).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Reversed with every star toggled.
    pub fn star(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.star()).collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(Letter::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("alphabet mismatch: {0} vs {1} letters")]
    AlphabetMismatch(usize, usize),
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("letter {letter} outside alphabet of size {g}")]
    LetterOutOfRange { letter: Letter, g: usize },
}

/// Element of the free *-algebra over `g` letter indices.
#[derive(Clone, PartialEq, Eq)]
pub struct NcPoly {
    g: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl NcPoly {
    pub fn zero(g: usize) -> Self {
        NcPoly { g, terms: BTreeMap::new() }
    }

    pub fn constant(g: usize, c: Scalar) -> Self {
        Self::monomial(g, Word::empty(), c)
    }

    pub fn one(g: usize) -> Self {
        Self::constant(g, Scalar::one())
    }

    pub fn monomial(g: usize, word: Word, coeff: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        NcPoly { g, terms }
    }

    pub fn letter(g: usize, l: Letter) -> Self {
        Self::monomial(g, Word(vec![l]), Scalar::one())
    }

    /// Builds from `(coefficient, word)` pairs, merging repeats.
    pub fn from_terms(g: usize, terms: impl IntoIterator<Item = (Scalar, Word)>) -> Result<Self, PolyError> {
        let mut p = NcPoly::zero(g);
        for (c, w) in terms {
            for l in w.letters() {
                p.check_letter(*l)?;
            }
            p.add_term(w, &c);
        }
        Ok(p)
    }

    fn check_letter(&self, l: Letter) -> Result<(), PolyError> {
        if l.index == 0 || l.index as usize > self.g {
            return Err(PolyError::LetterOutOfRange { letter: l, g: self.g });
        }
        Ok(())
    }

    pub fn alphabet_size(&self) -> usize {
        self.g
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).collect()
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    fn same_alphabet(&self, other: &NcPoly) -> Result<(), PolyError> {
        if self.g != other.g {
            return Err(PolyError::AlphabetMismatch(self.g, other.g));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &NcPoly) -> Result<NcPoly, PolyError> {
        self.same_alphabet(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &NcPoly) -> Result<NcPoly, PolyError> {
        self.try_add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn try_mul(&self, other: &NcPoly) -> Result<NcPoly, PolyError> {
        self.same_alphabet(other)?;
        let mut out = NcPoly::zero(self.g);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> NcPoly {
        if s.is_zero() {
            return NcPoly::zero(self.g);
        }
        NcPoly { g: self.g, terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect() }
    }

    pub fn neg(&self) -> NcPoly {
        self.scale(&Scalar::from_int(-1))
    }

    /// The involution: words reversed with stars toggled, coefficients conjugated.
    pub fn star(&self) -> NcPoly {
        NcPoly { g: self.g, terms: self.terms.iter().map(|(w, c)| (w.star(), c.conj())).collect() }
    }

    /// `(u, v)`: maximal word length and number of terms.
    pub fn degree_and_terms(&self) -> Result<(usize, usize), PolyError> {
        let u = self.terms.keys().map(Word::len).max().ok_or(PolyError::ZeroPolynomial)?;
        Ok((u, self.terms.len()))
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Same terms over a larger alphabet.
    pub fn widen(&self, g: usize) -> NcPoly {
        assert!(g >= self.g);
        NcPoly { g, terms: self.terms.clone() }
    }

    /// Homomorphic evaluation at a matrix tuple.
    pub fn eval<T: Entry>(&self, point: &Point<T>) -> Result<Matrix<T>, EvalError> {
        let n = point.size().ok_or(EvalError::EmptyPoint)?;
        let mut cache: HashMap<Letter, Matrix<T>> = HashMap::new();
        let mut acc = Matrix::<T>::zeros(n, n);
        for (w, c) in &self.terms {
            let mut prod: Option<Matrix<T>> = None;
            for l in w.letters() {
                if !cache.contains_key(l) {
                    cache.insert(*l, point.get(*l)?.into_owned());
                }
                let m = &cache[l];
                prod = Some(match prod {
                    None => m.clone(),
                    Some(p) => &p * m,
                });
            }
            let coeff = T::from_scalar(c);
            let term = match prod {
                None => Matrix::scalar_identity(n, coeff),
                Some(p) => p.scale(&coeff),
            };
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

impl fmt::Display for NcPoly {
    /// Canonical text in the expression grammar, e.g. `1 - X1^* X1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let negative_real = c.is_real() && c.re() < &0u32;
            let mag = if negative_real { -c } else { c.clone() };
            if k == 0 {
                if negative_real {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative_real { " - " } else { " + " })?;
            }
            match (w.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{w}")?,
                (false, false) => write!(f, "{mag} {w}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly[g={}]({self})", self.g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::MatrixExact;
    use crate::point::StarRule;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn x(i: u32) -> NcPoly {
        NcPoly::letter(2, Letter::x(i))
    }

    fn random_poly(rng: &mut ChaCha8Rng, g: usize, star: bool) -> NcPoly {
        let mut p = NcPoly::zero(g);
        for _ in 0..rng.gen_range(1..4) {
            let len = rng.gen_range(0..3);
            let w: Vec<Letter> = (0..len)
                .map(|_| Letter {
                    family: Family::X,
                    index: rng.gen_range(1..=g as u32),
                    starred: star && rng.gen_bool(0.5),
                })
                .collect();
            p.add_term(Word(w), &Scalar::gaussian(rng.gen_range(-3..4), rng.gen_range(-1..2)));
        }
        p
    }

    fn random_point(rng: &mut ChaCha8Rng, g: usize, n: usize) -> Point<Scalar> {
        let mut pt = Point::new(StarRule::Adjoint);
        for i in 1..=g as u32 {
            let data = (0..n * n).map(|_| Scalar::gaussian(rng.gen_range(-2..3), rng.gen_range(-1..2))).collect();
            pt.insert(Letter::x(i), Matrix::from_vec(n, n, data).unwrap()).unwrap();
        }
        pt
    }

    #[test]
    fn square_of_sum() {
        let s = x(1).try_add(&x(2)).unwrap();
        let sq = s.try_mul(&s).unwrap();
        assert_eq!(sq.degree_and_terms().unwrap(), (2, 4));
        assert_eq!(sq.to_string(), "X1 X1 + X1 X2 + X2 X1 + X2 X2");
    }

    #[test]
    fn additive_inverse_and_unit() {
        let f = x(1).try_mul(&x(2)).unwrap().try_add(&NcPoly::constant(2, Scalar::from_int(3))).unwrap();
        assert!(f.try_add(&f.scale(&Scalar::from_int(-1))).unwrap().is_zero());
        assert_eq!(f.try_mul(&NcPoly::one(2)).unwrap(), f);
        assert_eq!(NcPoly::one(2).scale(&Scalar::one()).try_mul(&f).unwrap(), f);
    }

    #[test]
    fn alphabet_mismatch() {
        let a = NcPoly::letter(2, Letter::x(1));
        let b = NcPoly::letter(3, Letter::x(1));
        assert_eq!(a.try_add(&b), Err(PolyError::AlphabetMismatch(2, 3)));
        assert!(NcPoly::from_terms(2, [(Scalar::one(), Word(vec![Letter::x(3)]))]).is_err());
    }

    #[test]
    fn star_rule() {
        let w = Word(vec![Letter::x(1), Letter::x_star(2)]);
        let f = NcPoly::monomial(2, w, Scalar::gaussian(0, 2));
        let expected = NcPoly::monomial(2, Word(vec![Letter::x(2), Letter::x_star(1)]), Scalar::gaussian(0, -2));
        assert_eq!(f.star(), expected);
    }

    #[test]
    fn degree_counts() {
        let f = NcPoly::from_terms(
            2,
            [
                (Scalar::one(), Word(vec![Letter::x(1), Letter::x_star(2), Letter::x(1)])),
                (Scalar::from_int(3), Word(vec![Letter::x(1)])),
                (Scalar::from_int(-1), Word::empty()),
            ],
        )
        .unwrap();
        assert_eq!(f.degree_and_terms().unwrap(), (3, 3));
        assert_eq!(NcPoly::constant(1, Scalar::from_int(5)).degree_and_terms().unwrap(), (0, 1));
        let sph = NcPoly::from_terms(
            2,
            [
                (Scalar::one(), Word::empty()),
                (Scalar::from_int(-1), Word(vec![Letter::x_star(1), Letter::x(1)])),
                (Scalar::from_int(-1), Word(vec![Letter::x_star(2), Letter::x(2)])),
            ],
        )
        .unwrap();
        assert_eq!(sph.degree_and_terms().unwrap(), (2, 3));
        assert_eq!(NcPoly::zero(2).degree_and_terms(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn evaluation_example() {
        // p = 3 X1 X2 − X1²
        let p =
            x(1).try_mul(&x(2)).unwrap().scale(&Scalar::from_int(3)).try_sub(&x(1).try_mul(&x(1)).unwrap()).unwrap();
        let pt = Point::from_pairs(
            StarRule::Formal,
            [
                (Letter::x(1), MatrixExact::from_ints(&[&[1, 1], &[-1, 0]])),
                (Letter::x(2), MatrixExact::from_ints(&[&[1, 0], &[2, -1]])),
            ],
        )
        .unwrap();
        assert_eq!(p.eval(&pt).unwrap(), MatrixExact::from_ints(&[&[9, -4], &[-2, 1]]));
        assert_eq!(NcPoly::one(2).eval(&pt).unwrap(), MatrixExact::identity(2));
        let missing = NcPoly::letter(3, Letter::x(3));
        assert_eq!(missing.eval(&pt), Err(EvalError::MissingLetter(Letter::x(3))));
    }

    #[test]
    fn unitary_relation_vanishes() {
        // 1 − X1^* X1 at a permutation-with-phase unitary
        let f = NcPoly::from_terms(
            1,
            [(Scalar::one(), Word::empty()), (Scalar::from_int(-1), Word(vec![Letter::x_star(1), Letter::x(1)]))],
        )
        .unwrap();
        let u = Matrix::from_vec(2, 2, vec![Scalar::zero(), Scalar::i(), Scalar::one(), Scalar::zero()]).unwrap();
        let pt = Point::from_pairs(StarRule::Adjoint, [(Letter::x(1), u)]).unwrap();
        assert!(f.eval(&pt).unwrap().is_zero());
    }

    #[test]
    fn evaluation_is_a_star_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let f = random_poly(&mut rng, 2, true);
            let h = random_poly(&mut rng, 2, true);
            let n = rng.gen_range(1..=3);
            let pt = random_point(&mut rng, 2, n);
            let fa = f.eval(&pt).unwrap();
            let ha = h.eval(&pt).unwrap();
            assert_eq!(f.try_add(&h).unwrap().eval(&pt).unwrap(), &fa + &ha);
            assert_eq!(f.try_mul(&h).unwrap().eval(&pt).unwrap(), &fa * &ha);
            assert_eq!(f.star().eval(&pt).unwrap(), fa.conjugate_transpose());
            assert_eq!(f.star().star(), f);
            assert_eq!(f.try_mul(&h).unwrap().star(), h.star().try_mul(&f.star()).unwrap());
        }
    }

    #[test]
    fn monomial_degree_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let f = random_poly(&mut rng, 2, true);
            let h = random_poly(&mut rng, 2, true);
            if f.is_zero() || h.is_zero() {
                continue;
            }
            let prod = f.try_mul(&h).unwrap();
            if let Some(d) = prod.degree() {
                assert!(d <= f.degree().unwrap() + h.degree().unwrap());
            }
            let (w1, _) = f.terms().last().unwrap();
            let (w2, _) = h.terms().last().unwrap();
            let m1 = NcPoly::monomial(2, w1.clone(), Scalar::one());
            let m2 = NcPoly::monomial(2, w2.clone(), Scalar::one());
            assert_eq!(m1.try_mul(&m2).unwrap().degree(), Some(w1.len() + w2.len()));
        }
    }
}
