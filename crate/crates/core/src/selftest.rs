//! Reproducible end-to-end checks with fixed seeds and time budgets.

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{nss_bound, pos_size, star_bound, StarKind};
use crate::ideals::{builtin_ideal, IdealKind, RRIdeal, Witness, WitnessSearch};
use crate::matrix::MatrixExact;
use crate::ncpoly::{Letter, NcPoly, Word};
use crate::positivity::{gram_constraints, is_hermitian_psd, positivity_probe, verify_certificate, SohsCertificate};
use crate::ratexpr::{parse_polynomial, RatExpr};
use crate::realization::{compile, Basepoint, BimoduleElem, GenPoly, LinRep};
use crate::sampler::{falsify, stream_rng, zero_divisor_witness, FalsifyMode, Target};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub budget_ms: u128,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {} ({} ms of {} ms): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.budget_ms,
            self.detail
        )
    }
}

type Check = fn() -> Result<String, String>;

const CRITERIA: [(&str, u64, Check); 10] = [
    ("realization dimensions", 1, realization_dimensions),
    ("scalar and spherical resolvent expansions", 10, spherical_expansions),
    ("commutator inverse expansion", 10, commutator_expansion),
    ("zero test against enumeration", 60, zero_test_agreement),
    ("bound formulas", 1, bound_formulas),
    ("membership oracle", 300, membership_oracle),
    ("numeric vanishing and falsification", 300, numeric_consistency),
    ("generalized polynomial identities", 60, generalized_polynomials),
    ("sum of squares certificates", 30, sohs_certificates),
    ("zero divisor fixture", 1, zero_divisors),
];

pub const NUM_CRITERIA: usize = CRITERIA.len();

/// Runs criterion `id` (1-based). Passing requires the check and the budget.
pub fn run_criterion(id: usize) -> Option<CriterionOutcome> {
    let (name, secs, check) = *CRITERIA.get(id.checked_sub(1)?)?;
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(secs);
    let (passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if elapsed > budget {
        detail.push_str("; over time budget");
    }
    Some(CriterionOutcome {
        id,
        name,
        passed: passed && elapsed <= budget,
        detail,
        elapsed_ms: elapsed.as_millis(),
        budget_ms: budget.as_millis(),
    })
}

pub fn run_all() -> Vec<CriterionOutcome> {
    (1..=NUM_CRITERIA).filter_map(run_criterion).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn poly(text: &str, g: usize) -> NcPoly {
    parse_polynomial(text, g).expect("fixture parses")
}

fn scalar_bp(values: &[(Letter, i64)]) -> Arc<Basepoint> {
    Basepoint::scalar(values.iter().map(|(l, v)| (*l, Scalar::from_int(*v))).collect())
}

fn commutator_bp() -> Arc<Basepoint> {
    Basepoint::new(vec![(Letter::x(1), MatrixExact::unit(2, 0, 1)), (Letter::x(2), MatrixExact::unit(2, 1, 0))])
        .expect("2x2 basepoint")
}

/// Random expression over `X1..Xg` with small integer constants.
pub fn random_expr(rng: &mut ChaCha8Rng, g: u32, depth: usize) -> RatExpr {
    let leaf = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.3) {
            RatExpr::int(rng.gen_range(-2..=2))
        } else {
            RatExpr::var(Letter::x(rng.gen_range(1..=g)))
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..5) {
        0 => leaf(rng),
        1 => RatExpr::sum(vec![random_expr(rng, g, depth - 1), random_expr(rng, g, depth - 1)]),
        2 => RatExpr::product(vec![random_expr(rng, g, depth - 1), random_expr(rng, g, depth - 1)]),
        3 => RatExpr::inv(random_expr(rng, g, depth - 1)),
        _ => {
            let e = random_expr(rng, g, depth - 1);
            RatExpr::sub(e.clone(), e)
        }
    }
}

fn realization_dimensions() -> Result<String, String> {
    let mut rng = stream_rng(1, 0);
    let bps = [scalar_bp(&[(Letter::x(1), 1), (Letter::x(2), -1)]), commutator_bp()];
    let (mut sums, mut inverses) = (0, 0);
    for bp in &bps {
        let m = bp.m();
        let mut reps = Vec::new();
        while reps.len() < 20 {
            if let Ok(r) = compile(&random_expr(&mut rng, 2, 3), bp) {
                reps.push(r);
            }
        }
        for pair in reps.windows(2) {
            let (s1, s2) = (&pair[0], &pair[1]);
            let a = MatrixExact::from_vec(m, m, (0..m * m).map(|_| Scalar::from_int(rng.gen_range(-3..=3))).collect())
                .expect("shape");
            let n = (s1.dim(), s2.dim());
            let add = LinRep::rep_add(s1, &a, s2).map_err(|e| e.to_string())?;
            let mul = LinRep::rep_mul(s1, s2).map_err(|e| e.to_string())?;
            ensure(add.dim() == n.0 + n.1, || format!("rep_add dimension {} for {n:?}", add.dim()))?;
            ensure(mul.dim() == n.0 + n.1, || format!("rep_mul dimension {} for {n:?}", mul.dim()))?;
            sums += 1;
            if let Ok(inv) = LinRep::rep_inv(s1) {
                ensure(inv.dim() == n.0 + 1, || format!("rep_inv dimension {} for {}", inv.dim(), n.0))?;
                inverses += 1;
            }
        }
    }
    ensure(inverses > 0, || "no invertible operand".into())?;
    Ok(format!("{sums} sum/product pairs, {inverses} inverses"))
}

/// The `(g+1)`-dimensional representation of the spherical resolvent
/// `X1^{-1}(1 − Σ_{j≥2} X_j Y_j)` about `X1 = 1`, other letters `0`.
pub fn spherical_resolvent_rep(bp: &Arc<Basepoint>, g: usize) -> LinRep {
    let k = |l: Letter| bp.index_of(l).expect("letter in basepoint");
    let e = |v: i64| BimoduleElem::from_terms(1, &[(MatrixExact::from_ints(&[&[v]]), MatrixExact::identity(1))]);
    let mut entries = vec![(k(Letter::x(1)), 0, 0, e(-1))];
    for j in 2..=g {
        entries.push((k(Letter::x(j as u32)), 0, j, e(-1)));
        entries.push((k(Letter::y(j as u32)), j, 1, e(1)));
    }
    let unit = |v: bool| MatrixExact::from_ints(&[&[i64::from(v)]]);
    let c: Vec<MatrixExact> = (0..=g).map(|p| unit(p == 0)).collect();
    let b: Vec<MatrixExact> = (0..=g).map(|p| unit(p <= 1)).collect();
    LinRep::from_blocks(bp, &c, &entries, &b).expect("well formed")
}

/// The 3-dimensional representation of `(X1X2 − X2X1)^{-1}` about `(E12, E21)`.
pub fn commutator_inverse_rep(bp: &Arc<Basepoint>) -> LinRep {
    let p1 = MatrixExact::unit(2, 0, 1);
    let p2 = MatrixExact::unit(2, 1, 0);
    let q = MatrixExact::from_ints(&[&[1, 0], &[0, -1]]);
    let id = MatrixExact::identity(2);
    let neg = |a: &MatrixExact| a.neg();
    let elem = |terms: &[(MatrixExact, MatrixExact)]| BimoduleElem::from_terms(2, terms);
    let entries = vec![
        // Y1
        (0, 0, 0, elem(&[(neg(&id), &p2 * &q), (p2.clone(), q.clone())])),
        (0, 0, 1, elem(&[(id.clone(), id.clone())])),
        (0, 2, 0, elem(&[(neg(&id), q.clone())])),
        // Y2
        (1, 0, 0, elem(&[(id.clone(), &p1 * &q), (neg(&p1), q.clone())])),
        (1, 0, 2, elem(&[(neg(&id), id.clone())])),
        (1, 1, 0, elem(&[(neg(&id), q.clone())])),
    ];
    let zero = MatrixExact::zeros(2, 2);
    let c = [q, zero.clone(), zero.clone()];
    let b = [id, zero.clone(), zero];
    LinRep::from_blocks(bp, &c, &entries, &b).expect("well formed")
}

fn words(g: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w: &Vec<usize>| (0..g).map(move |k| [w.clone(), vec![k]].concat())).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn spherical_expansions() -> Result<String, String> {
    let bp = scalar_bp(&[(Letter::x(1), 1)]);
    let s = compile(&RatExpr::inv(RatExpr::var(Letter::x(1))), &bp).map_err(|e| e.to_string())?;
    for k in 0..=8 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let want = NcPoly::monomial(1, Word(vec![Letter::x(1); k]), Scalar::from_int(sign));
        ensure(*s.coefficient(&vec![0; k]).entry(0, 0) == want, || format!("coefficient of Y^{k}"))?;
    }
    let n_min = s.minimize_scalar().1;
    ensure(n_min == 1, || format!("X1^-1 minimizes to {n_min}"))?;
    let mut report = vec!["X1^-1: n_min 1".to_string()];
    for g in 2..=3 {
        let ideal = builtin_ideal(IdealKind::Sprime, g).map_err(|e| e.to_string())?;
        let bp = ideal.basepoint().clone();
        let resolvent = &ideal.resolvent()[&Letter::y(1)];
        let compiled = compile(resolvent, &bp).map_err(|e| e.to_string())?;
        let explicit = spherical_resolvent_rep(&bp, g);
        let (cs, ps) = (compiled.as_scalar(), explicit.as_scalar());
        let mut mismatch = None;
        let mut count = 0;
        for (a, b) in [(cs, ps), (ps, cs)] {
            a.for_each_coefficient(7, &mut |w, c| {
                count += 1;
                if *c != b.coefficient(w) {
                    mismatch = Some(w.to_vec());
                }
                mismatch.is_none()
            });
        }
        ensure(mismatch.is_none(), || format!("g={g}: coefficient of {mismatch:?} differs"))?;
        let n_min = compiled.minimize_scalar().1;
        ensure(n_min <= g + 1, || format!("g={g}: n_min {n_min}"))?;
        report.push(format!("g={g}: {count} coefficients, n_min {n_min}"));
    }
    Ok(report.join("; "))
}

fn commutator_expansion() -> Result<String, String> {
    let bp = commutator_bp();
    let e = RatExpr::inv(RatExpr::sub(
        RatExpr::product(vec![RatExpr::var(Letter::x(1)), RatExpr::var(Letter::x(2))]),
        RatExpr::product(vec![RatExpr::var(Letter::x(2)), RatExpr::var(Letter::x(1))]),
    ));
    let compiled = compile(&e, &bp).map_err(|e| e.to_string())?;
    let explicit = commutator_inverse_rep(&bp);
    ensure(explicit.dim() == 3, || "hand representation has wrong dimension".into())?;
    let q = MatrixExact::from_ints(&[&[1, 0], &[0, -1]]);
    ensure(compiled.constant_term() == q, || format!("[S,1] = {:?}", compiled.constant_term()))?;
    let ws = words(2, 4);
    for w in &ws {
        let (a, b): (GenPoly, GenPoly) = (compiled.coefficient(w), explicit.coefficient(w));
        ensure(a == b, || format!("coefficient of {w:?}: {a} vs {b}"))?;
    }
    let n_min = compiled.minimize_scalar().1;
    ensure(n_min <= 6, || format!("n_min {n_min}"))?;
    Ok(format!("{} words, compiled dim {}, n_min {n_min}", ws.len(), compiled.dim()))
}

fn zero_test_agreement() -> Result<String, String> {
    let mut rng = stream_rng(4, 0);
    let bps = [scalar_bp(&[(Letter::x(1), 1), (Letter::x(2), -1)]), commutator_bp()];
    let (mut checked, mut zeros, mut attempts) = (0, 0, 0);
    while checked < 100 {
        attempts += 1;
        ensure(attempts < 100_000, || format!("only {checked} small instances"))?;
        let bp = &bps[attempts % 2];
        let Ok(rep) = compile(&random_expr(&mut rng, 2, 2), bp) else { continue };
        if rep.m() * rep.dim() > 4 {
            continue;
        }
        let z = rep.is_zero();
        ensure(z == rep.is_zero_by_enumeration(), || format!("verdicts differ on instance {checked}"))?;
        checked += 1;
        zeros += usize::from(z);
    }
    ensure(zeros > 0 && zeros < checked, || format!("{zeros} of {checked} zero; need both verdicts"))?;
    Ok(format!("{checked} instances, {zeros} zero"))
}

fn bound_formulas() -> Result<String, String> {
    let err = |e: crate::bounds::BoundError| e.to_string();
    let mut checks = 0;
    for u in 1..=10u64 {
        for v in 1..=10u64 {
            let uv = u * v;
            ensure(nss_bound(1, 1, u, v).map_err(err)? == uv, || format!("N(1,1,{u},{v})"))?;
            ensure(nss_bound(2, 3, u, v).map_err(err)? == 6 * uv, || format!("N(2,3,{u},{v})"))?;
            checks += 2;
            for g in 2..=5u64 {
                ensure(nss_bound(1, g + 1, u, v).map_err(err)? == ((g + 1) * uv).div_ceil(2), || {
                    format!("N(1,g+1) g={g}")
                })?;
                ensure(nss_bound(1, g, u, v).map_err(err)? == (g * uv).div_ceil(2), || format!("N(1,g) g={g}"))?;
                let sb = |k, real| star_bound(k, g, u, v, real).map_err(err);
                ensure(sb(StarKind::Unitaries, false)? == uv, || "unitaries".into())?;
                ensure(sb(StarKind::Spherical, false)? == ((g + 1) * uv).div_ceil(2), || "spherical".into())?;
                ensure(sb(StarKind::Partitioned, false)? == (g * uv).div_ceil(2), || "partitioned".into())?;
                for k in [StarKind::Unitaries, StarKind::Spherical, StarKind::Partitioned] {
                    ensure(sb(k, true)? == 2 * sb(k, false)?, || format!("real {k}"))?;
                }
                checks += 8;
            }
        }
    }
    for g in 1..=4u64 {
        for d in 1..=4u32 {
            ensure(pos_size(StarKind::Unitaries, g, d.into()).map_err(err)? == (2 * g + 1).pow(d), || {
                "pos unitaries".into()
            })?;
            ensure(pos_size(StarKind::Spherical, g, d.into()).map_err(err)? == (2 * g + 1).pow(d), || {
                "pos spherical".into()
            })?;
            ensure(pos_size(StarKind::Partitioned, g, d.into()).map_err(err)? == (2 * g * g + 1).pow(d), || {
                "pos partitioned".into()
            })?;
            checks += 3;
        }
    }
    Ok(format!("{checks} identities"))
}

/// The built-ins exercised by the membership checks.
pub fn builtin_cases() -> Vec<(IdealKind, usize)> {
    use IdealKind::*;
    vec![(Tprime, 2), (Sprime, 2), (Sprime, 3), (Uprime, 2), (CommInv, 3), (T, 2), (S, 2), (U, 2)]
}

/// `f` is nonzero at an exact point where every generator vanishes.
pub fn verify_exact_witness(ideal: &RRIdeal, f: &NcPoly, w: &Witness) -> bool {
    let Witness::Exact { point, value, .. } = w else { return false };
    ideal.generators().iter().all(|p| p.eval(point).is_ok_and(|v| v.is_zero()))
        && f.eval(point).is_ok_and(|v| v == *value && !v.is_zero())
}

fn membership_oracle() -> Result<String, String> {
    let mut total = 0;
    for (kind, g) in builtin_cases() {
        let ideal = builtin_ideal(kind, g).map_err(|e| e.to_string())?;
        for (i, p) in ideal.generators().iter().enumerate() {
            ensure(ideal.is_member(p).map_err(|e| e.to_string())?, || format!("{kind} g={g}: generator {i}"))?;
        }
        let failures: Vec<u64> = (0..100u64)
            .into_par_iter()
            .filter(|&seed| {
                let f = ideal.random_element(seed, (2, 2));
                !ideal.is_member(&f).unwrap_or(false)
            })
            .collect();
        ensure(failures.is_empty(), || format!("{kind} g={g}: random elements {failures:?} rejected"))?;
        total += ideal.generators().len() + 100;
    }
    let fixtures = [(IdealKind::T, "X1 X2 - X2 X1"), (IdealKind::S, "X1 X1^* + X2 X2^* - 1")];
    for (kind, text) in fixtures {
        let ideal = builtin_ideal(kind, 2).map_err(|e| e.to_string())?;
        let f = poly(text, 2);
        let verdict = ideal.membership(&f, Some(&WitnessSearch::default())).map_err(|e| e.to_string())?;
        ensure(!verdict.member, || format!("{text} accepted by {kind}"))?;
        let w = verdict.witness.ok_or_else(|| format!("no witness for {text}"))?;
        ensure(verify_exact_witness(&ideal, &f, &w), || format!("witness for {text} fails exact check"))?;
    }
    Ok(format!("{total} members accepted, 2 non-members refuted exactly"))
}

fn numeric_consistency() -> Result<String, String> {
    const TOL: f64 = 1e-10;
    let mut report = Vec::new();
    for kind in [IdealKind::T, IdealKind::S, IdealKind::U] {
        let ideal = builtin_ideal(kind, 2).map_err(|e| e.to_string())?;
        let domain = ideal.sample_domain().ok_or("no domain")?;
        let mut members = Vec::new();
        let mut seed = 0;
        while members.len() < 20 {
            ensure(seed < 10_000, || format!("{kind}: too few small members"))?;
            let f = ideal.random_element(seed, (1, 1));
            seed += 1;
            let size = ideal.witness_size(&f).map_err(|e| e.to_string())?;
            if !f.is_zero() && size <= 12 {
                members.push((f, size as usize));
            }
        }
        let worst = members
            .par_iter()
            .enumerate()
            .map(|(i, (f, size))| {
                let mut worst = 0f64;
                for s in 1..=*size {
                    for t in 0..50 {
                        let point = domain.sample(s, i as u64, crate::sampler::trial_stream(s, t)).expect("sample");
                        worst = worst.max(f.eval(&point).expect("eval").max_abs());
                    }
                }
                worst
            })
            .reduce(|| 0.0, f64::max);
        ensure(worst <= TOL, || format!("{kind}: member value {worst:e}"))?;
        report.push(format!("{kind}: max {worst:.1e}"));
    }
    let fixtures = [(IdealKind::T, "X1 X2 - X2 X1"), (IdealKind::S, "X1 X1^* + X2 X2^* - 1")];
    for (kind, text) in fixtures {
        let ideal = builtin_ideal(kind, 2).map_err(|e| e.to_string())?;
        let f = poly(text, 2);
        let bound = ideal.witness_size(&f).map_err(|e| e.to_string())? as usize;
        let domain = ideal.sample_domain().ok_or("no domain")?;
        let w = falsify(Target::Poly(&f), &domain, 1..=bound, 200, 0, FalsifyMode::Nonzero, 1e-8)
            .ok_or_else(|| format!("{text}: no witness up to size {bound}"))?;
        report.push(format!("{text}: witness at size {} of {bound}", w.size));
    }
    Ok(report.join("; "))
}

/// Random generalized polynomial in two letters, `m = 2`, of degree `h`.
fn random_genpoly(rng: &mut ChaCha8Rng, h: usize) -> GenPoly {
    let mat = |rng: &mut ChaCha8Rng| {
        MatrixExact::from_vec(2, 2, (0..4).map(|_| Scalar::from_int(rng.gen_range(-2..=2))).collect()).expect("shape")
    };
    let mut acc = GenPoly::zero(2, 2);
    for _ in 0..rng.gen_range(1..=3) {
        let first = mat(rng);
        let rest: Vec<(usize, MatrixExact)> = (0..h).map(|_| (rng.gen_range(0..2), mat(rng))).collect();
        acc = acc.add(&GenPoly::monomial(2, &first, &rest));
    }
    acc
}

fn generalized_polynomials() -> Result<String, String> {
    let mut rng = stream_rng(8, 0);
    let mut polys = Vec::new();
    while polys.len() < 20 {
        let h = polys.len() % 4;
        let p = random_genpoly(&mut rng, h);
        if let Some(deg) = p.degree() {
            polys.push((p, deg));
        }
    }
    let trials: Vec<usize> = polys
        .par_iter()
        .enumerate()
        .map(|(i, (p, h))| {
            let size = 2 * (h + 1).div_ceil(2);
            (0..500u64)
                .find(|&t| {
                    let mut rng = stream_rng(8, ((i as u64) << 32) | t);
                    let z: Vec<MatrixExact> = (0..2)
                        .map(|_| {
                            let data = (0..size * size).map(|_| Scalar::from_int(rng.gen_range(-3..=3))).collect();
                            MatrixExact::from_vec(size, size, data).expect("shape")
                        })
                        .collect();
                    !p.eval(&z).is_zero()
                })
                .map_or(usize::MAX, |t| t as usize + 1)
        })
        .collect();
    let failed: Vec<usize> = trials.iter().enumerate().filter(|(_, t)| **t == usize::MAX).map(|(i, _)| i).collect();
    ensure(failed.is_empty(), || format!("no nonvanishing point for {failed:?}"))?;
    Ok(format!("20 polynomials, at most {} trials", trials.iter().max().unwrap_or(&0)))
}

fn sohs_certificates() -> Result<String, String> {
    let t = builtin_ideal(IdealKind::T, 1).map_err(|e| e.to_string())?;
    let domain = t.sample_domain().ok_or("no domain")?;
    let cert = |squares: &[&str], q: &str| SohsCertificate {
        squares: squares.iter().map(|s| poly(s, 1)).collect(),
        remainder: poly(q, 1),
        cofactors: None,
    };
    let fixtures = [
        ("X1^* X1", cert(&["X1"], "0"), true),
        ("2 - X1^* X1 - X1 X1^*", cert(&[], "2 - X1^* X1 - X1 X1^*"), true),
        ("(1 - X1)^* (1 - X1)", cert(&["1 - X1"], "0"), true),
        ("(1 - X1)^* (1 - X1)", cert(&["1 + X1"], "0"), false),
    ];
    for (f, c, expect) in &fixtures {
        let f = poly(f, 1);
        let r = verify_certificate(&f, c, &t).map_err(|e| e.to_string())?;
        ensure(r.valid == *expect, || format!("certificate for {f}: valid = {}", r.valid))?;
        if r.valid {
            let probe = positivity_probe(&f, &domain, 1..=6, 50, 9, 1e-8);
            ensure(probe.positive, || format!("{f}: min eigenvalue {}", probe.min_eigenvalue))?;
        }
    }
    let prob = gram_constraints(&poly("(1 - X1)^* (1 - X1)", 1), 1, &NcPoly::zero(1)).map_err(|e| e.to_string())?;
    let mut gram = MatrixExact::zeros(prob.basis.len(), prob.basis.len());
    let x1 = Word(vec![Letter::x(1)]);
    let (i0, i1) = (
        prob.basis.iter().position(Word::is_empty).ok_or("no empty word")?,
        prob.basis.iter().position(|w| *w == x1).ok_or("no X1")?,
    );
    for (a, b, v) in [(i0, i0, 1), (i0, i1, -1), (i1, i0, -1), (i1, i1, 1)] {
        gram[(a, b)] = Scalar::from_int(v);
    }
    let exported = crate::positivity::GramProblem::from_text(&prob.to_text()).map_err(|e| e.to_string())?;
    ensure(exported == prob, || "export round trip changed the system".into())?;
    ensure(exported.is_satisfied_by(&gram) && is_hermitian_psd(&gram), || "Gram fixture rejected".into())?;
    Ok(format!("{} certificate fixtures, Gram fixture on {} constraints", fixtures.len(), prob.constraints.len()))
}

fn zero_divisors() -> Result<String, String> {
    let power = |a: &MatrixExact, k: usize| (0..k).fold(MatrixExact::identity(a.rows()), |acc, _| &acc * a);
    let mut count = 0;
    for m in 0..=4 {
        for n in 0..=4 {
            if m + n == 0 {
                continue;
            }
            let (a, b) = zero_divisor_witness(m, n);
            ensure((&a * &b).is_zero(), || format!("AB != 0 at m={m} n={n}"))?;
            ensure(power(&a, n + 1).is_zero(), || format!("A^(n+1) != 0 at m={m} n={n}"))?;
            ensure(power(&b, m + 1).is_zero(), || format!("B^(m+1) != 0 at m={m} n={n}"))?;
            ensure(!(&power(&b, m) * &power(&a, n)).is_zero(), || format!("B^m A^n = 0 at m={m} n={n}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} (m, n) pairs"))
}
