use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::ncpoly::{NcPoly, Word};
use crate::point::StarRule;
use crate::ratexpr::parse_expression;

fn x(i: u32) -> Letter {
    Letter::x(i)
}

fn ints(rows: &[&[i64]]) -> MatrixExact {
    MatrixExact::from_ints(rows)
}

fn scalar_bp(values: &[(Letter, i64)]) -> Arc<Basepoint> {
    Basepoint::scalar(values.iter().map(|(l, v)| (*l, Scalar::from_int(*v))).collect())
}

fn comm_bp() -> Arc<Basepoint> {
    Basepoint::new(vec![(x(1), MatrixExact::unit(2, 0, 1)), (x(2), MatrixExact::unit(2, 1, 0))]).unwrap()
}

fn expr(text: &str, g: usize) -> RatExpr {
    parse_expression(text, g).unwrap()
}

/// All words over `g` letters of length exactly `len`.
fn words(g: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|w| (0..g).map(move |k| [w.clone(), vec![k]].concat())).collect();
    }
    out
}

fn words_up_to(g: usize, max: usize) -> Vec<Vec<usize>> {
    (0..=max).flat_map(|l| words(g, l)).collect()
}

/// `[S, Y_0^k]` for `m = g = 1` as a plain polynomial in one letter.
fn power_coeff(s: &LinRep, k: usize) -> NcPoly {
    s.coefficient(&vec![0; k]).entry(0, 0).clone()
}

fn y_power(k: usize, c: i64) -> NcPoly {
    NcPoly::monomial(1, Word(vec![x(1); k]), Scalar::from_int(c))
}

#[test]
fn constant_rep() {
    let bp = scalar_bp(&[(x(1), 0)]);
    let one = LinRep::rep_const(&bp, &MatrixExact::identity(1));
    assert_eq!((one.c_block(0), one.b_block(0)), (MatrixExact::identity(1), MatrixExact::identity(1)));
    assert!(one.entry(0, 0, 0).is_zero());
    assert!(LinRep::rep_const(&bp, &MatrixExact::zeros(1, 1)).is_zero());
    for k in 1..4 {
        assert!(one.coefficient(&vec![0; k]).is_zero());
    }
    let two = ints(&[&[2]]);
    assert_eq!(LinRep::rep_const(&bp, &two).coefficient(&[]), GenPoly::constant(1, &two));
}

#[test]
fn variable_rep() {
    let bp = comm_bp();
    let shift = ints(&[&[1, 2], &[3, 4]]);
    let v = LinRep::rep_var(&bp, 1, &shift);
    assert_eq!(v.dim(), 2);
    assert_eq!(v.coefficient(&[]), GenPoly::constant(2, &shift));
    assert_eq!(v.coefficient(&[1]), GenPoly::var(2, 2, 1));
    assert!(v.coefficient(&[0]).is_zero());
    assert!(v.coefficient(&[1, 1]).is_zero());
    assert_eq!(v.entry(1, 0, 1), BimoduleElem::identity(2));
}

#[test]
fn addition_rule() {
    let bp = scalar_bp(&[(x(1), 1), (x(2), 0)]);
    let s1 = compile(&expr("X1 X2", 2), &bp).unwrap();
    let s2 = compile(&expr("X2^-1 + X1", 2), &bp).unwrap_err();
    assert!(matches!(s2, RealizationError::Domain { .. }));
    let s2 = compile(&expr("(X1 + X2)^-1", 2), &bp).unwrap();
    let three = ints(&[&[3]]);
    let sum = LinRep::rep_add(&s1, &three, &s2).unwrap();
    assert_eq!(sum.dim(), s1.dim() + s2.dim());
    for w in words_up_to(2, 4) {
        let direct = s1.coefficient(&w).add(&GenPoly::constant(2, &three).mul(&s2.coefficient(&w)));
        assert_eq!(sum.coefficient(&w), direct);
    }
    let minus = ints(&[&[-1]]);
    assert!(LinRep::rep_add(&s1, &minus, &s1).unwrap().is_zero());
    let zero_scaled = LinRep::rep_add(&s1, &MatrixExact::zeros(1, 1), &s2).unwrap();
    for w in words_up_to(2, 6) {
        assert_eq!(zero_scaled.coefficient(&w), s1.coefficient(&w));
    }
    let other = scalar_bp(&[(x(1), 1), (x(2), 1)]);
    let s3 = compile(&expr("X1", 2), &other).unwrap();
    assert_eq!(LinRep::rep_add(&s1, &three, &s3), Err(RealizationError::BasepointMismatch));
}

#[test]
fn product_rule() {
    let bp = comm_bp();
    let s1 = compile(&expr("X1 + 2 X2 X1", 2), &bp).unwrap();
    let s2 = compile(&expr("(X1 X2 - X2 X1)^-1", 2), &bp).unwrap();
    let prod = LinRep::rep_mul(&s1, &s2).unwrap();
    assert_eq!(prod.dim(), s1.dim() + s2.dim());
    // Convolution at every word of length 2 over the three splittings.
    for w in words(2, 2) {
        let mut direct = GenPoly::zero(2, 2);
        for cut in 0..=2 {
            direct = direct.add(&s1.coefficient(&w[..cut]).mul(&s2.coefficient(&w[cut..])));
        }
        assert_eq!(prod.coefficient(&w), direct);
    }
    let unit = LinRep::rep_mul(&LinRep::rep_const(&bp, &MatrixExact::identity(2)), &s1).unwrap();
    for w in words_up_to(2, 3) {
        assert_eq!(unit.coefficient(&w), s1.coefficient(&w));
    }
}

#[test]
fn inverse_rule() {
    let bp = scalar_bp(&[(x(1), 0)]);
    let s = compile(&expr("1 - X1", 1), &bp).unwrap();
    let inv = LinRep::rep_inv(&s).unwrap();
    assert_eq!(inv.dim(), s.dim() + 1);
    for k in 0..=6 {
        assert_eq!(power_coeff(&inv, k), y_power(k, 1));
    }
    let bp1 = scalar_bp(&[(x(1), 1)]);
    let s = LinRep::letter(&bp1, x(1)).unwrap();
    let prod = LinRep::rep_mul(&s, &LinRep::rep_inv(&s).unwrap()).unwrap();
    let one = LinRep::rep_const(&bp1, &MatrixExact::identity(1));
    assert!(LinRep::rep_add(&prod, &ints(&[&[-1]]), &one).unwrap().is_zero());
    let zero = LinRep::rep_const(&bp1, &MatrixExact::zeros(1, 1));
    assert_eq!(LinRep::rep_inv(&zero), Err(RealizationError::SingularConstantTerm));
}

#[test]
fn inverse_recursion() {
    // [S^{-1}, w] = −Σ_{uv=w, v≠w} a^{-1}[S,u][S^{-1},v]
    let bp = comm_bp();
    let s = compile(&expr("X1 X2 - X2 X1 + X1", 2), &bp).unwrap();
    let inv = LinRep::rep_inv(&s).unwrap();
    let a_inv = s.constant_term().inverse().unwrap();
    assert_eq!(inv.constant_term(), a_inv);
    let a_inv_poly = GenPoly::constant(2, &a_inv);
    for w in words_up_to(2, 3).into_iter().filter(|w| !w.is_empty()) {
        let mut rhs = GenPoly::zero(2, 2);
        for cut in 1..=w.len() {
            rhs = rhs.sub(&a_inv_poly.mul(&s.coefficient(&w[..cut])).mul(&inv.coefficient(&w[cut..])));
        }
        assert_eq!(inv.coefficient(&w), rhs, "word {w:?}");
    }
}

#[test]
fn compile_examples() {
    let bp = scalar_bp(&[(x(1), 1)]);
    let s = compile(&expr("X1^-1", 1), &bp).unwrap();
    assert_eq!(s.dim(), 3);
    for k in 0..=8 {
        assert_eq!(power_coeff(&s, k), y_power(k, if k % 2 == 0 { 1 } else { -1 }));
    }
    let zero_bp = scalar_bp(&[(x(1), 0)]);
    assert_eq!(compile(&expr("X1^-1", 1), &zero_bp), Err(RealizationError::Domain { path: vec![] }));
    let r = compile(&expr("(X1*X2 - X2*X1)^-1", 2), &comm_bp()).unwrap();
    assert_eq!(r.constant_term(), ints(&[&[1, 0], &[0, -1]]));
    assert_eq!(compile(&expr("X2", 2), &bp), Err(RealizationError::UnknownLetter(x(2))));
    let nested = compile(&expr("1 + X1 (X1 - 1)^-1", 1), &bp).unwrap_err();
    assert_eq!(nested, RealizationError::Domain { path: vec![1, 1] });
}

/// The `(g+1)`-dimensional representation of `(1+Y)^{-1}(1 − Σ_{j≥2} X_j Y_j)`
/// over the letters `[X1, X2, Y2, …, Xg, Yg]`.
fn spherical_resolvent_rep(g: usize) -> (Arc<Basepoint>, LinRep) {
    let mut pairs = vec![(x(1), Scalar::one())];
    for j in 2..=g as u32 {
        pairs.push((x(j), Scalar::zero()));
        pairs.push((Letter::y(j), Scalar::zero()));
    }
    let bp = Basepoint::scalar(pairs);
    let n = g + 1;
    let e = |v: i64| BimoduleElem::from_terms(1, &[(ints(&[&[v]]), MatrixExact::identity(1))]);
    let mut entries = vec![(0, 0, 0, e(-1))];
    for j in 2..=g {
        entries.push((2 * j - 3, 0, j, e(-1)));
        entries.push((2 * j - 2, j, 1, e(1)));
    }
    let c: Vec<MatrixExact> = (0..n).map(|p| ints(&[&[i64::from(p == 0)]])).collect();
    let b: Vec<MatrixExact> = (0..n).map(|p| ints(&[&[i64::from(p <= 1)]])).collect();
    let rep = LinRep::from_blocks(&bp, &c, &entries, &b).unwrap();
    (bp, rep)
}

#[test]
fn hand_built_resolvent_representation() {
    for g in 2..=3 {
        let (bp, explicit) = spherical_resolvent_rep(g);
        assert_eq!(explicit.dim(), g + 1);
        assert_eq!(explicit.coefficient(&[]), GenPoly::constant(bp.g(), &MatrixExact::identity(1)));
        let mut text = "X1^-1 (1".to_string();
        for j in 2..=g {
            text.push_str(&format!(" - X{j} Y{j}"));
        }
        text.push(')');
        let compiled = compile(&expr(&text, g), &bp).unwrap();
        for w in words_up_to(bp.g(), 4) {
            assert_eq!(compiled.coefficient(&w), explicit.coefficient(&w), "g={g} w={w:?}");
        }
        let (_, n_min) = compiled.minimize_scalar();
        assert!(n_min <= g + 1);
    }
}

#[test]
fn zero_tests() {
    let bp = scalar_bp(&[(x(1), 1)]);
    assert!(compile(&expr("X1 X1^-1 - 1", 1), &bp).unwrap().is_zero());
    assert!(!compile(&expr("X1*X2 - X2*X1", 2), &comm_bp()).unwrap().is_zero());
    // The S' generator with Y1 resolved vanishes identically.
    let spherical =
        Basepoint::scalar(vec![(x(1), Scalar::one()), (x(2), Scalar::zero()), (Letter::y(2), Scalar::zero())]);
    let composed = compile(&expr("X1 X1^-1 (1 - X2 Y2) + X2 Y2 - 1", 2), &spherical).unwrap();
    assert!(composed.is_zero());
}

#[test]
fn scalarization() {
    let bp = scalar_bp(&[(x(1), 3)]);
    let s = compile(&expr("X1^-1 + 2", 1), &bp).unwrap();
    let r = s.scalarize();
    assert_eq!(r.dim(), s.dim());
    assert_eq!(r.num_letters(), 1);
    for p in 0..s.dim() {
        for q in 0..s.dim() {
            let e = s.entry(0, p, q);
            assert_eq!(&r.a(0).get(p, q), e.reduced_coeff(0, 0, 0, 0));
        }
    }
    let bp2 = comm_bp();
    let t = compile(&expr("X1 X2 + X2^-1", 2), &bp2).unwrap_err();
    assert!(matches!(t, RealizationError::Domain { .. }));
    let t = compile(&expr("X1 X2 + (X1 + X2)^-1", 2), &bp2).unwrap();
    assert_eq!(t.scalarize().dim(), 2 * t.dim());
    assert_eq!(t.scalarize().num_letters(), 8);
    let zero = LinRep::rep_const(&bp2, &MatrixExact::zeros(2, 2));
    let z = zero.scalarize();
    assert!(z.state_matrices().iter().all(SparseMatrix::is_zero));
    assert!(z.constant_term().is_zero());
}

#[test]
fn evaluation_examples() {
    let bp = scalar_bp(&[(x(1), 1)]);
    let s = compile(&expr("X1^-1", 1), &bp).unwrap();
    assert_eq!(s.eval(&[ints(&[&[2]])]).unwrap(), MatrixExact::scalar_identity(1, Scalar::from_frac(1, 2)));
    let bp2 = comm_bp();
    let r = compile(&expr("(X1*X2 - X2*X1)^-1", 2), &bp2).unwrap();
    let at_base = r.eval(&[MatrixExact::unit(2, 0, 1), MatrixExact::unit(2, 1, 0)]).unwrap();
    assert_eq!(at_base, ints(&[&[1, 0], &[0, -1]]));
    assert!(matches!(
        r.eval(&[MatrixExact::identity(3), MatrixExact::identity(3)]),
        Err(RealizationError::PointSize { .. })
    ));
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, range: i64) -> MatrixExact {
    MatrixExact::from_vec(n, n, (0..n * n).map(|_| Scalar::from_int(rng.gen_range(-range..=range))).collect()).unwrap()
}

fn random_expr(rng: &mut ChaCha8Rng, g: u32, depth: usize) -> RatExpr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.7) {
            RatExpr::var(x(rng.gen_range(1..=g)))
        } else {
            RatExpr::int(rng.gen_range(-2..=3))
        };
    }
    match rng.gen_range(0..4) {
        0 => RatExpr::Add(vec![random_expr(rng, g, depth - 1), random_expr(rng, g, depth - 1)]),
        1 => RatExpr::sub(random_expr(rng, g, depth - 1), random_expr(rng, g, depth - 1)),
        2 => RatExpr::Mul(vec![random_expr(rng, g, depth - 1), random_expr(rng, g, depth - 1)]),
        _ => RatExpr::inv(random_expr(rng, g, depth - 1)),
    }
}

#[test]
fn realization_evaluates_like_the_expression() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let bases = [scalar_bp(&[(x(1), 1), (x(2), 2)]), comm_bp()];
    let mut compared = 0;
    for bp in &bases {
        let m = bp.m();
        let mut built = 0;
        while built < 6 {
            let e = random_expr(&mut rng, 2, 3);
            let Ok(rep) = compile(&e, bp) else { continue };
            built += 1;
            for _ in 0..20 {
                let size = m * rng.gen_range(1..=2);
                let point = PointExact::from_pairs(
                    StarRule::Formal,
                    bp.letters().iter().map(|l| (*l, random_matrix(&mut rng, size, 2))),
                )
                .unwrap();
                if let (Ok(a), Ok(b)) = (rep.eval_point(&point), e.eval(&point)) {
                    assert_eq!(a, b, "{e}");
                    compared += 1;
                }
            }
        }
    }
    assert!(compared > 50, "only {compared} comparisons");
}

#[test]
fn coefficient_laws_on_random_reps() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let bp = comm_bp();
    let mut reps = Vec::new();
    while reps.len() < 4 {
        if let Ok(r) = compile(&random_expr(&mut rng, 2, 2), &bp) {
            reps.push(r);
        }
    }
    let a = random_matrix(&mut rng, 2, 2);
    let ws = words_up_to(2, 3);
    for s1 in &reps {
        for s2 in &reps {
            let sum = LinRep::rep_add(s1, &a, s2).unwrap();
            let prod = LinRep::rep_mul(s1, s2).unwrap();
            for w in &ws {
                let expect_sum = s1.coefficient(w).add(&GenPoly::constant(2, &a).mul(&s2.coefficient(w)));
                assert_eq!(sum.coefficient(w), expect_sum);
                let mut conv = GenPoly::zero(2, 2);
                for cut in 0..=w.len() {
                    conv = conv.add(&s1.coefficient(&w[..cut]).mul(&s2.coefficient(&w[cut..])));
                }
                assert_eq!(prod.coefficient(w), conv);
            }
        }
    }
}

#[test]
fn krylov_agrees_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let bp = scalar_bp(&[(x(1), 1), (x(2), -1)]);
    let mut checked = 0;
    let mut zeros = 0;
    for _ in 0..400 {
        let e = random_expr(&mut rng, 2, 3);
        let Ok(rep) = compile(&e, &bp) else { continue };
        if rep.m() * rep.dim() > 6 {
            continue;
        }
        let z = rep.is_zero();
        assert_eq!(z, rep.is_zero_by_enumeration(), "{e}");
        checked += 1;
        zeros += usize::from(z);
    }
    assert!(checked > 30 && zeros > 0, "{checked} checked, {zeros} zero");
}

#[test]
fn minimization() {
    let bp = scalar_bp(&[(x(1), 1)]);
    let s = compile(&expr("X1^-1", 1), &bp).unwrap();
    let (min, n_min) = s.minimize_scalar();
    assert_eq!(n_min, 1);
    for k in 0..=5 {
        assert_eq!(min.coefficient(&vec![0; k]), s.scalarize().coefficient(&vec![0; k]));
    }
    let zero = compile(&expr("X1 - X1", 1), &bp).unwrap();
    assert_eq!(zero.minimize_scalar().1, 0);
    let (_, explicit) = spherical_resolvent_rep(2);
    assert!(explicit.minimize_scalar().1 <= 3);
}

#[test]
fn minimization_preserves_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let bp = scalar_bp(&[(x(1), 2), (x(2), 1)]);
    let mut done = 0;
    while done < 8 {
        let Ok(rep) = compile(&random_expr(&mut rng, 2, 3), &bp) else { continue };
        done += 1;
        let full = rep.scalarize();
        let (min, n) = rep.minimize_scalar();
        assert!(n <= full.dim());
        full.for_each_coefficient(6, &mut |w, c| {
            assert_eq!(&min.coefficient(w), c);
            true
        });
    }
}

#[test]
fn equal_expressions_minimize_alike() {
    let bp = scalar_bp(&[(x(1), 1), (x(2), 2)]);
    let pairs = [
        ("X1 (X2 X1)^-1", "X2^-1"),
        ("X1 (X2 X1)^-1", "(X1^-1)^-1 X1^-1 X2^-1"),
        ("(X1 X2)^-1 X1", "X2^-1"),
        ("(1 + X1 X2)^-1 X1", "X1 (1 + X2 X1)^-1"),
    ];
    for (a, b) in pairs {
        let (ra, rb) = (compile(&expr(a, 2), &bp).unwrap(), compile(&expr(b, 2), &bp).unwrap());
        let diff = LinRep::rep_add(&ra, &ints(&[&[-1]]), &rb).unwrap();
        assert!(diff.is_zero(), "{a} vs {b}");
        assert_eq!(ra.minimize_scalar().1, rb.minimize_scalar().1, "{a} vs {b}");
    }
}

#[test]
fn compiled_leaves_match_direct_substitution() {
    let bp = scalar_bp(&[(x(1), 1), (x(2), 1)]);
    let inv1 = compile(&expr("X1^-1", 2), &bp).unwrap();
    let leaves = BTreeMap::from([(Letter::x_star(1), inv1)]);
    let f = expr("X1^* X2 X1 - X2", 2);
    let with_leaves = compile_with(&f, &bp, &leaves).unwrap();
    let substituted = f.substitute(&BTreeMap::from([(Letter::x_star(1), expr("X1^-1", 2))]));
    let direct = compile(&substituted, &bp).unwrap();
    assert_eq!(with_leaves.dim(), direct.dim());
    assert_eq!(with_leaves.is_zero(), direct.is_zero());
    for w in words_up_to(2, 3) {
        assert_eq!(with_leaves.coefficient(&w), direct.coefficient(&w));
    }
    let minimized = compile_scalar(&substituted, &bp, &BTreeMap::new(), true).unwrap();
    assert!(minimized.dim() <= direct.scalarize().dim());
    direct.scalarize().for_each_coefficient(5, &mut |w, c| {
        assert_eq!(&minimized.coefficient(w), c);
        true
    });
}

#[test]
fn bimodule_terms_round_trip() {
    let p2 = MatrixExact::unit(2, 1, 0);
    let q = ints(&[&[1, 0], &[0, -1]]);
    let e = BimoduleElem::from_terms(2, &[(MatrixExact::identity(2).neg(), &p2 * &q), (p2.clone(), q.clone())]);
    let again = BimoduleElem::from_terms(2, &e.terms());
    assert_eq!(again, e);
    assert!(e.terms().len() <= 4);
    let z = ints(&[&[1, 2], &[3, 5]]);
    let direct = &(&(&z * &p2) * &q).neg() + &(&(&p2 * &z) * &q);
    assert_eq!(e.eval(&z), direct);
}
