use super::*;
use crate::ratexpr::{format_expression, parse_polynomial};
use crate::realization::ScalarRep;

fn p(text: &str, g: usize) -> NcPoly {
    parse_polynomial(text, g).unwrap()
}

fn ideal(kind: IdealKind, g: usize) -> RRIdeal {
    builtin_ideal(kind, g).unwrap()
}

#[test]
fn generator_counts_and_ranges() {
    assert_eq!(ideal(IdealKind::T, 2).generators().len(), 4);
    assert_eq!(ideal(IdealKind::U, 2).generators().len(), 8);
    assert_eq!(ideal(IdealKind::Uprime, 2).generators().len(), 8);
    assert_eq!(builtin_ideal(IdealKind::S, 1).unwrap_err(), IdealError::GOutOfRange { kind: IdealKind::S, g: 1 });
    assert!(matches!(builtin_ideal(IdealKind::Sprime, 1), Err(IdealError::GOutOfRange { .. })));
    assert!(matches!(builtin_ideal(IdealKind::CommInv, 2), Err(IdealError::GOutOfRange { .. })));
    assert!(matches!(builtin_ideal(IdealKind::T, 0), Err(IdealError::GOutOfRange { .. })));
}

#[test]
fn builtins_pass_construction_check() {
    for (kind, gs) in [
        (IdealKind::Tprime, 1..=3),
        (IdealKind::T, 1..=3),
        (IdealKind::Sprime, 2..=4),
        (IdealKind::S, 2..=4),
        (IdealKind::Uprime, 1..=2),
        (IdealKind::U, 1..=2),
        (IdealKind::CommInv, 3..=3),
    ] {
        for g in gs {
            let i = ideal(kind, g);
            for f in i.generators() {
                assert!(i.is_member(f).unwrap() && i.is_member_direct(f).unwrap(), "{kind} g={g}: {f}");
            }
        }
    }
}

#[test]
fn built_in_parameters() {
    let t = ideal(IdealKind::T, 2);
    assert_eq!((t.m(), t.n()), (1, 1));
    let s = ideal(IdealKind::Sprime, 3);
    assert_eq!((s.m(), s.n()), (1, 4));
    assert_eq!(s.basepoint().letters(), &[Letter::x(1), Letter::x(2), Letter::y(2), Letter::x(3), Letter::y(3)]);
    let c = ideal(IdealKind::CommInv, 3);
    assert_eq!((c.m(), c.n()), (2, 3));
    assert!(c.leaf(Letter::x(3)).unwrap().dim() <= 6);
    let u = ideal(IdealKind::U, 2);
    assert_eq!((u.m(), u.n(), u.g(), u.family_g()), (1, 2, 4, 2));
}

#[test]
fn symbolic_inverse_shapes() {
    assert_eq!(format_expression(&symbolic_matrix_inverse(1)[0][0]), "X1^-1");
    let inv = symbolic_matrix_inverse(2);
    assert_eq!(format_expression(&inv[0][0]), "(X1 - X2 X4^-1 X3)^-1");
    assert_eq!(format_expression(&inv[1][1]), "(X4 - X3 X1^-1 X2)^-1");
}

#[test]
fn symbolic_inverse_is_inverse() {
    for g in 1..=3 {
        let inv = symbolic_matrix_inverse(g);
        let bp = Basepoint::scalar(
            (0..g)
                .flat_map(|i| (0..g).map(move |j| (i, j)))
                .map(|(i, j)| (Letter::x(entry_index(g, i, j)), Scalar::from_int(i64::from(i == j))))
                .collect(),
        );
        for i in 0..g {
            for j in 0..g {
                let terms: Vec<RatExpr> = (0..g)
                    .map(|k| RatExpr::product(vec![RatExpr::var(Letter::x(entry_index(g, i, k))), inv[k][j].clone()]))
                    .collect();
                let e = RatExpr::sub(RatExpr::sum(terms), RatExpr::int(i64::from(i == j)));
                assert!(compile(&e, &bp).unwrap().is_zero(), "g={g} ({i},{j})");
            }
        }
    }
}

#[test]
fn neumann_leaves_match_blockwise_formula() {
    for (kind, g) in [(IdealKind::U, 2), (IdealKind::Uprime, 2), (IdealKind::U, 3)] {
        let i = ideal(kind, g);
        for l in i.resolved() {
            let compiled = compile_scalar(&i.resolvent()[l], i.basepoint(), &BTreeMap::new(), true).unwrap();
            let leaf = i.leaf(*l).unwrap();
            let diff = ScalarRep::add(leaf, &MatrixExact::scalar_identity(1, -Scalar::one()), &compiled);
            assert!(diff.is_zero(), "{kind} {l}");
            assert_eq!(leaf.dim(), g);
        }
    }
}

#[test]
fn substitution_examples() {
    let t = ideal(IdealKind::T, 1);
    assert_eq!(format_expression(&t.substitute_resolvent(&p("1 - X1 X1^*", 1)).unwrap()), "1 - X1 X1^-1");
    assert_eq!(format_expression(&t.substitute_resolvent(&p("X1", 1)).unwrap()), "X1");
    let s = ideal(IdealKind::S, 2);
    let e = s.substitute_resolvent(&s.generators()[0]).unwrap();
    assert!(compile(&e, s.basepoint()).unwrap().is_zero());
    assert!(matches!(t.substitute_resolvent(&p("X1", 2)), Err(IdealError::AlphabetMismatch(_))));
    let tp = ideal(IdealKind::Tprime, 1);
    assert!(matches!(tp.is_member(&p("X1^* X1", 1)), Err(IdealError::AlphabetMismatch(_))));
}

#[test]
fn membership_examples() {
    let t = ideal(IdealKind::T, 2);
    assert!(t.is_member(&p("1 - X1 X1^*", 2)).unwrap());
    assert!(t.is_member(&p("X1 X1^* X1 - X1", 2)).unwrap());
    let comm = p("X1 X2 - X2 X1", 2);
    let verdict = t.membership(&comm, Some(&WitnessSearch::default())).unwrap();
    assert!(!verdict.member);
    match verdict.witness.expect("witness") {
        Witness::Exact { size, point, value } => {
            assert!(size <= t.witness_size(&comm).unwrap() as usize);
            assert_eq!(comm.eval(&point).unwrap(), value);
            assert!(!value.is_zero());
            let d = t.sample_domain().unwrap();
            assert_eq!(d.residual(&point.to_float()), 0.0);
        }
        other => panic!("expected an exact witness, got {other:?}"),
    }
    let s = ideal(IdealKind::S, 2);
    let f = p("X1 X1^* + X2 X2^* - 1", 2);
    let verdict = s.membership(&f, Some(&WitnessSearch::default())).unwrap();
    assert!(!verdict.member);
    assert!(matches!(verdict.witness, Some(Witness::Exact { .. })));
    // the fixed pair A1 = E12, A2 = E11
    let point = PointExact::from_pairs(
        StarRule::Adjoint,
        [(Letter::x(1), MatrixExact::unit(2, 0, 1)), (Letter::x(2), MatrixExact::unit(2, 0, 0))],
    )
    .unwrap();
    assert_eq!(f.eval(&point).unwrap(), MatrixExact::from_ints(&[&[1, 0], &[0, -1]]));
    assert!(s.generators()[0].eval(&point).unwrap().is_zero());
    assert!(t.membership(&comm, None).unwrap().witness.is_none());
}

#[test]
fn non_star_witnesses() {
    let c = ideal(IdealKind::CommInv, 3);
    let f = p("X1 X3 - X3 X1", 3);
    let v = c.membership(&f, Some(&WitnessSearch::default())).unwrap();
    assert!(!v.member);
    let Some(Witness::Exact { point, value, .. }) = v.witness else { panic!("exact witness expected") };
    assert!(!value.is_zero());
    for g in c.generators() {
        assert!(g.eval(&point).unwrap().is_zero());
    }
    let sp = ideal(IdealKind::Sprime, 2);
    let v = sp.membership(&p("X1 Y1 - Y1 X1", 2), Some(&WitnessSearch::default())).unwrap();
    assert!(!v.member && v.witness.is_some());
}

#[test]
fn witness_size_dispatch() {
    // degree 3, two terms
    assert_eq!(ideal(IdealKind::T, 2).witness_size(&p("X1 X2 X1 + X2", 2)).unwrap(), 6);
    assert_eq!(ideal(IdealKind::CommInv, 3).witness_size(&p("X1 X2 X1 + X2", 3)).unwrap(), 36);
    assert_eq!(ideal(IdealKind::S, 2).witness_size(&p("X1 X2 X1 + X2", 2)).unwrap(), 9);
    assert_eq!(ideal(IdealKind::Tprime, 2).witness_size(&p("X1 X2 X1 + X2", 2)).unwrap(), 6);
    assert_eq!(ideal(IdealKind::Uprime, 2).witness_size(&p("X1 X2 X1 + X2", 4)).unwrap(), 6);
    assert_eq!(ideal(IdealKind::U, 2).witness_size(&p("X1 X2 X1 + X2", 4)).unwrap(), 6);
    assert_eq!(ideal(IdealKind::T, 2).witness_size(&NcPoly::zero(2)), Err(IdealError::ZeroPolynomial));
}

#[test]
fn random_elements() {
    let t = ideal(IdealKind::T, 2);
    assert_eq!(t.random_element(5, (2, 3)), t.random_element(5, (2, 3)));
    assert_ne!(t.random_element(5, (2, 3)), t.random_element(6, (2, 3)));
    for seed in 0..10 {
        let f = t.random_element(seed, (0, 1));
        let multiple = t.generators().iter().any(|g| {
            let (w, c) = f.terms().next().unwrap();
            let scale = c.checked_div(&g.coeff(w)).unwrap_or_default();
            !scale.is_zero() && g.scale(&scale) == f
        });
        assert!(multiple, "{f}");
    }
}

#[test]
fn routes_agree() {
    for (kind, g) in
        [(IdealKind::T, 2), (IdealKind::Sprime, 2), (IdealKind::CommInv, 3), (IdealKind::Uprime, 2), (IdealKind::S, 2)]
    {
        let i = ideal(kind, g);
        for seed in 0..4 {
            let member = i.random_element(seed, (1, 1));
            assert!(i.is_member(&member).unwrap() && i.is_member_direct(&member).unwrap(), "{kind}: {member}");
            let letters = i.letters();
            let stray = NcPoly::letter(i.g(), letters[seed as usize % letters.len()]);
            let other = member.try_add(&stray).unwrap();
            assert_eq!(i.is_member(&other).unwrap(), i.is_member_direct(&other).unwrap(), "{kind}: {other}");
            assert!(!i.is_member(&other).unwrap());
        }
    }
}

#[test]
fn two_sided_closure() {
    let i = ideal(IdealKind::T, 2);
    let letters = i.letters();
    for seed in 0..6u64 {
        let f = i.random_element(seed, (1, 2));
        let h = i.random_element(seed + 100, (1, 1));
        let a = NcPoly::letter(2, letters[seed as usize % 4]);
        let b = NcPoly::letter(2, letters[(seed as usize + 1) % 4]);
        let combo = a.try_mul(&f).unwrap().try_mul(&b).unwrap().try_add(&h).unwrap();
        assert!(i.is_member(&combo).unwrap());
    }
}

#[test]
fn star_closure() {
    for (kind, g) in [(IdealKind::T, 2), (IdealKind::S, 2), (IdealKind::U, 2)] {
        let i = ideal(kind, g);
        for seed in 0..4 {
            let f = i.random_element(seed, (1, 2));
            assert!(i.is_member(&f.star()).unwrap());
            let non = f.try_add(&NcPoly::letter(i.g(), Letter::x(1))).unwrap();
            assert_eq!(i.is_member(&non).unwrap(), i.is_member(&non.star()).unwrap());
        }
    }
}

#[test]
fn members_vanish_numerically() {
    for (kind, g) in
        [(IdealKind::T, 2), (IdealKind::S, 2), (IdealKind::U, 2), (IdealKind::Sprime, 2), (IdealKind::CommInv, 3)]
    {
        let i = ideal(kind, g);
        for seed in 0..3 {
            let f = i.random_element(seed, (1, 2));
            for size in [1, 2, 4] {
                let mut rng = stream_rng(seed, size as u64);
                if let Some(pt) = i.sample_point(size, &mut rng) {
                    assert!(f.eval(&pt).unwrap().norm() < 1e-9, "{kind} {f} size {size}");
                }
            }
        }
    }
}

const ONE_RELATOR: &str = r#"{
  "name": "one-relator",
  "g": 3,
  "star": false,
  "generators": ["X1 X2 X3 - X2 X1"],
  "resolved": ["X3"],
  "resolvent": {"X3": "X2^-1 X1^-1 X2 X1"},
  "basepoint": {"m": 1, "matrices": {"X1": {"rows": 1, "cols": 1, "entries": [["1", "0"]]},
                                     "X2": {"rows": 1, "cols": 1, "entries": [["1", "0"]]}}}
}"#;

#[test]
fn custom_one_relator() {
    let i = custom_ideal(ONE_RELATOR).unwrap();
    assert_eq!(i.name(), "one-relator");
    assert!(i.kind().is_none());
    assert!(i.is_member(&p("X1 X2 X3 X1 - X2 X1 X1", 3)).unwrap());
    assert!(!i.is_member(&p("X3 - 1", 3)).unwrap());
    assert!(i.n() >= 1);
}

#[test]
fn custom_spec_errors() {
    let overlap =
        ONE_RELATOR.replace(r#""resolved": ["X3"]"#, r#""resolved": ["X2"]"#).replace(r#"{"X3": "#, r#"{"X2": "#);
    assert!(matches!(custom_ideal(&overlap), Err(IdealError::Spec(_))));
    let wrong = ONE_RELATOR.replace("X2^-1 X1^-1 X2 X1", "X1^-1 X2^-1 X2 X1 X1");
    assert!(matches!(custom_ideal(&wrong), Err(IdealError::ResolventNotVanishing { index: 0, .. })));
    assert!(matches!(custom_ideal("{"), Err(IdealError::Spec(_))));
    let unbound = ONE_RELATOR.replace("X2^-1 X1^-1 X2 X1", "X2^-1 X1^-1 X2 X1 X3");
    assert!(matches!(custom_ideal(&unbound), Err(IdealError::Spec(_))));
}
