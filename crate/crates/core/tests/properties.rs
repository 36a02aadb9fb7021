use ncnull::ideals::{builtin_ideal, IdealKind};
use ncnull::sampler::{falsify, DomainKind, FalsifyMode, SampleDomain, Target};
use ncnull::{parse_polynomial, NcPoly};
use proptest::prelude::*;

fn star_kind() -> impl Strategy<Value = IdealKind> {
    prop_oneof![Just(IdealKind::T), Just(IdealKind::S), Just(IdealKind::U)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn falsify_finds_nothing_for_members(kind in star_kind(), seed in any::<u64>()) {
        let ideal = builtin_ideal(kind, 2).unwrap();
        let domain = ideal.sample_domain().unwrap();
        let f = ideal.random_element(seed, (2, 2));
        prop_assume!(!f.is_zero());
        let w = falsify(Target::Poly(&f), &domain, 1..=4, 20, seed, FalsifyMode::Nonzero, 1e-8);
        prop_assert!(w.is_none(), "{f}");
    }

    #[test]
    fn membership_is_star_symmetric(kind in star_kind(), seed in any::<u64>(), word in "[12]{0,3}") {
        let ideal = builtin_ideal(kind, 2).unwrap();
        let g = ideal.g();
        let member = ideal.random_element(seed, (1, 2));
        let mut text = "1".to_string();
        for c in word.chars() {
            text.push_str(&format!(" X{c}"));
        }
        let other = parse_polynomial(&text, g).unwrap();
        for f in [member.clone(), member.try_add(&other).unwrap()] {
            prop_assert_eq!(ideal.is_member(&f).unwrap(), ideal.is_member(&f.star()).unwrap(), "{}", f);
        }
    }

    #[test]
    fn two_sided_closure(kind in prop_oneof![Just(IdealKind::Tprime), Just(IdealKind::Sprime), Just(IdealKind::T)], seeds in (any::<u64>(), any::<u64>())) {
        let ideal = builtin_ideal(kind, 2).unwrap();
        let letters = ideal.letters();
        let g = ideal.g();
        let (f, h) = (ideal.random_element(seeds.0, (1, 1)), ideal.random_element(seeds.1, (1, 1)));
        let a = NcPoly::letter(g, letters[(seeds.0 % letters.len() as u64) as usize]);
        let b = NcPoly::letter(g, letters[(seeds.1 % letters.len() as u64) as usize]);
        let combo = a.try_mul(&f).unwrap().try_mul(&b).unwrap().try_add(&h).unwrap();
        prop_assert!(ideal.is_member(&combo).unwrap());
    }

    #[test]
    fn sampler_residuals(kind in prop_oneof![Just(DomainKind::Unitaries), Just(DomainKind::Spherical), Just(DomainKind::Partitioned)], g in 1usize..=3, n in 1usize..=32, seed in any::<u64>()) {
        prop_assume!(!(kind == DomainKind::Spherical && g == 1));
        let d = SampleDomain::new(kind, g).unwrap();
        let p = d.sample(n, seed, 0).unwrap();
        prop_assert!(d.residual(&p) <= 1e-10);
    }
}
