use proptest::prelude::*;

use qcfa::constructions::*;
use qcfa::languages::{power_eq_member, power_eq_parse, theta_of, Alphabet, LanguageOracle, NaturalSet};
use qcfa::machine::{CompiledMachine, ExactOptions};
use qcfa::Real;

fn word() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec!['a', 'b']), 0..14).prop_map(|v| v.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_eq_masses_sum_to_one(w in word()) {
        let m = CompiledMachine::new(power_eq_spec()).unwrap();
        let r = m.run_exact(&w, None, ExactOptions::default()).unwrap();
        prop_assert_eq!(&r.accept_prob + &r.reject_prob, Real::one());
        prop_assert_eq!(r.accept_prob.is_one(), power_eq_parse(&w).member);
    }

    #[test]
    fn stochastic_formula_tracks_the_machine(w in word(), seed in 0u64..4) {
        let o = LanguageOracle::random(Alphabet::Binary, 8, seed);
        let theta = theta_of(&o);
        let m = CompiledMachine::new(stochastic_spec(&theta).unwrap()).unwrap();
        let r = m.run_exact(&w, None, ExactOptions::default()).unwrap();
        let f = stochastic_acceptance(&w, &theta);
        prop_assert!((r.accept_prob.to_f64() - f.accept.to_f64()).abs() < 1e-30);
    }
}

#[test]
fn every_bundle_meets_its_claims_on_small_members() {
    let o = LanguageOracle::random(Alphabet::Binary, 10, 5);
    let bundles = [
        build_power_eq(),
        build_theorem1(&o),
        build_stochastic_1qcfa(&o).unwrap(),
        build_2qcca_power_eq_l(&o),
    ];
    for b in &bundles {
        let m = CompiledMachine::new(b.spec.clone()).unwrap();
        for n in 0..=1 {
            let w = power_eq_member(n);
            let r = m.run_exact(&w, None, ExactOptions::default()).unwrap();
            assert!(b.holds(&w, &r.accept_prob).unwrap(), "{} on n = {n}", b.spec.name);
        }
    }
}

#[test]
fn upower_rejects_the_single_letter() {
    let b = build_2qcca_upower(&NaturalSet::from_members(&[0, 1], 4));
    assert!(!b.reference.covers("a"));
    let m = CompiledMachine::new(b.spec).unwrap();
    let r = m.run_exact("a", None, ExactOptions::default()).unwrap();
    assert!(r.reject_prob.is_one());
}

#[test]
fn phase_covers_only_powers_of_eight() {
    let o = LanguageOracle::full(Alphabet::Binary, 4);
    let b = build_power_eq_l_phase(&o);
    assert!(b.reference.covers(&"a".repeat(64)));
    assert!(!b.reference.covers(&"a".repeat(63)));
    assert!(!b.reference.covers("a"));
}
