use super::*;
use crate::languages::{power_eq_member, Alphabet};
use crate::machine::{run_exact, CompiledMachine, ExactOptions};

#[test]
fn tables_are_total() {
    let o = LanguageOracle::random(Alphabet::Binary, 8, 3);
    let specs = [
        power_eq_spec(),
        theorem1_spec(&theta_of(&o).angle()),
        phase_spec(&theta_of(&o).angle()),
        upower_spec(&theta_of(&o).angle()),
        power_eq_linear_spec(&theta_of(&o).angle()),
        stochastic_spec(&theta_of(&o)).unwrap(),
    ];
    for s in &specs {
        s.check().unwrap();
        assert!(s.missing_transitions().is_empty(), "{}: {:?}", s.name, &s.missing_transitions()[..1]);
    }
}

#[test]
fn smallest_member_is_accepted_with_certainty() {
    let r = run_exact(&power_eq_spec(), &power_eq_member(0), 1_000).unwrap();
    assert_eq!(r.accept_prob, Real::one());
}

#[test]
fn malformed_strings_are_rejected_outright() {
    for w in ["", "b", "ab", "abaa", "abaaaaaaab", "abaaaaaaaba"] {
        let r = run_exact(&power_eq_spec(), w, 1_000).unwrap();
        assert_eq!(r.reject_prob, Real::one(), "{w:?}");
    }
}

#[test]
fn bounds_compare_with_the_right_side() {
    let b = build_power_eq();
    assert!(b.claims.holds(true, &Real::one()));
    assert!(!b.claims.holds(false, &Real::ratio(1, 2)));
    assert!(b.claims.holds(false, &Real::ratio(1, 3)));
    let s = build_stochastic_1qcfa(&LanguageOracle::full(Alphabet::Binary, 4)).unwrap();
    assert!(!s.claims.holds(true, &Real::ratio(1, 2)));
}

#[test]
fn phase_reads_the_digit() {
    let o = LanguageOracle::from_fn(Alphabet::Binary, 6, |s| s == "0");
    let b = build_power_eq_l_phase(&o);
    let m = CompiledMachine::new(b.spec.clone()).unwrap();
    for (w, member) in [("a".repeat(8), false), ("a".repeat(64), true)] {
        let r = m.run_exact(&w, None, ExactOptions::default()).unwrap();
        assert_eq!(b.reference.member(&w).unwrap(), member);
        assert!(b.holds(&w, &r.accept_prob).unwrap(), "{} {}", w.len(), r.accept_prob);
    }
}

#[test]
fn stochastic_formula_matches_the_machine_on_a_short_member() {
    let o = LanguageOracle::full(Alphabet::Binary, 6);
    let theta = theta_of(&o);
    let w = power_eq_member(0);
    let formula = stochastic_acceptance(&w, &theta);
    let r = run_exact(&stochastic_spec(&theta).unwrap(), &w, 1_000).unwrap();
    assert!((r.accept_prob.to_f64() - formula.accept.to_f64()).abs() < 1e-30);
    assert!(formula.margin().to_f64() > 0.0);
}
