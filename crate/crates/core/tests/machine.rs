use proptest::prelude::*;

use qcfa::machine::*;
use qcfa::Real;

fn walker() -> MachineSpec {
    let mut m = MachineSpec::new("walker", MachineKind::TwoWay, &['a'], 2);
    m.state("start", Role::Normal).state("walk", Role::Normal).state("yes", Role::Accept).state("no", Role::Reject);
    m.superop("coin", qcfa::constructions::coin());
    m.rule(Rule::any("start").goto("walk", 1));
    m.rule(Rule::at("walk", 'a').apply("coin").on("heads", Transition::to("walk", 1)).on("tails", Transition::to("walk", -1)));
    m.rule(Rule::at("walk", LEFT_END).goto("no", 0));
    m.rule(Rule::at("walk", RIGHT_END).goto("yes", 0));
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn walk_engine_matches_closed_form(n in 1usize..40) {
        let m = CompiledMachine::new(walker()).unwrap();
        let r = m.run_exact(&"a".repeat(n), None, ExactOptions::default()).unwrap();
        let (p, _) = walk_absorption(n).unwrap();
        prop_assert_eq!(r.accept_prob, p);
        prop_assert!(r.nonhalt_mass.is_zero());
    }
}

#[test]
fn monte_carlo_is_reproducible() {
    let m = CompiledMachine::new(walker()).unwrap();
    let opts = McOptions { trials: 2000, seed: 3, ..McOptions::default() };
    let a = m.run_monte_carlo("aaaa", None, opts).unwrap();
    let b = m.run_monte_carlo("aaaa", None, opts).unwrap();
    assert_eq!((a.accept, a.mean_steps), (b.accept, b.mean_steps));
    assert!(a.agrees(a.accept, 0.2, 3.0));
}

#[test]
fn symbols_outside_the_alphabet_are_refused() {
    let m = CompiledMachine::new(walker()).unwrap();
    assert!(matches!(m.tape("ab"), Err(qcfa::Error::Contract(_))));
}

#[test]
fn expected_steps_are_exact() {
    let m = CompiledMachine::new(walker()).unwrap();
    let r = m.run_exact("aaa", None, ExactOptions::default()).unwrap();
    assert_eq!(r.expected_steps, Some(Real::int(5)));
}
