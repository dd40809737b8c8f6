use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use qcfa::languages::{gamma_of, Alphabet, LanguageOracle};
use qcfa::machine::{CompiledMachine, ExactOptions, McMode, McOptions};
use qcfa::proofsystems::*;
use qcfa::Real;

fn oracle_bits() -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 1..=12)
}

proptest! {
    #[test]
    fn honest_bits_keep_delta_in_range(bits in oracle_bits()) {
        let o = LanguageOracle::new(Alphabet::Unary, bits.clone()).unwrap();
        let g = gamma_of(&o).value();
        let trace = delta_trace(&g, &bits);
        for d in &trace.values {
            prop_assert!(DeltaTrace::honest(d), "{d}");
        }
    }

    #[test]
    fn one_lie_poisons_every_later_delta(
        bits in oracle_bits(),
        lie in 0usize..12,
        tail in prop::collection::vec(any::<bool>(), 0..8),
    ) {
        prop_assume!(lie < bits.len());
        let o = LanguageOracle::new(Alphabet::Unary, bits.clone()).unwrap();
        let g = gamma_of(&o).value();
        let mut sent = bits[..=lie].to_vec();
        sent[lie] = !sent[lie];
        sent.extend(tail);
        let trace = delta_trace(&g, &sent);
        for d in &trace.values[lie + 1..] {
            prop_assert!(DeltaTrace::poisoned(d), "{d}");
        }
    }

    #[test]
    fn round_masses_sum_to_one(symbols in prop::collection::vec(prop::sample::select(vec!['0', '1']), 0..6), n in 0usize..4) {
        let o = LanguageOracle::random(Alphabet::Unary, 8, 3);
        let v = build_unary_verifier(&gamma_of(&o).value()).unwrap();
        let m = CompiledMachine::new(v.machine).unwrap();
        let (round, _, _) = evaluate_transcript(&m, &"a".repeat(n), &symbols, ExactOptions::default()).unwrap();
        prop_assert_eq!(round.total(), Real::one());
    }
}

#[test]
fn search_never_beats_the_honest_prover_on_members() {
    let o = LanguageOracle::full(Alphabet::Unary, 8);
    let v = build_unary_verifier(&gamma_of(&o).value()).unwrap();
    for n in 0..4 {
        let w = "a".repeat(n);
        let honest = run_protocol(&v, honest_prover(&o).as_ref(), &w).unwrap();
        let best = exhaustive_adversary_search(&v, &w, n + 2).unwrap();
        assert_eq!(best.max_acceptance, honest.overall_acceptance, "n = {n}");
        assert_eq!(best.witness, honest_prover(&o).transcript(&w).unwrap().symbols);
    }
}

#[test]
fn biases_outside_the_range_are_refused() {
    let big = BigRational::new(BigInt::from(1), BigInt::from(2));
    assert!(build_unary_verifier(&big).is_err());
    assert!(build_binary_verifier(&-big, &default_c()).is_err());
}

#[test]
fn fixed_transcripts_ignore_the_input() {
    let p = FixedTranscript { symbols: vec!['1', '0'] };
    assert_eq!(p.transcript("aaa").unwrap().symbols, vec!['1', '0']);
}

#[test]
fn out_of_order_blocks_are_caught_on_the_binary_verifier() {
    let o = LanguageOracle::random(Alphabet::Binary, 6, 9);
    let v = build_binary_verifier(&gamma_of(&o).value(), &default_c()).unwrap();
    let r = run_protocol(&v, out_of_order_adversary(&o, &[1, 0, 2]).unwrap().as_ref(), "1").unwrap();
    assert!(r.round.p_reject > r.round.p_accept);
    assert!(out_of_order_adversary(&o, &[0, 0, 1]).unwrap().transcript("1").is_err());
}

#[test]
fn one_sampled_round_matches_the_exact_round() {
    let o = LanguageOracle::random(Alphabet::Unary, 8, 2);
    let v = build_unary_verifier(&gamma_of(&o).value()).unwrap();
    let p = honest_prover(&o);
    let exact = run_protocol(&v, p.as_ref(), "a").unwrap();
    let opts = McOptions { trials: 4000, seed: 11, mode: McMode::SingleRound, ..Default::default() };
    let est = run_protocol_monte_carlo(&v, p.as_ref(), "a", opts).unwrap();
    assert!(est.agrees(est.accept, exact.round.p_accept.to_f64(), 3.0));
    assert!(est.agrees(est.restart, exact.round.p_restart.to_f64(), 3.0));
}
