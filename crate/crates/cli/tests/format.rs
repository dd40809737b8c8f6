use qcfa::machine::{CompiledMachine, ExactOptions};
use qcfa::Error;
use qcfa_cli::format::{dump, load, to_json};
use qcfa_cli::sources::{resolve_machine, resolve_prover, OracleSource, Target, BUILTINS};

fn sample_input(name: &str) -> &'static str {
    match name {
        "upower" => "aaaaaaaa",
        "power-eq-l-phase" => "aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa",
        "unary-verifier" => "aa",
        "binary-verifier" => "1",
        _ => "abaaaaaaa",
    }
}

#[test]
fn every_builtin_survives_a_round_trip() {
    for &name in BUILTINS {
        let target = resolve_machine(name, &OracleSource::default(), 7).unwrap();
        let reloaded = load(&to_json(target.spec())).unwrap();
        let input = sample_input(name);
        let transcript = match &target {
            Target::Verifier { oracle, .. } => Some(resolve_prover("honest", oracle.as_ref()).unwrap().transcript(input).unwrap().symbols),
            _ => None,
        };
        let a = CompiledMachine::new(target.spec().clone()).unwrap();
        let b = CompiledMachine::new(reloaded.clone()).unwrap();
        let ra = a.run_exact(input, transcript.as_deref(), ExactOptions::default()).unwrap();
        let rb = b.run_exact(input, transcript.as_deref(), ExactOptions::default()).unwrap();
        assert_eq!(ra.accept_prob, rb.accept_prob, "{name}");
        assert_eq!(ra.reject_prob, rb.reject_prob, "{name}");
        assert_eq!(ra.expected_steps, rb.expected_steps, "{name}");
        // a second pass is a fixed point
        assert_eq!(to_json(&reloaded), to_json(target.spec()), "{name}");
    }
}

#[test]
fn schema_version_is_recorded() {
    let target = resolve_machine("power-eq", &OracleSource::default(), 0).unwrap();
    assert_eq!(dump(target.spec()).schema_version, qcfa_cli::format::SCHEMA_VERSION);
}

#[test]
fn syntax_errors_carry_line_and_column() {
    match load("{\n  \"name\": \"x\",\n  oops\n}") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn bad_expressions_are_located() {
    let target = resolve_machine("unary-verifier:gamma=1/16", &OracleSource::default(), 0).unwrap();
    let text = to_json(target.spec()).replacen("\"1/16\"", "\"1/(16\"", 1);
    assert!(text.contains("1/(16"));
    match load(&text) {
        Err(Error::Parse { line, column, message }) => {
            assert!(line > 1 && column > 1, "{line}:{column}");
            assert!(!message.is_empty());
        }
        other => panic!("unexpected {other:?}"),
    }
}
