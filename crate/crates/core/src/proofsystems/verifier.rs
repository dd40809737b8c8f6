//! Restarting verifiers that read a prover's stream alongside the input.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::languages::{DAGGER, HASH};
use crate::machine::{MachineKind, MachineSpec, Role, Rule, Transition, LEFT_END as L, RIGHT_END as R};
use crate::quantum::{complete_superoperator, OperationElement, RationalMatrix, Register, Superoperator};
use crate::scalar::ratio;
use crate::{Error, Result};

/// Outcome label given to completion elements.
pub const RESTART: &str = "restart";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifierKind {
    Unary,
    Binary,
}

/// A verifier machine. Every outcome is visible to the prover; `agree`
/// outcomes accept iff the prover's latest membership bit was 1.
#[derive(Clone, Debug)]
pub struct VerifierSpec {
    pub machine: MachineSpec,
    pub kind: VerifierKind,
    pub gamma: BigRational,
    /// Common coefficient of the binary verifier's elements.
    pub c: Option<BigRational>,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// INIT, PROC-0, PROC-1 and RIGHT on one qubit.
pub fn unary_superoperators(gamma: &BigRational) -> Vec<(&'static str, Superoperator)> {
    let g = gamma.clone();
    let z = rat(0);
    let o = rat(1);
    let norm = BigRational::one() / (BigRational::one() + &g * &g);
    let init = Superoperator::new(vec![
        OperationElement::exact("go1", norm.clone(), RationalMatrix::from_rows(vec![vec![g.clone(), z.clone()], vec![o.clone(), z.clone()]])),
        OperationElement::exact("go2", norm, RationalMatrix::from_rows(vec![vec![z.clone(), g], vec![z, o]])),
    ]);
    let proc0 = Superoperator::new(vec![
        OperationElement::exact_i64("go", ratio(1, 16), &[&[4, 0], &[0, 1]]),
        OperationElement::exact_i64(RESTART, ratio(15, 16), &[&[0, 1], &[0, 0]]),
    ]);
    let proc1 = Superoperator::new(vec![
        OperationElement::exact_i64("go", ratio(1, 18), &[&[4, -1], &[0, 1]]),
        OperationElement::exact_i64(RESTART, ratio(1, 18), &[&[1, 4], &[1, 0]]),
    ]);
    let right = Superoperator::new(vec![
        OperationElement::exact_i64("reject", ratio(1, 1), &[&[1, 0], &[0, 0]]),
        OperationElement::exact_i64("agree", ratio(1, 3), &[&[0, 0], &[0, 1]]),
        OperationElement::exact_i64(RESTART, ratio(2, 3), &[&[0, 1], &[0, 0]]),
    ]);
    vec![
        ("INIT", init.expect("INIT")),
        ("PROC-0", proc0.expect("PROC-0")),
        ("PROC-1", proc1.expect("PROC-1")),
        ("RIGHT", right.expect("RIGHT")),
    ]
}

/// Verifier for a unary language encoded in `gamma` (see `gamma_of`). The prover streams one
/// membership bit per prefix `ε, a, ..., a^n`.
pub fn build_unary_verifier(gamma: &BigRational) -> Result<VerifierSpec> {
    let g = gamma.clone();
    check_bias(&g)?;
    let mut m = MachineSpec::new("unary-verifier", MachineKind::TwoWay, &['a'], 2);
    m.prover_alphabet = vec!['0', '1'];
    for (name, op) in unary_superoperators(&g) {
        m.superop(name, op);
    }
    m.state("init", Role::Normal).states(&["proc", "after0", "after1"]);
    m.state("yes", Role::Accept).state("no", Role::Reject).state("again", Role::Restart);
    let again = Transition::to("again", 0);
    m.rule(Rule::at("init", L).apply("INIT").on("go1", Transition::to("proc", 0)).on("go2", Transition::to("proc", 0)));
    m.rule(Rule::any("init").goto("no", 0));
    for s in ["proc", "after0", "after1"] {
        for sym in [L, 'a'] {
            for b in ['0', '1'] {
                let op = format!("PROC-{b}");
                let next = format!("after{b}");
                m.rule(
                    Rule::at(s, sym)
                        .prover(b)
                        .apply(&op)
                        .on("go", Transition::to(&next, 1).advance())
                        .on(RESTART, again.clone()),
                );
            }
        }
        m.rule(Rule::any(s).goto("no", 0));
    }
    for (s, verdict) in [("after0", "no"), ("after1", "yes")] {
        m.rule(
            Rule::at(s, R)
                .apply("RIGHT")
                .on("reject", Transition::to("no", 0))
                .on("agree", Transition::to(verdict, 0))
                .on(RESTART, again.clone()),
        );
    }
    Ok(VerifierSpec { machine: m, kind: VerifierKind::Unary, gamma: g, c: None })
}

fn check_bias(g: &BigRational) -> Result<()> {
    if *g < rat(0) || *g > ratio(1, 3) {
        return Err(Error::contract(format!("γ = {g} is outside [0, 1/3]")));
    }
    Ok(())
}

/// The binary verifier's partial operation elements, before completion.
/// Every element is `c` times an integer matrix (DECIDE's agree also carries
/// 1/√3).
pub fn binary_partial_elements(c: &BigRational) -> Vec<(&'static str, Vec<OperationElement>)> {
    let c2 = c * c;
    let el = |label: &str, scale: BigRational, rows: &[&[i64]]| OperationElement::exact_i64(label, scale, rows);
    vec![
        ("ENCODE-0", vec![el("go", c2.clone(), &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, 1]])]),
        ("ENCODE-1", vec![el("go", c2.clone(), &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 1, 2, 0], &[0, 0, 0, 1]])]),
        (
            "SUCC",
            vec![
                el("go", c2.clone(), &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 1, 0, 0], &[0, 1, 1, 0]]),
                el("reject", c2.clone(), &[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 1, -1], &[0, 0, 0, 0]]),
            ],
        ),
        ("PROC-0", vec![el("go", c2.clone(), &[&[4, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])]),
        ("PROC-1", vec![el("go", c2.clone(), &[&[4, -1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])]),
        (
            "DECIDE",
            vec![
                el("reject", c2.clone(), &[&[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]),
                el("agree", c2 / rat(3), &[&[0, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]),
            ],
        ),
    ]
}

/// The binary verifier's superoperators, each completed with a restart element.
pub fn binary_superoperators(c: &BigRational) -> Result<Vec<(&'static str, Superoperator)>> {
    binary_partial_elements(c)
        .into_iter()
        .map(|(name, partial)| {
            complete_superoperator(partial, RESTART)
                .map(|op| (name, op))
                .map_err(|e| match e {
                    Error::CoefficientTooLarge { eigenvalue } => {
                        Error::CoefficientTooLarge { eigenvalue: format!("{name}: {eigenvalue}") }
                    }
                    other => other,
                })
        })
        .collect()
}

/// Verifier for a binary language. The prover sends blocks `#s‡σ` for every
/// string up to the input in lexicographic order; the register carries
/// (γ-part, 1, encoding of 1s, expected next index).
pub fn build_binary_verifier(gamma: &BigRational, c: &BigRational) -> Result<VerifierSpec> {
    let g = gamma.clone();
    check_bias(&g)?;
    let mut m = MachineSpec::new("binary-verifier", MachineKind::TwoWay, &['0', '1'], 4);
    m.prover_alphabet = vec![HASH, DAGGER, '0', '1'];
    m.initial_register = Register::exact(vec![g.clone(), rat(1), rat(1), rat(1)]).expect("nonzero");
    for (name, op) in binary_superoperators(c)? {
        m.superop(name, op);
    }
    m.state("hash", Role::Normal).states(&["enc_eq", "enc_ne", "memb", "memb_final", "back", "decide0", "decide1"]);
    m.state("yes", Role::Accept).state("no", Role::Reject).state("again", Role::Restart);
    let again = Transition::to("again", 0);

    m.rule(Rule::at("hash", L).prover(HASH).then(Transition::to("enc_eq", 1).advance()));
    m.rule(Rule::any("hash").goto("no", 0));
    // s is compared with w while it is encoded; only running past w rejects
    for s in ["enc_eq", "enc_ne"] {
        for x in ['0', '1'] {
            for b in ['0', '1'] {
                let next = if s == "enc_eq" && b == x { "enc_eq" } else { "enc_ne" };
                m.rule(
                    Rule::at(s, x)
                        .prover(b)
                        .apply(&format!("ENCODE-{b}"))
                        .on("go", Transition::to(next, 1).advance())
                        .on(RESTART, again.clone()),
                );
            }
        }
        for x in ['0', '1', R] {
            let done = if s == "enc_eq" && x == R { "memb_final" } else { "memb" };
            m.rule(
                Rule::at(s, x)
                    .prover(DAGGER)
                    .apply("SUCC")
                    .on("go", Transition::to(done, 0).advance())
                    .on("reject", Transition::to("no", 0))
                    .on(RESTART, again.clone()),
            );
        }
        m.rule(Rule::any(s).goto("no", 0));
    }
    for (s, after) in [("memb", None), ("memb_final", Some(()))] {
        for b in ['0', '1'] {
            let t = match after {
                None => Transition::to("back", -1).advance(),
                Some(()) => Transition::to(&format!("decide{b}"), 0).advance(),
            };
            m.rule(Rule::any(s).prover(b).apply(&format!("PROC-{b}")).on("go", t).on(RESTART, again.clone()));
        }
        m.rule(Rule::any(s).goto("no", 0));
    }
    for x in ['0', '1', R] {
        m.rule(Rule::at("back", x).goto("back", -1));
    }
    m.rule(Rule::at("back", L).goto("hash", 0));
    for (s, verdict) in [("decide0", "no"), ("decide1", "yes")] {
        m.rule(
            Rule::any(s)
                .apply("DECIDE")
                .on("reject", Transition::to("no", 0))
                .on("agree", Transition::to(verdict, 0))
                .on(RESTART, again.clone()),
        );
    }
    Ok(VerifierSpec { machine: m, kind: VerifierKind::Binary, gamma: g, c: Some(c.clone()) })
}
