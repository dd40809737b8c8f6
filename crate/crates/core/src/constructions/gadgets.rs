//! Small superoperators and rule helpers shared by the recognizers.

use crate::machine::{MachineSpec, Rule, Transition, LEFT_END, RIGHT_END};
use crate::quantum::{Angle, OperationElement, Superoperator};
use crate::scalar::ratio;

/// Fair coin acting trivially on a qubit.
pub fn coin() -> Superoperator {
    Superoperator::new(vec![
        OperationElement::exact_i64("heads", ratio(1, 2), &[&[1, 0], &[0, 1]]),
        OperationElement::exact_i64("tails", ratio(1, 2), &[&[1, 0], &[0, 1]]),
    ])
    .expect("coin")
}

/// Sets a qubit to |q0⟩ whatever its state.
pub fn reset() -> Superoperator {
    Superoperator::new(vec![
        OperationElement::exact_i64("z0", ratio(1, 1), &[&[1, 0], &[0, 0]]),
        OperationElement::exact_i64("z1", ratio(1, 1), &[&[0, 1], &[0, 0]]),
    ])
    .expect("reset")
}

/// Measurement in the computational basis, outcomes `q0` and `q1`.
pub fn measure() -> Superoperator {
    Superoperator::new(vec![
        OperationElement::exact_i64("q0", ratio(1, 1), &[&[1, 0], &[0, 0]]),
        OperationElement::exact_i64("q1", ratio(1, 1), &[&[0, 0], &[0, 1]]),
    ])
    .expect("measure")
}

pub fn rotate(angle: &Angle) -> Superoperator {
    Superoperator::new(vec![OperationElement::rotation("rot", angle)]).expect("rotation")
}

/// Moves in direction `head` over every symbol in `over`.
pub fn sweep(m: &mut MachineSpec, state: &str, over: &[char], head: i8) {
    for &c in over {
        m.rule(Rule::at(state, c).goto(state, head));
    }
}

/// Every cell of `state` not otherwise covered goes to `to` without moving.
pub fn otherwise(m: &mut MachineSpec, state: &str, to: &str) {
    m.rule(Rule::any(state).goto(to, 0));
}

/// Both reset outcomes lead to the same place.
pub fn reset_then(state: &str, sym: char, next: Transition) -> Rule {
    Rule::at(state, sym).apply("reset").on("z0", next.clone()).on("z1", next)
}

/// The rotation phase: rewind to `¢`, reset the qubit, rotate by `theta` on
/// every `a`, rotate by π/4 at `$` and measure, accepting on q1. Entered
/// through `ph_home`; needs `yes`, `no`, `reset` and `measure`.
pub fn add_phase(m: &mut MachineSpec, theta: &Angle) {
    m.states(&["ph_home", "ph_scan", "ph_meas"]);
    m.superop("rot_theta", rotate(theta)).superop("rot_quarter", rotate(&Angle::fraction_of_turn(1, 8)));
    let others: Vec<char> = m.alphabet.iter().copied().filter(|&c| c != 'a').collect();
    sweep(m, "ph_home", &m.alphabet.clone(), -1);
    m.rule(Rule::at("ph_home", RIGHT_END).goto("ph_home", -1));
    m.rule(reset_then("ph_home", LEFT_END, Transition::to("ph_scan", 1)));
    m.rule(Rule::at("ph_scan", 'a').apply("rot_theta").on("rot", Transition::to("ph_scan", 1)));
    sweep(m, "ph_scan", &others, 1);
    m.rule(Rule::at("ph_scan", RIGHT_END).apply("rot_quarter").on("rot", Transition::to("ph_meas", 0)));
    otherwise(m, "ph_scan", "no");
    m.rule(Rule::at("ph_meas", RIGHT_END).apply("measure").on("q0", Transition::to("no", 0)).on("q1", Transition::to("yes", 0)));
    otherwise(m, "ph_meas", "no");
}
