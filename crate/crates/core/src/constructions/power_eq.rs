//! Two-way recognizers for POWER-EQ and POWER-EQ(L).

use super::gadgets::{add_phase, coin, measure, otherwise, reset, reset_then, rotate, sweep};
use crate::machine::{MachineKind, MachineSpec, Role, Rule, Transition, LEFT_END as L, RIGHT_END as R};
use crate::quantum::Angle;

const SIGMA: [char; 2] = ['a', 'b'];
/// Blocks after the a^7 block have lengths 7t with 8 | t.
const BLOCK: usize = 56;

fn blk(r: usize) -> String {
    format!("blk{r}")
}

/// Declares `yes`, `no` and the shared superoperators.
fn base(name: &str) -> MachineSpec {
    let mut m = MachineSpec::new(name, MachineKind::TwoWay, &SIGMA, 2);
    m.superop("reset", reset()).superop("measure", measure()).superop("coin", coin());
    m
}

/// The POWER-EQ loop machine. `exit` is where a successful gate (and the
/// `aba^7` shortcut) leads.
fn power_eq_machine(name: &str, theta: Option<&Angle>) -> MachineSpec {
    let mut m = base(name);
    let exit = if theta.is_some() { "ph_home" } else { "yes" };
    m.state("start", Role::Normal).state("yes", Role::Accept).state("no", Role::Reject).state("again", Role::Restart);

    // deterministic form check
    m.states(&["f_a", "f_b"]);
    m.rule(Rule::at("start", L).goto("f_a", 1));
    otherwise(&mut m, "start", "no");
    m.rule(Rule::at("f_a", 'a').goto("f_b", 1));
    otherwise(&mut m, "f_a", "no");
    m.rule(Rule::at("f_b", 'b').goto("s0", 1));
    otherwise(&mut m, "f_b", "no");
    for k in 0..=7 {
        m.state(&format!("s{k}"), Role::Normal);
    }
    for k in 0..7 {
        m.rule(Rule::at(&format!("s{k}"), 'a').goto(&format!("s{}", k + 1), 1));
        otherwise(&mut m, &format!("s{k}"), "no");
    }
    m.rule(Rule::at("s7", 'b').goto("blk_e", 1));
    m.rule(Rule::at("s7", R).goto(exit, 0));
    otherwise(&mut m, "s7", "no");
    // blk_e: fresh block; blk{r}: r a's mod 56 in a nonempty block
    m.state("blk_e", Role::Normal);
    for r in 0..BLOCK {
        m.state(&blk(r), Role::Normal);
    }
    m.rule(Rule::at("blk_e", 'a').goto(&blk(1), 1));
    otherwise(&mut m, "blk_e", "no");
    for r in 0..BLOCK {
        let s = blk(r);
        m.rule(Rule::at(&s, 'a').goto(&blk((r + 1) % BLOCK), 1));
        if r == 0 {
            m.rule(Rule::at(&s, 'b').goto("blk_e", 1));
            m.rule(Rule::at(&s, R).goto("rewind", -1));
        }
        otherwise(&mut m, &s, "no");
    }

    // LOOP, entered at the leftmost b
    m.states(&["rewind", "seek_b", "back_b", "ccw", "cw"]);
    for k in 1..8 {
        m.state(&format!("cw_skip{k}"), Role::Normal);
    }
    m.superop("rot_ccw", rotate(&Angle::sqrt2_pi(1))).superop("rot_cw", rotate(&Angle::sqrt2_pi(-1)));
    sweep(&mut m, "rewind", &['a', 'b'], -1);
    m.rule(Rule::at("rewind", L).goto("seek_b", 1));
    otherwise(&mut m, "rewind", "no");
    sweep(&mut m, "seek_b", &[L, 'a'], 1);
    m.rule(reset_then("seek_b", 'b', Transition::to("ccw", 1)));
    otherwise(&mut m, "seek_b", "no");
    m.rule(Rule::at("back_b", 'a').goto("back_b", -1));
    m.rule(reset_then("back_b", 'b', Transition::to("ccw", 1)));
    otherwise(&mut m, "back_b", "no");
    m.rule(Rule::at("ccw", 'a').apply("rot_ccw").on("rot", Transition::to("ccw", 1)));
    m.rule(Rule::at("ccw", 'b').goto("cw", 1));
    otherwise(&mut m, "ccw", "no");
    // rotate once, then seven more single-square moves
    m.rule(Rule::at("cw", 'a').apply("rot_cw").on("rot", Transition::to("cw_skip1", 1)));
    for k in 1..8 {
        let next = if k == 7 { "cw".to_string() } else { format!("cw_skip{}", k + 1) };
        m.rule(Rule::at(&format!("cw_skip{k}"), 'a').goto(&next, 1));
        otherwise(&mut m, &format!("cw_skip{k}"), "no");
    }
    m.rule(Rule::at("cw", 'b').apply("measure").on("q0", Transition::to("back_b", -1)).on("q1", Transition::to("no", 0)));
    m.rule(Rule::at("cw", R).apply("measure").on("q0", Transition::to("w1_home", -1)).on("q1", Transition::to("no", 0)));
    otherwise(&mut m, "cw", "no");

    // two walks from the first input symbol, both performed, then two coins
    m.states(&["w1_home", "w1", "w2_home", "w2l", "w2r", "flip1", "flip2", "rewind_loop"]);
    sweep(&mut m, "w1_home", &['a', 'b', R], -1);
    m.rule(Rule::at("w1_home", L).goto("w1", 1));
    for (walk, left, right) in [("w1", "w2l", "w2_home"), ("w2l", "rewind_loop", "rewind_loop"), ("w2r", "rewind_loop", "flip1")] {
        for c in SIGMA {
            m.rule(Rule::at(walk, c).apply("coin").on("heads", Transition::to(walk, 1)).on("tails", Transition::to(walk, -1)));
        }
        let l_move = if left == "w2l" { 1 } else { 0 };
        m.rule(Rule::at(walk, L).goto(left, l_move));
        let r_move = if right == "w2_home" { -1 } else { 0 };
        m.rule(Rule::at(walk, R).goto(right, r_move));
    }
    sweep(&mut m, "w2_home", &['a', 'b', R], -1);
    m.rule(Rule::at("w2_home", L).goto("w2r", 1));
    for (flip, next) in [("flip1", "flip2"), ("flip2", exit)] {
        m.rule(Rule::any(flip).apply("coin").on("heads", Transition::to(next, 0)).on("tails", Transition::to("rewind_loop", 0)));
    }
    sweep(&mut m, "rewind_loop", &['a', 'b', R], -1);
    m.rule(Rule::at("rewind_loop", L).goto("again", 0));
    m.restart_entry = Some("seek_b".into());

    if let Some(t) = theta {
        add_phase(&mut m, t);
    }
    m
}

/// Walk-based recognizer: rejects anything outside POWER-EQ with probability
/// above 2/3 and accepts members with certainty.
pub fn power_eq_spec() -> MachineSpec {
    power_eq_machine("power-eq", None)
}

/// POWER-EQ followed by the rotation phase at exit.
pub fn theorem1_spec(theta: &Angle) -> MachineSpec {
    power_eq_machine("power-eq-l", Some(theta))
}

/// The rotation phase alone, starting on `¢`.
pub fn phase_spec(theta: &Angle) -> MachineSpec {
    let mut m = base("power-eq-l-phase");
    m.state("ph_home", Role::Normal).state("yes", Role::Accept).state("no", Role::Reject);
    add_phase(&mut m, theta);
    m
}
