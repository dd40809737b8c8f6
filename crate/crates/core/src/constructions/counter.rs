//! Two-way machines with a classical counter.

use super::gadgets::{add_phase, measure, otherwise, reset, reset_then};
use crate::machine::{MachineKind, MachineSpec, Role, Rule, Transition, LEFT_END as L, RIGHT_END as R};
use crate::quantum::Angle;

fn counter_base(name: &str, alphabet: &[char], initial: &str) -> MachineSpec {
    let mut m = MachineSpec::new(name, MachineKind::TwoWayCounter, alphabet, 2);
    m.superop("reset", reset()).superop("measure", measure());
    m.state(initial, Role::Normal).state("yes", Role::Accept).state("no", Role::Reject);
    m
}

/// Unary powers of 8. The first pass leaves m/8 in the counter; each zigzag
/// walks back that many squares and counts the suffix again in eighths, so
/// the counter runs through m/8, m/64, ... and reaching 1 starts the phase.
pub fn upower_spec(theta: &Angle) -> MachineSpec {
    let mut m = counter_base("upower-2qcca", &['a'], "start");
    let r = |p: &str, k: usize| format!("{p}{k}");
    for k in 0..8 {
        m.state(&r("r", k), Role::Normal).state(&r("zag", k), Role::Normal);
    }
    m.states(&["chk", "chk1", "zig"]);
    m.rule(Rule::at("start", L).goto("r0", 1));
    otherwise(&mut m, "start", "no");
    // first pass and every zag count eighths the same way
    for p in ["r", "zag"] {
        for k in 0..8 {
            let t = Transition::to(&r(p, (k + 1) % 8), 1).counter(if k == 7 { 1 } else { 0 });
            m.rule(Rule::at(&r(p, k), 'a').then(t));
            if k == 0 {
                m.rule(Rule::at(&r(p, k), R).counter_zero(false).goto("chk", 0));
            }
            otherwise(&mut m, &r(p, k), "no");
        }
    }
    // counter == 1 ?
    m.rule(Rule::at("chk", R).counter_zero(false).then(Transition::to("chk1", 0).counter(-1)));
    otherwise(&mut m, "chk", "no");
    m.rule(Rule::at("chk1", R).counter_zero(true).goto("ph_home", 0));
    m.rule(Rule::at("chk1", R).counter_zero(false).then(Transition::to("zig", 0).counter(1)));
    otherwise(&mut m, "chk1", "no");
    for c in ['a', R] {
        m.rule(Rule::at("zig", c).counter_zero(false).then(Transition::to("zig", -1).counter(-1)));
    }
    m.rule(Rule::at("zig", 'a').counter_zero(true).goto("zag0", 0));
    otherwise(&mut m, "zig", "no");
    add_phase(&mut m, theta);
    m
}

/// POWER-EQ(L) in two sweeps. Left to right, the counter compares block pairs
/// (0,1), (2,3), ...; right to left it compares (1,2), (3,4), ... and the
/// sweep ends on `¢`, where the rotation phase begins.
pub fn power_eq_linear_spec(theta: &Angle) -> MachineSpec {
    let mut m = counter_base("power-eq-l-2qcca", &['a', 'b'], "start");
    let k8 = |p: &str, k: usize| format!("{p}{k}");
    m.states(&["p_a", "p_b", "small_l", "skip_r", "small_r", "peek1", "peek2"]);
    for k in 0..8 {
        for p in ["z", "big_l", "pre_r", "big_r"] {
            m.state(&k8(p, k), Role::Normal);
        }
    }
    m.rule(Rule::at("start", L).goto("p_a", 1));
    otherwise(&mut m, "start", "no");
    m.rule(Rule::at("p_a", 'a').goto("p_b", 1));
    otherwise(&mut m, "p_a", "no");
    m.rule(Rule::at("p_b", 'b').goto("z0", 1));
    otherwise(&mut m, "p_b", "no");

    // the a^7 block, counted into the counter
    for k in 0..7 {
        m.rule(Rule::at(&k8("z", k), 'a').then(Transition::to(&k8("z", k + 1), 1).counter(1)));
        otherwise(&mut m, &k8("z", k), "no");
    }
    m.rule(Rule::at("z7", 'b').goto("big_l0", 1));
    m.rule(Rule::at("z7", R).goto("ph_home", -1));
    otherwise(&mut m, "z7", "no");

    // odd blocks left to right: one decrement per 8 a's, ending on zero
    for k in 0..8 {
        let s = k8("big_l", k);
        let next = k8("big_l", (k + 1) % 8);
        if k == 0 {
            m.rule(Rule::at(&s, 'a').counter_zero(false).then(Transition::to(&next, 1).counter(-1)));
            m.rule(Rule::at(&s, 'b').counter_zero(true).goto("small_l", 1));
            m.rule(Rule::at(&s, R).counter_zero(true).goto("skip_r", -1));
        } else {
            m.rule(Rule::at(&s, 'a').goto(&next, 1));
        }
        otherwise(&mut m, &s, "no");
    }
    // even blocks left to right: count every a
    m.rule(Rule::at("small_l", 'a').then(Transition::to("small_l", 1).counter(1)));
    m.rule(Rule::at("small_l", 'b').goto("big_l0", 1));
    m.rule(Rule::at("small_l", R).goto("pre_r0", -1));
    otherwise(&mut m, "small_l", "no");

    // right to left
    m.rule(Rule::at("skip_r", 'a').goto("skip_r", -1));
    m.rule(Rule::at("skip_r", 'b').goto("big_r0", -1));
    otherwise(&mut m, "skip_r", "no");
    // last block even and still counted: keep one count in eight
    for k in 0..8 {
        let s = k8("pre_r", k);
        let next = k8("pre_r", (k + 1) % 8);
        if k < 7 {
            m.rule(Rule::at(&s, 'a').counter_zero(false).then(Transition::to(&next, -1).counter(-1)));
        } else {
            m.rule(Rule::at(&s, 'a').goto(&next, -1));
        }
        if k == 0 {
            m.rule(Rule::at(&s, 'b').goto("small_r", -1));
        }
        otherwise(&mut m, &s, "no");
    }
    // even blocks right to left: one increment per 8 a's
    for k in 0..8 {
        let s = k8("big_r", k);
        let t = Transition::to(&k8("big_r", (k + 1) % 8), -1).counter(if k == 7 { 1 } else { 0 });
        m.rule(Rule::at(&s, 'a').then(t));
        if k == 0 {
            m.rule(Rule::at(&s, 'b').goto("small_r", -1));
        }
        if k == 7 {
            // possibly the a^7 block: `a` then `¢` must follow
            m.rule(Rule::at(&s, 'b').counter_zero(true).goto("peek1", -1));
        }
        otherwise(&mut m, &s, "no");
    }
    m.rule(Rule::at("small_r", 'a').counter_zero(false).then(Transition::to("small_r", -1).counter(-1)));
    m.rule(Rule::at("small_r", 'b').counter_zero(true).goto("big_r0", -1));
    otherwise(&mut m, "small_r", "no");
    m.rule(Rule::at("peek1", 'a').goto("peek2", -1));
    otherwise(&mut m, "peek1", "no");
    m.rule(reset_then("peek2", L, Transition::to("ph_scan", 1)));
    otherwise(&mut m, "peek2", "no");
    add_phase(&mut m, theta);
    m
}
