//! One-way recognizer with a four-qubit register whose acceptance
//! probability lies above 1/2 exactly on POWER-EQ(L).
//!
//! Qubits 1 and 2 compare neighbouring blocks alternately, qubit 3 is a coin
//! tossed on every `a`, and qubit 4 runs the rotation phase. A comparator
//! that sees q1 rejects. At `$` the rotation phase decides if every coin
//! came up heads; otherwise a fair coin does.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::gadgets::otherwise;
use crate::languages::{power_eq_parse, EncodedAngle};
use crate::machine::{MachineKind, MachineSpec, Role, Rule, Transition, LEFT_END as L, RIGHT_END as R};
use crate::quantum::{Angle, Matrix, OperationElement, RationalMatrix, Superoperator};
use crate::real::Real;
use crate::scalar::{ratio, Scalar};
use crate::Result;

const BLOCK: usize = 56;

/// Acceptance of the four-qubit machine, factored by procedure.
#[derive(Clone, Debug, Serialize)]
pub struct StochasticAcceptance {
    pub form: bool,
    /// No comparator rejects.
    pub survive: Real,
    /// Every coin shows heads: 2^-(a-count).
    pub all_heads: Real,
    /// The rotation phase ends in q1.
    pub phase_accept: Real,
    pub accept: Real,
}

impl StochasticAcceptance {
    /// acceptance − 1/2
    pub fn margin(&self) -> Real {
        &self.accept - Real::ratio(1, 2)
    }
}

/// Acceptance probability by composing the independent procedures.
pub fn stochastic_acceptance(w: &str, theta: &EncodedAngle) -> StochasticAcceptance {
    let p = power_eq_parse(w);
    if !(p.short_member || p.form_check) {
        let z = Real::zero();
        return StochasticAcceptance {
            form: false,
            survive: z.clone(),
            all_heads: z.clone(),
            phase_accept: z.clone(),
            accept: z,
        };
    }
    let blocks = &p.blocks.expect("form implies blocks")[1..];
    let mut survive = Real::one();
    for pair in blocks.windows(2) {
        let k = pair[0] as i64 - (pair[1] / 8) as i64;
        let (c2, _, _) = Angle::sqrt2_pi(k).squares();
        survive = survive * c2;
    }
    let heads = Real::Exact(BigRational::new(1.into(), BigInt::from(2).pow(p.a_count as u32)));
    let final_angle = &theta.angle().times(p.a_count as i64) + &Angle::fraction_of_turn(1, 8);
    let (_, _, s2) = final_angle.squares();
    let undecided = (Real::one() - &heads) * Real::ratio(1, 2);
    let accept = &survive * (&heads * &s2 + undecided);
    StochasticAcceptance { form: true, survive, all_heads: heads, phase_accept: s2, accept }
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, k) = (a.rows(), b.rows());
    let mut out = Matrix::zeros(n * k, n * k);
    for i in 0..n {
        for j in 0..n {
            for p in 0..k {
                for q in 0..k {
                    out.set(i * k + p, j * k + q, a.get(i, j) * b.get(p, q));
                }
            }
        }
    }
    out
}

fn kron_rat(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let (n, k) = (a.rows(), b.rows());
    let mut out = RationalMatrix::zeros(n * k, n * k);
    for i in 0..n {
        for j in 0..n {
            for p in 0..k {
                for q in 0..k {
                    out.set(i * k + p, j * k + q, a.get(i, j) * b.get(p, q));
                }
            }
        }
    }
    out
}

fn tensor(ops: [Matrix; 4]) -> Matrix {
    let [a, b, c, d] = ops;
    kron(&kron(&kron(&a, &b), &c), &d)
}

fn rot(angle: &Angle) -> Matrix {
    OperationElement::rotation("rot", angle).matrix().clone()
}

/// Projector onto `bit` of `qubit` (1-based), identity elsewhere.
fn projector(qubit: usize, bit: usize) -> RationalMatrix {
    let mut p = RationalMatrix::zeros(2, 2);
    p.set(bit, bit, ratio(1, 1));
    let mut out = RationalMatrix::identity(1);
    for q in 1..=4 {
        let f = if q == qubit { p.clone() } else { RationalMatrix::identity(2) };
        out = kron_rat(&out, &f);
    }
    out
}

/// Per-`a` unitary: comparator rotations in eighths of √2π steps, plus θ on
/// qubit 4. With `toss` the step also tosses the coin.
fn step_op(q1: i64, q2: i64, theta: &Angle, toss: bool) -> Superoperator {
    let u = tensor([rot(&Angle::sqrt2_pi(q1)), rot(&Angle::sqrt2_pi(q2)), Matrix::identity(2), rot(theta)]);
    if !toss {
        return Superoperator::new(vec![OperationElement::new("go", u)]).expect("unitary");
    }
    let h = Scalar::one() / Scalar::from_i64(2).sqrt();
    let half = u.scale(&h);
    Superoperator::new(vec![OperationElement::new("heads", half.clone()), OperationElement::new("tails", half)])
        .expect("coin step")
}

/// Measures comparator `q` (if any), then decides with qubit 4 (`decide`) or
/// a fair coin.
fn final_op(q: Option<usize>, decide: bool) -> Superoperator {
    let keep = match q {
        Some(q) => projector(q, 0),
        None => RationalMatrix::identity(16),
    };
    let mut elems = Vec::new();
    if let Some(q) = q {
        elems.push(OperationElement::exact("cmp", ratio(1, 1), projector(q, 1)));
    }
    if decide {
        let r = tensor([Matrix::identity(2), Matrix::identity(2), Matrix::identity(2), rot(&Angle::fraction_of_turn(1, 8))]);
        let k = keep.to_scalar();
        elems.push(OperationElement::new("acc", projector(4, 1).to_scalar().mul(&r).mul(&k)));
        elems.push(OperationElement::new("rej", projector(4, 0).to_scalar().mul(&r).mul(&k)));
    } else {
        elems.push(OperationElement::exact("acc", ratio(1, 2), keep.clone()));
        elems.push(OperationElement::exact("rej", ratio(1, 2), keep));
    }
    Superoperator::new(elems).expect("final measurement")
}

fn measure_op(q: usize) -> Superoperator {
    Superoperator::new(vec![
        OperationElement::exact("q0", ratio(1, 1), projector(q, 0)),
        OperationElement::exact("q1", ratio(1, 1), projector(q, 1)),
    ])
    .expect("measurement")
}

/// The literal 16-dimensional machine. Classical states track the form
/// check, whether every coin so far showed heads (`h`/`t`) and which
/// comparator is counting down in the current block (`p1`/`p2`).
pub fn stochastic_spec(theta: &EncodedAngle) -> Result<MachineSpec> {
    let th = theta.angle();
    let mut m = MachineSpec::new("stochastic-1qcfa", MachineKind::OneWayMultiqubit, &['a', 'b'], 16);
    m.state("start", Role::Normal).state("yes", Role::Accept).state("no", Role::Reject);
    m.state("f_a", Role::Normal);
    m.rule(Rule::at("start", L).goto("f_a", 1));
    otherwise(&mut m, "start", "no");

    // after an a: heads keeps the flag, tails clears it
    let toss = |m: &mut MachineSpec, state: &str, sym: char, op: &str, flag: char, next: &dyn Fn(char) -> String| {
        let r = if flag == 'h' {
            Rule::at(state, sym).apply(op).on("heads", Transition::to(&next('h'), 1)).on("tails", Transition::to(&next('t'), 1))
        } else {
            Rule::at(state, sym).apply(op).on("go", Transition::to(&next('t'), 1))
        };
        m.rule(r);
    };
    for f in ['h', 't'] {
        let toss_flag = f == 'h';
        m.superop(&format!("lead_{f}"), step_op(0, 0, &th, toss_flag));
        m.superop(&format!("first_{f}"), step_op(1, 0, &th, toss_flag));
        // p1: qubit 1 counts down every eighth a, qubit 2 counts up
        for (p, ccw1, ccw2) in [(1, 0, 1), (2, 1, 0)] {
            let (cw1, cw2) = if p == 1 { (-1, 0) } else { (0, -1) };
            m.superop(&format!("blk_p{p}_tick_{f}"), step_op(ccw1 + cw1, ccw2 + cw2, &th, toss_flag));
            m.superop(&format!("blk_p{p}_{f}"), step_op(ccw1, ccw2, &th, toss_flag));
            m.superop(&format!("end_p{p}_{f}"), final_op(Some(p), toss_flag));
        }
        m.superop(&format!("end_short_{f}"), final_op(None, toss_flag));
    }
    m.superop("meas_q1", measure_op(1)).superop("meas_q2", measure_op(2));

    toss(&mut m, "f_a", 'a', "lead_h", 'h', &|g| format!("f_b_{g}"));
    otherwise(&mut m, "f_a", "no");
    let fin = |m: &mut MachineSpec, state: &str, op: &str| {
        m.rule(Rule::at(state, R).apply(op).on("acc", Transition::to("yes", 0)).on("rej", Transition::to("no", 0)));
        if m.superoperators[op].element("cmp").is_some() {
            let last = m.rules.len() - 1;
            m.rules[last].outcomes.insert("cmp".into(), Transition::to("no", 0));
        }
    };
    for f in ['h', 't'] {
        let fb = format!("f_b_{f}");
        m.state(&fb, Role::Normal);
        m.rule(Rule::at(&fb, 'b').goto(&format!("s0_{f}"), 1));
        otherwise(&mut m, &fb, "no");
        for k in 0..=7 {
            m.state(&format!("s{k}_{f}"), Role::Normal);
        }
        for k in 0..7 {
            let s = format!("s{k}_{f}");
            toss(&mut m, &s, 'a', &format!("first_{f}"), f, &|g| format!("s{}_{g}", k + 1));
            otherwise(&mut m, &s, "no");
        }
        let s7 = format!("s7_{f}");
        m.rule(Rule::at(&s7, 'b').goto(&format!("blk_e_p1_{f}"), 1));
        fin(&mut m, &s7, &format!("end_short_{f}"));
        otherwise(&mut m, &s7, "no");
        for p in [1, 2] {
            let other = 3 - p;
            let e = format!("blk_e_p{p}_{f}");
            m.state(&e, Role::Normal);
            for r in 0..BLOCK {
                m.state(&format!("blk{r}_p{p}_{f}"), Role::Normal);
            }
            toss(&mut m, &e, 'a', &format!("blk_p{p}_tick_{f}"), f, &|g| format!("blk1_p{p}_{g}"));
            otherwise(&mut m, &e, "no");
            for r in 0..BLOCK {
                let s = format!("blk{r}_p{p}_{f}");
                let op = if r % 8 == 0 { format!("blk_p{p}_tick_{f}") } else { format!("blk_p{p}_{f}") };
                let nr = (r + 1) % BLOCK;
                toss(&mut m, &s, 'a', &op, f, &|g| format!("blk{nr}_p{p}_{g}"));
                if r == 0 {
                    m.rule(
                        Rule::at(&s, 'b')
                            .apply(&format!("meas_q{p}"))
                            .on("q0", Transition::to(&format!("blk_e_p{other}_{f}"), 1))
                            .on("q1", Transition::to("no", 0)),
                    );
                    fin(&mut m, &s, &format!("end_p{p}_{f}"));
                }
                otherwise(&mut m, &s, "no");
            }
        }
    }
    Ok(m)
}
