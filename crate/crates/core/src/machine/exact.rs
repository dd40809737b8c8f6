//! Exact evaluation of one round as a weighted graph.
//!
//! Configurations where the machine branches become nodes (merged by key);
//! deterministic stretches between them are followed in place and become
//! weighted edges. Absorption masses and step masses are then solved per
//! strongly connected component, sinks first, by sparse elimination.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::compiled::{CompiledMachine, ConfigKey, Configuration, Selection, Tape, TranscriptView};
use super::spec::{MachineSpec, Role};
use super::stats::{RoundStatistics, RunResult};
use crate::real::Real;
use crate::{Error, Result};

/// Limits for the exact engine.
#[derive(Clone, Copy, Debug)]
pub struct ExactOptions {
    /// Longest deterministic stretch followed before the branch is declared
    /// non-halting.
    pub max_steps: u64,
    /// Maximum number of branching configurations per round.
    pub node_budget: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { max_steps: 100_000_000, node_budget: 10_000_000 }
    }
}

const ACCEPT: usize = 0;
const REJECT: usize = 1;
const RESTART: usize = 2;
const SUSPEND: usize = 3;
const NONHALT: usize = 4;
const SINKS: usize = 5;

#[derive(Clone, Copy, Debug)]
enum Target {
    Node(usize),
    Sink(usize),
}

#[derive(Debug)]
struct Edge {
    prob: Real,
    steps: u64,
    target: Target,
}

#[derive(Clone, Debug)]
struct Value {
    mass: [Real; SINKS],
    /// Σ probability × length over paths that end the round.
    steps: Real,
}

impl Value {
    fn sink(k: usize) -> Value {
        let mut mass: [Real; SINKS] = std::array::from_fn(|_| Real::zero());
        mass[k] = Real::one();
        Value { mass, steps: Real::zero() }
    }

    fn ending(&self) -> Real {
        &self.mass[ACCEPT] + &self.mass[REJECT] + &self.mass[RESTART] + &self.mass[SUSPEND]
    }
}

struct Explorer<'m, 't> {
    m: &'m CompiledMachine,
    tape: &'t Tape,
    transcript: TranscriptView<'t>,
    opts: ExactOptions,
    configs: Vec<Configuration>,
    edges: Vec<Vec<Edge>>,
    index: HashMap<ConfigKey, usize>,
    queue: VecDeque<usize>,
    truncated: bool,
}

fn same_config(a: &Configuration, b: &Configuration) -> bool {
    a.state == b.state && a.head == b.head && a.counter == b.counter && a.cursor == b.cursor && a.register == b.register
}

impl Explorer<'_, '_> {
    /// Follows deterministic steps from `c` until the machine branches, halts
    /// or needs a missing prover symbol.
    fn follow(&mut self, mut c: Configuration, mut prob: Real, mut steps: u64) -> Result<(Real, u64, Target)> {
        let mut saved: Option<Configuration> = None;
        let (mut power, mut lam) = (1u64, 0u64);
        loop {
            match self.m.role(c.state) {
                Role::Accept => return Ok((prob, steps, Target::Sink(ACCEPT))),
                Role::Reject => return Ok((prob, steps, Target::Sink(REJECT))),
                Role::Restart => return Ok((prob, steps, Target::Sink(RESTART))),
                Role::Normal => {}
            }
            if steps >= self.opts.max_steps {
                return Ok((prob, steps, Target::Sink(NONHALT)));
            }
            let rule = match self.m.select(&c, self.tape, self.transcript)? {
                Selection::NeedsSymbol => return Ok((prob, steps, Target::Sink(SUSPEND))),
                Selection::Halted(_) => unreachable!("normal state"),
                Selection::Rule(r) => r,
            };
            let w = self.m.weights(rule, &c);
            if w.len() != 1 {
                if w.is_empty() {
                    return Err(Error::contract(format!(
                        "every outcome has probability zero in state `{}`",
                        self.m.state_name(c.state)
                    )));
                }
                return Ok((prob, steps, self.node(c)));
            }
            let (o, q) = &w[0];
            if !q.is_one() {
                prob = prob * q;
            }
            c = self.m.successor(rule, *o, &c, self.tape)?;
            steps += 1;
            lam += 1;
            if saved.as_ref().is_some_and(|s| same_config(s, &c)) {
                return Ok((prob, steps, Target::Sink(NONHALT)));
            }
            if lam == power {
                saved = Some(c.clone());
                power *= 2;
                lam = 0;
            }
        }
    }

    fn node(&mut self, c: Configuration) -> Target {
        let key = c.key();
        if let Some(&i) = self.index.get(&key) {
            return Target::Node(i);
        }
        if self.configs.len() >= self.opts.node_budget {
            self.truncated = true;
            return Target::Sink(NONHALT);
        }
        let i = self.configs.len();
        self.configs.push(c);
        self.edges.push(Vec::new());
        self.index.insert(key, i);
        self.queue.push_back(i);
        Target::Node(i)
    }

    fn expand(&mut self, i: usize) -> Result<()> {
        let c = self.configs[i].clone();
        let rule = match self.m.select(&c, self.tape, self.transcript)? {
            Selection::Rule(r) => r,
            _ => unreachable!("nodes are branching configurations"),
        };
        let mut out = Vec::new();
        for (o, p) in self.m.weights(rule, &c) {
            let next = self.m.successor(rule, o, &c, self.tape)?;
            let (prob, steps, target) = self.follow(next, p, 1)?;
            out.push(Edge { prob, steps, target });
        }
        self.edges[i] = out;
        Ok(())
    }
}

/// Absorption values of every node.
fn solve(edges: &[Vec<Edge>]) -> Vec<Value> {
    let n = edges.len();
    let sinks: Vec<Value> = (0..SINKS).map(Value::sink).collect();

    // nodes that cannot end the round carry pure non-halting mass
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut ends = vec![false; n];
    let mut stack = Vec::new();
    for (i, es) in edges.iter().enumerate() {
        for e in es {
            match e.target {
                Target::Node(j) => rev[j].push(i),
                Target::Sink(k) if k != NONHALT && !ends[i] => {
                    ends[i] = true;
                    stack.push(i);
                }
                Target::Sink(_) => {}
            }
        }
    }
    while let Some(j) = stack.pop() {
        for &i in &rev[j] {
            if !ends[i] {
                ends[i] = true;
                stack.push(i);
            }
        }
    }

    let mut value: Vec<Option<Value>> = (0..n).map(|i| (!ends[i]).then(|| Value::sink(NONHALT))).collect();
    for comp in tarjan(edges, &ends) {
        solve_component(edges, &comp, &mut value, &sinks);
    }
    value.into_iter().map(|v| v.expect("every node solved")).collect()
}

fn target_value<'a>(t: Target, value: &'a [Option<Value>], sinks: &'a [Value]) -> &'a Value {
    match t {
        Target::Node(j) => value[j].as_ref().expect("solved before use"),
        Target::Sink(k) => &sinks[k],
    }
}

fn solve_component(edges: &[Vec<Edge>], comp: &[usize], value: &mut [Option<Value>], sinks: &[Value]) {
    let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let inside = |t: Target| match t {
        Target::Node(j) => local.get(&j).copied(),
        Target::Sink(_) => None,
    };
    let cyclic = comp.len() > 1 || edges[comp[0]].iter().any(|e| inside(e.target).is_some());

    if !cyclic {
        let i = comp[0];
        let mut v = Value::sink(NONHALT);
        v.mass[NONHALT] = Real::zero();
        for e in &edges[i] {
            let t = target_value(e.target, value, sinks);
            for k in 0..SINKS {
                v.mass[k] = &v.mass[k] + &e.prob * &t.mass[k];
            }
            v.steps = &v.steps + &e.prob * (&t.steps + Real::int(e.steps as i64) * t.ending());
        }
        value[i] = Some(v);
        return;
    }

    // (I − P) x = b over the component
    let size = comp.len();
    let mut rows: Vec<BTreeMap<usize, Real>> = vec![BTreeMap::new(); size];
    let mut rhs: Vec<Vec<Real>> = vec![vec![Real::zero(); SINKS]; size];
    for (k, &i) in comp.iter().enumerate() {
        rows[k].insert(k, Real::one());
        for e in &edges[i] {
            match inside(e.target) {
                Some(j) => {
                    let cur = rows[k].remove(&j).unwrap_or_else(Real::zero);
                    rows[k].insert(j, cur - &e.prob);
                }
                None => {
                    let t = target_value(e.target, value, sinks);
                    for s in 0..SINKS {
                        rhs[k][s] = &rhs[k][s] + &e.prob * &t.mass[s];
                    }
                }
            }
        }
    }
    let masses = eliminate(rows.clone(), rhs);
    let ending: Vec<Real> = masses.iter().map(|m| &m[ACCEPT] + &m[REJECT] + &m[RESTART] + &m[SUSPEND]).collect();

    let mut step_rhs: Vec<Vec<Real>> = vec![vec![Real::zero()]; size];
    for (k, &i) in comp.iter().enumerate() {
        let mut acc = Real::zero();
        for e in &edges[i] {
            let len = Real::int(e.steps as i64);
            match inside(e.target) {
                Some(j) => acc = acc + &e.prob * len * &ending[j],
                None => {
                    let t = target_value(e.target, value, sinks);
                    acc = acc + &e.prob * (&t.steps + len * t.ending());
                }
            }
        }
        step_rhs[k][0] = acc;
    }
    let steps = eliminate(rows, step_rhs);
    for (k, &i) in comp.iter().enumerate() {
        let mass: [Real; SINKS] = std::array::from_fn(|s| masses[k][s].clone());
        value[i] = Some(Value { mass, steps: steps[k][0].clone() });
    }
}

/// Sparse Gaussian elimination in index order, then back substitution.
fn eliminate(mut rows: Vec<BTreeMap<usize, Real>>, mut rhs: Vec<Vec<Real>>) -> Vec<Vec<Real>> {
    let n = rows.len();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, r) in rows.iter().enumerate() {
        for &j in r.keys() {
            if j < i {
                col_rows[j].push(i);
            }
        }
    }
    for k in 0..n {
        let pivot = rows[k].get(&k).cloned().expect("nonsingular component");
        let tail: Vec<(usize, Real)> = rows[k].range(k + 1..).map(|(&j, v)| (j, v.clone())).collect();
        let users = std::mem::take(&mut col_rows[k]);
        let src = rhs[k].clone();
        for i in users {
            let Some(a) = rows[i].remove(&k) else { continue };
            let f = &a / &pivot;
            for (j, v) in &tail {
                let cur = rows[i].remove(j);
                if cur.is_none() && *j < i {
                    col_rows[*j].push(i);
                }
                let new = cur.unwrap_or_else(Real::zero) - &f * v;
                if !new.is_zero() {
                    rows[i].insert(*j, new);
                }
            }
            for (d, s) in rhs[i].iter_mut().zip(&src) {
                *d = &*d - &f * s;
            }
        }
    }
    let mut x: Vec<Vec<Real>> = vec![Vec::new(); n];
    for k in (0..n).rev() {
        let pivot = rows[k][&k].clone();
        let mut v = rhs[k].clone();
        for (j, a) in rows[k].range(k + 1..) {
            for s in 0..v.len() {
                v[s] = &v[s] - a * &x[*j][s];
            }
        }
        x[k] = v.into_iter().map(|t| t / &pivot).collect();
    }
    x
}

/// Strongly connected components, each listed after every component it
/// reaches. Members are in ascending order.
fn tarjan(edges: &[Vec<Edge>], active: &[bool]) -> Vec<Vec<usize>> {
    let n = edges.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    let succ = |i: usize, k: usize| -> Option<Option<usize>> {
        edges[i].get(k).map(|e| match e.target {
            Target::Node(j) if active[j] => Some(j),
            _ => None,
        })
    };
    for root in 0..n {
        if index[root] != usize::MAX || !active[root] {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, k)) = call.last() {
            match succ(v, k) {
                Some(next) => {
                    call.last_mut().expect("frame").1 += 1;
                    let Some(w) = next else { continue };
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                }
                None => {
                    call.pop();
                    if let Some(&(u, _)) = call.last() {
                        low[u] = low[u].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        out.push(comp);
                    }
                }
            }
        }
    }
    out
}

impl CompiledMachine {
    /// Exact masses of one round from `start`.
    pub fn round_from(
        &self,
        start: Configuration,
        tape: &Tape,
        transcript: TranscriptView<'_>,
        opts: ExactOptions,
    ) -> Result<RoundStatistics> {
        let mut ex = Explorer {
            m: self,
            tape,
            transcript,
            opts,
            configs: Vec::new(),
            edges: Vec::new(),
            index: HashMap::new(),
            queue: VecDeque::new(),
            truncated: false,
        };
        let (prob, steps, target) = ex.follow(start, Real::one(), 0)?;
        while let Some(i) = ex.queue.pop_front() {
            ex.expand(i)?;
        }
        let values = solve(&ex.edges);
        let sinks: Vec<Value> = (0..SINKS).map(Value::sink).collect();
        let t = match target {
            Target::Node(j) => &values[j],
            Target::Sink(k) => &sinks[k],
        };
        let m = |k: usize| &prob * &t.mass[k];
        let stats = RoundStatistics {
            p_accept: m(ACCEPT),
            p_reject: m(REJECT),
            p_restart: m(RESTART),
            p_suspend: m(SUSPEND),
            p_nonhalt: m(NONHALT) + (Real::one() - &prob),
            round_steps: &prob * (&t.steps + Real::int(steps as i64) * t.ending()),
            nodes: ex.configs.len(),
        };
        if ex.truncated {
            return Err(Error::Resource {
                message: format!("round exceeded the node budget of {}", opts.node_budget),
                partial: Some(format!(
                    "accept {} reject {} restart {} unexplored {}",
                    stats.p_accept.to_decimal(12),
                    stats.p_reject.to_decimal(12),
                    stats.p_restart.to_decimal(12),
                    stats.p_nonhalt.to_decimal(12)
                )),
            });
        }
        Ok(stats)
    }

    /// One round from the initial configuration.
    pub fn evaluate_round(&self, input: &str, transcript: Option<&[char]>, opts: ExactOptions) -> Result<RoundStatistics> {
        let tape = self.tape(input)?;
        let view = TranscriptView { symbols: transcript.unwrap_or(&[]), complete: true };
        self.round_from(self.initial_config(), &tape, view, opts)
    }

    /// Full run: the first round, then the geometric series of later rounds.
    pub fn run_exact(&self, input: &str, transcript: Option<&[char]>, opts: ExactOptions) -> Result<RunResult> {
        let tape = self.tape(input)?;
        let view = TranscriptView { symbols: transcript.unwrap_or(&[]), complete: true };
        let first = self.round_from(self.initial_config(), &tape, view, opts)?;
        if !self.has_restart() || first.p_restart.is_zero() {
            return Ok(RunResult::from_rounds(&first, None));
        }
        if !self.distinct_restart_entry() {
            return Ok(RunResult::from_rounds(&first, Some(&first)));
        }
        let later = self.round_from(self.restart_config(), &tape, view, opts)?;
        Ok(RunResult::from_rounds(&first, Some(&later)))
    }
}

/// One round of `spec` on `input`, optionally reading a fixed prover transcript.
pub fn evaluate_round(spec: &MachineSpec, input: &str, transcript: Option<&[char]>) -> Result<RoundStatistics> {
    CompiledMachine::new(spec.clone())?.evaluate_round(input, transcript, ExactOptions::default())
}

/// Exact run with restarts combined; `max_steps` bounds deterministic stretches.
pub fn run_exact(spec: &MachineSpec, input: &str, max_steps: u64) -> Result<RunResult> {
    let opts = ExactOptions { max_steps, ..ExactOptions::default() };
    CompiledMachine::new(spec.clone())?.run_exact(input, None, opts)
}
