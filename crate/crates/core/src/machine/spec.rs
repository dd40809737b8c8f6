use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::quantum::{Register, Superoperator};
use crate::{Error, Result};

/// Left end-marker, at head position 0.
pub const LEFT_END: char = '¢';
/// Right end-marker, at head position n+1.
pub const RIGHT_END: char = '$';
/// Prover symbol read once the transcript is exhausted.
pub const END_OF_TRANSCRIPT: char = '⊥';
/// Outcome label of the implicit identity superoperator.
pub const IDENTITY_OUTCOME: &str = "id";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MachineKind {
    TwoWay,
    OneWay,
    OneWayMultiqubit,
    TwoWayCounter,
}

impl MachineKind {
    pub fn one_way(self) -> bool {
        matches!(self, MachineKind::OneWay | MachineKind::OneWayMultiqubit)
    }

    pub fn has_counter(self) -> bool {
        self == MachineKind::TwoWayCounter
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Normal,
    Accept,
    Reject,
    /// Entering the state ends the round; the next round starts from the
    /// restart entry with the head on `¢` and the initial register.
    Restart,
}

/// Classical effect of one outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub next: String,
    #[serde(default)]
    pub head: i8,
    #[serde(default)]
    pub counter: i8,
    #[serde(default)]
    pub advance_prover: bool,
}

impl Transition {
    pub fn to(next: &str, head: i8) -> Self {
        Transition { next: next.to_string(), head, counter: 0, advance_prover: false }
    }

    pub fn counter(mut self, delta: i8) -> Self {
        self.counter = delta;
        self
    }

    pub fn advance(mut self) -> Self {
        self.advance_prover = true;
        self
    }
}

/// One entry of the transition table. `None` conditions are wildcards; the
/// most specific matching rule wins.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub state: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<char>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counter_zero: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prover: Option<char>,
    /// `None` applies the identity, whose single outcome is `id`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superop: Option<String>,
    pub outcomes: BTreeMap<String, Transition>,
}

impl Rule {
    pub fn new(state: &str, symbol: Option<char>) -> Self {
        Rule {
            state: state.to_string(),
            symbol,
            counter_zero: None,
            prover: None,
            superop: None,
            outcomes: BTreeMap::new(),
        }
    }

    /// Rule for a specific tape symbol.
    pub fn at(state: &str, symbol: char) -> Self {
        Rule::new(state, Some(symbol))
    }

    /// Rule matching any tape symbol.
    pub fn any(state: &str) -> Self {
        Rule::new(state, None)
    }

    pub fn counter_zero(mut self, z: bool) -> Self {
        self.counter_zero = Some(z);
        self
    }

    pub fn prover(mut self, c: char) -> Self {
        self.prover = Some(c);
        self
    }

    pub fn apply(mut self, superop: &str) -> Self {
        self.superop = Some(superop.to_string());
        self
    }

    pub fn on(mut self, outcome: &str, t: Transition) -> Self {
        self.outcomes.insert(outcome.to_string(), t);
        self
    }

    /// Identity step to `next`, moving the head by `head`.
    pub fn goto(self, next: &str, head: i8) -> Self {
        self.on(IDENTITY_OUTCOME, Transition::to(next, head))
    }

    /// Identity step with a full transition.
    pub fn then(self, t: Transition) -> Self {
        self.on(IDENTITY_OUTCOME, t)
    }

    pub(crate) fn specificity(&self) -> u8 {
        (self.symbol.is_some() as u8) * 4 + (self.counter_zero.is_some() as u8) * 2 + self.prover.is_some() as u8
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDecl {
    pub name: String,
    pub role: Role,
}

/// A complete machine: classical control, register, superoperators.
#[derive(Clone, Debug)]
pub struct MachineSpec {
    pub name: String,
    pub kind: MachineKind,
    pub alphabet: Vec<char>,
    pub prover_alphabet: Vec<char>,
    pub register_dim: usize,
    pub initial_register: Register,
    pub states: Vec<StateDecl>,
    pub initial: String,
    /// State entered after a restart; defaults to `initial`.
    pub restart_entry: Option<String>,
    pub superoperators: BTreeMap<String, Superoperator>,
    pub rules: Vec<Rule>,
}

impl MachineSpec {
    pub fn new(name: &str, kind: MachineKind, alphabet: &[char], register_dim: usize) -> Self {
        MachineSpec {
            name: name.to_string(),
            kind,
            alphabet: alphabet.to_vec(),
            prover_alphabet: Vec::new(),
            register_dim,
            initial_register: Register::basis(register_dim, 0),
            states: Vec::new(),
            initial: String::new(),
            restart_entry: None,
            superoperators: BTreeMap::new(),
            rules: Vec::new(),
        }
    }

    /// Declares a state; the first normal state declared becomes initial.
    pub fn state(&mut self, name: &str, role: Role) -> &mut Self {
        if self.states.iter().any(|s| s.name == name) {
            return self;
        }
        if self.initial.is_empty() && role == Role::Normal {
            self.initial = name.to_string();
        }
        self.states.push(StateDecl { name: name.to_string(), role });
        self
    }

    pub fn states(&mut self, names: &[&str]) -> &mut Self {
        for n in names {
            self.state(n, Role::Normal);
        }
        self
    }

    pub fn superop(&mut self, name: &str, op: Superoperator) -> &mut Self {
        self.superoperators.insert(name.to_string(), op);
        self
    }

    pub fn rule(&mut self, r: Rule) -> &mut Self {
        self.rules.push(r);
        self
    }

    /// The same rule for every symbol in `symbols`.
    pub fn rule_each(&mut self, symbols: &[char], f: impl Fn(char) -> Rule) -> &mut Self {
        for &c in symbols {
            self.rules.push(f(c));
        }
        self
    }

    pub fn role(&self, state: &str) -> Option<Role> {
        self.states.iter().find(|s| s.name == state).map(|s| s.role)
    }

    /// Tape symbols including both end-markers.
    pub fn tape_symbols(&self) -> Vec<char> {
        let mut v = vec![LEFT_END];
        v.extend(self.alphabet.iter().copied());
        v.push(RIGHT_END);
        v
    }

    /// Every reachable-by-table `(state, symbol, outcome)` lacking a rule or a
    /// transition, as `(state, symbol, outcome)` triples. Prover and counter
    /// conditions are treated as covering their cases jointly.
    pub fn missing_transitions(&self) -> Vec<(String, char, String)> {
        let mut out = Vec::new();
        for st in self.states.iter().filter(|s| s.role == Role::Normal) {
            for sym in self.tape_symbols() {
                let rules: Vec<&Rule> =
                    self.rules.iter().filter(|r| r.state == st.name && r.symbol.is_none_or(|c| c == sym)).collect();
                if rules.is_empty() {
                    out.push((st.name.clone(), sym, "-".to_string()));
                    continue;
                }
                for r in rules {
                    let labels: Vec<String> = match &r.superop {
                        None => vec![IDENTITY_OUTCOME.to_string()],
                        Some(name) => match self.superoperators.get(name) {
                            Some(op) => op.labels().map(str::to_string).collect(),
                            None => vec![format!("<unknown superoperator {name}>")],
                        },
                    };
                    for l in labels {
                        if !r.outcomes.contains_key(&l) {
                            out.push((st.name.clone(), sym, l));
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Structural checks that do not need an input.
    pub fn check(&self) -> Result<()> {
        if self.register_dim == 0 {
            return Err(Error::structural("register dimension must be positive"));
        }
        if self.initial_register.dim() != self.register_dim {
            return Err(Error::structural("initial register has the wrong dimension"));
        }
        if self.role(&self.initial).is_none() {
            return Err(Error::structural(format!("initial state `{}` is not declared", self.initial)));
        }
        if let Some(e) = &self.restart_entry {
            if self.role(e).is_none() {
                return Err(Error::structural(format!("restart entry `{e}` is not declared")));
            }
        }
        for (name, op) in &self.superoperators {
            if op.dim() != self.register_dim {
                return Err(Error::structural(format!("superoperator `{name}` has dimension {}", op.dim())));
            }
        }
        for r in &self.rules {
            if self.role(&r.state).is_none() {
                return Err(Error::structural(format!("rule for undeclared state `{}`", r.state)));
            }
            if let Some(c) = r.symbol {
                if c != LEFT_END && c != RIGHT_END && !self.alphabet.contains(&c) {
                    return Err(Error::structural(format!("rule for `{}` uses unknown symbol `{c}`", r.state)));
                }
            }
            if let Some(name) = &r.superop {
                let op = self
                    .superoperators
                    .get(name)
                    .ok_or_else(|| Error::structural(format!("unknown superoperator `{name}`")))?;
                for l in r.outcomes.keys() {
                    if op.element(l).is_none() {
                        return Err(Error::structural(format!("superoperator `{name}` has no outcome `{l}`")));
                    }
                }
            }
            if r.counter_zero.is_some() && !self.kind.has_counter() {
                return Err(Error::structural(format!("rule for `{}` tests a counter the machine lacks", r.state)));
            }
            for (l, t) in &r.outcomes {
                if self.role(&t.next).is_none() {
                    return Err(Error::structural(format!("transition `{}`/{l} targets undeclared `{}`", r.state, t.next)));
                }
                if !(-1..=1).contains(&t.head) {
                    return Err(Error::structural(format!("head move {} is not in -1..=1", t.head)));
                }
                if self.kind.one_way() && t.head < 0 {
                    return Err(Error::structural(format!(
                        "one-way machine moves left in `{}` on outcome `{l}`",
                        r.state
                    )));
                }
                if t.counter != 0 && !self.kind.has_counter() {
                    return Err(Error::structural(format!("rule for `{}` updates a counter the machine lacks", r.state)));
                }
                if !(-1..=1).contains(&t.counter) {
                    return Err(Error::structural(format!("counter change {} is not in -1..=1", t.counter)));
                }
            }
        }
        Ok(())
    }
}
