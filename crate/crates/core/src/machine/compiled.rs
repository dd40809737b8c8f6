use std::collections::HashMap;

use super::spec::{MachineSpec, Role, END_OF_TRANSCRIPT, IDENTITY_OUTCOME};
use crate::quantum::{Register, RegisterKey, Superoperator};
use crate::real::Real;
use crate::{Error, Result};

#[derive(Clone, Debug)]
struct CTrans {
    next: u32,
    head: i8,
    counter: i8,
    advance: bool,
}

#[derive(Clone, Debug)]
struct CRule {
    superop: Option<usize>,
    counter_zero: Option<bool>,
    prover: Option<char>,
    /// Indexed like the superoperator's elements (one slot for identity).
    outcomes: Vec<Option<CTrans>>,
    labels: Vec<String>,
}

#[derive(Clone, Debug, Default)]
struct Cell {
    rules: Vec<usize>,
    reads_prover: bool,
}

/// A machine with its tables resolved to indices, ready to run.
#[derive(Clone, Debug)]
pub struct CompiledMachine {
    spec: MachineSpec,
    names: Vec<String>,
    roles: Vec<Role>,
    symbols: Vec<char>,
    superops: Vec<Superoperator>,
    rules: Vec<CRule>,
    cells: Vec<Cell>,
    initial: u32,
    restart_entry: u32,
    has_restart: bool,
}

/// Instantaneous description of a running machine.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub state: u32,
    pub head: usize,
    pub counter: u64,
    pub cursor: usize,
    pub register: Register,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConfigKey {
    state: u32,
    head: usize,
    counter: u64,
    cursor: usize,
    register: RegisterKey,
}

impl Configuration {
    pub fn key(&self) -> ConfigKey {
        ConfigKey {
            state: self.state,
            head: self.head,
            counter: self.counter,
            cursor: self.cursor,
            register: self.register.key(),
        }
    }
}

/// Input tape: `¢ w $` as symbol indices.
#[derive(Clone, Debug)]
pub struct Tape {
    cells: Vec<usize>,
}

impl Tape {
    /// Input length `n` (end-markers excluded).
    pub fn input_len(&self) -> usize {
        self.cells.len() - 2
    }
}

/// Prover message attached to a run. When `complete` is false, reading past
/// the end suspends the branch instead of returning `⊥`.
#[derive(Clone, Copy, Debug)]
pub struct TranscriptView<'t> {
    pub symbols: &'t [char],
    pub complete: bool,
}

impl TranscriptView<'_> {
    pub const EMPTY: TranscriptView<'static> = TranscriptView { symbols: &[], complete: true };
}

pub(crate) enum Selection {
    Halted(Role),
    NeedsSymbol,
    Rule(usize),
}

impl CompiledMachine {
    pub fn new(spec: MachineSpec) -> Result<Self> {
        spec.check()?;
        let names: Vec<String> = spec.states.iter().map(|s| s.name.clone()).collect();
        let roles: Vec<Role> = spec.states.iter().map(|s| s.role).collect();
        let index: HashMap<&str, u32> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i as u32)).collect();
        let symbols = spec.tape_symbols();
        let superop_names: Vec<&String> = spec.superoperators.keys().collect();
        let superops: Vec<Superoperator> = spec.superoperators.values().cloned().collect();

        let mut rules = Vec::with_capacity(spec.rules.len());
        for r in &spec.rules {
            let (sidx, labels): (Option<usize>, Vec<String>) = match &r.superop {
                None => (None, vec![IDENTITY_OUTCOME.to_string()]),
                Some(name) => {
                    let i = superop_names.iter().position(|n| *n == name).expect("checked superoperator");
                    (Some(i), superops[i].labels().map(str::to_string).collect())
                }
            };
            let outcomes = labels
                .iter()
                .map(|l| {
                    r.outcomes.get(l).map(|t| CTrans {
                        next: index[t.next.as_str()],
                        head: t.head,
                        counter: t.counter,
                        advance: t.advance_prover,
                    })
                })
                .collect();
            rules.push(CRule { superop: sidx, counter_zero: r.counter_zero, prover: r.prover, outcomes, labels });
        }

        let ns = symbols.len();
        let mut cells = vec![Cell::default(); names.len() * ns];
        for (ri, r) in spec.rules.iter().enumerate() {
            let st = index[r.state.as_str()] as usize;
            for (si, &c) in symbols.iter().enumerate() {
                if r.symbol.is_none_or(|s| s == c) {
                    cells[st * ns + si].rules.push(ri);
                }
            }
        }
        for (ci, cell) in cells.iter_mut().enumerate() {
            cell.rules.sort_by_key(|&ri| std::cmp::Reverse(spec.rules[ri].specificity()));
            cell.reads_prover = cell.rules.iter().any(|&ri| spec.rules[ri].prover.is_some());
            for (a, &ri) in cell.rules.iter().enumerate() {
                for &rj in &cell.rules[a + 1..] {
                    let (x, y) = (&spec.rules[ri], &spec.rules[rj]);
                    if x.specificity() == y.specificity()
                        && x.symbol == y.symbol
                        && x.counter_zero == y.counter_zero
                        && x.prover == y.prover
                    {
                        return Err(Error::structural(format!(
                            "ambiguous rules for state `{}` on symbol `{}`",
                            names[ci / ns],
                            symbols[ci % ns]
                        )));
                    }
                }
            }
        }
        let initial = index[spec.initial.as_str()];
        let restart_entry = spec.restart_entry.as_deref().map_or(initial, |e| index[e]);
        let has_restart = roles.contains(&Role::Restart);
        Ok(CompiledMachine { spec, names, roles, symbols, superops, rules, cells, initial, restart_entry, has_restart })
    }

    pub fn spec(&self) -> &MachineSpec {
        &self.spec
    }

    pub fn state_name(&self, s: u32) -> &str {
        &self.names[s as usize]
    }

    pub fn state_id(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn role(&self, s: u32) -> Role {
        self.roles[s as usize]
    }

    pub fn has_restart(&self) -> bool {
        self.has_restart
    }

    /// Whether rounds after a restart start somewhere other than the
    /// initial configuration.
    pub fn distinct_restart_entry(&self) -> bool {
        self.restart_entry != self.initial
    }

    pub fn tape(&self, input: &str) -> Result<Tape> {
        let mut cells = Vec::with_capacity(input.chars().count() + 2);
        cells.push(0);
        for c in input.chars() {
            let i = self.symbols[1..self.symbols.len() - 1]
                .iter()
                .position(|&s| s == c)
                .ok_or_else(|| Error::contract(format!("symbol `{c}` is not in the input alphabet of `{}`", self.spec.name)))?;
            cells.push(i + 1);
        }
        cells.push(self.symbols.len() - 1);
        Ok(Tape { cells })
    }

    pub fn initial_config(&self) -> Configuration {
        Configuration { state: self.initial, head: 0, counter: 0, cursor: 0, register: self.spec.initial_register.clone() }
    }

    pub fn restart_config(&self) -> Configuration {
        Configuration {
            state: self.restart_entry,
            head: 0,
            counter: 0,
            cursor: 0,
            register: self.spec.initial_register.clone(),
        }
    }

    pub(crate) fn select(&self, c: &Configuration, tape: &Tape, transcript: TranscriptView<'_>) -> Result<Selection> {
        let role = self.roles[c.state as usize];
        if role != Role::Normal {
            return Ok(Selection::Halted(role));
        }
        let sym = tape.cells[c.head];
        let cell = &self.cells[c.state as usize * self.symbols.len() + sym];
        let prover = if cell.reads_prover {
            match transcript.symbols.get(c.cursor) {
                Some(&p) => Some(p),
                None if transcript.complete => Some(END_OF_TRANSCRIPT),
                None => return Ok(Selection::NeedsSymbol),
            }
        } else {
            None
        };
        for &ri in &cell.rules {
            let r = &self.rules[ri];
            if r.counter_zero.is_some_and(|z| z != (c.counter == 0)) {
                continue;
            }
            if r.prover.is_some() && r.prover != prover {
                continue;
            }
            return Ok(Selection::Rule(ri));
        }
        Err(Error::UndefinedTransition {
            state: self.names[c.state as usize].clone(),
            symbol: self.symbols[sym],
            outcome: match prover {
                Some(p) => format!("- (prover `{p}`)"),
                None => "-".into(),
            },
        })
    }

    /// Nonzero-probability outcomes of the selected rule.
    pub(crate) fn weights(&self, rule: usize, c: &Configuration) -> Vec<(usize, Real)> {
        match self.rules[rule].superop {
            None => vec![(0, Real::one())],
            Some(s) => self.superops[s].branches(&c.register),
        }
    }


    /// Successor for one outcome. Halting successors keep the old register.
    pub(crate) fn successor(&self, rule: usize, outcome: usize, c: &Configuration, tape: &Tape) -> Result<Configuration> {
        let r = &self.rules[rule];
        let t = r.outcomes[outcome].as_ref().ok_or_else(|| Error::UndefinedTransition {
            state: self.names[c.state as usize].clone(),
            symbol: self.symbols[tape.cells[c.head]],
            outcome: r.labels[outcome].clone(),
        })?;
        let head = c.head as i64 + t.head as i64;
        if head < 0 || head >= tape.cells.len() as i64 {
            return Err(Error::structural(format!(
                "head leaves the tape from state `{}` at position {}",
                self.names[c.state as usize], c.head
            )));
        }
        let counter = c.counter as i64 + t.counter as i64;
        if counter < 0 {
            return Err(Error::structural(format!("counter decremented below zero in state `{}`", self.names[c.state as usize])));
        }
        let halting = self.roles[t.next as usize] != Role::Normal;
        let register = match (r.superop, halting) {
            (None, _) | (_, true) => c.register.clone(),
            (Some(s), false) => self.superops[s].elements()[outcome]
                .post_state(&c.register)
                .ok_or_else(|| Error::contract("post state of a zero-probability outcome"))?,
        };
        Ok(Configuration {
            state: t.next,
            head: head as usize,
            counter: counter as u64,
            cursor: c.cursor + t.advance as usize,
            register,
        })
    }

    /// All weighted successors of a configuration; empty when it has halted.
    pub fn step(&self, c: &Configuration, tape: &Tape, transcript: TranscriptView<'_>) -> Result<Vec<(Real, Configuration)>> {
        match self.select(c, tape, transcript)? {
            Selection::Halted(_) => Ok(Vec::new()),
            Selection::NeedsSymbol => Err(Error::contract("transcript ended before the verifier finished reading")),
            Selection::Rule(r) => self
                .weights(r, c)
                .into_iter()
                .map(|(o, p)| Ok((p, self.successor(r, o, c, tape)?)))
                .collect(),
        }
    }

    pub fn symbol_at(&self, tape: &Tape, head: usize) -> char {
        self.symbols[tape.cells[head]]
    }
}

/// Steps one configuration of `spec` on `input` with no prover attached.
pub fn step(spec: &MachineSpec, config: &Configuration, input: &str) -> Result<Vec<(Real, Configuration)>> {
    let m = CompiledMachine::new(spec.clone())?;
    let tape = m.tape(input)?;
    m.step(config, &tape, TranscriptView::EMPTY)
}
