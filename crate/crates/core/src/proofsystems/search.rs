use serde::Serialize;

use crate::machine::{CompiledMachine, ExactOptions, TranscriptView};
use crate::real::Real;
use crate::{Error, Result};

use super::protocol::evaluate_transcript;
use super::verifier::VerifierSpec;

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub max_acceptance: Real,
    /// First transcript in depth-first prover-alphabet order that attains the
    /// maximum.
    pub witness: Vec<char>,
    pub evaluated: usize,
    pub pruned: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub max_evaluations: usize,
    pub exact: ExactOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_evaluations: 1 << 20, exact: ExactOptions::default() }
    }
}

struct Search<'a> {
    m: &'a CompiledMachine,
    input: &'a str,
    alphabet: Vec<char>,
    budget: usize,
    opts: SearchOptions,
    best: Option<(Real, Vec<char>)>,
    evaluated: usize,
    pruned: usize,
}

impl Search<'_> {
    fn count(&mut self) -> Result<()> {
        self.evaluated += 1;
        if self.evaluated > self.opts.max_evaluations {
            return Err(Error::Resource {
                message: format!("adversary search exceeded {} evaluations", self.opts.max_evaluations),
                partial: self.best.as_ref().map(|(p, w)| format!("best so far {} with `{}`", p.to_decimal(12), w.iter().collect::<String>())),
            });
        }
        Ok(())
    }

    fn offer(&mut self, p: Real, prefix: &[char]) {
        if self.best.as_ref().is_none_or(|(b, _)| p > *b) {
            self.best = Some((p, prefix.to_vec()));
        }
    }

    fn visit(&mut self, prefix: &mut Vec<char>) -> Result<()> {
        self.count()?;
        let (_, acc, _) = evaluate_transcript(self.m, self.input, prefix, self.opts.exact)?;
        self.offer(acc, prefix);
        if prefix.len() == self.budget {
            return Ok(());
        }
        // what every extension of this prefix can still reach
        let tape = self.m.tape(self.input)?;
        let view = TranscriptView { symbols: prefix, complete: false };
        let r = self.m.round_from(self.m.initial_config(), &tape, view, self.opts.exact)?;
        if r.p_suspend.is_zero() {
            return Ok(());
        }
        let hi = &r.p_accept + &r.p_suspend;
        let bound = &hi / &(&hi + &r.p_reject);
        if self.best.as_ref().is_some_and(|(b, _)| bound <= *b) {
            self.pruned += 1;
            return Ok(());
        }
        for i in 0..self.alphabet.len() {
            prefix.push(self.alphabet[i]);
            self.visit(prefix)?;
            prefix.pop();
        }
        Ok(())
    }
}

/// Largest overall acceptance over every per-round transcript of at most
/// `symbol_budget` symbols. Branches are cut once their best possible
/// acceptance cannot beat the current maximum.
pub fn exhaustive_adversary_search(verifier: &VerifierSpec, input: &str, symbol_budget: usize) -> Result<SearchResult> {
    exhaustive_adversary_search_with(verifier, input, symbol_budget, SearchOptions::default())
}

pub fn exhaustive_adversary_search_with(
    verifier: &VerifierSpec,
    input: &str,
    symbol_budget: usize,
    opts: SearchOptions,
) -> Result<SearchResult> {
    let m = CompiledMachine::new(verifier.machine.clone())?;
    let mut s = Search {
        m: &m,
        input,
        alphabet: verifier.machine.prover_alphabet.clone(),
        budget: symbol_budget,
        opts,
        best: None,
        evaluated: 0,
        pruned: 0,
    };
    s.visit(&mut Vec::new())?;
    let (max_acceptance, witness) = s.best.expect("the empty transcript is always evaluated");
    Ok(SearchResult { max_acceptance, witness, evaluated: s.evaluated, pruned: s.pruned })
}
