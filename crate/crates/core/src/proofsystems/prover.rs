//! Prover strategies. Every strategy restarts its stream after a restart
//! outcome, so within a round it is a fixed transcript.

use crate::languages::{
    binary_blocks, honest_binary_transmission, honest_unary_transmission, render_blocks, Alphabet, LanguageOracle,
    Transmission,
};
use crate::{Error, Result};

use super::verifier::RESTART;

/// Public outcomes seen by the prover, and how many symbols the verifier has
/// consumed since the last restart.
#[derive(Clone, Debug, Default)]
pub struct History {
    pub outcomes: Vec<String>,
    pub consumed: usize,
}

impl History {
    pub fn record(&mut self, outcome: &str, consumed_symbol: bool) {
        self.outcomes.push(outcome.to_string());
        if outcome == RESTART {
            self.consumed = 0;
        } else if consumed_symbol {
            self.consumed += 1;
        }
    }
}

pub trait ProverStrategy: Send + Sync {
    fn label(&self) -> String;

    /// The stream sent in every round on `input`.
    fn transcript(&self, input: &str) -> Result<Transmission>;

    /// Next symbol given the public history; `None` once the stream is spent.
    fn next_symbol(&self, input: &str, history: &History) -> Result<Option<char>> {
        Ok(self.transcript(input)?.symbols.get(history.consumed).copied())
    }
}

fn unary_len(input: &str) -> Result<usize> {
    if input.chars().all(|c| c == 'a') {
        Ok(input.len())
    } else {
        Err(Error::contract(format!("`{input}` is not a unary string")))
    }
}

fn honest_for(oracle: &LanguageOracle, input: &str) -> Result<Transmission> {
    match oracle.alphabet() {
        Alphabet::Unary => honest_unary_transmission(oracle, unary_len(input)?),
        Alphabet::Binary => honest_binary_transmission(oracle, input),
    }
}

struct Honest(LanguageOracle);

impl ProverStrategy for Honest {
    fn label(&self) -> String {
        "honest".into()
    }

    fn transcript(&self, input: &str) -> Result<Transmission> {
        honest_for(&self.0, input)
    }
}

pub fn honest_prover(oracle: &LanguageOracle) -> Box<dyn ProverStrategy> {
    Box::new(Honest(oracle.clone()))
}

struct FinalBitLiar(LanguageOracle);

impl ProverStrategy for FinalBitLiar {
    fn label(&self) -> String {
        "final-bit".into()
    }

    fn transcript(&self, input: &str) -> Result<Transmission> {
        let mut t = honest_for(&self.0, input)?;
        let last = t.symbols.last_mut().expect("transmissions are nonempty");
        *last = if *last == '1' { '0' } else { '1' };
        Ok(t)
    }
}

/// The honest stream with the bit about the input itself flipped.
pub fn final_bit_adversary(oracle: &LanguageOracle) -> Box<dyn ProverStrategy> {
    Box::new(FinalBitLiar(oracle.clone()))
}

struct OutOfOrder {
    oracle: LanguageOracle,
    permutation: Vec<usize>,
}

impl ProverStrategy for OutOfOrder {
    fn label(&self) -> String {
        let p: Vec<String> = self.permutation.iter().map(usize::to_string).collect();
        format!("out-of-order[{}]", p.join(","))
    }

    fn transcript(&self, input: &str) -> Result<Transmission> {
        let blocks = binary_blocks(&self.oracle, input)?;
        let mut seen = vec![false; blocks.len()];
        for &i in &self.permutation {
            if i >= blocks.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::contract(format!(
                    "permutation {:?} is not a permutation of the {} blocks up to `{input}`",
                    self.permutation,
                    blocks.len()
                )));
            }
        }
        if seen.len() != self.permutation.len() {
            return Err(Error::contract(format!(
                "permutation {:?} does not cover the {} blocks up to `{input}`",
                self.permutation,
                blocks.len()
            )));
        }
        let order: Vec<(String, bool)> = self.permutation.iter().map(|&i| blocks[i].clone()).collect();
        Ok(render_blocks(&order))
    }
}

/// Honest blocks `#s‡σ` sent in the order `permutation` (indices into the
/// lexicographic list of strings up to the input).
pub fn out_of_order_adversary(oracle: &LanguageOracle, permutation: &[usize]) -> Result<Box<dyn ProverStrategy>> {
    if oracle.alphabet() != Alphabet::Binary {
        return Err(Error::contract("out-of-order provers need a binary oracle"));
    }
    Ok(Box::new(OutOfOrder { oracle: oracle.clone(), permutation: permutation.to_vec() }))
}

/// The same symbols on every input.
#[derive(Clone, Debug)]
pub struct FixedTranscript {
    pub symbols: Vec<char>,
}

impl ProverStrategy for FixedTranscript {
    fn label(&self) -> String {
        format!("fixed:{}", self.symbols.iter().collect::<String>())
    }

    fn transcript(&self, _: &str) -> Result<Transmission> {
        Ok(Transmission::new(self.symbols.clone()))
    }
}
