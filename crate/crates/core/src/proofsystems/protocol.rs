use serde::Serialize;

use crate::machine::{
    expected_rounds, restart_acceptance, CompiledMachine, ExactOptions, McEstimate, McOptions, RoundStatistics,
    TranscriptView,
};
use crate::real::Real;
use crate::{Error, Result};

use super::prover::ProverStrategy;
use super::verifier::VerifierSpec;

#[derive(Clone, Debug, Serialize)]
pub struct ProtocolResult {
    pub round: RoundStatistics,
    pub overall_acceptance: Real,
    /// `None` when no round ever halts.
    pub expected_rounds: Option<Real>,
    pub transcript_length: usize,
    pub prover: String,
}

impl ProtocolResult {
    pub fn overall_rejection(&self) -> Real {
        if self.expected_rounds.is_none() {
            return Real::zero();
        }
        Real::one() - &self.overall_acceptance
    }
}

/// Exact acceptance of a fixed per-round transcript. Rounds that never halt
/// count as never accepting.
pub fn evaluate_transcript(machine: &CompiledMachine, input: &str, symbols: &[char], opts: ExactOptions) -> Result<(RoundStatistics, Real, Option<Real>)> {
    let tape = machine.tape(input)?;
    let round = machine.round_from(machine.initial_config(), &tape, TranscriptView { symbols, complete: true }, opts)?;
    match (restart_acceptance(&round), expected_rounds(&round)) {
        (Ok(acc), Ok(rounds)) => Ok((round, acc, Some(rounds))),
        (Err(Error::NeverHalts), _) | (_, Err(Error::NeverHalts)) => Ok((round, Real::zero(), None)),
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

pub fn run_protocol(verifier: &VerifierSpec, prover: &dyn ProverStrategy, input: &str) -> Result<ProtocolResult> {
    run_protocol_with(verifier, prover, input, ExactOptions::default())
}

pub fn run_protocol_with(
    verifier: &VerifierSpec,
    prover: &dyn ProverStrategy,
    input: &str,
    opts: ExactOptions,
) -> Result<ProtocolResult> {
    let machine = CompiledMachine::new(verifier.machine.clone())?;
    let t = prover.transcript(input)?;
    let (round, overall_acceptance, expected_rounds) = evaluate_transcript(&machine, input, &t.symbols, opts)?;
    Ok(ProtocolResult { round, overall_acceptance, expected_rounds, transcript_length: t.len(), prover: prover.label() })
}

/// Sampled cross-check of [`run_protocol`].
pub fn run_protocol_monte_carlo(
    verifier: &VerifierSpec,
    prover: &dyn ProverStrategy,
    input: &str,
    opts: McOptions,
) -> Result<McEstimate> {
    let machine = CompiledMachine::new(verifier.machine.clone())?;
    let t = prover.transcript(input)?;
    machine.run_monte_carlo(input, Some(&t.symbols), opts)
}
