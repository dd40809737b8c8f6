//! Public-coin interactive proofs with restarting finite-state verifiers.

mod delta;
mod protocol;
mod prover;
mod search;
mod verifier;

pub use delta::{delta_trace, DeltaTrace};
pub use protocol::{evaluate_transcript, run_protocol, run_protocol_monte_carlo, run_protocol_with, ProtocolResult};
pub use prover::{final_bit_adversary, honest_prover, out_of_order_adversary, FixedTranscript, History, ProverStrategy};
pub use search::{exhaustive_adversary_search, exhaustive_adversary_search_with, SearchOptions, SearchResult};
pub use verifier::{
    binary_partial_elements, binary_superoperators, build_binary_verifier, build_unary_verifier, unary_superoperators,
    VerifierKind, VerifierSpec, RESTART,
};

/// Common coefficient of the binary verifier's operation elements.
pub fn default_c() -> num_rational::BigRational {
    crate::scalar::ratio(1, 5)
}
