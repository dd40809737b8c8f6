//! Machine model and the exact and Monte Carlo engines.

mod compiled;
mod exact;
mod montecarlo;
mod spec;
mod stats;
mod walk;

pub use compiled::{step, CompiledMachine, ConfigKey, Configuration, Tape, TranscriptView};
pub use exact::{evaluate_round, run_exact, ExactOptions};
pub use montecarlo::{run_monte_carlo, McEstimate, McMode, McOptions, GENERATOR};
pub use spec::{
    MachineKind, MachineSpec, Role, Rule, StateDecl, Transition, END_OF_TRANSCRIPT, IDENTITY_OUTCOME, LEFT_END,
    RIGHT_END,
};
pub use stats::{expected_rounds, restart_acceptance, EngineKind, RoundStatistics, RunResult};
pub use walk::{two_walk_gate_probability, walk_absorption, walk_absorption_linear};
