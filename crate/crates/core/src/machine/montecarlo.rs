use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::compiled::{CompiledMachine, Selection, TranscriptView};
use super::spec::{MachineSpec, Role};
use super::stats::{EngineKind, RunResult};
use crate::real::Real;
use crate::scalar::{precision, with_precision, Scalar};
use crate::Result;

/// Name and version of the generator behind every Monte Carlo result.
pub const GENERATOR: &str = "chacha8/rand_chacha-0.3";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum McMode {
    /// Follow restarts until the machine halts.
    Full,
    /// Stop at the first restart, estimating one round.
    SingleRound,
}

#[derive(Clone, Copy, Debug)]
pub struct McOptions {
    pub trials: u64,
    pub max_steps_per_trial: u64,
    pub seed: u64,
    pub mode: McMode,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions { trials: 10_000, max_steps_per_trial: 10_000_000, seed: 0, mode: McMode::Full }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    Accept,
    Reject,
    Restart,
    Censored,
}

/// Empirical frequencies from independent trials.
#[derive(Clone, Debug, Serialize)]
pub struct McEstimate {
    pub accept: f64,
    pub reject: f64,
    pub restart: f64,
    pub censored: f64,
    /// Mean steps over trials that ended (halted or, per round, restarted).
    pub mean_steps: f64,
    pub steps_std_error: f64,
    pub trials: u64,
    pub seed: u64,
    pub mode: McMode,
    pub generator: &'static str,
}

impl McEstimate {
    /// Standard error of a frequency estimated from these trials.
    pub fn std_error(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Whether `exact` lies within `k` standard errors of `observed`. A zero
    /// standard error demands equality up to 1/trials.
    pub fn agrees(&self, observed: f64, exact: f64, k: f64) -> bool {
        let se = self.std_error(exact).max(1.0 / self.trials as f64);
        (observed - exact).abs() <= k * se
    }

    pub fn to_run_result(&self) -> RunResult {
        RunResult {
            accept_prob: Real::Approx(Scalar::from_f64(self.accept)),
            reject_prob: Real::Approx(Scalar::from_f64(self.reject)),
            nonhalt_mass: Real::Approx(Scalar::from_f64(self.censored + self.restart)),
            expected_steps: Some(Real::Approx(Scalar::from_f64(self.mean_steps))),
            expected_rounds: None,
            branch_count: 0,
            engine: EngineKind::MonteCarlo,
            precision: precision(),
            trials: Some(self.trials),
            seed: Some(self.seed),
            std_errors: Some((self.std_error(self.accept), self.std_error(self.reject))),
            steps_std_error: Some(self.steps_std_error),
        }
    }
}

impl CompiledMachine {
    fn trial(&self, tape: &super::compiled::Tape, view: TranscriptView<'_>, opts: &McOptions, index: u64) -> Result<(End, u64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(index);
        let mut c = self.initial_config();
        let mut steps = 0u64;
        loop {
            match self.select(&c, tape, view)? {
                Selection::Halted(Role::Accept) => return Ok((End::Accept, steps)),
                Selection::Halted(Role::Reject) => return Ok((End::Reject, steps)),
                Selection::Halted(_) => {
                    if opts.mode == McMode::SingleRound {
                        return Ok((End::Restart, steps));
                    }
                    c = self.restart_config();
                    continue;
                }
                Selection::NeedsSymbol => return Ok((End::Censored, steps)),
                Selection::Rule(rule) => {
                    if steps >= opts.max_steps_per_trial {
                        return Ok((End::Censored, steps));
                    }
                    let w = self.weights(rule, &c);
                    let pick = if w.len() == 1 {
                        w[0].0
                    } else {
                        let u: f64 = rng.gen();
                        let mut acc = 0.0;
                        let mut chosen = w[w.len() - 1].0;
                        for (o, p) in &w {
                            acc += p.to_f64();
                            if u < acc {
                                chosen = *o;
                                break;
                            }
                        }
                        chosen
                    };
                    c = self.successor(rule, pick, &c, tape)?;
                    steps += 1;
                }
            }
        }
    }

    /// Seeded Monte Carlo estimate. Trial `i` draws from stream `i` of the
    /// seeded generator, so results do not depend on thread scheduling.
    pub fn run_monte_carlo(&self, input: &str, transcript: Option<&[char]>, opts: McOptions) -> Result<McEstimate> {
        let tape = self.tape(input)?;
        let view = TranscriptView { symbols: transcript.unwrap_or(&[]), complete: true };
        let p = precision();
        let ends: Vec<(End, u64)> = (0..opts.trials)
            .into_par_iter()
            .map(|i| with_precision(p, || self.trial(&tape, view, &opts, i)))
            .collect::<Result<_>>()?;
        let n = opts.trials.max(1) as f64;
        let freq = |e: End| ends.iter().filter(|(x, _)| *x == e).count() as f64 / n;
        let finished: Vec<f64> = ends.iter().filter(|(e, _)| *e != End::Censored).map(|(_, s)| *s as f64).collect();
        let (mean, se) = if finished.is_empty() {
            (0.0, 0.0)
        } else {
            let k = finished.len() as f64;
            let mean = finished.iter().sum::<f64>() / k;
            let var = finished.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (k - 1.0).max(1.0);
            (mean, (var / k).sqrt())
        };
        Ok(McEstimate {
            accept: freq(End::Accept),
            reject: freq(End::Reject),
            restart: freq(End::Restart),
            censored: freq(End::Censored),
            mean_steps: mean,
            steps_std_error: se,
            trials: opts.trials,
            seed: opts.seed,
            mode: opts.mode,
            generator: GENERATOR,
        })
    }
}

/// Monte Carlo run of `spec` on `input` following restarts.
pub fn run_monte_carlo(
    spec: &MachineSpec,
    input: &str,
    trials: u64,
    max_steps_per_trial: u64,
    seed: u64,
    transcript: Option<&[char]>,
) -> Result<RunResult> {
    let opts = McOptions { trials, max_steps_per_trial, seed, mode: McMode::Full };
    Ok(CompiledMachine::new(spec.clone())?.run_monte_carlo(input, transcript, opts)?.to_run_result())
}
