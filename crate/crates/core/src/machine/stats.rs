use serde::Serialize;

use crate::real::Real;
use crate::scalar::precision;
use crate::{Error, Result};

/// Masses of one round started from a fixed configuration, restarts not taken.
#[derive(Clone, Debug, Serialize)]
pub struct RoundStatistics {
    pub p_accept: Real,
    pub p_reject: Real,
    pub p_restart: Real,
    /// Mass waiting for a prover symbol beyond a partial transcript.
    pub p_suspend: Real,
    /// Mass on branches that never leave the round.
    pub p_nonhalt: Real,
    /// Expected number of steps in the round, over branches that end it.
    pub round_steps: Real,
    pub nodes: usize,
}

impl RoundStatistics {
    /// A round that ends immediately with the given role masses.
    pub fn immediate(p_accept: Real, p_reject: Real, p_restart: Real) -> Self {
        RoundStatistics {
            p_accept,
            p_reject,
            p_restart,
            p_suspend: Real::zero(),
            p_nonhalt: Real::zero(),
            round_steps: Real::zero(),
            nodes: 0,
        }
    }

    pub fn halting(&self) -> Real {
        &self.p_accept + &self.p_reject
    }

    pub fn total(&self) -> Real {
        &self.p_accept + &self.p_reject + &self.p_restart + &self.p_suspend + &self.p_nonhalt
    }
}

/// Overall acceptance of a program with restart: `p_acc / (p_acc + p_rej)`.
pub fn restart_acceptance(stats: &RoundStatistics) -> Result<Real> {
    let h = stats.halting();
    if h.is_zero() {
        return Err(Error::NeverHalts);
    }
    Ok(&stats.p_accept / &h)
}

/// Expected number of rounds, `1 / (p_acc + p_rej)`.
pub fn expected_rounds(stats: &RoundStatistics) -> Result<Real> {
    let h = stats.halting();
    if h.is_zero() {
        return Err(Error::NeverHalts);
    }
    Ok(h.recip())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineKind {
    Exact,
    MonteCarlo,
}

/// Outcome of a complete run, restarts included.
#[derive(Clone, Debug, Serialize)]
pub struct RunResult {
    pub accept_prob: Real,
    pub reject_prob: Real,
    pub nonhalt_mass: Real,
    /// `None` when some mass never halts.
    pub expected_steps: Option<Real>,
    pub expected_rounds: Option<Real>,
    pub branch_count: usize,
    pub engine: EngineKind,
    pub precision: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Standard errors of the accept and reject frequencies (Monte Carlo).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_errors: Option<(f64, f64)>,
    /// Standard error of the mean halting steps (Monte Carlo).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps_std_error: Option<f64>,
}

impl RunResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("run result serializes")
    }

    /// Combines a first round with the identical later rounds that follow a
    /// restart, by the geometric restart rule.
    pub fn from_rounds(first: &RoundStatistics, later: Option<&RoundStatistics>) -> RunResult {
        let nodes = first.nodes + later.map_or(0, |l| l.nodes);
        let unfinished = &first.p_nonhalt + &first.p_suspend;
        let (acc, rej, nonhalt, steps, rounds) = match later {
            Some(l) if !first.p_restart.is_zero() => {
                let leave = Real::one() - &l.p_restart;
                if leave.is_zero() {
                    (
                        first.p_accept.clone(),
                        first.p_reject.clone(),
                        &unfinished + &first.p_restart,
                        None,
                        None,
                    )
                } else {
                    let r0 = &first.p_restart;
                    let acc = &first.p_accept + r0 * &l.p_accept / &leave;
                    let rej = &first.p_reject + r0 * &l.p_reject / &leave;
                    let later_unfinished = &l.p_nonhalt + &l.p_suspend;
                    let nonhalt = &unfinished + r0 * &later_unfinished / &leave;
                    let steps = &first.round_steps + r0 * &l.round_steps / &leave;
                    let rounds = Real::one() + r0 / &leave;
                    (acc, rej, nonhalt, Some(steps), Some(rounds))
                }
            }
            _ => (
                first.p_accept.clone(),
                first.p_reject.clone(),
                &unfinished + &first.p_restart,
                Some(first.round_steps.clone()),
                Some(Real::one()),
            ),
        };
        let bounded = nonhalt.is_zero();
        RunResult {
            accept_prob: acc,
            reject_prob: rej,
            nonhalt_mass: nonhalt,
            expected_steps: if bounded { steps } else { None },
            expected_rounds: if bounded { rounds } else { None },
            branch_count: nodes,
            engine: EngineKind::Exact,
            precision: precision(),
            trials: None,
            seed: None,
            std_errors: None,
            steps_std_error: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_rule() {
        let s = RoundStatistics::immediate(Real::ratio(1, 10), Real::ratio(1, 10), Real::ratio(8, 10));
        assert_eq!(restart_acceptance(&s).unwrap(), Real::ratio(1, 2));
        assert_eq!(expected_rounds(&s).unwrap(), Real::int(5));
    }

    #[test]
    fn never_halting_round() {
        let s = RoundStatistics::immediate(Real::zero(), Real::zero(), Real::one());
        assert_eq!(restart_acceptance(&s), Err(Error::NeverHalts));
        assert_eq!(expected_rounds(&s), Err(Error::NeverHalts));
    }

    #[test]
    fn geometric_combination_matches_ratio() {
        let s = RoundStatistics::immediate(Real::ratio(1, 6), Real::ratio(1, 3), Real::ratio(1, 2));
        let r = RunResult::from_rounds(&s, Some(&s));
        assert_eq!(r.accept_prob, Real::ratio(1, 3));
        assert_eq!(r.reject_prob, Real::ratio(2, 3));
        assert_eq!(r.expected_rounds, Some(Real::int(2)));
    }
}
