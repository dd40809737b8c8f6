//! Report rows, sweeps with growth fits, and adversary-search reports.

use std::io::Write;

use qcfa::machine::{CompiledMachine, ExactOptions, McMode, McOptions, RunResult, TranscriptView};
use qcfa::proofsystems::{exhaustive_adversary_search_with, run_protocol_with, ProverStrategy, SearchOptions};
use qcfa::real::Real;
use qcfa::scalar::{precision, with_precision};
use qcfa::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::sources::{resolve_prover, Target};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
const DIGITS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Exact,
    Mc,
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub engine: Engine,
    pub trials: u64,
    pub max_steps: u64,
    pub node_budget: usize,
    pub seed: u64,
    pub mc_mode: McMode,
}

impl Default for RunOptions {
    fn default() -> Self {
        let e = ExactOptions::default();
        RunOptions {
            engine: Engine::Exact,
            trials: 10_000,
            max_steps: e.max_steps,
            node_budget: e.node_budget,
            seed: 0,
            mc_mode: McMode::Full,
        }
    }
}

impl RunOptions {
    fn exact(&self) -> ExactOptions {
        ExactOptions { max_steps: self.max_steps, node_budget: self.node_budget }
    }

    fn mc(&self) -> McOptions {
        McOptions { trials: self.trials, max_steps_per_trial: self.max_steps, seed: self.seed, mode: self.mc_mode }
    }
}

/// One input's outcome. `pass` follows from `reference_membership`,
/// `accept_prob`, `reject_prob`, `bound` and `strict` alone.
#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub schema_version: u32,
    pub machine: String,
    pub input: String,
    pub input_length: usize,
    pub engine: Engine,
    pub precision: usize,
    pub prover: Option<String>,
    pub accept_prob: Option<String>,
    pub reject_prob: Option<String>,
    pub nonhalt_mass: Option<String>,
    pub expected_steps: Option<String>,
    pub expected_rounds: Option<String>,
    pub reference_membership: Option<bool>,
    pub bound: Option<String>,
    pub strict: Option<bool>,
    pub pass: Option<bool>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub error: Option<String>,
}

fn dec(r: &Real) -> String {
    r.to_decimal(DIGITS)
}

/// Bound on the correct-decision probability for an input of the given
/// membership, and whether it is strict. Verifiers promise acceptance of
/// members only to the honest prover.
fn claimed(target: &Target, member: bool, prover: Option<&str>) -> Option<(Real, bool)> {
    match target {
        Target::Recognizer(b) => {
            let c = &b.claims;
            Some((if member { c.member_accept.clone() } else { c.nonmember_reject.clone() }, c.strict))
        }
        Target::Verifier { .. } if member => (prover == Some("honest")).then(|| (Real::ratio(3, 4), false)),
        Target::Verifier { .. } => Some((Real::ratio(4, 7), false)),
        Target::Plain(_) => None,
    }
}

fn verdict(member: bool, accept: &Real, reject: &Real, bound: &Real, strict: bool) -> bool {
    let v = if member { accept } else { reject };
    if strict {
        v > bound
    } else {
        v >= bound
    }
}

fn transcript_for(target: &Target, prover: Option<&str>, input: &str) -> Result<(Option<String>, Option<Vec<char>>)> {
    match target {
        Target::Verifier { oracle, .. } => {
            let p: Box<dyn ProverStrategy> = resolve_prover(prover.unwrap_or("honest"), oracle.as_ref())?;
            Ok((Some(p.label()), Some(p.transcript(input)?.symbols)))
        }
        // a loaded definition has no oracle, so only fixed transcripts apply
        _ => match prover {
            Some(sel) => {
                let p = resolve_prover(sel, None)?;
                Ok((Some(p.label()), Some(p.transcript(input)?.symbols)))
            }
            None => Ok((None, None)),
        },
    }
}

fn evaluate(machine: &CompiledMachine, input: &str, transcript: Option<&[char]>, opts: &RunOptions) -> Result<RunResult> {
    match opts.engine {
        Engine::Exact => machine.run_exact(input, transcript, opts.exact()),
        Engine::Mc => Ok(machine.run_monte_carlo(input, transcript, opts.mc())?.to_run_result()),
    }
}

fn row(target: &Target, machine: &CompiledMachine, input: &str, prover: Option<&str>, opts: &RunOptions) -> ReportRow {
    let mut r = ReportRow {
        schema_version: REPORT_SCHEMA_VERSION,
        machine: target.spec().name.clone(),
        input: input.to_string(),
        input_length: input.chars().count(),
        engine: opts.engine,
        precision: precision(),
        prover: None,
        accept_prob: None,
        reject_prob: None,
        nonhalt_mass: None,
        expected_steps: None,
        expected_rounds: None,
        reference_membership: None,
        bound: None,
        strict: None,
        pass: None,
        seed: (opts.engine == Engine::Mc).then_some(opts.seed),
        trials: (opts.engine == Engine::Mc).then_some(opts.trials),
        error: None,
    };
    let result = (|| -> Result<()> {
        r.reference_membership = target.member(input)?;
        let (label, transcript) = transcript_for(target, prover, input)?;
        r.prover = label;
        let res = evaluate(machine, input, transcript.as_deref(), opts)?;
        r.accept_prob = Some(dec(&res.accept_prob));
        r.reject_prob = Some(dec(&res.reject_prob));
        r.nonhalt_mass = Some(dec(&res.nonhalt_mass));
        r.expected_steps = res.expected_steps.as_ref().map(dec);
        r.expected_rounds = res.expected_rounds.as_ref().map(dec);
        if let Some(member) = r.reference_membership {
            if let Some((bound, strict)) = claimed(target, member, r.prover.as_deref()) {
                r.pass = Some(verdict(member, &res.accept_prob, &res.reject_prob, &bound, strict));
                r.bound = Some(dec(&bound));
                r.strict = Some(strict);
            }
        }
        Ok(())
    })();
    if let Err(e) = result {
        r.error = Some(e.to_string());
    }
    r
}

/// One row per input, computed in parallel and returned in input order.
pub fn run_rows(target: &Target, inputs: &[String], prover: Option<&str>, opts: &RunOptions) -> Result<Vec<ReportRow>> {
    let machine = CompiledMachine::new(target.spec().clone())?;
    let p = precision();
    Ok(inputs.par_iter().map(|w| with_precision(p, || row(target, &machine, w, prover, opts))).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// Expected steps of a complete run.
    Steps,
    /// Expected number of rounds.
    Rounds,
    /// Expected steps of one pass through the random-walk stage.
    Walk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FitKind {
    /// `ln y` against `ln n`: the slope is a polynomial degree.
    LogLog,
    /// `ln y` against `n`: the slope is an exponential rate.
    LogLinear,
}

#[derive(Clone, Debug, Serialize)]
pub struct Fit {
    pub kind: FitKind,
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
}

/// Ordinary least squares after the transform named by `kind`.
pub fn fit(points: &[(f64, f64)], kind: FitKind) -> Result<Fit> {
    if points.len() < 3 {
        return Err(Error::Contract(format!("a fit needs at least 3 points, got {}", points.len())));
    }
    let mut xy = Vec::with_capacity(points.len());
    for &(x, y) in points {
        if y <= 0.0 || (kind == FitKind::LogLog && x <= 0.0) {
            return Err(Error::Contract(format!("point ({x}, {y}) cannot be log-transformed")));
        }
        xy.push((if kind == FitKind::LogLog { x.ln() } else { x }, y.ln()));
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Contract("a fit needs at least two distinct lengths".into()));
    }
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = xy.iter().map(|p| p.1 - (intercept + slope * p.0)).collect();
    Ok(Fit { kind, slope, intercept, residuals })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub input: String,
    pub input_length: usize,
    pub value: Option<String>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub machine: String,
    pub quantity: Quantity,
    pub precision: usize,
    pub points: Vec<SweepPoint>,
    pub fit: Option<Fit>,
    pub fit_error: Option<String>,
}

/// Expected steps from entering the walk stage (state `w1_home`, head on `$`)
/// until the round ends.
pub fn walk_stage_steps(machine: &CompiledMachine, input: &str, opts: ExactOptions) -> Result<Real> {
    let state = machine
        .state_id("w1_home")
        .ok_or_else(|| Error::Contract(format!("`{}` has no walk stage", machine.spec().name)))?;
    let tape = machine.tape(input)?;
    let mut start = machine.initial_config();
    start.state = state;
    start.head = tape.input_len() + 1;
    Ok(machine.round_from(start, &tape, TranscriptView::EMPTY, opts)?.round_steps)
}

fn sweep_value(target: &Target, machine: &CompiledMachine, input: &str, prover: Option<&str>, quantity: Quantity, opts: &RunOptions) -> Result<Real> {
    match quantity {
        Quantity::Walk => walk_stage_steps(machine, input, opts.exact()),
        Quantity::Steps | Quantity::Rounds => {
            let res = match target {
                Target::Verifier { verifier, oracle } => {
                    let p = resolve_prover(prover.unwrap_or("honest"), oracle.as_ref())?;
                    let r = run_protocol_with(verifier, p.as_ref(), input, opts.exact())?;
                    let t = p.transcript(input)?;
                    if quantity == Quantity::Rounds {
                        return r.expected_rounds.ok_or(Error::NeverHalts);
                    }
                    machine.run_exact(input, Some(&t.symbols), opts.exact())?
                }
                _ => machine.run_exact(input, None, opts.exact())?,
            };
            match quantity {
                Quantity::Steps => res.expected_steps,
                _ => res.expected_rounds,
            }
            .ok_or(Error::NeverHalts)
        }
    }
}

/// Measures `quantity` on every input and fits its growth in the input length.
pub fn sweep(target: &Target, inputs: &[String], prover: Option<&str>, quantity: Quantity, kind: FitKind, opts: &RunOptions) -> Result<SweepReport> {
    let machine = CompiledMachine::new(target.spec().clone())?;
    let p = precision();
    let values: Vec<(SweepPoint, Option<f64>)> = inputs
        .par_iter()
        .map(|w| {
            with_precision(p, || {
                let len = w.chars().count();
                match sweep_value(target, &machine, w, prover, quantity, opts) {
                    Ok(v) => (SweepPoint { input: w.clone(), input_length: len, value: Some(dec(&v)), error: None }, Some(v.to_f64())),
                    Err(e) => (SweepPoint { input: w.clone(), input_length: len, value: None, error: Some(e.to_string()) }, None),
                }
            })
        })
        .collect();
    let pts: Vec<(f64, f64)> = values.iter().filter_map(|(pt, v)| v.map(|v| (pt.input_length as f64, v))).collect();
    let (fit, fit_error) = match fit(&pts, kind) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(SweepReport {
        schema_version: REPORT_SCHEMA_VERSION,
        machine: target.spec().name.clone(),
        quantity,
        precision: p,
        points: values.into_iter().map(|(pt, _)| pt).collect(),
        fit,
        fit_error,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchRow {
    pub schema_version: u32,
    pub machine: String,
    pub input: String,
    pub input_length: usize,
    pub symbol_budget: usize,
    pub max_acceptance: Option<String>,
    pub witness: Option<String>,
    pub evaluated: Option<usize>,
    pub pruned: Option<usize>,
    pub honest_acceptance: Option<String>,
    pub reference_membership: Option<bool>,
    /// Nonmembers: the maximum is at most 3/7. Members: the honest prover
    /// attains the maximum.
    pub pass: Option<bool>,
    pub error: Option<String>,
}

/// Exhaustive prover search per input; `budget(w)` gives the symbol budget.
pub fn search_rows(target: &Target, inputs: &[String], budget: &(dyn Fn(&str) -> usize + Sync), opts: &RunOptions, max_evaluations: usize) -> Result<Vec<SearchRow>> {
    let Target::Verifier { verifier, oracle } = target else {
        return Err(Error::Contract("adversary search needs a verifier".into()));
    };
    let p = precision();
    let sopts = SearchOptions { max_evaluations, exact: opts.exact() };
    Ok(inputs
        .par_iter()
        .map(|w| {
            with_precision(p, || {
                let b = budget(w);
                let mut r = SearchRow {
                    schema_version: REPORT_SCHEMA_VERSION,
                    machine: verifier.machine.name.clone(),
                    input: w.clone(),
                    input_length: w.chars().count(),
                    symbol_budget: b,
                    max_acceptance: None,
                    witness: None,
                    evaluated: None,
                    pruned: None,
                    honest_acceptance: None,
                    reference_membership: None,
                    pass: None,
                    error: None,
                };
                let res = (|| -> Result<()> {
                    let s = exhaustive_adversary_search_with(verifier, w, b, sopts)?;
                    r.max_acceptance = Some(dec(&s.max_acceptance));
                    r.witness = Some(s.witness.iter().collect());
                    r.evaluated = Some(s.evaluated);
                    r.pruned = Some(s.pruned);
                    if let Some(o) = oracle {
                        let member = o.member(w)?;
                        r.reference_membership = Some(member);
                        let honest = run_protocol_with(verifier, resolve_prover("honest", Some(o))?.as_ref(), w, opts.exact())?;
                        r.pass = Some(if member {
                            s.max_acceptance == honest.overall_acceptance
                        } else {
                            s.max_acceptance <= Real::ratio(3, 7)
                        });
                        r.honest_acceptance = Some(dec(&honest.overall_acceptance));
                    }
                    Ok(())
                })();
                if let Err(e) = res {
                    r.error = Some(e.to_string());
                }
                r
            })
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Rows as CSV (header from the field names) or a JSON document.
pub fn write_rows<T: Serialize>(rows: &[T], format: Format, out: &mut dyn Write) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
            }
            w.flush().map_err(io)?;
        }
        Format::Json => {
            let doc = serde_json::json!({ "schema_version": REPORT_SCHEMA_VERSION, "rows": rows });
            serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out).map_err(io)?;
        }
    }
    Ok(())
}
