//! Resolving machine names, oracles, input sets and provers from strings.

use std::collections::BTreeMap;

use num_rational::BigRational;
use qcfa::constructions::{
    build_2qcca_power_eq_l, build_2qcca_upower, build_power_eq, build_power_eq_l_phase, build_stochastic_1qcfa,
    build_theorem1, RecognizerBundle,
};
use qcfa::languages::{gamma_of, lex_string, power_eq_member, Alphabet, LanguageOracle, NaturalSet};
use qcfa::machine::MachineSpec;
use qcfa::proofsystems::{
    build_binary_verifier, build_unary_verifier, default_c, final_bit_adversary, honest_prover, out_of_order_adversary,
    FixedTranscript, ProverStrategy, VerifierSpec,
};
use qcfa::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::expr::{evaluate, Value};

pub const BUILTINS: &[&str] = &[
    "power-eq",
    "power-eq-l-phase",
    "theorem1",
    "stochastic",
    "upower",
    "power-eq-linear",
    "unary-verifier",
    "binary-verifier",
];

/// Where the language oracle comes from.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct OracleSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

impl OracleSource {
    pub fn load(&self, alphabet: Alphabet, default_depth: usize, fallback_seed: u64) -> Result<LanguageOracle> {
        if let Some(path) = &self.file {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
            let o = LanguageOracle::from_json(&text)?;
            if o.alphabet() != alphabet {
                return Err(Error::Contract(format!("oracle `{path}` is over the wrong alphabet")));
            }
            return Ok(o);
        }
        Ok(LanguageOracle::random(alphabet, self.depth.unwrap_or(default_depth), self.seed.unwrap_or(fallback_seed)))
    }
}

/// A machine to run, with whatever it knows about its language.
#[derive(Clone, Debug)]
pub enum Target {
    Recognizer(Box<RecognizerBundle>),
    Verifier { verifier: Box<VerifierSpec>, oracle: Option<LanguageOracle> },
    Plain(Box<MachineSpec>),
}

impl Target {
    pub fn spec(&self) -> &MachineSpec {
        match self {
            Target::Recognizer(b) => &b.spec,
            Target::Verifier { verifier, .. } => &verifier.machine,
            Target::Plain(s) => s,
        }
    }

    pub fn member(&self, w: &str) -> Result<Option<bool>> {
        match self {
            Target::Recognizer(b) if b.reference.covers(w) => b.reference.member(w).map(Some),
            Target::Verifier { oracle: Some(o), .. } => o.member(w).map(Some),
            _ => Ok(None),
        }
    }
}

/// `name` or `name:key=value,key=value`.
pub fn parse_builtin(source: &str) -> Result<(String, BTreeMap<String, String>)> {
    let (name, rest) = source.split_once(':').unwrap_or((source, ""));
    let mut params = BTreeMap::new();
    for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Contract(format!("parameter `{kv}` of `{name}` is not key=value")))?;
        let k = if k.trim() == "γ" { "gamma" } else { k.trim() };
        params.insert(k.to_string(), v.trim().to_string());
    }
    Ok((name.trim().to_string(), params))
}

fn rational_param(params: &BTreeMap<String, String>, key: &str) -> Result<Option<BigRational>> {
    match params.get(key) {
        None => Ok(None),
        Some(s) => match evaluate(s) {
            Ok(Value::Exact(r)) => Ok(Some(r)),
            Ok(Value::Approx(_)) => Err(Error::Contract(format!("{key} = `{s}` must be rational"))),
            Err(e) => Err(Error::Parse { line: 1, column: e.column, message: e.message }),
        },
    }
}

/// A builtin (see [`BUILTINS`]) or a path to a definition file.
pub fn resolve_machine(source: &str, oracle: &OracleSource, seed: u64) -> Result<Target> {
    if source.ends_with(".json") {
        let text = std::fs::read_to_string(source).map_err(|e| Error::Io(format!("{source}: {e}")))?;
        return Ok(Target::Plain(Box::new(crate::format::load(&text)?)));
    }
    let (name, params) = parse_builtin(source)?;
    let mut oracle = oracle.clone();
    if let Some(d) = params.get("depth") {
        oracle.depth = Some(d.parse().map_err(|_| Error::Contract(format!("bad depth `{d}`")))?);
    }
    if let Some(s) = params.get("seed") {
        oracle.seed = Some(s.parse().map_err(|_| Error::Contract(format!("bad seed `{s}`")))?);
    }
    let alphabet = match params.get("alphabet").map(String::as_str) {
        None => None,
        Some("a" | "unary") => Some(Alphabet::Unary),
        Some("01" | "binary") => Some(Alphabet::Binary),
        Some(other) => return Err(Error::Contract(format!("unknown alphabet `{other}`"))),
    };
    let recognizer_oracle = || oracle.load(alphabet.unwrap_or(Alphabet::Binary), 12, seed);
    let bundle = |b: RecognizerBundle| Ok(Target::Recognizer(Box::new(b)));
    match name.as_str() {
        "power-eq" => bundle(build_power_eq()),
        "power-eq-l-phase" => bundle(build_power_eq_l_phase(&recognizer_oracle()?)),
        "theorem1" => bundle(build_theorem1(&recognizer_oracle()?)),
        "stochastic" => bundle(build_stochastic_1qcfa(&recognizer_oracle()?)?),
        "power-eq-linear" => bundle(build_2qcca_power_eq_l(&recognizer_oracle()?)),
        "upower" => bundle(build_2qcca_upower(&NaturalSet::new(recognizer_oracle()?.bits().to_vec()))),
        "unary-verifier" | "binary-verifier" => {
            let unary = name == "unary-verifier";
            let o = oracle.load(if unary { Alphabet::Unary } else { Alphabet::Binary }, if unary { 12 } else { 8 }, seed)?;
            let (gamma, oracle) = match rational_param(&params, "gamma")? {
                Some(g) => (g, None),
                None => (gamma_of(&o).value(), Some(o)),
            };
            let verifier = if unary {
                build_unary_verifier(&gamma)?
            } else {
                build_binary_verifier(&gamma, &rational_param(&params, "c")?.unwrap_or_else(default_c))?
            };
            Ok(Target::Verifier { verifier: Box::new(verifier), oracle })
        }
        other => Err(Error::Contract(format!("unknown machine `{other}`; builtins are {}", BUILTINS.join(", ")))),
    }
}

fn range(spec: &str) -> Result<(usize, usize)> {
    let bad = || Error::Contract(format!("bad range `{spec}`"));
    match spec.split_once("..") {
        Some((a, b)) => Ok((a.parse().map_err(|_| bad())?, b.trim_start_matches('=').parse().map_err(|_| bad())?)),
        None => {
            let n = spec.parse().map_err(|_| bad())?;
            Ok((0, n))
        }
    }
}

/// Input generators:
/// `power-eq:N` (members n ≤ N), `perturb:N` (each member with one symbol
/// flipped, dropped or added), `unary:A..B`, `binary:K` (all strings of
/// length ≤ K), `all:K` (every string over {a,b} of length ≤ K).
pub fn generate_inputs(generator: &str) -> Result<Vec<String>> {
    let (kind, arg) = generator.split_once(':').unwrap_or((generator, ""));
    let (lo, hi) = range(arg)?;
    Ok(match kind {
        "power-eq" => (lo..=hi).map(|n| power_eq_member(n as u32)).collect(),
        "perturb" => {
            let mut out = Vec::new();
            for n in lo..=hi {
                let w = power_eq_member(n as u32);
                for v in perturbations(&w) {
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            out
        }
        "unary" => (lo..=hi).map(|n| "a".repeat(n)).collect(),
        "binary" => {
            let count = (1u64 << (hi + 1)) - 1;
            (1..=count).map(|i| lex_string(Alphabet::Binary, i)).filter(|s| s.len() >= lo).collect()
        }
        "all" => {
            let mut out = vec![String::new()];
            let mut level = vec![String::new()];
            for _ in 0..hi {
                level = level.iter().flat_map(|s| [format!("{s}a"), format!("{s}b")]).collect();
                out.extend(level.iter().cloned());
            }
            out.retain(|s| s.len() >= lo);
            out
        }
        other => return Err(Error::Contract(format!("unknown input generator `{other}`"))),
    })
}

/// Strings one edit away from `w`, at a spread of positions.
pub fn perturbations(w: &str) -> Vec<String> {
    let chars: Vec<char> = w.chars().collect();
    let n = chars.len();
    let mut positions: Vec<usize> = vec![0, 1, n / 2, n.saturating_sub(1)];
    positions.sort_unstable();
    positions.dedup();
    let mut out = Vec::new();
    for &i in positions.iter().filter(|&&i| i < n) {
        let mut flip = chars.clone();
        flip[i] = if flip[i] == 'a' { 'b' } else { 'a' };
        out.push(flip.iter().collect());
        let mut drop = chars.clone();
        drop.remove(i);
        out.push(drop.iter().collect());
        let mut add = chars.clone();
        add.insert(i, 'a');
        out.push(add.iter().collect());
    }
    out.retain(|s| s != w);
    out
}

/// `honest`, `final-bit`, `out-of-order:i,j,...` or `fixed:SYMBOLS`.
pub fn resolve_prover(selection: &str, oracle: Option<&LanguageOracle>) -> Result<Box<dyn ProverStrategy>> {
    let (kind, arg) = selection.split_once(':').unwrap_or((selection, ""));
    if kind == "fixed" {
        return Ok(Box::new(FixedTranscript { symbols: arg.chars().collect() }));
    }
    let oracle = oracle.ok_or_else(|| Error::Contract(format!("prover `{kind}` needs the verifier's oracle")))?;
    match kind {
        "honest" => Ok(honest_prover(oracle)),
        "final-bit" => Ok(final_bit_adversary(oracle)),
        "out-of-order" => {
            let perm = arg
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Contract(format!("bad permutation `{arg}`"))))
                .collect::<Result<Vec<_>>>()?;
            out_of_order_adversary(oracle, &perm)
        }
        other => Err(Error::Contract(format!("unknown prover `{other}`"))),
    }
}
