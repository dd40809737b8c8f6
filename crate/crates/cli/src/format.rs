//! JSON machine-definition files.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use qcfa::machine::{MachineKind, MachineSpec, Rule, StateDecl};
use qcfa::quantum::{complete_superoperator, Angle, AngleRepr, Matrix, OperationElement, RationalMatrix, Register, Superoperator};
use qcfa::scalar::precision;
use qcfa::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::expr::{evaluate, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MachineDefinition {
    pub schema_version: u32,
    pub name: String,
    pub kind: MachineKind,
    pub alphabet: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub prover_alphabet: String,
    pub register_dim: usize,
    /// Defaults to |q0⟩.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_register: Option<RegisterDef>,
    pub states: Vec<StateDecl>,
    pub initial: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restart_entry: Option<String>,
    pub superoperators: BTreeMap<String, Vec<ElementDef>>,
    pub transitions: Vec<Rule>,
    /// Bits of precision the numeric entries were written at.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegisterDef {
    Exact(Vec<String>),
    Angle(AngleRepr),
    Float(Vec<String>),
}

/// One operation element. Exactly one of `matrix`, `rotation` and
/// `completion` is given; a completion element must come last and stands for
/// `√(I − Σ E†E)` over the elements before it.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ElementDef {
    pub label: String,
    /// The element is `√scale · matrix`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
    /// Keep the matrix numeric even when every entry is rational.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub numeric: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<AngleRepr>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub completion: bool,
}

struct Locator<'a>(&'a str);

impl Locator<'_> {
    /// Position of the first quoted occurrence of `needle`, offset by `column`.
    fn error(&self, needle: &str, column: usize, message: String) -> Error {
        let quoted = format!("\"{needle}\"");
        match self.0.find(&quoted) {
            Some(at) => {
                let before = &self.0[..at];
                let line = before.matches('\n').count() + 1;
                let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1 + column;
                Error::Parse { line, column: col, message }
            }
            None => Error::Structural(message),
        }
    }
}

fn plain(message: impl Into<String>) -> Error {
    Error::Structural(message.into())
}

fn ratio_string(r: &BigRational) -> String {
    r.to_string()
}

pub fn dump(spec: &MachineSpec) -> MachineDefinition {
    let superoperators = spec
        .superoperators
        .iter()
        .map(|(name, op)| (name.clone(), op.elements().iter().map(element_def).collect()))
        .collect();
    let initial_register = match &spec.initial_register {
        r if *r == Register::basis(spec.register_dim, 0) => None,
        Register::Exact(v) => Some(RegisterDef::Exact(v.iter().map(ratio_string).collect())),
        Register::Angle(a) => Some(RegisterDef::Angle(AngleRepr::from(a))),
        Register::Float(v) => Some(RegisterDef::Float(v.iter().map(|x| ratio_string(&x.to_ratio())).collect())),
    };
    MachineDefinition {
        schema_version: SCHEMA_VERSION,
        name: spec.name.clone(),
        kind: spec.kind,
        alphabet: spec.alphabet.iter().collect(),
        prover_alphabet: spec.prover_alphabet.iter().collect(),
        register_dim: spec.register_dim,
        initial_register,
        states: spec.states.clone(),
        initial: spec.initial.clone(),
        restart_entry: spec.restart_entry.clone(),
        superoperators,
        transitions: spec.rules.clone(),
        precision: Some(precision()),
    }
}

fn element_def(e: &OperationElement) -> ElementDef {
    let label = e.label().to_string();
    if e.is_completion() {
        return ElementDef { label, completion: true, ..ElementDef::default() };
    }
    if let Some(a) = e.rotation_angle() {
        return ElementDef { label, rotation: Some(AngleRepr::from(a)), ..ElementDef::default() };
    }
    if let Some(x) = e.exact_form() {
        let m = &x.matrix;
        let rows = (0..m.rows()).map(|i| (0..m.cols()).map(|j| ratio_string(m.get(i, j))).collect()).collect();
        let scale = (!x.scale.is_one()).then(|| ratio_string(&x.scale));
        return ElementDef { label, scale, matrix: Some(rows), ..ElementDef::default() };
    }
    let m = e.matrix();
    let rows = (0..m.rows()).map(|i| (0..m.cols()).map(|j| ratio_string(&m.get(i, j).to_ratio())).collect()).collect();
    ElementDef { label, matrix: Some(rows), numeric: true, ..ElementDef::default() }
}

pub fn to_json(spec: &MachineSpec) -> String {
    serde_json::to_string_pretty(&dump(spec)).expect("definitions serialize")
}

/// Parses and builds a machine at the current precision.
pub fn load(text: &str) -> Result<MachineSpec> {
    let def: MachineDefinition = serde_json::from_str(text)
        .map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
    build(&def, &Locator(text))
}

fn value(loc: &Locator, s: &str) -> Result<Value> {
    evaluate(s).map_err(|e| loc.error(s, e.column, e.message))
}

fn build(def: &MachineDefinition, loc: &Locator) -> Result<MachineSpec> {
    if def.schema_version != SCHEMA_VERSION {
        return Err(loc.error(
            "schema_version",
            0,
            format!("schema version {} is not supported (expected {SCHEMA_VERSION})", def.schema_version),
        ));
    }
    let alphabet: Vec<char> = def.alphabet.chars().collect();
    let mut spec = MachineSpec::new(&def.name, def.kind, &alphabet, def.register_dim);
    spec.prover_alphabet = def.prover_alphabet.chars().collect();
    spec.states = def.states.clone();
    spec.initial = def.initial.clone();
    spec.restart_entry = def.restart_entry.clone();
    spec.rules = def.transitions.clone();
    if let Some(r) = &def.initial_register {
        spec.initial_register = register(loc, r)?;
    }
    for (name, elements) in &def.superoperators {
        let op = superoperator(loc, name, elements, def.register_dim)?;
        spec.superoperators.insert(name.clone(), op);
    }
    spec.check()?;
    Ok(spec)
}

fn register(loc: &Locator, r: &RegisterDef) -> Result<Register> {
    let zero = || plain("initial register is the zero vector");
    match r {
        RegisterDef::Angle(a) => Ok(Register::Angle(Angle::try_from(a)?)),
        RegisterDef::Exact(v) => {
            let mut out = Vec::new();
            for s in v {
                match value(loc, s)? {
                    Value::Exact(r) => out.push(r),
                    Value::Approx(_) => return Err(loc.error(s, 0, format!("`{s}` is not rational"))),
                }
            }
            Register::exact(out).ok_or_else(zero)
        }
        RegisterDef::Float(v) => {
            let out = v.iter().map(|s| value(loc, s).map(|x| x.to_scalar())).collect::<Result<Vec<_>>>()?;
            Register::float(out).ok_or_else(zero)
        }
    }
}

fn superoperator(loc: &Locator, name: &str, elements: &[ElementDef], dim: usize) -> Result<Superoperator> {
    let mut partial = Vec::new();
    let mut completion = None;
    for (i, e) in elements.iter().enumerate() {
        let given = e.matrix.is_some() as u8 + e.rotation.is_some() as u8 + e.completion as u8;
        if given != 1 {
            return Err(loc.error(&e.label, 0, format!("element `{}` of `{name}` needs exactly one of matrix, rotation, completion", e.label)));
        }
        if e.completion {
            if i + 1 != elements.len() {
                return Err(loc.error(&e.label, 0, format!("completion element `{}` of `{name}` must come last", e.label)));
            }
            completion = Some(e.label.clone());
        } else if let Some(a) = &e.rotation {
            partial.push(OperationElement::rotation(&e.label, &Angle::try_from(a)?));
        } else {
            partial.push(matrix_element(loc, name, e, dim)?);
        }
    }
    let op = match completion {
        Some(label) => complete_superoperator(partial, &label),
        None => Superoperator::new(partial),
    };
    op.map_err(|e| plain(format!("superoperator `{name}`: {e}")))
}

fn matrix_element(loc: &Locator, name: &str, e: &ElementDef, dim: usize) -> Result<OperationElement> {
    let rows = e.matrix.as_ref().expect("checked");
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(loc.error(&e.label, 0, format!("element `{}` of `{name}` is not {dim}×{dim}", e.label)));
    }
    let scale = match &e.scale {
        None => Value::Exact(BigRational::one()),
        Some(s) => value(loc, s)?,
    };
    let values = rows.iter().map(|r| r.iter().map(|s| value(loc, s)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    let all_exact = scale.exact().is_some() && values.iter().flatten().all(|v| v.exact().is_some());
    if all_exact && !e.numeric {
        let m = RationalMatrix::from_rows(values.iter().map(|r| r.iter().map(|v| v.exact().expect("exact").clone()).collect()).collect());
        return Ok(OperationElement::exact(&e.label, scale.exact().expect("exact").clone(), m));
    }
    let root = scale.to_scalar().sqrt();
    let m = Matrix::from_rows(values.iter().map(|r| r.iter().map(|v| v.to_scalar()).collect()).collect());
    let m = if scale.exact().is_some_and(|s| s.is_one()) { m } else { m.scale(&root) };
    Ok(OperationElement::new(&e.label, m))
}
