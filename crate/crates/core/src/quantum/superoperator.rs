use std::collections::HashSet;

use serde::Serialize;

use super::angle::Angle;
use super::element::OperationElement;
use super::matrix::{symmetric_eigen, Matrix, RationalMatrix};
use super::register::{AmplitudeVector, Register};
use crate::real::Real;
use crate::scalar::{default_tolerance, precision, Scalar};
use crate::{Error, Result};

/// A labeled family of operation elements of equal dimension.
#[derive(Clone, Debug)]
pub struct Superoperator {
    dim: usize,
    elements: Vec<OperationElement>,
}

impl Superoperator {
    /// Checks dimensions and label uniqueness. Completeness is checked
    /// separately by [`validate_superoperator`].
    pub fn new(elements: Vec<OperationElement>) -> Result<Self> {
        let dim = elements.first().map(OperationElement::dim).ok_or_else(|| Error::structural("superoperator has no elements"))?;
        if dim == 0 {
            return Err(Error::structural("superoperator dimension must be positive"));
        }
        let mut seen = HashSet::new();
        for e in &elements {
            if e.dim() != dim {
                return Err(Error::structural(format!(
                    "element `{}` has dimension {}, expected {dim}",
                    e.label(),
                    e.dim()
                )));
            }
            if !seen.insert(e.label().to_string()) {
                return Err(Error::structural(format!("duplicate outcome label `{}`", e.label())));
            }
        }
        Ok(Superoperator { dim, elements })
    }

    /// One identity element.
    pub fn identity(dim: usize, label: &str) -> Self {
        let e = OperationElement::exact(label, num_rational::BigRational::from_integer(1.into()), RationalMatrix::identity(dim));
        Superoperator { dim, elements: vec![e] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[OperationElement] {
        &self.elements
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.elements.iter().map(OperationElement::label)
    }

    pub fn element(&self, label: &str) -> Option<&OperationElement> {
        self.elements.iter().find(|e| e.label() == label)
    }

    /// `Σ E†E`, exactly, when every element has an exact Gram matrix.
    pub fn exact_gram_sum(&self) -> Option<RationalMatrix> {
        let mut acc = RationalMatrix::zeros(self.dim, self.dim);
        for e in &self.elements {
            acc = acc.add(e.exact_gram()?);
        }
        Some(acc)
    }

    /// Outcome probabilities and post states on a register, zero-weight
    /// outcomes omitted. Index refers to [`Self::elements`].
    pub fn branches(&self, reg: &Register) -> Vec<(usize, Real)> {
        let mut out = Vec::with_capacity(self.elements.len());
        for (i, e) in self.elements.iter().enumerate() {
            let p = e.probability(reg);
            if !p.is_zero() {
                out.push((i, p));
            }
        }
        out
    }
}

/// Result of checking `Σ E†E = I`.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub pass: bool,
    pub residual_norm: Scalar,
    /// `I − Σ E†E`
    pub residual: Matrix,
    pub tolerance: Scalar,
    pub precision: usize,
}

#[derive(Serialize)]
struct ReportRecord {
    pass: bool,
    residual_norm: String,
    tolerance: String,
    precision: usize,
    residual: Vec<Vec<String>>,
}

impl ValidationReport {
    pub fn to_json(&self) -> serde_json::Value {
        let r = ReportRecord {
            pass: self.pass,
            residual_norm: self.residual_norm.to_decimal(6),
            tolerance: self.tolerance.to_decimal(6),
            precision: self.precision,
            residual: (0..self.residual.rows())
                .map(|i| (0..self.residual.cols()).map(|j| self.residual.get(i, j).to_decimal(12)).collect())
                .collect(),
        };
        serde_json::to_value(r).expect("report serializes")
    }
}

/// Checks the completeness condition numerically at the context precision.
pub fn validate_superoperator(op: &Superoperator, tol: &Scalar) -> ValidationReport {
    let mut sum = Matrix::zeros(op.dim, op.dim);
    for e in &op.elements {
        sum = sum.add(&e.matrix().gram());
    }
    let residual = Matrix::identity(op.dim).sub(&sum);
    let residual_norm = residual.max_norm();
    ValidationReport { pass: residual_norm <= *tol, residual_norm, residual, tolerance: tol.clone(), precision: precision() }
}

/// `E·v`, unnormalized.
pub fn apply_element(e: &OperationElement, v: &AmplitudeVector) -> Result<AmplitudeVector> {
    if e.dim() != v.dim() {
        return Err(Error::structural(format!("element dimension {} does not match vector dimension {}", e.dim(), v.dim())));
    }
    Ok(AmplitudeVector { entries: e.matrix().mul_vec(&v.entries), normalized: false })
}

/// One observable outcome of a superoperator.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub label: String,
    pub probability: Scalar,
    pub post_state: AmplitudeVector,
}

/// Outcome probabilities and normalized post states for a unit vector.
pub fn outcome_distribution(op: &Superoperator, v: &AmplitudeVector) -> Result<Vec<Outcome>> {
    if v.dim() != op.dim {
        return Err(Error::structural(format!("vector dimension {} does not match superoperator dimension {}", v.dim(), op.dim)));
    }
    let norm = v.norm_sq();
    if !v.normalized || (&norm - &Scalar::one()).abs() > default_tolerance() {
        return Err(Error::contract("outcome_distribution needs a normalized vector"));
    }
    let mut out = Vec::new();
    for e in &op.elements {
        let w = apply_element(e, v)?;
        let p = w.norm_sq();
        if p.is_zero() {
            continue;
        }
        let post = AmplitudeVector::normalized(w.entries)?;
        out.push(Outcome { label: e.label().to_string(), probability: p, post_state: post });
    }
    Ok(out)
}

/// The 2×2 rotation by `angle`, as a single-element superoperator's element.
pub fn rotation(angle: &Angle) -> OperationElement {
    OperationElement::rotation("rotate", angle)
}

/// Rotation by an arbitrary numeric angle in radians.
pub fn rotation_radians(theta: &Scalar) -> OperationElement {
    let (c, s) = (theta.cos(), theta.sin());
    OperationElement::new("rotate", Matrix::from_rows(vec![vec![c.clone(), -&s], vec![s, c]]))
}

/// Appends a `restart_label` element `√R`, `R = I − Σ E†E`, so the set becomes
/// a superoperator. Nothing is appended when `R` vanishes.
pub fn complete_superoperator(partial: Vec<OperationElement>, restart_label: &str) -> Result<Superoperator> {
    complete_superoperator_with_tolerance(partial, restart_label, &default_tolerance())
}

pub fn complete_superoperator_with_tolerance(
    partial: Vec<OperationElement>,
    restart_label: &str,
    tol: &Scalar,
) -> Result<Superoperator> {
    let op = Superoperator::new(partial)?;
    if op.element(restart_label).is_some() {
        return Err(Error::structural(format!("label `{restart_label}` is already used")));
    }
    let n = op.dim;
    let report = validate_superoperator(&op, tol);
    let exact_residual = op.exact_gram_sum().map(|g| RationalMatrix::identity(n).sub(&g));
    let residual = match &exact_residual {
        Some(r) => r.to_scalar(),
        None => report.residual.clone(),
    };
    let (values, vectors) = symmetric_eigen(&residual);
    let lowest = values.iter().cloned().fold(None, |m: Option<Scalar>, x| match m {
        Some(m) if m <= x => Some(m),
        _ => Some(x),
    });
    if let Some(low) = &lowest {
        if *low < -tol.clone() {
            let gram = Matrix::identity(n).sub(&residual);
            let (gvals, _) = symmetric_eigen(&gram);
            let top = gvals.iter().fold(Scalar::zero(), |m, x| m.max(x));
            return Err(Error::CoefficientTooLarge {
                eigenvalue: format!("{} (largest eigenvalue of the partial sum: {})", low.to_decimal(12), top.to_decimal(12)),
            });
        }
    }
    let zero_residual = match &exact_residual {
        Some(r) => r.is_zero(),
        None => report.residual_norm <= *tol,
    };
    let mut elements = op.elements;
    if !zero_residual {
        let mut root = Matrix::zeros(n, n);
        for (k, lambda) in values.iter().enumerate() {
            if lambda.is_negative() || lambda.is_zero() {
                continue;
            }
            let s = lambda.sqrt();
            for i in 0..n {
                for j in 0..n {
                    let add = vectors.get(i, k) * vectors.get(j, k) * &s;
                    let cur = root.get(i, j).clone();
                    root.set(i, j, cur + add);
                }
            }
        }
        if is_diagonal(&residual) {
            root = Matrix::zeros(n, n);
            for i in 0..n {
                let d = residual.get(i, i);
                if !d.is_negative() {
                    root.set(i, i, d.sqrt());
                }
            }
        }
        elements.push(OperationElement::completion(restart_label, root, exact_residual));
    }
    Superoperator::new(elements)
}

fn is_diagonal(m: &Matrix) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m.get(i, j).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    fn proc1() -> Vec<OperationElement> {
        vec![
            OperationElement::exact_i64("go", ratio(1, 18), &[&[4, -1], &[0, 1]]),
            OperationElement::exact_i64("restart", ratio(1, 18), &[&[1, 4], &[1, 0]]),
        ]
    }

    #[test]
    fn identity_validates() {
        let op = Superoperator::identity(3, "id");
        let r = validate_superoperator(&op, &default_tolerance());
        assert!(r.pass);
        assert!(r.residual_norm.is_zero());
    }

    #[test]
    fn proc1_validates() {
        let op = Superoperator::new(proc1()).unwrap();
        assert!(validate_superoperator(&op, &default_tolerance()).pass);
        assert_eq!(op.exact_gram_sum().unwrap(), RationalMatrix::identity(2));
    }

    #[test]
    fn duplicate_labels_rejected() {
        let e = OperationElement::exact_i64("x", ratio(1, 2), &[&[1, 0], &[0, 1]]);
        assert!(Superoperator::new(vec![e.clone(), e]).is_err());
    }

    #[test]
    fn completion_of_complete_set_appends_nothing() {
        let op = complete_superoperator(proc1(), "extra").unwrap();
        assert_eq!(op.elements().len(), 2);
    }

    #[test]
    fn completion_of_nondiagonal_residual() {
        let c2 = ratio(1, 25);
        let go = OperationElement::exact_i64("go", c2, &[&[4, -1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let op = complete_superoperator(vec![go], "restart").unwrap();
        assert_eq!(op.elements().len(), 2);
        let r = validate_superoperator(&op, &crate::scalar::Scalar::pow2(-150));
        assert!(r.pass, "residual {}", r.residual_norm);
    }

    #[test]
    fn oversized_coefficient_is_reported() {
        let go = OperationElement::exact_i64("go", BigRational::from_integer(1.into()), &[&[4, -1], &[0, 1]]);
        match complete_superoperator(vec![go], "restart") {
            Err(Error::CoefficientTooLarge { eigenvalue }) => assert!(eigenvalue.starts_with("-16.06"), "{eigenvalue}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn contract_on_unnormalized_input() {
        let op = Superoperator::identity(2, "id");
        let v = AmplitudeVector { entries: vec![Scalar::one(), Scalar::one()], normalized: false };
        assert!(matches!(outcome_distribution(&op, &v), Err(Error::Contract(_))));
    }
}
