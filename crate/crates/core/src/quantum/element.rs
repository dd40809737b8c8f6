use num_rational::BigRational;
use num_traits::{One, Zero};

use super::angle::Angle;
use super::matrix::{Matrix, RationalMatrix};
use super::register::{norm_sq, Register};
use crate::real::Real;
use crate::scalar::Scalar;

/// `E = √scale · matrix` with rational `scale` and `matrix`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactForm {
    pub scale: BigRational,
    pub matrix: RationalMatrix,
}

/// One operation element of a superoperator.
#[derive(Clone, Debug)]
pub struct OperationElement {
    label: String,
    matrix: Matrix,
    exact: Option<ExactForm>,
    gram: Option<RationalMatrix>,
    rotation: Option<Angle>,
    completion: bool,
}

impl OperationElement {
    /// An element known only numerically.
    pub fn new(label: impl Into<String>, matrix: Matrix) -> Self {
        assert!(matrix.is_square(), "operation elements are square");
        OperationElement { label: label.into(), matrix, exact: None, gram: None, rotation: None, completion: false }
    }

    /// `√scale · m`, kept exactly.
    pub fn exact(label: impl Into<String>, scale: BigRational, m: RationalMatrix) -> Self {
        assert_eq!(m.rows(), m.cols(), "operation elements are square");
        let root = Scalar::from_ratio(&scale).sqrt();
        let matrix = m.to_scalar().scale(&root);
        let gram = m.gram().scale(&scale);
        OperationElement {
            label: label.into(),
            matrix,
            exact: Some(ExactForm { scale, matrix: m }),
            gram: Some(gram),
            rotation: None,
            completion: false,
        }
    }

    /// Integer matrix times √scale.
    pub fn exact_i64(label: impl Into<String>, scale: BigRational, rows: &[&[i64]]) -> Self {
        OperationElement::exact(label, scale, RationalMatrix::from_i64(rows))
    }

    /// Rotation of a qubit by `angle`: [[cos, −sin], [sin, cos]].
    pub fn rotation(label: impl Into<String>, angle: &Angle) -> Self {
        let (c, s) = angle.cos_sin();
        let matrix = Matrix::from_rows(vec![vec![c.clone(), -&s], vec![s, c]]);
        let exact = angle.eighths().filter(|e| e % 2 == 0).map(|e| {
            let rows: &[&[i64]] = match e {
                0 => &[&[1, 0], &[0, 1]],
                2 => &[&[0, -1], &[1, 0]],
                4 => &[&[-1, 0], &[0, -1]],
                _ => &[&[0, 1], &[-1, 0]],
            };
            ExactForm { scale: BigRational::one(), matrix: RationalMatrix::from_i64(rows) }
        });
        OperationElement {
            label: label.into(),
            matrix,
            exact,
            gram: Some(RationalMatrix::identity(2)),
            rotation: Some(angle.clone()),
            completion: false,
        }
    }

    pub(crate) fn completion(label: impl Into<String>, matrix: Matrix, gram: Option<RationalMatrix>) -> Self {
        OperationElement { label: label.into(), matrix, exact: None, gram, rotation: None, completion: true }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn exact_form(&self) -> Option<&ExactForm> {
        self.exact.as_ref()
    }

    /// Exact `E†E`, when known.
    pub fn exact_gram(&self) -> Option<&RationalMatrix> {
        self.gram.as_ref()
    }

    pub fn rotation_angle(&self) -> Option<&Angle> {
        self.rotation.as_ref()
    }

    pub fn is_completion(&self) -> bool {
        self.completion
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Probability of this outcome on a register state.
    pub fn probability(&self, reg: &Register) -> Real {
        if let Some(g) = &self.gram {
            if let Some(lambda) = g.scalar_multiple_of_identity() {
                return Real::Exact(lambda);
            }
            if let Some(d) = reg.exact_direction() {
                let gd = g.mul_vec(&d);
                let num: BigRational = d.iter().zip(&gd).map(|(a, b)| a * b).sum();
                let den: BigRational = d.iter().map(|a| a * a).sum();
                return Real::Exact(num / den);
            }
            if let (Register::Angle(a), 2) = (reg, g.rows()) {
                let (c2, cs, s2) = a.squares();
                let g00 = Real::Exact(g.get(0, 0).clone());
                let g01 = Real::Exact(g.get(0, 1).clone());
                let g11 = Real::Exact(g.get(1, 1).clone());
                return g00 * c2 + Real::int(2) * g01 * cs + g11 * s2;
            }
        }
        let w = self.matrix.mul_vec(&reg.unit_vector());
        Real::Approx(norm_sq(&w))
    }

    /// Normalized post-measurement state; `None` when the branch has weight 0.
    pub fn post_state(&self, reg: &Register) -> Option<Register> {
        if let Some(rot) = &self.rotation {
            if let Some(a) = reg.as_angle() {
                return Some(Register::Angle(&a + rot));
            }
        }
        if let Some(ex) = &self.exact {
            if ex.matrix.scalar_multiple_of_identity().is_some_and(|mu| !mu.is_zero()) {
                return Some(reg.clone());
            }
            if let Some(d) = reg.exact_direction() {
                return Register::exact(ex.matrix.mul_vec(&d));
            }
            if let Some(img) = ex.matrix.rank_one_image() {
                // any state not in the kernel maps onto the image line
                let w = self.matrix.mul_vec(&reg.unit_vector());
                if norm_sq(&w).is_zero() {
                    return None;
                }
                return Register::exact(img);
            }
        }
        Register::float(self.matrix.mul_vec(&reg.unit_vector()))
    }
}
