//! Real-amplitude registers, operation elements and superoperators.

mod angle;
mod element;
mod matrix;
mod register;
mod superoperator;

pub use angle::{Angle, AngleKey, AngleRepr};
pub use element::{ExactForm, OperationElement};
pub use matrix::{symmetric_eigen, Matrix, RationalMatrix};
pub use register::{AmplitudeVector, Register, RegisterKey};
pub use superoperator::{
    apply_element, complete_superoperator, complete_superoperator_with_tolerance, outcome_distribution, rotation,
    rotation_radians, validate_superoperator, Outcome, Superoperator, ValidationReport,
};
