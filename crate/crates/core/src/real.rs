//! Probabilities that stay exact until an irrational quantity enters.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::scalar::{format_decimal, rational_sqrt, Scalar};

/// A real number that is either an exact rational or a high-precision float.
///
/// Arithmetic between two exact values stays exact; anything touching an
/// approximate value is approximate.
#[derive(Clone)]
pub enum Real {
    Exact(BigRational),
    Approx(Scalar),
}

impl Real {
    pub fn zero() -> Self {
        Real::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Real::Exact(BigRational::one())
    }

    pub fn int(v: i64) -> Self {
        Real::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Real::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Real::Exact(r) => Some(r),
            Real::Approx(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_zero(),
            Real::Approx(s) => s.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_one(),
            Real::Approx(s) => *s == Scalar::one(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_negative(),
            Real::Approx(s) => s.is_negative(),
        }
    }

    pub fn to_scalar(&self) -> Scalar {
        match self {
            Real::Exact(r) => Scalar::from_ratio(r),
            Real::Approx(s) => s.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => r.to_f64().unwrap_or_else(|| Scalar::from_ratio(r).to_f64()),
            Real::Approx(s) => s.to_f64(),
        }
    }

    /// Square root, exact when the argument is a rational square.
    pub fn sqrt(&self) -> Real {
        match self {
            Real::Exact(r) => match rational_sqrt(r) {
                Some(root) => Real::Exact(root),
                None => Real::Approx(Scalar::from_ratio(r).sqrt()),
            },
            Real::Approx(s) => Real::Approx(s.sqrt()),
        }
    }

    pub fn abs(&self) -> Real {
        match self {
            Real::Exact(r) => Real::Exact(r.abs()),
            Real::Approx(s) => Real::Approx(s.abs()),
        }
    }

    pub fn recip(&self) -> Real {
        Real::one() / self
    }

    /// `p/q` for exact values, a decimal otherwise.
    pub fn to_string_exact(&self) -> String {
        match self {
            Real::Exact(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Real::Approx(s) => s.to_decimal(30),
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        match self {
            Real::Exact(r) => format_decimal(r, digits),
            Real::Approx(s) => s.to_decimal(digits),
        }
    }

    pub fn min(self, other: Real) -> Real {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_exact())
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_exact())
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_decimal(30))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_scalar().partial_cmp(&other.to_scalar()),
        }
    }
}

impl From<BigRational> for Real {
    fn from(r: BigRational) -> Self {
        Real::Exact(r)
    }
}

impl From<Scalar> for Real {
    fn from(s: Scalar) -> Self {
        Real::Approx(s)
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                match (self, rhs) {
                    (Real::Exact(a), Real::Exact(b)) => Real::Exact(a.$method(b)),
                    _ => Real::Approx(self.to_scalar().$method(rhs.to_scalar())),
                }
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);

impl Div<&Real> for &Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        match (self, rhs) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a / b),
            _ => Real::Approx(self.to_scalar() / rhs.to_scalar()),
        }
    }
}

impl Div<Real> for Real {
    type Output = Real;
    fn div(self, rhs: Real) -> Real {
        &self / &rhs
    }
}

impl Div<&Real> for Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        &self / rhs
    }
}

impl Div<Real> for &Real {
    type Output = Real;
    fn div(self, rhs: Real) -> Real {
        self / &rhs
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        match self {
            Real::Exact(r) => Real::Exact(-r),
            Real::Approx(s) => Real::Approx(-s),
        }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        -(self.clone())
    }
}

impl std::iter::Sum for Real {
    fn sum<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_stays_exact() {
        let x = Real::ratio(1, 3) + Real::ratio(1, 6);
        assert_eq!(x.to_string_exact(), "1/2");
        assert!(x.is_exact());
    }

    #[test]
    fn mixing_promotes() {
        let x = Real::ratio(1, 2) * Real::int(2).sqrt();
        assert!(!x.is_exact());
        assert!((x.to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn perfect_square_roots_are_exact() {
        assert_eq!(Real::ratio(4, 9).sqrt().to_string_exact(), "2/3");
    }

    #[test]
    fn ordering_across_kinds() {
        assert!(Real::ratio(1, 3) < Real::Approx(Scalar::from_f64(0.34)));
        assert_eq!(Real::ratio(1, 2), Real::Approx(Scalar::from_f64(0.5)));
    }
}
