//! Rotation angles of the form k·√2·π + 2π·t with integer k and rational t.

use std::fmt;
use std::ops::{Add, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::real::Real;
use crate::scalar::Scalar;

/// An angle kept symbolically so that repeated rotations never accumulate
/// rounding error. The rational part is measured in full turns.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Angle {
    sqrt2_pi: i64,
    turns: BigRational,
}

/// Hash key of a state vector rotated from |q0⟩: angles that differ by a
/// half turn give the same physical state.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AngleKey {
    sqrt2_pi: i64,
    turns: BigRational,
}

impl Angle {
    pub fn zero() -> Self {
        Angle { sqrt2_pi: 0, turns: BigRational::zero() }
    }

    /// k·√2·π
    pub fn sqrt2_pi(k: i64) -> Self {
        Angle { sqrt2_pi: k, turns: BigRational::zero() }
    }

    /// 2π·t
    pub fn turns(t: BigRational) -> Self {
        Angle { sqrt2_pi: 0, turns: t }.reduced()
    }

    /// 2π·n/d
    pub fn fraction_of_turn(n: i64, d: i64) -> Self {
        Angle::turns(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn new(sqrt2_pi: i64, turns: BigRational) -> Self {
        Angle { sqrt2_pi, turns }.reduced()
    }

    pub fn sqrt2_pi_multiple(&self) -> i64 {
        self.sqrt2_pi
    }

    pub fn turn_part(&self) -> &BigRational {
        &self.turns
    }

    fn reduced(mut self) -> Self {
        self.turns = frac(&self.turns);
        self
    }

    /// Multiplies the angle by a nonnegative integer, exactly.
    pub fn times(&self, n: i64) -> Angle {
        Angle {
            sqrt2_pi: self.sqrt2_pi.checked_mul(n).expect("rotation count overflow"),
            turns: &self.turns * BigRational::from_integer(n.into()),
        }
        .reduced()
    }

    pub fn is_zero(&self) -> bool {
        self.sqrt2_pi == 0 && self.turns.is_zero()
    }

    /// When the angle is a multiple of π/4, the multiple mod 8.
    pub fn eighths(&self) -> Option<u8> {
        if self.sqrt2_pi != 0 {
            return None;
        }
        let e = &self.turns * BigRational::from_integer(8.into());
        if e.is_integer() {
            Some(e.to_integer().mod_floor(&BigInt::from(8)).to_u8().expect("residue below 8"))
        } else {
            None
        }
    }

    /// The angle as a fraction of a full turn in [0, 1).
    pub fn turns_value(&self) -> Scalar {
        let t = Scalar::from_ratio(&self.turns);
        if self.sqrt2_pi == 0 {
            return t;
        }
        let half_root2 = Scalar::from_i64(2).sqrt() / Scalar::from_i64(2);
        (Scalar::from_i64(self.sqrt2_pi) * half_root2 + t).fract_positive()
    }

    /// Value in radians, reduced to [0, 2π).
    pub fn radians(&self) -> Scalar {
        self.turns_value() * Scalar::from_i64(2) * Scalar::pi()
    }

    pub fn cos_sin(&self) -> (Scalar, Scalar) {
        if let Some(e) = self.eighths() {
            let h = Scalar::from_i64(2).sqrt() / Scalar::from_i64(2);
            let z = Scalar::zero();
            let o = Scalar::one();
            return match e {
                0 => (o, z),
                1 => (h.clone(), h),
                2 => (z, o),
                3 => (-&h, h),
                4 => (-o, z),
                5 => (-&h, -h),
                6 => (z, -o),
                _ => (h.clone(), -h),
            };
        }
        let r = self.radians();
        (r.cos(), r.sin())
    }

    /// (cos², cos·sin, sin²), exact for multiples of π/4.
    pub fn squares(&self) -> (Real, Real, Real) {
        if let Some(e) = self.eighths() {
            let half = Real::ratio(1, 2);
            return match e {
                0 | 4 => (Real::one(), Real::zero(), Real::zero()),
                2 | 6 => (Real::zero(), Real::zero(), Real::one()),
                1 | 5 => (half.clone(), half.clone(), half),
                _ => (half.clone(), -half.clone(), half),
            };
        }
        let (c, s) = self.cos_sin();
        (Real::Approx(&c * &c), Real::Approx(&c * &s), Real::Approx(&s * &s))
    }

    /// Direction of the rotated |q0⟩ when it has rational coordinates,
    /// scaled so the first nonzero entry is 1.
    pub fn exact_direction(&self) -> Option<Vec<BigRational>> {
        let one = BigRational::one;
        let zero = BigRational::zero;
        match self.eighths()? {
            0 | 4 => Some(vec![one(), zero()]),
            2 | 6 => Some(vec![zero(), one()]),
            1 | 5 => Some(vec![one(), one()]),
            _ => Some(vec![one(), -one()]),
        }
    }

    pub fn key(&self) -> AngleKey {
        let half = BigRational::new(1.into(), 2.into());
        let t = &self.turns - (&self.turns / &half).floor() * &half;
        AngleKey { sqrt2_pi: self.sqrt2_pi, turns: t }
    }
}

fn frac(r: &BigRational) -> BigRational {
    r - r.floor()
}

impl Add<&Angle> for &Angle {
    type Output = Angle;
    fn add(self, rhs: &Angle) -> Angle {
        Angle { sqrt2_pi: self.sqrt2_pi + rhs.sqrt2_pi, turns: &self.turns + &rhs.turns }.reduced()
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        &self + &rhs
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle { sqrt2_pi: -self.sqrt2_pi, turns: -self.turns }.reduced()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.sqrt2_pi, self.turns.is_zero()) {
            (0, true) => write!(f, "0"),
            (k, true) => write!(f, "{k}*sqrt(2)*pi"),
            (0, false) => write!(f, "2*pi*{}", self.turns),
            (k, false) => write!(f, "{k}*sqrt(2)*pi + 2*pi*{}", self.turns),
        }
    }
}

/// Serialized form: `{"sqrt2_pi": k, "turns": "p/q"}`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct AngleRepr {
    #[serde(default)]
    pub sqrt2_pi: i64,
    #[serde(default = "zero_str")]
    pub turns: String,
}

fn zero_str() -> String {
    "0".into()
}

impl From<&Angle> for AngleRepr {
    fn from(a: &Angle) -> Self {
        AngleRepr { sqrt2_pi: a.sqrt2_pi, turns: a.turns.to_string() }
    }
}

impl TryFrom<&AngleRepr> for Angle {
    type Error = crate::Error;
    fn try_from(r: &AngleRepr) -> crate::Result<Angle> {
        let turns: BigRational = r
            .turns
            .trim()
            .parse()
            .map_err(|_| crate::Error::structural(format!("bad rational `{}` in angle", r.turns)))?;
        Ok(Angle::new(r.sqrt2_pi, turns))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_rotations_cancel() {
        let a = Angle::sqrt2_pi(5) + Angle::sqrt2_pi(-5);
        assert!(a.is_zero());
        assert_eq!(a.squares().2, Real::zero());
    }

    #[test]
    fn eighth_turn_is_exact() {
        let a = Angle::fraction_of_turn(1, 8);
        let (c2, cs, s2) = a.squares();
        assert_eq!(c2, Real::ratio(1, 2));
        assert_eq!(cs, Real::ratio(1, 2));
        assert_eq!(s2, Real::ratio(1, 2));
        assert!(s2.is_exact());
    }

    #[test]
    fn sqrt2_pi_sine() {
        let (_, s) = Angle::sqrt2_pi(1).cos_sin();
        assert!((s.to_f64() - (2f64.sqrt() * std::f64::consts::PI).sin()).abs() < 1e-14);
    }

    #[test]
    fn half_turn_keys_coincide() {
        let a = Angle::fraction_of_turn(1, 16);
        let b = Angle::fraction_of_turn(9, 16);
        assert_eq!(a.key(), b.key());
        assert_ne!(a, b);
    }

    #[test]
    fn turns_reduce_mod_one() {
        assert_eq!(Angle::fraction_of_turn(9, 8), Angle::fraction_of_turn(1, 8));
        assert_eq!(Angle::fraction_of_turn(-1, 8), Angle::fraction_of_turn(7, 8));
    }
}
