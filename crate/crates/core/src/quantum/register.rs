//! Register states as seen by the engines, and the public amplitude vector.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::angle::{Angle, AngleKey};
use crate::scalar::{Scalar, ScalarBits};
use crate::{Error, Result};

/// A real amplitude vector. When `normalized` is false the squared norm is
/// the weight of the branch that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeVector {
    pub entries: Vec<Scalar>,
    pub normalized: bool,
}

impl AmplitudeVector {
    /// Normalizes `entries` and sets the flag. Fails on the zero vector.
    pub fn normalized(entries: Vec<Scalar>) -> Result<Self> {
        let n = norm_sq(&entries);
        if n.is_zero() {
            return Err(Error::contract("cannot normalize the zero vector"));
        }
        let inv = Scalar::one() / n.sqrt();
        Ok(AmplitudeVector { entries: entries.iter().map(|x| x * &inv).collect(), normalized: true })
    }

    pub fn from_f64(entries: &[f64]) -> Result<Self> {
        AmplitudeVector::normalized(entries.iter().map(|&x| Scalar::from_f64(x)).collect())
    }

    pub fn from_ratios(entries: &[BigRational]) -> Result<Self> {
        AmplitudeVector::normalized(entries.iter().map(Scalar::from_ratio).collect())
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut entries = vec![Scalar::zero(); dim];
        entries[i] = Scalar::one();
        AmplitudeVector { entries, normalized: true }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn norm_sq(&self) -> Scalar {
        norm_sq(&self.entries)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(Scalar::to_f64).collect()
    }
}

pub(crate) fn norm_sq(v: &[Scalar]) -> Scalar {
    v.iter().fold(Scalar::zero(), |acc, x| acc + x * x)
}

/// The register of a running configuration, up to normalization and sign.
#[derive(Clone, Debug, PartialEq)]
pub enum Register {
    /// Rational direction; first nonzero entry is 1.
    Exact(Vec<BigRational>),
    /// |q0⟩ rotated by an angle (two-dimensional registers only).
    Angle(Angle),
    /// Unit vector; first nonzero entry positive.
    Float(Vec<Scalar>),
}

/// Hashable identity of a register state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RegisterKey {
    Exact(Vec<BigRational>),
    Angle(AngleKey),
    Float(Vec<ScalarBits>),
}

impl Register {
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![BigRational::zero(); dim];
        v[i] = BigRational::one();
        Register::Exact(v)
    }

    /// Canonical exact direction; `None` for the zero vector.
    pub fn exact(v: Vec<BigRational>) -> Option<Self> {
        let p = v.iter().position(|x| !x.is_zero())?;
        let lead = v[p].clone();
        if lead.is_one() {
            return Some(Register::Exact(v));
        }
        Some(Register::Exact(v.into_iter().map(|x| x / &lead).collect()))
    }

    /// Canonical unit float vector; `None` for the zero vector.
    pub fn float(v: Vec<Scalar>) -> Option<Self> {
        let n = norm_sq(&v);
        if n.is_zero() {
            return None;
        }
        let p = v.iter().position(|x| !x.is_zero())?;
        let mut inv = Scalar::one() / n.sqrt();
        if v[p].is_negative() {
            inv = -inv;
        }
        Some(Register::Float(v.iter().map(|x| x * &inv).collect()))
    }

    pub fn dim(&self) -> usize {
        match self {
            Register::Exact(v) => v.len(),
            Register::Angle(_) => 2,
            Register::Float(v) => v.len(),
        }
    }

    /// Rational direction, if the state has one.
    pub fn exact_direction(&self) -> Option<Vec<BigRational>> {
        match self {
            Register::Exact(v) => Some(v.clone()),
            Register::Angle(a) => a.exact_direction(),
            Register::Float(_) => None,
        }
    }

    /// The state as a unit vector.
    pub fn unit_vector(&self) -> Vec<Scalar> {
        match self {
            Register::Exact(v) => {
                let s: Vec<Scalar> = v.iter().map(Scalar::from_ratio).collect();
                let inv = Scalar::one() / norm_sq(&s).sqrt();
                s.iter().map(|x| x * &inv).collect()
            }
            Register::Angle(a) => {
                let (c, s) = a.cos_sin();
                vec![c, s]
            }
            Register::Float(v) => v.clone(),
        }
    }

    pub fn to_amplitudes(&self) -> AmplitudeVector {
        AmplitudeVector { entries: self.unit_vector(), normalized: true }
    }

    /// The register rotated so that it equals |q0⟩ rotated by the result.
    pub fn as_angle(&self) -> Option<Angle> {
        match self {
            Register::Angle(a) => Some(a.clone()),
            Register::Exact(v) if v.len() == 2 => {
                let one = BigRational::one();
                let zero = BigRational::zero();
                if v[0] == one && v[1] == zero {
                    Some(Angle::zero())
                } else if v[0] == zero && v[1] == one {
                    Some(Angle::fraction_of_turn(1, 4))
                } else if v[0] == one && v[1] == one {
                    Some(Angle::fraction_of_turn(1, 8))
                } else if v[0] == one && v[1] == -one.clone() {
                    Some(Angle::fraction_of_turn(7, 8))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn key(&self) -> RegisterKey {
        match self {
            Register::Exact(v) => RegisterKey::Exact(v.clone()),
            Register::Angle(a) => match a.exact_direction() {
                Some(d) => RegisterKey::Exact(d),
                None => RegisterKey::Angle(a.key()),
            },
            Register::Float(v) => RegisterKey::Float(v.iter().map(Scalar::bits_key).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn exact_directions_are_canonical() {
        let r = Register::exact(vec![ratio(-2, 1), ratio(4, 1)]).unwrap();
        assert_eq!(r, Register::Exact(vec![ratio(1, 1), ratio(-2, 1)]));
        assert!(Register::exact(vec![BigRational::zero(); 3]).is_none());
    }

    #[test]
    fn float_sign_is_canonical() {
        let a = Register::float(vec![Scalar::from_f64(-0.6), Scalar::from_f64(0.8)]).unwrap();
        let b = Register::float(vec![Scalar::from_f64(0.6), Scalar::from_f64(-0.8)]).unwrap();
        assert_eq!(a.key(), b.key());
    }

    #[test]
    fn eighth_angles_share_keys_with_exact() {
        let a = Register::Angle(Angle::fraction_of_turn(5, 8));
        let e = Register::exact(vec![ratio(3, 1), ratio(3, 1)]).unwrap();
        assert_eq!(a.key(), e.key());
    }
}
