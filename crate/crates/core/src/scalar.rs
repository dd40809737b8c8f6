//! High-precision real scalars backed by `astro-float`.
//!
//! Every arithmetic operation runs at the precision of the current thread's
//! context (see [`set_precision`]). Engines install a context on entry so a
//! single evaluation never mixes precisions.

use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Default binary precision (bits of significand).
pub const DEFAULT_PRECISION: usize = 192;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static PRECISION: Cell<usize> = const { Cell::new(DEFAULT_PRECISION) };
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

/// Precision of the current thread's context, in bits.
pub fn precision() -> usize {
    PRECISION.with(|p| p.get())
}

/// Restores the previous precision when dropped.
#[must_use = "the precision is reset when the guard is dropped"]
#[derive(Debug)]
pub struct PrecisionGuard {
    previous: usize,
}

impl Drop for PrecisionGuard {
    fn drop(&mut self) {
        PRECISION.with(|p| p.set(self.previous));
    }
}

/// Sets the working precision for the current thread until the guard drops.
pub fn set_precision(bits: usize) -> PrecisionGuard {
    assert!(bits >= 64, "precision below 64 bits is not supported");
    let previous = PRECISION.with(|p| p.replace(bits));
    PrecisionGuard { previous }
}

/// Runs `f` with the given working precision.
pub fn with_precision<R>(bits: usize, f: impl FnOnce() -> R) -> R {
    let _guard = set_precision(bits);
    f()
}

/// Default tolerance for a precision of `bits`: 2^(-bits/2).
pub fn default_tolerance_for(bits: usize) -> Scalar {
    Scalar::pow2(-((bits / 2) as i32))
}

/// Default tolerance for the current context.
pub fn default_tolerance() -> Scalar {
    default_tolerance_for(precision())
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// A real number at the context precision.
#[derive(Clone)]
pub struct Scalar(BigFloat);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigFloat::from_u8(0, precision()))
    }

    pub fn one() -> Self {
        Scalar(BigFloat::from_u8(1, precision()))
    }

    pub fn from_i64(v: i64) -> Self {
        Scalar(BigFloat::from_i64(v, precision()))
    }

    pub fn from_f64(v: f64) -> Self {
        Scalar(BigFloat::from_f64(v, precision()))
    }

    /// 2^e, exact.
    pub fn pow2(e: i32) -> Self {
        let mut one = BigFloat::from_u8(1, precision());
        // 1 = 0.1b * 2^1
        one.set_exponent(1 + e);
        Scalar(one)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        let p = precision() + 64;
        let (sign, digits) = v.to_u64_digits();
        let base = BigFloat::from_u64(u64::MAX, p).add(&BigFloat::from_u8(1, p), p, RM);
        let mut acc = BigFloat::from_u8(0, p);
        for d in digits.iter().rev() {
            acc = acc.mul(&base, p, RM).add(&BigFloat::from_u64(*d, p), p, RM);
        }
        if sign == BigSign::Minus {
            acc = acc.neg();
        }
        let mut out = acc;
        let _ = out.set_precision(precision(), RM);
        Scalar(out)
    }

    pub fn from_ratio(v: &BigRational) -> Self {
        let p = precision();
        let n = Scalar::from_bigint(v.numer());
        let d = Scalar::from_bigint(v.denom());
        Scalar(n.0.div(&d.0, p, RM))
    }

    pub fn pi() -> Self {
        let p = precision();
        Scalar(with_consts(|cc| cc.pi(p, RM)))
    }

    pub fn sqrt(&self) -> Self {
        if self.0.is_zero() {
            return Scalar::zero();
        }
        Scalar(self.0.sqrt(precision(), RM))
    }

    pub fn sin(&self) -> Self {
        let p = precision();
        Scalar(with_consts(|cc| self.0.sin(p, RM, cc)))
    }

    pub fn cos(&self) -> Self {
        let p = precision();
        Scalar(with_consts(|cc| self.0.cos(p, RM, cc)))
    }

    pub fn ln(&self) -> Self {
        let p = precision();
        Scalar(with_consts(|cc| self.0.ln(p, RM, cc)))
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    /// Fractional part in [0, 1).
    pub fn fract_positive(&self) -> Self {
        let f = Scalar(self.0.fract());
        if f.is_negative() {
            &f + &Scalar::one()
        } else {
            f
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.0.is_zero() && self.0.is_negative()
    }

    pub fn max(&self, other: &Scalar) -> Scalar {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn powi(&self, n: usize) -> Scalar {
        Scalar(self.0.powi(n, precision(), RM))
    }

    /// Nearest `f64` (truncated toward zero in the last bit).
    pub fn to_f64(&self) -> f64 {
        match self.0.as_raw_parts() {
            None => f64::NAN,
            Some((words, _, sign, exp, _)) => {
                if self.0.is_zero() {
                    return 0.0;
                }
                let top = *words.last().expect("nonempty mantissa") as f64;
                // value = 0.top... * 2^exp, top holds the 64 leading bits
                let mut v = top;
                let mut e = exp as i64 - 64;
                while e > 0 {
                    let s = e.min(1000);
                    v *= 2f64.powi(s as i32);
                    e -= s;
                }
                while e < 0 {
                    let s = (-e).min(1000);
                    v /= 2f64.powi(s as i32);
                    e += s;
                }
                if sign == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        format_decimal(&self.to_ratio(), digits)
    }

    /// Hashable identity of the exact bit pattern.
    pub fn bits_key(&self) -> ScalarBits {
        if self.0.is_zero() {
            return ScalarBits { negative: false, exponent: 0, words: Vec::new() };
        }
        let (words, _, sign, exp, _) = self.0.as_raw_parts().expect("finite scalar");
        ScalarBits { negative: sign == Sign::Neg, exponent: exp, words: words.to_vec() }
    }

    /// Exact rational value of this binary float.
    pub fn to_ratio(&self) -> BigRational {
        if self.0.is_zero() {
            return BigRational::zero();
        }
        let (words, _, sign, exp, _) = self.0.as_raw_parts().expect("finite scalar");
        let mut m = BigInt::zero();
        for w in words.iter().rev() {
            m = (m << 64) + BigInt::from(*w);
        }
        let shift = exp as i64 - 64 * words.len() as i64;
        let mut r = if shift >= 0 {
            BigRational::from_integer(m << shift as usize)
        } else {
            BigRational::new(m, BigInt::from(1u8) << (-shift) as usize)
        };
        if sign == Sign::Neg {
            r = -r;
        }
        r
    }
}

/// Exact bit pattern of a [`Scalar`], used as a hash key.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarBits {
    negative: bool,
    exponent: i32,
    words: Vec<u64>,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(24))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(f.precision().unwrap_or(20)))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bits_key().hash(state);
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0.$op(&rhs.0, precision(), RM))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(self.0.neg())
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(self.0.clone().neg())
    }
}

impl From<&BigRational> for Scalar {
    fn from(v: &BigRational) -> Self {
        Scalar::from_ratio(v)
    }
}

/// Renders `r` with `digits` significant digits, trailing zeros removed.
/// Magnitudes outside [1e-12, 1e15) use an `e` exponent.
pub fn format_decimal(r: &BigRational, digits: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1);
    let neg = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10u8);
    // e = floor(log10 a)
    let mut e: i64 = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let pow = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(ten.pow(k as u32))
        } else {
            BigRational::new(BigInt::from(1u8), ten.pow((-k) as u32))
        }
    };
    while a < pow(e) {
        e -= 1;
    }
    while a >= pow(e + 1) {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let scaled = &a * pow(shift);
    let mut m = scaled.round().to_integer();
    if m >= ten.pow(digits as u32) {
        m /= &ten;
        e += 1;
    }
    let mut ds = m.to_string();
    while ds.len() < digits {
        ds.push('0');
    }
    let sign = if neg { "-" } else { "" };
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if !(-12..15).contains(&e) {
        let body = trim(format!("{}.{}", &ds[..1], &ds[1..]));
        return format!("{sign}{body}e{e}");
    }
    let body = if e >= 0 {
        let int_len = (e + 1) as usize;
        if ds.len() <= int_len {
            format!("{}{}", ds, "0".repeat(int_len - ds.len()))
        } else {
            trim(format!("{}.{}", &ds[..int_len], &ds[int_len..]))
        }
    } else {
        trim(format!("0.{}{}", "0".repeat((-e - 1) as usize), ds))
    };
    format!("{sign}{body}")
}

/// Helper: rational from small integers.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// True when `v` is the square of a rational; returns the root.
pub fn rational_sqrt(v: &BigRational) -> Option<BigRational> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    if &(&n * &n) == v.numer() && &(&d * &d) == v.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_pi_sine_matches_double() {
        let s = (Scalar::from_i64(2).sqrt() * Scalar::pi()).sin();
        assert!((s.to_f64() - (2f64.sqrt() * std::f64::consts::PI).sin()).abs() < 1e-12);
    }

    #[test]
    fn rational_conversion_round_trips_dyadics() {
        let r = ratio(-3, 8);
        let s = Scalar::from_ratio(&r);
        assert_eq!(s.to_ratio(), r);
        assert_eq!(s.to_f64(), -0.375);
    }

    #[test]
    fn huge_integers_convert() {
        let big = BigInt::from(8u8).pow(40);
        let s = Scalar::from_bigint(&big);
        assert_eq!(s.to_ratio(), BigRational::from_integer(big));
    }

    #[test]
    fn precision_guard_restores() {
        assert_eq!(precision(), DEFAULT_PRECISION);
        {
            let _g = set_precision(256);
            assert_eq!(precision(), 256);
        }
        assert_eq!(precision(), DEFAULT_PRECISION);
    }

    #[test]
    fn pow2_and_tolerance() {
        assert_eq!(Scalar::pow2(-3).to_f64(), 0.125);
        assert_eq!(default_tolerance_for(192).to_ratio(), BigRational::new(1.into(), BigInt::from(1u8) << 96));
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(format_decimal(&ratio(-1606, 100), 6), "-16.06");
        assert_eq!(format_decimal(&ratio(1, 3), 5), "0.33333");
        assert_eq!(format_decimal(&ratio(1, 1), 5), "1");
        assert_eq!(format_decimal(&ratio(1, 1 << 40), 3), "9.09e-13");
        assert_eq!(format_decimal(&ratio(999_999, 1_000_000), 3), "1");
        assert_eq!(Scalar::from_f64(0.125).to_decimal(10), "0.125");
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(rational_sqrt(&ratio(9, 16)), Some(ratio(3, 4)));
        assert_eq!(rational_sqrt(&ratio(2, 1)), None);
    }
}
