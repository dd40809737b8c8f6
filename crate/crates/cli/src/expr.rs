//! Matrix-entry expressions: rationals and decimals, `sqrt(..)`, `pi`,
//! `+ - * /` and parentheses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use qcfa::scalar::{rational_sqrt, Scalar};

/// Value of an expression, kept exact while it stays rational.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Approx(Scalar),
}

impl Value {
    pub fn to_scalar(&self) -> Scalar {
        match self {
            Value::Exact(r) => Scalar::from_ratio(r),
            Value::Approx(s) => s.clone(),
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Approx(_) => None,
        }
    }
}

#[derive(Debug, PartialEq)]
pub struct ExprError {
    /// 1-based character column within the expression.
    pub column: usize,
    pub message: String,
}

type Parsed = Result<Value, ExprError>;

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

pub fn evaluate(src: &str) -> Parsed {
    let mut p = Parser { chars: src.chars().collect(), pos: 0, src };
    let v = p.sum()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected `{}`", p.chars[p.pos])));
    }
    Ok(v)
}

fn binary(a: Value, b: Value, op: char) -> Option<Value> {
    Some(match (a, b) {
        (Value::Exact(x), Value::Exact(y)) => Value::Exact(match op {
            '+' => x + y,
            '-' => x - y,
            '*' => x * y,
            _ => {
                if y.is_zero() {
                    return None;
                }
                x / y
            }
        }),
        (x, y) => {
            let (x, y) = (x.to_scalar(), y.to_scalar());
            Value::Approx(match op {
                '+' => x + y,
                '-' => x - y,
                '*' => x * y,
                _ => {
                    if y.is_zero() {
                        return None;
                    }
                    x / y
                }
            })
        }
    })
}

impl Parser<'_> {
    fn error(&self, message: String) -> ExprError {
        ExprError { column: self.pos + 1, message: format!("{message} in `{}`", self.src) }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn sum(&mut self) -> Parsed {
        let mut v = self.product()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            v = binary(v, rhs, op).expect("no division");
        }
        Ok(v)
    }

    fn product(&mut self) -> Parsed {
        let mut v = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.unary()?;
            v = binary(v, rhs, op).ok_or_else(|| ExprError { column: at + 1, message: format!("division by zero in `{}`", self.src) })?;
        }
        Ok(v)
    }

    fn unary(&mut self) -> Parsed {
        if self.peek() == Some('-') {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(binary(Value::Exact(BigRational::zero()), v, '-').expect("no division"));
        }
        self.atom()
    }

    fn atom(&mut self) -> Parsed {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_alphanumeric()) {
                    self.pos += 1;
                }
                let word: String = self.chars[start..self.pos].iter().collect();
                match word.as_str() {
                    "pi" => Ok(Value::Approx(Scalar::pi())),
                    "sqrt" => {
                        self.expect('(')?;
                        let at = self.pos;
                        let v = self.sum()?;
                        self.expect(')')?;
                        sqrt(v).ok_or_else(|| ExprError { column: at + 1, message: format!("square root of a negative value in `{}`", self.src) })
                    }
                    _ => {
                        self.pos = start;
                        Err(self.error(format!("unknown name `{word}`")))
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end".into())),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn number(&mut self) -> Parsed {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit() || *c == '.') {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        let (int, frac) = text.split_once('.').unwrap_or((&text, ""));
        if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
            self.pos = start;
            return Err(self.error(format!("bad number `{text}`")));
        }
        let digits: BigInt = format!("{int}{frac}").parse().expect("digits");
        Ok(Value::Exact(BigRational::new(digits, BigInt::from(10).pow(frac.len() as u32))))
    }
}

fn sqrt(v: Value) -> Option<Value> {
    match v {
        Value::Exact(r) if r.is_negative() => None,
        Value::Exact(r) => Some(match rational_sqrt(&r) {
            Some(root) => Value::Exact(root),
            None => Value::Approx(Scalar::from_ratio(&r).sqrt()),
        }),
        Value::Approx(s) if s.is_negative() => None,
        Value::Approx(s) => Some(Value::Approx(s.sqrt())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcfa::scalar::ratio;

    #[test]
    fn rationals_stay_exact() {
        assert_eq!(evaluate("1/16").unwrap(), Value::Exact(ratio(1, 16)));
        assert_eq!(evaluate("-(3 - 1) * 2/8").unwrap(), Value::Exact(ratio(-1, 2)));
        assert_eq!(evaluate("0.25").unwrap(), Value::Exact(ratio(1, 4)));
        assert_eq!(evaluate("sqrt(9/4)").unwrap(), Value::Exact(ratio(3, 2)));
    }

    #[test]
    fn irrationals() {
        let v = evaluate("sqrt(15)/4").unwrap().to_scalar().to_f64();
        assert!((v - 15f64.sqrt() / 4.0).abs() < 1e-15);
        let v = evaluate("sqrt(2)*pi").unwrap().to_scalar().to_f64();
        assert!((v - 2f64.sqrt() * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn errors_carry_columns() {
        assert_eq!(evaluate("1/0").unwrap_err().column, 3);
        assert_eq!(evaluate("2 * foo").unwrap_err().column, 5);
        assert_eq!(evaluate("sqrt(2").unwrap_err().column, 7);
        assert!(evaluate("sqrt(-1)").is_err());
    }
}
