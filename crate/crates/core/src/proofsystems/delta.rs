use num_bigint::BigInt;
use num_rational::BigRational;

/// The verifier's amplitude ratio after each processed membership bit:
/// `δ ↦ 4δ` on 0 and `δ ↦ 4δ − 1` on 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTrace {
    pub values: Vec<BigRational>,
}

pub fn delta_trace(gamma: &BigRational, bits: &[bool]) -> DeltaTrace {
    let four = BigRational::from_integer(BigInt::from(4));
    let one = BigRational::from_integer(BigInt::from(1));
    let mut values = Vec::with_capacity(bits.len() + 1);
    values.push(gamma.clone());
    for &b in bits {
        let d = values.last().expect("seeded") * &four;
        values.push(if b { d - &one } else { d });
    }
    DeltaTrace { values }
}

impl DeltaTrace {
    /// Whether `δ` lies in [0, 1/3], the range honest bits preserve.
    pub fn honest(d: &BigRational) -> bool {
        *d >= BigRational::from_integer(0.into()) && *d <= BigRational::new(1.into(), 3.into())
    }

    /// Whether `δ` lies outside (−2/3, 1), where a lie sends it for good.
    pub fn poisoned(d: &BigRational) -> bool {
        *d <= BigRational::new((-2).into(), 3.into()) || *d >= BigRational::from_integer(1.into())
    }

    pub fn last(&self) -> &BigRational {
        self.values.last().expect("traces are nonempty")
    }
}
