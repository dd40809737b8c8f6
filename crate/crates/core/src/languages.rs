//! Language oracles, lexicographic enumeration, amplitude encodings and the
//! derived languages recognized by the constructions.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::quantum::Angle;
use crate::{Error, Result};

/// Input alphabet of an oracle language.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    #[serde(rename = "a")]
    Unary,
    #[serde(rename = "01")]
    Binary,
}

impl Alphabet {
    pub fn symbols(self) -> &'static [char] {
        match self {
            Alphabet::Unary => &['a'],
            Alphabet::Binary => &['0', '1'],
        }
    }
}

/// The `i`-th string (1-based) in length-then-lexicographic order.
pub fn lex_string(alphabet: Alphabet, i: u64) -> String {
    assert!(i >= 1, "lexicographic indices start at 1");
    match alphabet {
        Alphabet::Unary => "a".repeat((i - 1) as usize),
        Alphabet::Binary => format!("{i:b}")[1..].to_string(),
    }
}

/// Inverse of [`lex_string`]; `None` for strings outside the alphabet or
/// whose index does not fit in 64 bits.
pub fn lex_index(alphabet: Alphabet, s: &str) -> Option<u64> {
    match alphabet {
        Alphabet::Unary => s.chars().all(|c| c == 'a').then(|| s.len() as u64 + 1),
        Alphabet::Binary => {
            if s.len() > 62 || !s.chars().all(|c| c == '0' || c == '1') {
                return None;
            }
            u64::from_str_radix(&format!("1{s}"), 2).ok()
        }
    }
}

/// Membership of the first `depth` strings of Σ*, as an explicit table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageOracle {
    alphabet: Alphabet,
    #[serde(with = "bit_list")]
    bits: Vec<bool>,
}

mod bit_list {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bits: &[bool], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(bits.iter().map(|&b| b as u8))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<bool>, D::Error> {
        let raw = Vec::<u8>::deserialize(d)?;
        raw.into_iter()
            .map(|b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(serde::de::Error::custom(format!("membership bit must be 0 or 1, got {other}"))),
            })
            .collect()
    }
}

impl LanguageOracle {
    /// `bits[i-1]` is the membership of Σ*(i).
    pub fn new(alphabet: Alphabet, bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::contract("oracle depth must be at least 1"));
        }
        Ok(LanguageOracle { alphabet, bits })
    }

    pub fn full(alphabet: Alphabet, depth: usize) -> Self {
        LanguageOracle::new(alphabet, vec![true; depth]).expect("positive depth")
    }

    pub fn empty(alphabet: Alphabet, depth: usize) -> Self {
        LanguageOracle::new(alphabet, vec![false; depth]).expect("positive depth")
    }

    pub fn from_fn(alphabet: Alphabet, depth: usize, f: impl Fn(&str) -> bool) -> Self {
        let bits = (1..=depth as u64).map(|i| f(&lex_string(alphabet, i))).collect();
        LanguageOracle::new(alphabet, bits).expect("positive depth")
    }

    /// Uniformly random membership table from a seed.
    pub fn random(alphabet: Alphabet, depth: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits = (0..depth).map(|_| rng.gen::<bool>()).collect();
        LanguageOracle::new(alphabet, bits).expect("positive depth")
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Membership of Σ*(i).
    pub fn member_at(&self, i: usize) -> Result<bool> {
        if i == 0 || i > self.bits.len() {
            return Err(Error::OutOfRange { index: i, depth: self.bits.len() });
        }
        Ok(self.bits[i - 1])
    }

    pub fn member(&self, s: &str) -> Result<bool> {
        let i = lex_index(self.alphabet, s)
            .ok_or_else(|| Error::contract(format!("`{s}` is not a string over the oracle alphabet")))?;
        let i = usize::try_from(i).map_err(|_| Error::OutOfRange { index: usize::MAX, depth: self.bits.len() })?;
        self.member_at(i)
    }

    /// A copy with membership of Σ*(i) toggled.
    pub fn toggled(&self, i: usize) -> Result<Self> {
        self.member_at(i)?;
        let mut bits = self.bits.clone();
        bits[i - 1] = !bits[i - 1];
        Ok(LanguageOracle { alphabet: self.alphabet, bits })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("oracle serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let o: LanguageOracle = serde_json::from_str(s)?;
        LanguageOracle::new(o.alphabet, o.bits)
    }
}

/// Set of natural numbers `0..depth` given as a table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaturalSet {
    #[serde(with = "bit_list")]
    bits: Vec<bool>,
}

impl NaturalSet {
    pub fn new(bits: Vec<bool>) -> Self {
        NaturalSet { bits }
    }

    pub fn from_members(members: &[usize], depth: usize) -> Self {
        let mut bits = vec![false; depth];
        for &m in members {
            bits[m] = true;
        }
        NaturalSet { bits }
    }

    pub fn depth(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, n: usize) -> Result<bool> {
        self.bits.get(n).copied().ok_or(Error::OutOfRange { index: n, depth: self.bits.len() })
    }

    /// Encoding signs `F(j) = [j ∈ set]` for `j = 1..depth-1`, the digits a
    /// counter machine reading `a^(8^j)` needs.
    pub fn positive_part(&self) -> Vec<bool> {
        self.bits.iter().skip(1).copied().collect()
    }
}

/// `2π · numerator / 8^(depth+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedAngle {
    pub numerator: BigInt,
    pub depth: usize,
}

impl EncodedAngle {
    /// Digits `F(i) = ±1` given as membership bits, `i = 1..`.
    pub fn from_bits(bits: &[bool]) -> Self {
        let m = bits.len();
        let eight = BigInt::from(8);
        let mut num = BigInt::zero();
        for &b in bits {
            num = num * &eight + if b { BigInt::one() } else { -BigInt::one() };
        }
        EncodedAngle { numerator: num, depth: m }
    }

    pub fn denominator(&self) -> BigInt {
        BigInt::from(8).pow(self.depth as u32 + 1)
    }

    /// The angle as a fraction of a full turn, unreduced.
    pub fn turns(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), self.denominator())
    }

    pub fn angle(&self) -> Angle {
        Angle::turns(self.turns())
    }

    /// Angle after `8^j` rotations, reduced exactly into [-1/2, 1/2) turns.
    pub fn power_rotation_turns(&self, j: u32) -> BigRational {
        let t = self.turns() * BigRational::from_integer(BigInt::from(8).pow(j));
        let half = BigRational::new(1.into(), 2.into());
        let shifted = &t + &half;
        shifted.clone() - shifted.floor() - half
    }
}

/// θ_L for an oracle: 2π Σ F_L(i)/8^(i+1).
pub fn theta_of(oracle: &LanguageOracle) -> EncodedAngle {
    EncodedAngle::from_bits(oracle.bits())
}

/// `numerator / 4^depth`, a value in [0, 1/3].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedBias {
    pub numerator: BigInt,
    pub depth: usize,
}

impl EncodedBias {
    pub fn value(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), BigInt::from(4).pow(self.depth as u32))
    }

    pub fn from_value(v: BigRational) -> Result<Self> {
        let zero = BigRational::zero();
        let third = BigRational::new(1.into(), 3.into());
        if v < zero || v > third {
            return Err(Error::contract(format!("bias {v} is outside [0, 1/3]")));
        }
        // depth only matters for dyadic values; keep the rational exactly
        let den = v.denom().clone();
        let mut depth = 0usize;
        let mut p = BigInt::one();
        while &p % &den != BigInt::zero() {
            p *= 4;
            depth += 1;
            if depth > 4096 {
                return Err(Error::contract(format!("bias {v} is not a 4-adic rational")));
            }
        }
        let numerator = v.numer() * (p / den);
        Ok(EncodedBias { numerator, depth })
    }
}

/// γ_L: Σ G_L(Σ*(i))/4^i.
pub fn gamma_of(oracle: &LanguageOracle) -> EncodedBias {
    let four = BigInt::from(4);
    let mut num = BigInt::zero();
    for &b in oracle.bits() {
        num = num * &four + if b { BigInt::one() } else { BigInt::zero() };
    }
    EncodedBias { numerator: num, depth: oracle.depth() }
}

/// Outcome of parsing a string against the POWER-EQ shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerEqParse {
    /// Lengths of the maximal `a` runs between `b`s; `None` when the
    /// string is not of the form `a^+ (b a^+)*`.
    pub blocks: Option<Vec<usize>>,
    pub a_count: usize,
    /// `w = aba^7`.
    pub short_member: bool,
    /// `w = aba^7 b a^(7t_1) ... b a^(7t_n)`, n > 0, every t_i a positive
    /// multiple of 8.
    pub form_check: bool,
    pub member: bool,
}

pub fn power_eq_parse(w: &str) -> PowerEqParse {
    let a_count = w.chars().filter(|&c| c == 'a').count();
    let blocks: Option<Vec<usize>> = if w.chars().all(|c| c == 'a' || c == 'b') {
        let runs: Vec<usize> = w.split('b').map(str::len).collect();
        (!runs.contains(&0)).then_some(runs)
    } else {
        None
    };
    let (short_member, form_check, member) = match &blocks {
        Some(b) if b.len() >= 2 && b[0] == 1 && b[1] == 7 => {
            let short = b.len() == 2;
            let form = b.len() >= 3 && b[2..].iter().all(|&t| t % 56 == 0);
            let mut expect = 7usize;
            let mut member = true;
            for &t in &b[1..] {
                if t != expect {
                    member = false;
                    break;
                }
                expect = expect.saturating_mul(8);
            }
            (short, form, member)
        }
        _ => (false, false, false),
    };
    PowerEqParse { blocks, a_count, short_member, form_check, member }
}

/// `log_8 n` when `n` is a power of 8.
pub fn log8_exact(n: usize) -> Option<u32> {
    if n == 0 || !n.is_power_of_two() || !n.trailing_zeros().is_multiple_of(3) {
        return None;
    }
    Some(n.trailing_zeros() / 3)
}

/// The POWER-EQ member with blocks up to `7·8^n`.
pub fn power_eq_member(n: u32) -> String {
    let mut s = String::from("ab");
    s.push_str(&"a".repeat(7));
    for k in 1..=n {
        s.push('b');
        s.push_str(&"a".repeat(7 * 8usize.pow(k)));
    }
    s
}

/// `w ∈ POWER-EQ` and Σ*(log_8 |w|_a) ∈ L.
pub fn power_eq_l_member(w: &str, oracle: &LanguageOracle) -> Result<bool> {
    let p = power_eq_parse(w);
    if !p.member {
        return Ok(false);
    }
    let j = log8_exact(p.a_count).expect("members have 8^(n+1) a's") as usize;
    oracle.member_at(j)
}

/// `log_8 m` for `w = a^m` with `m` a power of 8.
pub fn upower_exponent(w: &str) -> Option<u32> {
    if !w.chars().all(|c| c == 'a') {
        return None;
    }
    log8_exact(w.len())
}

pub fn upower_member(w: &str) -> bool {
    upower_exponent(w).is_some()
}

/// `w = a^(8^n)` with `n ∈ set`, natural-number indexing.
pub fn upower_l_member(w: &str, set: &NaturalSet) -> Result<bool> {
    match upower_exponent(w) {
        None => Ok(false),
        Some(n) => set.contains(n as usize),
    }
}

/// `w = a^(8^n)` with Σ*(n) ∈ L, lexicographic indexing. Σ*(0) does not
/// exist, so `w = a` is out of range.
pub fn upower_l_member_lex(w: &str, oracle: &LanguageOracle) -> Result<bool> {
    match upower_exponent(w) {
        None => Ok(false),
        Some(n) => oracle.member_at(n as usize),
    }
}

/// A prover message.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub struct Transmission {
    pub symbols: Vec<char>,
}

impl Transmission {
    pub fn new(symbols: Vec<char>) -> Self {
        Transmission { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl From<&str> for Transmission {
    fn from(s: &str) -> Self {
        Transmission { symbols: s.chars().collect() }
    }
}

impl fmt::Display for Transmission {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.symbols {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Block separator and string terminator of binary transmissions.
pub const HASH: char = '#';
pub const DAGGER: char = '‡';

fn bit(b: bool) -> char {
    if b {
        '1'
    } else {
        '0'
    }
}

/// Membership bits of `ε, a, ..., a^n`.
pub fn honest_unary_transmission(oracle: &LanguageOracle, n: usize) -> Result<Transmission> {
    if oracle.alphabet() != Alphabet::Unary {
        return Err(Error::contract("unary transmissions need a unary oracle"));
    }
    let symbols = (1..=n + 1).map(|i| oracle.member_at(i).map(bit)).collect::<Result<_>>()?;
    Ok(Transmission { symbols })
}

/// `(s, G_L(s))` for every string up to and including `w`.
pub fn binary_blocks(oracle: &LanguageOracle, w: &str) -> Result<Vec<(String, bool)>> {
    if oracle.alphabet() != Alphabet::Binary {
        return Err(Error::contract("binary transmissions need a binary oracle"));
    }
    let last = lex_index(Alphabet::Binary, w).ok_or_else(|| Error::contract(format!("`{w}` is not a binary string")))?;
    let last = usize::try_from(last).map_err(|_| Error::OutOfRange { index: usize::MAX, depth: oracle.depth() })?;
    (1..=last).map(|i| Ok((lex_string(Alphabet::Binary, i as u64), oracle.member_at(i)?))).collect()
}

/// Concatenation of `#s‡σ` blocks.
pub fn render_blocks(blocks: &[(String, bool)]) -> Transmission {
    let mut symbols = Vec::new();
    for (s, b) in blocks {
        symbols.push(HASH);
        symbols.extend(s.chars());
        symbols.push(DAGGER);
        symbols.push(bit(*b));
    }
    Transmission { symbols }
}

/// `#ε‡G(ε)#0‡G(0)...#w‡G(w)`.
pub fn honest_binary_transmission(oracle: &LanguageOracle, w: &str) -> Result<Transmission> {
    Ok(render_blocks(&binary_blocks(oracle, w)?))
}

pub fn decode_unary(t: &Transmission) -> Result<Vec<bool>> {
    t.symbols
        .iter()
        .map(|&c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::contract(format!("unexpected symbol `{other}` in a unary transmission"))),
        })
        .collect()
}

pub fn decode_binary(t: &Transmission) -> Result<Vec<(String, bool)>> {
    let mut out = Vec::new();
    let mut i = 0;
    let s = &t.symbols;
    while i < s.len() {
        if s[i] != HASH {
            return Err(Error::contract(format!("expected `#` at position {i}")));
        }
        i += 1;
        let mut name = String::new();
        while i < s.len() && (s[i] == '0' || s[i] == '1') {
            name.push(s[i]);
            i += 1;
        }
        if i + 1 >= s.len() || s[i] != DAGGER {
            return Err(Error::contract(format!("block `{name}` is not terminated by `‡σ`")));
        }
        let b = match s[i + 1] {
            '0' => false,
            '1' => true,
            other => return Err(Error::contract(format!("bad membership bit `{other}`"))),
        };
        out.push((name, b));
        i += 2;
    }
    Ok(out)
}
