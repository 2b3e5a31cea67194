//! Operand parsing, decimal scaling and exponent encoding.
//!
//! A decimal operand is first scaled to an integer mantissa, the mantissa is
//! split into its set-bit positions, and those positions become the basis
//! states of a uniform superposition over `max(1, ceil(log2 n))` qubits.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::CodecError;

/// Base in which a fractional operand is scaled to an integer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ScaleBase {
    Two,
    #[default]
    Ten,
}

impl ScaleBase {
    pub fn radix(self) -> u32 {
        match self {
            ScaleBase::Two => 2,
            ScaleBase::Ten => 10,
        }
    }

    pub fn pow(self, exp: u32) -> BigUint {
        BigUint::from(self.radix()).pow(exp)
    }
}

impl fmt::Display for ScaleBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.radix())
    }
}

impl FromStr for ScaleBase {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "2" => Ok(ScaleBase::Two),
            "10" => Ok(ScaleBase::Ten),
            other => Err(CodecError::UnsupportedBase(other.to_string())),
        }
    }
}

/// An operand written as `mantissa * base^(-scale_exp)`, with the sign kept
/// apart from the magnitude.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledOperand {
    pub text: String,
    pub mantissa: BigUint,
    pub scale_base: ScaleBase,
    pub scale_exp: u32,
    pub negative: bool,
}

impl ScaledOperand {
    /// Parses with sign handling enabled.
    pub fn parse(text: &str, base: ScaleBase) -> Result<Self, CodecError> {
        parse_operand(text, base, true)
    }

    /// Exact value as a rational, sign included.
    pub fn to_rational(&self) -> BigRational {
        let magnitude = BigRational::new(
            self.mantissa.clone().into(),
            self.scale_base.pow(self.scale_exp).into(),
        );
        if self.negative {
            -magnitude
        } else {
            magnitude
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }
}

/// Parses `[+-]digits[.digits]` and scales it to the smallest integer
/// mantissa in `base`.
pub fn parse_operand(
    text: &str,
    base: ScaleBase,
    allow_negative: bool,
) -> Result<ScaledOperand, CodecError> {
    let malformed = || CodecError::MalformedNumber(text.to_string());

    let (negative, body) = match text.as_bytes().first() {
        Some(b'-') => (true, &text[1..]),
        Some(b'+') => (false, &text[1..]),
        _ => (false, text),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if int_part.is_empty()
        || !all_digits(int_part)
        || !all_digits(frac_part)
        || (body.contains('.') && frac_part.is_empty())
    {
        return Err(malformed());
    }
    if negative && !allow_negative {
        return Err(CodecError::NegativeUnsupported(text.to_string()));
    }

    // Minimal scaling: trailing fractional zeros carry no value.
    let frac = frac_part.trim_end_matches('0');
    let digits = format!("{int_part}{frac}");
    let numerator = BigUint::parse_bytes(digits.as_bytes(), 10).ok_or_else(malformed)?;
    let decimals = frac.len() as u32;

    let (mantissa, scale_exp) = match base {
        ScaleBase::Ten => (numerator, decimals),
        ScaleBase::Two => to_dyadic(numerator, decimals)
            .ok_or_else(|| CodecError::NonDyadicFraction(text.to_string()))?,
    };
    let negative = negative && !mantissa.is_zero();

    Ok(ScaledOperand {
        text: text.to_string(),
        mantissa,
        scale_base: base,
        scale_exp,
        negative,
    })
}

/// Rewrites `numerator / 10^decimals` as `m / 2^s` with `m` odd when `s > 0`.
fn to_dyadic(numerator: BigUint, decimals: u32) -> Option<(BigUint, u32)> {
    if decimals == 0 {
        return Some((numerator, 0));
    }
    let five_pow = BigUint::from(5u32).pow(decimals);
    let (mut mantissa, rem) = numerator.div_rem(&five_pow);
    if !rem.is_zero() {
        return None;
    }
    let mut scale = decimals;
    let two = BigUint::from(2u32);
    while scale > 0 && mantissa.is_even() && !mantissa.is_zero() {
        mantissa /= &two;
        scale -= 1;
    }
    if mantissa.is_zero() {
        scale = 0;
    }
    Some((mantissa, scale))
}

/// A non-negative integer as the set of its power-of-two exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryDecomposition {
    pub value: BigUint,
    /// Set-bit positions, strictly decreasing.
    pub exponents: Vec<u64>,
    pub bit_length: u64,
}

impl BinaryDecomposition {
    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.exponents.len()
    }
}

pub fn decompose(value: &BigUint) -> BinaryDecomposition {
    let bit_length = value.bits();
    let exponents = (0..bit_length).rev().filter(|&i| value.bit(i)).collect();
    BinaryDecomposition {
        value: value.clone(),
        exponents,
        bit_length,
    }
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n >= 1, "ceil_log2 of zero");
    if n == 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Register width needed for the exponents of an `n`-bit operand, floored at
/// one qubit.
pub fn register_width(bit_length: u64) -> usize {
    (ceil_log2(bit_length.max(1)) as usize).max(1)
}

/// Exponent superposition of one operand, given as data.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedOperand {
    pub decomposition: BinaryDecomposition,
    pub qubit_count: usize,
    /// One basis pattern per exponent, in the same order as the exponents.
    pub basis_states: Vec<u64>,
    pub amplitude: f64,
}

impl EncodedOperand {
    /// Renders the state in ket notation, most significant qubit first.
    pub fn ket(&self) -> String {
        let terms: Vec<String> = self
            .basis_states
            .iter()
            .map(|&s| format!("|{}⟩", format_bits(s, self.qubit_count)))
            .collect();
        let body = terms.join(" + ");
        match self.basis_states.len() {
            1 => body,
            w => format!("({body})/√{w}"),
        }
    }

    /// `(pattern, amplitude)` pairs suitable for state injection.
    pub fn entries(&self) -> Vec<(u64, f64)> {
        self.basis_states
            .iter()
            .map(|&s| (s, self.amplitude))
            .collect()
    }
}

pub fn encode(d: &BinaryDecomposition) -> Result<EncodedOperand, CodecError> {
    if d.value.is_zero() {
        return Err(CodecError::ZeroOperand);
    }
    let qubit_count = register_width(d.bit_length);
    let weight = d.weight();
    Ok(EncodedOperand {
        decomposition: d.clone(),
        qubit_count,
        basis_states: d.exponents.clone(),
        amplitude: 1.0 / (weight as f64).sqrt(),
    })
}

/// Formats `value` as `width` binary digits, most significant first.
pub fn format_bits(value: u64, width: usize) -> String {
    (0..width)
        .rev()
        .map(|i| if value >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Renders `magnitude * base^(-scale_exp)` as an exact decimal string that
/// keeps every fractional digit the scaling implies.
pub fn render_scaled(magnitude: &BigUint, base: ScaleBase, scale_exp: u32, negative: bool) -> String {
    if magnitude.is_zero() {
        return "0".to_string();
    }
    // m / 2^s == m * 5^s / 10^s, so both bases end up as a decimal shift.
    let digits_value = match base {
        ScaleBase::Ten => magnitude.clone(),
        ScaleBase::Two => magnitude * BigUint::from(5u32).pow(scale_exp),
    };
    let digits = digits_value.to_str_radix(10);
    let scale = scale_exp as usize;
    let mut out = String::with_capacity(digits.len() + scale + 3);
    if negative {
        out.push('-');
    }
    if scale == 0 {
        out.push_str(&digits);
    } else if digits.len() > scale {
        let (int, frac) = digits.split_at(digits.len() - scale);
        out.push_str(int);
        out.push('.');
        out.push_str(frac);
    } else {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', scale - digits.len()));
        out.push_str(&digits);
    }
    out
}

/// Parses a decimal string into an exact rational.
pub fn decimal_to_rational(text: &str) -> Result<BigRational, CodecError> {
    let op = parse_operand(text, ScaleBase::Ten, true)?;
    Ok(op.to_rational())
}
