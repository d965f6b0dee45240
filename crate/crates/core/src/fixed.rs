//! Two's-complement operands, accurate radix-4 Modified Booth encoding and a
//! shift-and-add reference multiplier.

use crate::error::{AxError, Result};

/// An n-bit two's-complement value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FixedOperand {
    width: u32,
    value: i64,
}

pub(crate) fn check_width(width: u32) -> Result<()> {
    if width % 2 == 1 || !(4..=64).contains(&width) {
        return Err(AxError::InvalidWidth(width));
    }
    Ok(())
}

/// Smallest value representable in `width` bits.
pub fn min_value(width: u32) -> i128 {
    -(1i128 << (width - 1))
}

/// Largest value representable in `width` bits.
pub fn max_value(width: u32) -> i128 {
    (1i128 << (width - 1)) - 1
}

impl FixedOperand {
    pub fn new(width: u32, value: i64) -> Result<Self> {
        check_width(width)?;
        let v = value as i128;
        if v < min_value(width) || v > max_value(width) {
            return Err(AxError::ValueOutOfRange { value: v, width });
        }
        Ok(Self { width, value })
    }

    /// Interprets the low `width` bits of `raw` as a two's-complement pattern.
    pub fn from_bits(width: u32, raw: u64) -> Result<Self> {
        check_width(width)?;
        let shift = 64 - width;
        let value = ((raw << shift) as i64) >> shift;
        Ok(Self { width, value })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    /// The raw bit pattern in the low `width` bits.
    pub fn bits(&self) -> u64 {
        if self.width == 64 {
            self.value as u64
        } else {
            (self.value as u64) & ((1u64 << self.width) - 1)
        }
    }

    /// Bit a_i; indices below zero read as 0 and indices at or above the width
    /// read as the sign bit.
    pub fn bit(&self, i: i32) -> u8 {
        bit_of(self.value, i)
    }
}

#[inline]
pub(crate) fn bit_of(v: i64, i: i32) -> u8 {
    if i < 0 {
        0
    } else {
        ((v >> i.min(63)) & 1) as u8
    }
}

/// One radix-4 digit with its encoder signals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Radix4Digit {
    pub sign: u8,
    pub one: u8,
    pub two: u8,
}

impl Radix4Digit {
    /// Encodes the bit triple (b_{2j+1}, b_{2j}, b_{2j-1}).
    pub fn from_bits(hi: u8, mid: u8, lo: u8) -> Self {
        let one = mid ^ lo;
        let two = (hi ^ mid) & (1 - one);
        Self { sign: hi, one, two }
    }

    /// The digit value. A set sign with no magnitude is a negative zero and
    /// evaluates to 0.
    pub fn value(&self) -> i64 {
        let mag = (2 * self.two + self.one) as i64;
        if self.sign == 1 {
            -mag
        } else {
            mag
        }
    }

    pub fn is_zero(&self) -> bool {
        self.one == 0 && self.two == 0
    }
}

/// A partial product contributing `value * 2^weight_exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartialProductTerm {
    pub weight_exponent: u32,
    pub value: i128,
}

impl PartialProductTerm {
    pub fn contribution(&self) -> i128 {
        self.value << self.weight_exponent
    }
}

/// Radix-4 digit j of `v`, given the value injected at bit position -1.
#[inline]
pub(crate) fn r4_digit(v: i64, j: u32, b_m1: u8) -> i64 {
    let lo = if j == 0 { b_m1 } else { bit_of(v, 2 * j as i32 - 1) };
    -2 * bit_of(v, 2 * j as i32 + 1) as i64 + bit_of(v, 2 * j as i32) as i64 + lo as i64
}

/// Radix-4 encoding of B with b_{-1} = 0; `n/2` digits, least significant first.
pub fn encode_radix4(b: &FixedOperand) -> Vec<Radix4Digit> {
    encode_radix4_with(b, 0)
}

/// Radix-4 encoding with an explicit value injected at b_{-1}.
pub fn encode_radix4_with(b: &FixedOperand, b_m1: u8) -> Vec<Radix4Digit> {
    (0..b.width / 2)
        .map(|j| {
            let lo = if j == 0 { b_m1 } else { b.bit(2 * j as i32 - 1) };
            Radix4Digit::from_bits(b.bit(2 * j as i32 + 1), b.bit(2 * j as i32), lo)
        })
        .collect()
}

/// The n/2 accurate partial products A * y_j at weights 4^j.
pub fn partial_products(a: &FixedOperand, b: &FixedOperand) -> Result<Vec<PartialProductTerm>> {
    same_width(a, b)?;
    Ok(encode_radix4(b)
        .iter()
        .enumerate()
        .map(|(j, d)| PartialProductTerm { weight_exponent: 2 * j as u32, value: a.value as i128 * d.value() as i128 })
        .collect())
}

pub(crate) fn same_width(a: &FixedOperand, b: &FixedOperand) -> Result<u32> {
    if a.width != b.width {
        return Err(AxError::WidthMismatch(a.width, b.width));
    }
    Ok(a.width)
}

/// Accurate Modified Booth product.
pub fn multiply_accurate(a: &FixedOperand, b: &FixedOperand) -> Result<i128> {
    same_width(a, b)?;
    Ok(booth_sum(a.value, b.value, a.width, 0))
}

/// Σ_{j ≥ from} 4^j · a · y_j with b_{-1} = 0.
#[inline]
pub(crate) fn booth_sum(a: i64, b: i64, n: u32, from: u32) -> i128 {
    let mut acc = 0i128;
    for j in from..n / 2 {
        acc += ((a as i128) * r4_digit(b, j, 0) as i128) << (2 * j);
    }
    acc
}

/// Sign-magnitude shift-and-add multiplication.
pub fn oracle_multiply(a: &FixedOperand, b: &FixedOperand) -> Result<i128> {
    same_width(a, b)?;
    let negative = (a.value < 0) != (b.value < 0);
    let ma = a.value.unsigned_abs() as u128;
    let mut mb = b.value.unsigned_abs();
    let mut acc = 0u128;
    let mut shift = 0;
    while mb != 0 {
        if mb & 1 == 1 {
            acc += ma << shift;
        }
        mb >>= 1;
        shift += 1;
    }
    let acc = acc as i128;
    Ok(if negative { -acc } else { acc })
}
