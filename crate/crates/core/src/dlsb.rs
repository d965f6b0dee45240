//! Double-LSB numbers: an n-bit two's-complement core plus one extra bit of
//! LSB weight, giving the symmetric range [-2^(n-1), 2^(n-1)].

use crate::error::{AxError, Result};
use crate::fixed::{r4_digit, same_width, FixedOperand, Radix4Digit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DlsbOperand {
    pub core: FixedOperand,
    pub extra: u8,
}

/// Result of a DLSB addition. `wrapped` is set when the stored result does not
/// equal the mathematical sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DlsbSum {
    pub result: DlsbOperand,
    pub wrapped: bool,
}

impl DlsbOperand {
    pub fn new(core: FixedOperand, extra: u8) -> Result<Self> {
        if extra > 1 {
            return Err(AxError::InvalidParameter(format!("extra LSB must be 0 or 1, got {extra}")));
        }
        Ok(Self { core, extra })
    }

    /// Builds an operand from an n-bit pattern and the extra bit.
    pub fn from_bits(width: u32, raw: u64, extra: u8) -> Result<Self> {
        Self::new(FixedOperand::from_bits(width, raw)?, extra)
    }

    pub fn width(&self) -> u32 {
        self.core.width()
    }

    pub fn value(&self) -> i64 {
        self.core.value() + self.extra as i64
    }

    /// Inverts all n+1 bits; exact for every operand.
    pub fn negate(&self) -> Self {
        let core = FixedOperand::from_bits(self.width(), !self.core.bits()).expect("width already validated");
        Self { core, extra: 1 - self.extra }
    }
}

pub fn dlsb_value(x: &DlsbOperand) -> i64 {
    x.value()
}

pub fn dlsb_negate(x: &DlsbOperand) -> DlsbOperand {
    x.negate()
}

/// Conventional adder: B's extra bit is the carry-in, A's extra bit is
/// attached to the result.
pub fn dlsb_add(a: &DlsbOperand, b: &DlsbOperand) -> Result<DlsbSum> {
    let n = same_width(&a.core, &b.core)?;
    let raw = a.core.bits().wrapping_add(b.core.bits()).wrapping_add(b.extra as u64);
    let core = FixedOperand::from_bits(n, raw)?;
    let result = DlsbOperand { core, extra: a.extra };
    let exact = a.value() as i128 + b.value() as i128;
    Ok(DlsbSum { result, wrapped: result.value() as i128 != exact })
}

/// Subtraction as addition of the bit-inverted subtrahend.
pub fn dlsb_sub(a: &DlsbOperand, b: &DlsbOperand) -> Result<DlsbSum> {
    dlsb_add(a, &b.negate())
}

/// The n/2 radix-4 digits of B⁺, with b_{0+} injected at position -1.
pub fn encode_dlsb_radix4(b: &DlsbOperand) -> Vec<Radix4Digit> {
    crate::fixed::encode_radix4_with(&b.core, b.extra)
}

/// DLSB multiplier with the extra bit of A folded into XOR gates: every bit of
/// A is XORed with a_{0+} and every digit sign with a_{0+}.
pub fn dlsb_multiply(a: &DlsbOperand, b: &DlsbOperand) -> Result<i128> {
    same_width(&a.core, &b.core)?;
    let a0 = a.extra;
    let a_prime: i128 = if a0 == 1 { !a.core.value() as i128 } else { a.core.value() as i128 };
    let mut acc = 0i128;
    for (j, d) in encode_dlsb_radix4(b).iter().enumerate() {
        let sign = d.sign ^ a0;
        let mag = (2 * d.two + d.one) as i128;
        let digit = if sign == 1 { -mag } else { mag };
        acc += (a_prime * digit) << (2 * j);
    }
    Ok(acc)
}

/// Conventional Booth product of A's core with B⁺ plus the extra term a_{0+}·B⁺.
pub fn dlsb_multiply_straightforward(a: &DlsbOperand, b: &DlsbOperand) -> Result<i128> {
    let n = same_width(&a.core, &b.core)?;
    let core = a.core.value() as i128;
    let mut acc = 0i128;
    for j in 0..n / 2 {
        acc += (core * r4_digit(b.core.value(), j, b.extra) as i128) << (2 * j);
    }
    Ok(acc + a.extra as i128 * b.value() as i128)
}

/// Splits a 2n-bit operand into its n-bit DLSB halves: the upper half carries
/// a_{n-1} as its extra bit, the lower half carries 0.
pub fn split_operand(a: &FixedOperand) -> Result<(DlsbOperand, DlsbOperand)> {
    let w = a.width();
    if !w.is_multiple_of(4) || w < 8 {
        return Err(AxError::InvalidWidth(w));
    }
    let n = w / 2;
    let bits = a.bits();
    let high = FixedOperand::from_bits(n, bits >> n)?;
    let low = FixedOperand::from_bits(n, bits)?;
    let upper = DlsbOperand { core: high, extra: a.bit(n as i32 - 1) };
    let lower = DlsbOperand { core: low, extra: 0 };
    Ok((upper, lower))
}

/// Exact 2n×2n product from four n-bit DLSB block products.
pub fn partition_multiply(a: &FixedOperand, b: &FixedOperand) -> Result<i128> {
    let w = same_width(a, b)?;
    let n = w / 2;
    let (a1, a2) = split_operand(a)?;
    let (b1, b2) = split_operand(b)?;
    let hh = dlsb_multiply(&a1, &b1)?;
    let hl = dlsb_multiply(&a1, &b2)?;
    let lh = dlsb_multiply(&a2, &b1)?;
    let ll = dlsb_multiply(&a2, &b2)?;
    Ok((hh << (2 * n)) + ((hl + lh) << n) + ll)
}
