//! Partial-product perforation and rounding (AxFXU) and its runtime-masked
//! counterpart (DyFXU).

use crate::error::{AxError, Result};
use crate::fixed::{bit_of, r4_digit, same_width, FixedOperand};

/// Which bit position the rounding of A drops down to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RoundingMode {
    /// Drop bits 0..r-1 and add back a_{r-1}.
    #[default]
    DropR,
    /// Drop bits 0..r-2 and add back a_{r-2}.
    DropRMinusOne,
}

/// A multiplicand rounded to a multiple of 2^shift, kept in DLSB form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundedOperand {
    pub shift: u32,
    pub core: i64,
    pub extra: u8,
}

impl RoundedOperand {
    pub fn value(&self) -> i128 {
        ((self.core as i128) + self.extra as i128) << self.shift
    }
}

#[inline]
pub(crate) fn round_raw(a: i64, r: u32) -> i128 {
    if r == 0 {
        return a as i128;
    }
    (((a >> r) as i128) + bit_of(a, r as i32 - 1) as i128) << r
}

#[inline]
pub(crate) fn round_with_mode(a: i64, r: u32, mode: RoundingMode) -> i128 {
    match mode {
        RoundingMode::DropR => round_raw(a, r),
        RoundingMode::DropRMinusOne => round_raw(a, r.saturating_sub(1)),
    }
}

/// 2^r · (asr(A, r) + a_{r-1}); r = 0 is the identity.
pub fn round_operand(a: &FixedOperand, r: u32) -> Result<RoundedOperand> {
    if r >= a.width() {
        return Err(AxError::InvalidParameter(format!("rounding r={r} for width {}", a.width())));
    }
    Ok(RoundedOperand { shift: r, core: a.value() >> r, extra: if r == 0 { 0 } else { a.bit(r as i32 - 1) } })
}

pub(crate) fn check_pr(p: u32, r: u32, n: u32) -> Result<()> {
    if p + 1 >= n / 2 && p != 0 {
        return Err(AxError::InvalidParameter(format!("perforation P={p} must be below {}", n / 2 - 1)));
    }
    if r + 1 >= n && r != 0 {
        return Err(AxError::InvalidParameter(format!("rounding R={r} must be below {}", n - 1)));
    }
    Ok(())
}

/// Σ_{j≥p} 4^j · A_R · y_j.
#[inline]
pub(crate) fn axfxu_raw(a: i64, b: i64, n: u32, p: u32, r: u32, mode: RoundingMode) -> i128 {
    let ar = round_with_mode(a, r, mode);
    let mut acc = 0i128;
    for j in p..n / 2 {
        acc += (ar * r4_digit(b, j, 0) as i128) << (2 * j);
    }
    acc
}

pub fn multiply_axfxu(a: &FixedOperand, b: &FixedOperand, p: u32, r: u32) -> Result<i128> {
    multiply_axfxu_with(a, b, p, r, RoundingMode::default())
}

pub fn multiply_axfxu_with(a: &FixedOperand, b: &FixedOperand, p: u32, r: u32, mode: RoundingMode) -> Result<i128> {
    let n = same_width(a, b)?;
    check_pr(p, r, n)?;
    Ok(axfxu_raw(a.value(), b.value(), n, p, r, mode))
}

fn low_clear_mask(n: u32, zeros: u32) -> u64 {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    full & !((1u64 << zeros) - 1)
}

/// Operand masks that configure (P, R) at runtime. R = 1 clears no bits,
/// exactly like R = 0, so it cannot be told apart and is rejected.
pub fn dyfxu_masks(p: u32, r: u32, n: u32) -> Result<(u64, u64)> {
    crate::fixed::check_width(n)?;
    check_pr(p, r, n)?;
    if r == 1 {
        return Err(AxError::InvalidParameter("R=1 is not encodable as an operand mask".into()));
    }
    let mask_a = low_clear_mask(n, r.saturating_sub(1));
    let mask_b = low_clear_mask(n, (2 * p).saturating_sub(1));
    Ok((mask_a, mask_b))
}

fn low_zero_run(mask: u64, n: u32) -> Result<u32> {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if mask & !full != 0 {
        return Err(AxError::MalformedMask(mask));
    }
    let zeros = if mask == 0 { n } else { mask.trailing_zeros() };
    if mask != low_clear_mask(n, zeros) {
        return Err(AxError::MalformedMask(mask));
    }
    Ok(zeros)
}

/// Recovers (P, R) from a pair of canonical masks.
pub fn decode_dyfxu_masks(mask_a: u64, mask_b: u64, n: u32) -> Result<(u32, u32)> {
    let za = low_zero_run(mask_a, n)?;
    let zb = low_zero_run(mask_b, n)?;
    if zb != 0 && zb % 2 == 0 {
        return Err(AxError::MalformedMask(mask_b));
    }
    let p = zb.div_ceil(2);
    let r = if za == 0 { 0 } else { za + 1 };
    check_pr(p, r, n)?;
    Ok((p, r))
}

#[inline]
pub(crate) fn dyfxu_raw(a: i64, b: i64, n: u32, mask_a: u64, mask_b: u64, p: u32, r: u32) -> i128 {
    let mask_b = if cfg!(feature = "fault-injection") && p > 0 { mask_b << 1 } else { mask_b };
    let shift = 64 - n;
    let am = (((a as u64) & mask_a) << shift) as i64 >> shift;
    let bm = (((b as u64) & mask_b) << shift) as i64 >> shift;
    axfxu_raw(am, bm, n, p, r, RoundingMode::DropR)
}

/// Applies the masks to the operands and runs the configuration they encode.
pub fn multiply_dyfxu(a: &FixedOperand, b: &FixedOperand, mask_a: u64, mask_b: u64) -> Result<i128> {
    let n = same_width(a, b)?;
    let (p, r) = decode_dyfxu_masks(mask_a, mask_b, n)?;
    Ok(dyfxu_raw(a.value(), b.value(), n, mask_a, mask_b, p, r))
}
