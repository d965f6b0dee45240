//! Approximate high-radix-2^k encoding of the k least significant bits of an
//! operand into {0, ±2^(k-4), ±2^(k-3), ±2^(k-2), ±2^(k-1)}.

use crate::error::{AxError, Result};

/// Encoded low digit. `x[i]` is the ×2^(k-4+i) selection signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HighRadixDigit {
    pub k: u32,
    pub accurate: i64,
    pub approx: i64,
    pub sign: u8,
    pub x: [u8; 4],
}

impl HighRadixDigit {
    /// Value selected by the signals: (-1)^sign times the chosen power, or 0.
    pub fn signal_value(&self) -> i64 {
        let mag: i64 = (0..4).map(|i| (self.x[i] as i64) << (self.k - 4 + i as u32)).sum();
        if self.sign == 1 {
            -mag
        } else {
            mag
        }
    }
}

pub(crate) fn check_k(k: u32, n: u32) -> Result<()> {
    if k % 2 == 1 || k < 4 || k + 2 > n {
        return Err(AxError::InvalidParameter(format!("high-radix k={k} must be even with 4 <= k <= {}", n.saturating_sub(2))));
    }
    Ok(())
}

/// Interval mapping of the approximate encoding. Works on d = 2y so that the
/// half-unit interval boundaries stay integral.
#[inline]
pub fn approx_value(y: i64, k: u32) -> i64 {
    let h = 1i64 << (k - 4);
    let d = 2 * y;
    if d >= 0 {
        if d < h {
            0
        } else if d < 3 * h {
            h
        } else if d < 6 * h {
            2 * h
        } else if d < 12 * h {
            4 * h
        } else {
            8 * h
        }
    } else if d >= -h {
        0
    } else if d >= -3 * h {
        -h
    } else if d >= -6 * h {
        -2 * h
    } else if d >= -12 * h {
        -4 * h
    } else {
        -8 * h
    }
}

/// Encoder signal logic over the k-bit pattern of y (b_{-1} = 0 when k = 4).
pub fn encoder_signals(y: i64, k: u32) -> (u8, [u8; 4]) {
    let u = (y as u64) & ((1u64 << k) - 1);
    let b = |i: i32| -> u8 {
        if i < 0 {
            0
        } else {
            ((u >> i) & 1) as u8
        }
    };
    let k = k as i32;
    let (b1, b2, b3, b4, b5) = (b(k - 1), b(k - 2), b(k - 3), b(k - 4), b(k - 5));
    let nb = |v: u8| 1 - v;
    let x4 = ((nb(b1) & nb(b2) & nb(b3)) | (b1 & b2 & b3)) & (b4 ^ b5);
    let x3 = (nb(b1) & nb(b2) & ((nb(b3) & b4 & b5) | (b3 & nb(b4)))) | (b1 & b2 & ((b3 & nb(b4) & nb(b5)) | (nb(b3) & b4)));
    let x2 = (nb(b2) & b3 & (b1 | b4)) | (b2 & nb(b3) & (nb(b1) | nb(b4)));
    let x1 = (nb(b1) & b2 & b3) | (b1 & nb(b2) & nb(b3));
    (b1, [x4, x3, x2, x1])
}

pub fn approx_high_radix_digit(y: i64, k: u32) -> Result<HighRadixDigit> {
    if !(4..=62).contains(&k) || k % 2 == 1 {
        return Err(AxError::InvalidParameter(format!("high-radix k={k}")));
    }
    let half = 1i64 << (k - 1);
    if y < -half || y >= half {
        return Err(AxError::InvalidParameter(format!("digit {y} outside the radix-2^{k} range")));
    }
    let (sign, x) = encoder_signals(y, k);
    let digit = HighRadixDigit { k, accurate: y, approx: approx_value(y, k), sign, x };
    debug_assert_eq!(digit.signal_value(), digit.approx);
    Ok(digit)
}

/// The sign-extended k least significant bits of v.
#[inline]
pub fn low_digit(v: i64, k: u32) -> i64 {
    let s = 64 - k;
    (v << s) >> s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows_for_k6() {
        assert_eq!(approx_high_radix_digit(5, 6).unwrap().approx, 4);
        assert_eq!(approx_high_radix_digit(1, 6).unwrap().approx, 0);
        assert_eq!(approx_high_radix_digit(-32, 6).unwrap().approx, -32);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(approx_high_radix_digit(32, 6).is_err());
        assert!(approx_high_radix_digit(-33, 6).is_err());
        assert!(approx_high_radix_digit(0, 5).is_err());
    }

    #[test]
    fn low_digit_sign_extends() {
        assert_eq!(low_digit(0b101101, 4), -3);
        assert_eq!(low_digit(0b0111, 4), 7);
    }
}
