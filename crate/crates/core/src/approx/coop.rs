//! Multipliers combining two approximation techniques: perforation with
//! column truncation or per-row rounding, high-radix with truncation, and
//! double high-radix encoding.

use super::high_radix::{approx_value, low_digit};
use super::rounding::round_raw;
use crate::fixed::bit_of;

/// Column offset used for a compensation bit relative to the truncation
/// boundary R.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Placement {
    /// Column R-1, the most significant truncated column.
    #[default]
    BelowBoundary,
    /// Column R, the least significant retained column.
    AtBoundary,
}

impl Placement {
    fn weight(self, r: u32) -> i128 {
        match self {
            Placement::BelowBoundary => 1i128 << (r - 1),
            Placement::AtBoundary => 1i128 << r,
        }
    }
}

/// Compensation placement for truncated partial-product matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TruncationPlacement {
    pub row_correction: Placement,
    pub constant_one: Placement,
}

/// Booth rows j in `from..n/2` of A·B with every column below `r` removed.
/// Each row is the one's-complement bit vector of its partial product plus a
/// separate negation bit at column 2j; rows reaching below `r` lose their
/// negation bit and get a correction of weight 2^(r-1) (or 2^r) instead, and
/// one constant '1' is added when any row was cut.
pub(crate) fn truncated_rows(a: i64, b: i64, n: u32, from: u32, r: u32, place: TruncationPlacement) -> i128 {
    let a = a as i128;
    let mut acc = 0i128;
    let mut cut = false;
    for j in from..n / 2 {
        let hi = bit_of(b, 2 * j as i32 + 1);
        let mid = bit_of(b, 2 * j as i32);
        let lo = if j == 0 { 0 } else { bit_of(b, 2 * j as i32 - 1) };
        let y = -2 * hi as i128 + mid as i128 + lo as i128;
        let nonzero = (y != 0) as i128;
        let neg = hi as i128 * nonzero;
        let row = (y * a - neg) << (2 * j);
        if 2 * j >= r {
            acc += row + (neg << (2 * j));
        } else {
            cut = true;
            acc += (row >> r) << r;
            acc += nonzero * place.row_correction.weight(r);
        }
    }
    if cut {
        acc += place.constant_one.weight(r);
    }
    acc
}

/// Perforate the P lowest rows, truncate columns below R, compensate.
pub(crate) fn roup1_raw(a: i64, b: i64, n: u32, p: u32, r: u32, place: TruncationPlacement) -> i128 {
    truncated_rows(a, b, n, p, r, place)
}

/// Default per-row rounding schedule R_j = max(R - 2(j - P), 0), j = P..n/2-1.
pub fn roup2_default_schedule(n: u32, p: u32, r: u32) -> Vec<u32> {
    (p..n / 2).map(|j| r.saturating_sub(2 * (j - p))).collect()
}

/// Perforate the P lowest rows and round A separately for each row.
pub(crate) fn roup2_raw(a: i64, b: i64, n: u32, p: u32, schedule: &[u32]) -> i128 {
    let mut acc = 0i128;
    for (idx, j) in (p..n / 2).enumerate() {
        let ar = round_raw(a, schedule[idx]);
        acc += (ar * crate::fixed::r4_digit(b, j, 0) as i128) << (2 * j);
    }
    acc
}

/// A·ŷ0 plus the truncated radix-4 sub-matrix of the remaining digits.
pub(crate) fn radr_raw(a: i64, b: i64, n: u32, k: u32, r: u32, place: TruncationPlacement) -> i128 {
    let y_hat = approx_value(low_digit(b, k), k);
    a as i128 * y_hat as i128 + truncated_rows(a, b, n, k / 2, r, place)
}

/// A1·B1 + B1·x̂0 (+ A·ŷ0 unless perforated).
pub(crate) fn drad_raw(a: i64, b: i64, k: u32, m: u32, perforate: bool) -> i128 {
    let x0 = low_digit(a, m);
    let y0 = low_digit(b, k);
    let a1 = a as i128 - x0 as i128;
    let b1 = b as i128 - y0 as i128;
    let x_hat = approx_value(x0, m) as i128;
    let mut acc = a1 * b1 + b1 * x_hat;
    if !perforate {
        acc += a as i128 * approx_value(y0, k) as i128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_truncation_is_exact() {
        for (a, b) in [(123i64, -4567i64), (-32768, -32768), (0, 5), (32767, 1)] {
            assert_eq!(truncated_rows(a, b, 16, 0, 0, TruncationPlacement::default()), a as i128 * b as i128);
        }
    }

    #[test]
    fn default_schedule_is_diagonal() {
        assert_eq!(roup2_default_schedule(16, 3, 10), vec![10, 8, 6, 4, 2]);
        assert_eq!(roup2_default_schedule(16, 0, 0), vec![0; 8]);
    }

    #[test]
    fn drad_exact_when_low_bits_zero() {
        let (a, b) = (0x3F00i64, -0x2200i64);
        assert_eq!(drad_raw(a, b, 8, 8, false), a as i128 * b as i128);
    }
}
