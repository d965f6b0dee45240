//! Exhaustive and brute-force equivalence suites, runnable by name.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::approx::rounding::{dyfxu_masks, multiply_axfxu, multiply_dyfxu};
use crate::approx::{AxConfig, Multiplier};
use crate::dlsb::{dlsb_multiply, dlsb_multiply_straightforward, partition_multiply, DlsbOperand};
use crate::error::{AxError, Result};
use crate::fixed::{multiply_accurate, oracle_multiply, FixedOperand};
use crate::kernels::{conv2d, winograd_conv3x3, GrayImage, Kernel2D};
use crate::metrics::sampling::{rng_from_seed, sample_uniform_fixed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Booth multiplier against the schoolbook oracle, all 8-bit pairs.
    Fixed,
    /// Both DLSB multipliers against the value oracle, all 8-bit combinations.
    Dlsb,
    /// 16-bit partitioned multiplication on sampled pairs.
    Partition,
    /// Mask-configured multiplier against AxFXU for every legal 8-bit (P, R).
    Dyfxu,
    /// Winograd F(2×2, 3×3) against direct convolution.
    Winograd,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Fixed, Suite::Dlsb, Suite::Partition, Suite::Dyfxu, Suite::Winograd];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fixed => "fixed",
            Suite::Dlsb => "dlsb",
            Suite::Partition => "partition",
            Suite::Dyfxu => "dyfxu",
            Suite::Winograd => "winograd",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = AxError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| AxError::InvalidParameter(format!("unknown oracle suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub suite: Suite,
    pub checked: u64,
    pub mismatches: u64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

fn op(n: u32, v: i64) -> FixedOperand {
    FixedOperand::new(n, v).expect("value in range")
}

/// Counts disagreements of `f` over every ordered pair in -128..128.
fn all_pairs8(f: impl Fn(i64, i64) -> bool + Sync) -> (u64, u64) {
    let bad: u64 = (-128i64..128).into_par_iter().map(|a| (-128i64..128).filter(|&b| !f(a, b)).count() as u64).sum();
    (1 << 16, bad)
}

/// Runs one suite. `seed` drives the sampled parts (partition pairs and the
/// Winograd image).
pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteResult> {
    let (checked, mismatches) = match suite {
        Suite::Fixed => all_pairs8(|a, b| multiply_accurate(&op(8, a), &op(8, b)).ok() == oracle_multiply(&op(8, a), &op(8, b)).ok()),
        Suite::Dlsb => {
            let bad: u64 = (0..256u64)
                .into_par_iter()
                .map(|ra| {
                    let mut bad = 0;
                    for rb in 0..256u64 {
                        for ea in 0..2 {
                            for eb in 0..2 {
                                let x = DlsbOperand::from_bits(8, ra, ea).expect("8-bit");
                                let y = DlsbOperand::from_bits(8, rb, eb).expect("8-bit");
                                let want = x.value() as i128 * y.value() as i128;
                                let s = dlsb_multiply(&x, &y).ok();
                                let f = dlsb_multiply_straightforward(&x, &y).ok();
                                bad += (s != Some(want) || f != Some(want)) as u64;
                            }
                        }
                    }
                    bad
                })
                .sum();
            (1 << 18, bad)
        }
        Suite::Partition => {
            let pairs = sample_uniform_fixed(16, 1_000_000, seed)?;
            let bad = pairs
                .par_iter()
                .filter(|&&(a, b)| partition_multiply(&op(16, a), &op(16, b)).ok() != oracle_multiply(&op(16, a), &op(16, b)).ok())
                .count() as u64;
            (pairs.len() as u64, bad)
        }
        Suite::Dyfxu => {
            let (mut checked, mut bad) = (0, 0);
            for p in 0..=4 {
                for r in 0..=8 {
                    let Ok((ma, mb)) = dyfxu_masks(p, r, 8) else { continue };
                    let (c, b) = all_pairs8(|a, b| {
                        multiply_dyfxu(&op(8, a), &op(8, b), ma, mb).ok() == multiply_axfxu(&op(8, a), &op(8, b), p, r).ok()
                    });
                    checked += c;
                    bad += b;
                }
            }
            (checked, bad)
        }
        Suite::Winograd => {
            let mut rng = rng_from_seed(seed);
            let mut px = vec![0u8; 64 * 64];
            rng.fill_bytes(&mut px);
            let img = GrayImage::new(64, 64, px)?;
            let coeffs: Vec<i64> = (0..9).map(|_| rng.random_range(-128..128)).collect();
            let k = Kernel2D::new(3, coeffs, 4)?;
            let direct = conv2d(&img, &k, &Multiplier::new(&AxConfig::Accurate, 16)?)?;
            let wino = winograd_conv3x3(&img, &k)?;
            let mut bad = 0;
            for y in 0..62 {
                for x in 0..62 {
                    bad += ((wino.get(x, y) - direct.get(x + 1, y + 1) as f64 / 16.0).abs() > 1e-9) as u64;
                }
            }
            (62 * 62, bad)
        }
    };
    Ok(SuiteResult { suite, checked, mismatches })
}
