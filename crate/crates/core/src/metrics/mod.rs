//! Relative-error metrics, samplers, closed-form evaluation, Pareto fronts and
//! sweep drivers.

pub mod pareto;
pub mod sampling;
pub mod sweep;

use crate::error::{AxError, Result};
use crate::float::{FpProduct, Verdict};

pub use pareto::pareto_front;
pub use sampling::{sample_uniform_fixed, sample_uniform_fp_normal};
pub use sweep::{mred_closed_form, mred_rad_closed_form, run_sweep, Domain, Sampler, SweepRow, SweepSpec};

/// Thresholds (in percent) reported by default.
pub const DEFAULT_THRESHOLDS: [f64; 3] = [2.0, 5.0, 10.0];

/// Relative error distance, or `None` when the accurate value is zero and the
/// approximate one is not.
pub fn red(acc: f64, approx: f64) -> Option<f64> {
    if acc == 0.0 {
        return if approx == 0.0 { Some(0.0) } else { None };
    }
    Some(((acc - approx) / acc).abs())
}

/// One accurate/approximate pair with the outcome class of each side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSample {
    pub accurate: f64,
    pub approximate: f64,
    pub outcome: (Verdict, Verdict),
}

impl ErrorSample {
    pub fn fixed(accurate: i128, approximate: i128) -> Self {
        Self { accurate: accurate as f64, approximate: approximate as f64, outcome: (Verdict::Normal, Verdict::Normal) }
    }

    /// Builds a floating-point sample. When both products are normal and
    /// normalized alike, the error is that of the significand products;
    /// otherwise decoded values are compared.
    pub fn float(acc: &FpProduct, approx: &FpProduct) -> Self {
        let outcome = (acc.verdict, approx.verdict);
        let (a, b) = match (acc.datum, approx.datum) {
            (Some(da), Some(db)) => {
                if acc.normalized == approx.normalized {
                    (acc.significand_product as f64, approx.significand_product as f64)
                } else {
                    (da.to_f64(), db.to_f64())
                }
            }
            _ => (0.0, 0.0),
        };
        Self { accurate: a, approximate: b, outcome }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self.outcome, (Verdict::Underflow, Verdict::Overflow) | (Verdict::Overflow, Verdict::Underflow))
    }
}

const RED_SCALE: f64 = 18446744073709551616.0; // 2^64

/// Mergeable accumulator. RED values are summed as 64.64 fixed-point integers
/// so that the result does not depend on sample order or partitioning.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsAccumulator {
    thresholds: Vec<f64>,
    samples: u64,
    included: u64,
    red_sum: u128,
    max_red_bits: u64,
    pred_counts: Vec<u64>,
    excluded_zero: u64,
    pon: u64,
    pun: u64,
    infeasible: u64,
}

impl MetricsAccumulator {
    /// `thresholds` are the M values of PRED_M in percent.
    pub fn new(thresholds: &[f64]) -> Self {
        Self {
            thresholds: thresholds.to_vec(),
            samples: 0,
            included: 0,
            red_sum: 0,
            max_red_bits: 0,
            pred_counts: vec![0; thresholds.len()],
            excluded_zero: 0,
            pon: 0,
            pun: 0,
            infeasible: 0,
        }
    }

    pub fn push(&mut self, s: &ErrorSample) {
        self.samples += 1;
        match s.outcome {
            (Verdict::Normal, Verdict::Normal) => self.push_red(s.accurate, s.approximate),
            (Verdict::Overflow, Verdict::Overflow) | (Verdict::Underflow, Verdict::Underflow) => self.push_red(0.0, 0.0),
            (Verdict::Normal, Verdict::Overflow) | (Verdict::Overflow, Verdict::Normal) => self.pon += 1,
            (Verdict::Normal, Verdict::Underflow) | (Verdict::Underflow, Verdict::Normal) => self.pun += 1,
            _ => self.infeasible += 1,
        }
    }

    pub fn push_fixed(&mut self, acc: i128, approx: i128) {
        self.samples += 1;
        self.push_red(acc as f64, approx as f64);
    }

    fn push_red(&mut self, acc: f64, approx: f64) {
        let Some(r) = red(acc, approx) else {
            self.excluded_zero += 1;
            return;
        };
        self.included += 1;
        self.red_sum += (r * RED_SCALE).round() as u128;
        self.max_red_bits = self.max_red_bits.max(r.to_bits());
        let diff = (acc - approx).abs() * 100.0;
        let base = acc.abs();
        for (count, &m) in self.pred_counts.iter_mut().zip(&self.thresholds) {
            if diff > 0.0 && diff >= m * base {
                *count += 1;
            }
        }
    }

    pub fn merge(&mut self, other: &MetricsAccumulator) {
        assert_eq!(self.thresholds, other.thresholds, "accumulators with different thresholds");
        self.samples += other.samples;
        self.included += other.included;
        self.red_sum += other.red_sum;
        self.max_red_bits = self.max_red_bits.max(other.max_red_bits);
        for (a, b) in self.pred_counts.iter_mut().zip(&other.pred_counts) {
            *a += b;
        }
        self.excluded_zero += other.excluded_zero;
        self.pon += other.pon;
        self.pun += other.pun;
        self.infeasible += other.infeasible;
    }

    pub fn report(&self) -> Result<MetricsReport> {
        if self.samples == 0 {
            return Err(AxError::EmptyStream);
        }
        let inc = self.included.max(1) as f64;
        let total = self.samples as f64;
        Ok(MetricsReport {
            mred: self.red_sum as f64 / RED_SCALE / inc,
            pred: self.thresholds.iter().zip(&self.pred_counts).map(|(&m, &c)| (m, c as f64 / inc)).collect(),
            pon: self.pon as f64 / total,
            pun: self.pun as f64 / total,
            max_red: f64::from_bits(self.max_red_bits),
            samples: self.samples,
            included: self.included,
            excluded_zero: self.excluded_zero,
            pon_count: self.pon,
            pun_count: self.pun,
            infeasible: self.infeasible,
        })
    }
}

/// Summary metrics; all probabilities are fractions in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub mred: f64,
    /// (M in percent, fraction of included samples with RED ≥ M%).
    pub pred: Vec<(f64, f64)>,
    pub pon: f64,
    pub pun: f64,
    pub max_red: f64,
    pub samples: u64,
    pub included: u64,
    pub excluded_zero: u64,
    pub pon_count: u64,
    pub pun_count: u64,
    pub infeasible: u64,
}

impl MetricsReport {
    pub fn mred_pct(&self) -> f64 {
        100.0 * self.mred
    }

    /// PRED at threshold `m` percent, as a percentage.
    pub fn pred_pct(&self, m: f64) -> Option<f64> {
        self.pred.iter().find(|(t, _)| *t == m).map(|(_, f)| 100.0 * f)
    }
}

pub fn metrics<'a>(stream: impl IntoIterator<Item = &'a ErrorSample>, thresholds: &[f64]) -> Result<MetricsReport> {
    let mut acc = MetricsAccumulator::new(thresholds);
    for s in stream {
        acc.push(s);
    }
    acc.report()
}
