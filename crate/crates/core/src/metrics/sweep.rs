use std::fmt;

use rayon::prelude::*;

use super::{sampling, ErrorSample, MetricsAccumulator, MetricsReport};
use crate::approx::{high_radix, rad_operand, ApproxOptions, AxConfig, Multiplier};
use crate::error::{AxError, Result};
use crate::fixed::check_width;
use crate::float::{FpFormat, FpMultiplier};

const CHUNK: usize = 1 << 14;

/// Operand domain of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Fixed(u32),
    Float(FpFormat),
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Fixed(n) => write!(f, "{n}"),
            Domain::Float(fmt) => write!(f, "{}", fmt.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// Every B of the width with A held at the given value.
    ExhaustiveB {
        a: i64,
    },
    /// Every (A, B) pair; only for narrow widths.
    ExhaustivePairs,
    UniformFixed,
    UniformNormalFp,
}

impl fmt::Display for Sampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sampler::ExhaustiveB { .. } => write!(f, "exhaustive-b"),
            Sampler::ExhaustivePairs => write!(f, "exhaustive"),
            Sampler::UniformFixed => write!(f, "uniform"),
            Sampler::UniformNormalFp => write!(f, "uniform-normal"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub domain: Domain,
    pub configs: Vec<AxConfig>,
    pub sampler: Sampler,
    pub samples: usize,
    pub seed: u64,
    pub thresholds: Vec<f64>,
    pub options: ApproxOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub config: AxConfig,
    pub domain: Domain,
    pub sampler: Sampler,
    pub samples: u64,
    pub seed: u64,
    pub report: MetricsReport,
}

impl SweepRow {
    pub const HEADER: [&'static str; 14] = [
        "config",
        "width_or_format",
        "sampler",
        "samples",
        "seed",
        "mred_pct",
        "pred2_pct",
        "pred5_pct",
        "pred10_pct",
        "pon_pct",
        "pun_pct",
        "mred",
        "max_red",
        "excluded",
    ];

    pub fn record(&self) -> Vec<String> {
        let r = &self.report;
        let pct = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_default();
        vec![
            self.config.to_string(),
            self.domain.to_string(),
            self.sampler.to_string(),
            self.samples.to_string(),
            self.seed.to_string(),
            format!("{:.2}", r.mred_pct()),
            pct(r.pred_pct(2.0)),
            pct(r.pred_pct(5.0)),
            pct(r.pred_pct(10.0)),
            format!("{:.2}", 100.0 * r.pon),
            format!("{:.2}", 100.0 * r.pun),
            format!("{:.9}", r.mred),
            format!("{:.6}", r.max_red),
            r.excluded_zero.to_string(),
        ]
    }
}

fn fold_chunks<T: Sync>(items: &[T], thresholds: &[f64], f: impl Fn(&T, &mut MetricsAccumulator) + Sync) -> MetricsAccumulator {
    let parts: Vec<MetricsAccumulator> = items
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = MetricsAccumulator::new(thresholds);
            for item in chunk {
                f(item, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = MetricsAccumulator::new(thresholds);
    for p in &parts {
        total.merge(p);
    }
    total
}

fn fixed_pairs(n: u32, sampler: Sampler, samples: usize, seed: u64) -> Result<Vec<(i64, i64)>> {
    match sampler {
        Sampler::UniformFixed => sampling::sample_uniform_fixed(n, samples, seed),
        Sampler::ExhaustiveB { a } => {
            crate::fixed::FixedOperand::new(n, a)?;
            if n > 24 {
                return Err(AxError::InvalidParameter(format!("exhaustive B over {n} bits")));
            }
            let half = 1i64 << (n - 1);
            Ok((-half..half).map(|b| (a, b)).collect())
        }
        Sampler::ExhaustivePairs => {
            if n > 12 {
                return Err(AxError::InvalidParameter(format!("exhaustive pairs over {n} bits")));
            }
            let half = 1i64 << (n - 1);
            Ok((-half..half).flat_map(|a| (-half..half).map(move |b| (a, b))).collect())
        }
        Sampler::UniformNormalFp => Err(AxError::InvalidParameter("floating-point sampler on a fixed-point width".into())),
    }
}

/// Evaluates every configuration on one shared operand stream. Rows come back
/// in configuration order and are identical for identical specs.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(spec.configs.len());
    match spec.domain {
        Domain::Fixed(n) => {
            check_width(n)?;
            let pairs = fixed_pairs(n, spec.sampler, spec.samples, spec.seed)?;
            for cfg in &spec.configs {
                let mul = Multiplier::with_options(cfg, n, spec.options)?;
                let acc = fold_chunks(&pairs, &spec.thresholds, |&(a, b), acc| acc.push_fixed(a as i128 * b as i128, mul.mul(a, b)));
                rows.push(row(spec, cfg, acc)?);
            }
        }
        Domain::Float(fmt) => {
            if spec.sampler != Sampler::UniformNormalFp {
                return Err(AxError::InvalidParameter("floating-point sweeps need the uniform-normal sampler".into()));
            }
            let pairs = sampling::sample_uniform_fp_normal(fmt, spec.samples, spec.seed);
            let exact = FpMultiplier::new(&AxConfig::Accurate, fmt)?;
            for cfg in &spec.configs {
                let mul = FpMultiplier::new(cfg, fmt)?;
                let acc = fold_chunks(&pairs, &spec.thresholds, |(a, b), acc| {
                    let pa = exact.multiply(a, b).expect("sampler emits normal data");
                    let pb = mul.multiply(a, b).expect("sampler emits normal data");
                    acc.push(&ErrorSample::float(&pa, &pb));
                });
                rows.push(row(spec, cfg, acc)?);
            }
        }
    }
    Ok(rows)
}

fn row(spec: &SweepSpec, cfg: &AxConfig, acc: MetricsAccumulator) -> Result<SweepRow> {
    let report = acc.report()?;
    Ok(SweepRow { config: cfg.clone(), domain: spec.domain, sampler: spec.sampler, samples: report.samples, seed: spec.seed, report })
}

/// Exact metrics of an operand-B mapping over all 2^n values of B, each with
/// probability 2^-n. The relative error of A·B̃ against A·B does not depend
/// on A, so A drops out.
pub fn mred_closed_form(n: u32, thresholds: &[f64], map_b: impl Fn(i64) -> i64 + Sync) -> Result<MetricsReport> {
    check_width(n)?;
    if n > 32 {
        return Err(AxError::InvalidParameter(format!("closed form over {n} bits")));
    }
    let half = 1i64 << (n - 1);
    let bs: Vec<i64> = (-half..half).collect();
    fold_chunks(&bs, thresholds, |&b, acc| acc.push_fixed(b as i128, map_b(b) as i128)).report()
}

pub fn mred_rad_closed_form(n: u32, k: u32, thresholds: &[f64]) -> Result<MetricsReport> {
    high_radix::check_k(k, n)?;
    mred_closed_form(n, thresholds, |b| rad_operand(b, k))
}
