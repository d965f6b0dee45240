//! Fixed-point approximate multipliers behind a single configuration type.

pub mod coop;
pub mod high_radix;
pub mod rounding;

use std::fmt;
use std::str::FromStr;

use crate::error::{AxError, Result};
use crate::fixed::{booth_sum, check_width, same_width, FixedOperand};

pub use coop::{roup2_default_schedule, Placement, TruncationPlacement};
pub use high_radix::{approx_high_radix_digit, HighRadixDigit};
pub use rounding::{
    decode_dyfxu_masks, dyfxu_masks, multiply_axfxu, multiply_axfxu_with, multiply_dyfxu, round_operand, RoundedOperand, RoundingMode,
};

/// One multiplier family with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AxConfig {
    Accurate,
    Rad { k: u32 },
    Perf { p: u32 },
    AxFxu { p: u32, r: u32 },
    DyFxu { mask_a: u64, mask_b: u64 },
    Roup1 { p: u32, r: u32 },
    Roup2 { p: u32, r: u32, schedule: Option<Vec<u32>> },
    Radr { k: u32, r: u32 },
    Drad { k: u32, m: u32 },
    Dradp { k: u32, m: u32 },
}

/// Switches for the readings that the circuit descriptions leave open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ApproxOptions {
    pub rounding: RoundingMode,
    pub placement: TruncationPlacement,
}

impl AxConfig {
    /// Checks the parameters against operand width `n`.
    pub fn validate(&self, n: u32) -> Result<()> {
        check_width(n)?;
        use AxConfig::*;
        match self {
            Accurate => Ok(()),
            Rad { k } => high_radix::check_k(*k, n),
            Perf { p } => rounding::check_pr(*p, 0, n),
            AxFxu { p, r } => rounding::check_pr(*p, *r, n),
            DyFxu { mask_a, mask_b } => decode_dyfxu_masks(*mask_a, *mask_b, n).map(|_| ()),
            Roup1 { p, r } => {
                rounding::check_pr(*p, 0, n)?;
                if *r + 1 >= 2 * n {
                    return Err(AxError::InvalidParameter(format!("ROUP1 column count R={r} for width {n}")));
                }
                Ok(())
            }
            Roup2 { p, r, schedule } => {
                rounding::check_pr(*p, *r, n)?;
                if let Some(s) = schedule {
                    if s.len() != (n / 2 - p) as usize {
                        return Err(AxError::InvalidParameter(format!("ROUP2 schedule needs {} entries, got {}", n / 2 - p, s.len())));
                    }
                    if s.iter().any(|&rj| rj + 1 >= n && rj != 0) {
                        return Err(AxError::InvalidParameter("ROUP2 schedule entry out of range".into()));
                    }
                }
                Ok(())
            }
            Radr { k, r } => {
                high_radix::check_k(*k, n)?;
                rounding::check_pr(0, *r, n)
            }
            Drad { k, m } | Dradp { k, m } => {
                high_radix::check_k(*k, n)?;
                high_radix::check_k(*m, n)
            }
        }
    }

    /// Family name used in cost tables and reports.
    pub fn family(&self) -> &'static str {
        use AxConfig::*;
        match self {
            Accurate => "acc",
            Rad { .. } => "rad",
            Perf { .. } => "perf",
            AxFxu { .. } => "axfxu",
            DyFxu { .. } => "dyfxu",
            Roup1 { .. } => "roup1",
            Roup2 { .. } => "roup2",
            Radr { .. } => "radr",
            Drad { .. } => "drad",
            Dradp { .. } => "dradp",
        }
    }

    /// Configurations at the edge of the legal range, where errors explode.
    pub fn is_extreme(&self, n: u32) -> bool {
        match self {
            AxConfig::AxFxu { p, r } | AxConfig::Roup2 { p, r, .. } => *p + 2 >= n / 2 && *r + 3 >= n,
            _ => false,
        }
    }
}

impl fmt::Display for AxConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AxConfig::*;
        match self {
            Accurate => write!(f, "acc"),
            Rad { k } => write!(f, "rad:k={k}"),
            Perf { p } => write!(f, "perf:p={p}"),
            AxFxu { p, r } => write!(f, "axfxu:p={p},r={r}"),
            DyFxu { mask_a, mask_b } => write!(f, "dyfxu:ma=0x{mask_a:x},mb=0x{mask_b:x}"),
            Roup1 { p, r } => write!(f, "roup1:p={p},r={r}"),
            Roup2 { p, r, schedule: None } => write!(f, "roup2:p={p},r={r}"),
            Roup2 { p, r, schedule: Some(s) } => {
                let s: Vec<String> = s.iter().map(|v| v.to_string()).collect();
                write!(f, "roup2:p={p},r={r},schedule={}", s.join("/"))
            }
            Radr { k, r } => write!(f, "radr:k={k},r={r}"),
            Drad { k, m } => write!(f, "drad:k={k},m={m}"),
            Dradp { k, m } => write!(f, "dradp:k={k},m={m}"),
        }
    }
}

fn parse_num(s: &str) -> Option<u64> {
    if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16).ok()
    } else {
        s.parse().ok()
    }
}

impl FromStr for AxConfig {
    type Err = AxError;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || AxError::ConfigParse(text.to_string());
        let text_t = text.trim();
        let (family, rest) = match text_t.split_once(':') {
            Some((f, r)) => (f, r),
            None => (text_t, ""),
        };
        let mut fields: Vec<(&str, &str)> = Vec::new();
        for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            fields.push(part.split_once('=').ok_or_else(bad)?);
        }
        let get = |key: &str| -> Result<u64> {
            fields.iter().find(|(k, _)| k.eq_ignore_ascii_case(key)).and_then(|(_, v)| parse_num(v)).ok_or_else(bad)
        };
        let get32 = |key: &str| -> Result<u32> { u32::try_from(get(key)?).map_err(|_| bad()) };
        let known = |keys: &[&str]| -> Result<()> {
            if fields.iter().all(|(k, _)| keys.iter().any(|x| k.eq_ignore_ascii_case(x))) {
                Ok(())
            } else {
                Err(bad())
            }
        };
        let cfg = match family.to_ascii_lowercase().as_str() {
            "acc" | "accurate" => {
                known(&[])?;
                AxConfig::Accurate
            }
            "rad" => {
                known(&["k"])?;
                AxConfig::Rad { k: get32("k")? }
            }
            "perf" => {
                known(&["p"])?;
                AxConfig::Perf { p: get32("p")? }
            }
            "axfxu" => {
                known(&["p", "r"])?;
                AxConfig::AxFxu { p: get32("p")?, r: get32("r")? }
            }
            "dyfxu" => {
                known(&["ma", "mb"])?;
                AxConfig::DyFxu { mask_a: get("ma")?, mask_b: get("mb")? }
            }
            "roup1" => {
                known(&["p", "r"])?;
                AxConfig::Roup1 { p: get32("p")?, r: get32("r")? }
            }
            "roup2" => {
                known(&["p", "r", "schedule"])?;
                let schedule = match fields.iter().find(|(k, _)| k.eq_ignore_ascii_case("schedule")) {
                    Some((_, v)) => Some(v.split('/').map(|x| x.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?),
                    None => None,
                };
                AxConfig::Roup2 { p: get32("p")?, r: get32("r")?, schedule }
            }
            "radr" => {
                known(&["k", "r"])?;
                AxConfig::Radr { k: get32("k")?, r: get32("r")? }
            }
            "drad" => {
                known(&["k", "m"])?;
                AxConfig::Drad { k: get32("k")?, m: get32("m")? }
            }
            "dradp" => {
                known(&["k", "m"])?;
                AxConfig::Dradp { k: get32("k")?, m: get32("m")? }
            }
            _ => return Err(bad()),
        };
        Ok(cfg)
    }
}

/// A configuration validated for one operand width, ready for repeated use on
/// raw integers.
#[derive(Debug, Clone)]
pub struct Multiplier {
    cfg: AxConfig,
    n: u32,
    opts: ApproxOptions,
    plan: Plan,
}

#[derive(Debug, Clone)]
enum Plan {
    Accurate,
    Rad { k: u32 },
    AxFxu { p: u32, r: u32 },
    DyFxu { mask_a: u64, mask_b: u64, p: u32, r: u32 },
    Roup1 { p: u32, r: u32 },
    Roup2 { p: u32, schedule: Vec<u32> },
    Radr { k: u32, r: u32 },
    Drad { k: u32, m: u32, perforate: bool },
}

impl Multiplier {
    pub fn new(cfg: &AxConfig, n: u32) -> Result<Self> {
        Self::with_options(cfg, n, ApproxOptions::default())
    }

    pub fn with_options(cfg: &AxConfig, n: u32, opts: ApproxOptions) -> Result<Self> {
        cfg.validate(n)?;
        let plan = match cfg {
            AxConfig::Accurate => Plan::Accurate,
            AxConfig::Rad { k } => Plan::Rad { k: *k },
            AxConfig::Perf { p } => Plan::AxFxu { p: *p, r: 0 },
            AxConfig::AxFxu { p, r } => Plan::AxFxu { p: *p, r: *r },
            AxConfig::DyFxu { mask_a, mask_b } => {
                let (p, r) = decode_dyfxu_masks(*mask_a, *mask_b, n)?;
                Plan::DyFxu { mask_a: *mask_a, mask_b: *mask_b, p, r }
            }
            AxConfig::Roup1 { p, r } => Plan::Roup1 { p: *p, r: *r },
            AxConfig::Roup2 { p, r, schedule } => {
                Plan::Roup2 { p: *p, schedule: schedule.clone().unwrap_or_else(|| roup2_default_schedule(n, *p, *r)) }
            }
            AxConfig::Radr { k, r } => Plan::Radr { k: *k, r: *r },
            AxConfig::Drad { k, m } => Plan::Drad { k: *k, m: *m, perforate: false },
            AxConfig::Dradp { k, m } => Plan::Drad { k: *k, m: *m, perforate: true },
        };
        Ok(Self { cfg: cfg.clone(), n, opts, plan })
    }

    pub fn config(&self) -> &AxConfig {
        &self.cfg
    }

    pub fn width(&self) -> u32 {
        self.n
    }

    /// Multiplies two values that must already fit in the configured width.
    #[inline]
    pub fn mul(&self, a: i64, b: i64) -> i128 {
        let n = self.n;
        match &self.plan {
            Plan::Accurate => booth_sum(a, b, n, 0),
            Plan::Rad { k } => a as i128 * rad_operand(b, *k) as i128,
            Plan::AxFxu { p, r } => rounding::axfxu_raw(a, b, n, *p, *r, self.opts.rounding),
            Plan::DyFxu { mask_a, mask_b, p, r } => rounding::dyfxu_raw(a, b, n, *mask_a, *mask_b, *p, *r),
            Plan::Roup1 { p, r } => coop::roup1_raw(a, b, n, *p, *r, self.opts.placement),
            Plan::Roup2 { p, schedule } => coop::roup2_raw(a, b, n, *p, schedule),
            Plan::Radr { k, r } => coop::radr_raw(a, b, n, *k, *r, self.opts.placement),
            Plan::Drad { k, m, perforate } => coop::drad_raw(a, b, *k, *m, *perforate),
        }
    }

    /// Checked multiply on typed operands.
    pub fn multiply(&self, a: &FixedOperand, b: &FixedOperand) -> Result<i128> {
        let n = same_width(a, b)?;
        if n != self.n {
            return Err(AxError::WidthMismatch(n, self.n));
        }
        Ok(self.mul(a.value(), b.value()))
    }
}

/// B̃ = B - y0 + ŷ0: the operand after approximate encoding of its k low bits.
#[inline]
pub fn rad_operand(b: i64, k: u32) -> i64 {
    let y0 = high_radix::low_digit(b, k);
    b - y0 + high_radix::approx_value(y0, k)
}

pub fn multiply_rad(a: &FixedOperand, b: &FixedOperand, k: u32) -> Result<i128> {
    Multiplier::new(&AxConfig::Rad { k }, a.width())?.multiply(a, b)
}

/// ROUP1 (`variant` 1) or ROUP2 (`variant` 2) with the default schedule.
pub fn multiply_roup(a: &FixedOperand, b: &FixedOperand, variant: u8, p: u32, r: u32) -> Result<i128> {
    let cfg = match variant {
        1 => AxConfig::Roup1 { p, r },
        2 => AxConfig::Roup2 { p, r, schedule: None },
        v => return Err(AxError::InvalidParameter(format!("ROUP variant {v}"))),
    };
    Multiplier::new(&cfg, a.width())?.multiply(a, b)
}

pub fn multiply_radr(a: &FixedOperand, b: &FixedOperand, k: u32, r: u32) -> Result<i128> {
    Multiplier::new(&AxConfig::Radr { k, r }, a.width())?.multiply(a, b)
}

pub fn multiply_drad(a: &FixedOperand, b: &FixedOperand, k: u32, m: u32, perforate: bool) -> Result<i128> {
    let cfg = if perforate { AxConfig::Dradp { k, m } } else { AxConfig::Drad { k, m } };
    Multiplier::new(&cfg, a.width())?.multiply(a, b)
}

pub fn multiply_dispatch(cfg: &AxConfig, a: &FixedOperand, b: &FixedOperand) -> Result<i128> {
    Multiplier::new(cfg, a.width())?.multiply(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(n: u32, v: i64) -> FixedOperand {
        FixedOperand::new(n, v).unwrap()
    }

    #[test]
    fn text_forms_round_trip() {
        for s in [
            "acc",
            "rad:k=6",
            "perf:p=2",
            "axfxu:p=2,r=4",
            "dyfxu:ma=0xfff8,mb=0xfff8",
            "roup1:p=1,r=4",
            "roup2:p=3,r=10",
            "roup2:p=3,r=10,schedule=10/9/8/7/6",
            "radr:k=6,r=8",
            "drad:k=8,m=8",
            "dradp:k=8,m=8",
        ] {
            let cfg: AxConfig = s.parse().unwrap();
            assert_eq!(cfg.to_string(), s);
        }
        assert!("rad".parse::<AxConfig>().is_err());
        assert!("rad:k=6,p=1".parse::<AxConfig>().is_err());
        assert!("foo:k=1".parse::<AxConfig>().is_err());
    }

    #[test]
    fn rad_hand_example() {
        assert_eq!(multiply_rad(&op(16, 100), &op(16, 5), 6).unwrap(), 400);
        assert_eq!(multiply_dispatch(&AxConfig::Rad { k: 6 }, &op(16, 100), &op(16, 5)).unwrap(), 400);
        assert_eq!(multiply_rad(&op(16, -999), &op(16, 0), 10).unwrap(), 0);
    }

    #[test]
    fn identity_configurations() {
        let (a, b) = (op(16, -12345), op(16, 31111));
        let exact = -12345i128 * 31111;
        assert_eq!(multiply_dispatch(&AxConfig::Accurate, &a, &b).unwrap(), exact);
        assert_eq!(multiply_dispatch(&AxConfig::AxFxu { p: 0, r: 0 }, &a, &b).unwrap(), exact);
        assert_eq!(multiply_roup(&a, &b, 2, 0, 0).unwrap(), exact);
        assert_eq!(multiply_radr(&a, &b, 6, 0).unwrap(), multiply_rad(&a, &b, 6).unwrap());
    }

    #[test]
    fn parameter_validation() {
        assert!(AxConfig::Rad { k: 5 }.validate(16).is_err());
        assert!(AxConfig::Rad { k: 16 }.validate(16).is_err());
        assert!(AxConfig::Rad { k: 14 }.validate(16).is_ok());
        assert!(AxConfig::AxFxu { p: 7, r: 0 }.validate(16).is_err());
        assert!(AxConfig::AxFxu { p: 6, r: 14 }.validate(16).is_ok());
        assert!(AxConfig::Roup2 { p: 3, r: 10, schedule: Some(vec![1, 2]) }.validate(16).is_err());
        assert!(multiply_dispatch(&AxConfig::Accurate, &op(8, 1), &op(16, 1)).is_err());
        assert!(AxConfig::AxFxu { p: 6, r: 14 }.is_extreme(16));
        assert!(!AxConfig::AxFxu { p: 2, r: 4 }.is_extreme(16));
    }
}
