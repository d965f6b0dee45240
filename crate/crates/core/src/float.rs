//! Binary floating-point data in half and single precision, an accurate
//! multiplier with round-to-nearest-even, and approximate multipliers whose
//! significand product runs through the fixed-point engines.

use std::fmt;

use crate::approx::rounding::{axfxu_raw, check_pr, decode_dyfxu_masks, dyfxu_raw, RoundingMode};
use crate::approx::{AxConfig, Multiplier};
use crate::error::{AxError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpFormat {
    pub total_bits: u32,
    pub exp_bits: u32,
    pub mant_bits: u32,
    pub bias: i64,
}

impl FpFormat {
    pub const HALF: FpFormat = FpFormat { total_bits: 16, exp_bits: 5, mant_bits: 10, bias: 15 };
    pub const SINGLE: FpFormat = FpFormat { total_bits: 32, exp_bits: 8, mant_bits: 23, bias: 127 };

    /// Significand width m, including the hidden bit.
    pub fn significand_bits(&self) -> u32 {
        self.mant_bits + 1
    }

    pub fn max_exponent(&self) -> u32 {
        (1 << self.exp_bits) - 1
    }

    /// Width of the signed engine that multiplies significands: m plus a zero
    /// sign bit, rounded up to even.
    pub fn engine_width(&self) -> u32 {
        let w = self.significand_bits() + 1;
        w + (w % 2)
    }

    pub fn name(&self) -> &'static str {
        match *self {
            FpFormat::HALF => "half",
            FpFormat::SINGLE => "single",
            _ => "custom",
        }
    }

    pub fn parse(name: &str) -> Result<FpFormat> {
        match name.to_ascii_lowercase().as_str() {
            "half" | "fp16" | "binary16" => Ok(FpFormat::HALF),
            "single" | "fp32" | "binary32" => Ok(FpFormat::SINGLE),
            _ => Err(AxError::InvalidParameter(format!("unknown floating-point format '{name}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpClass {
    Normal,
    Subnormal,
    Zero,
    Infinite,
    NaN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpDatum {
    pub format: FpFormat,
    pub sign: u8,
    pub exponent: u32,
    pub mantissa: u64,
}

impl FpDatum {
    pub fn new(format: FpFormat, sign: u8, exponent: u32, mantissa: u64) -> Result<Self> {
        if sign > 1 || exponent > format.max_exponent() || mantissa >> format.mant_bits != 0 {
            return Err(AxError::InvalidParameter("floating-point field out of range".into()));
        }
        Ok(Self { format, sign, exponent, mantissa })
    }

    pub fn from_bits(format: FpFormat, bits: u64) -> Result<Self> {
        if format.total_bits < 64 && bits >> format.total_bits != 0 {
            return Err(AxError::InvalidParameter(format!("bit pattern 0x{bits:x} too wide")));
        }
        let mant = bits & ((1u64 << format.mant_bits) - 1);
        let exp = ((bits >> format.mant_bits) & format.max_exponent() as u64) as u32;
        let sign = ((bits >> (format.total_bits - 1)) & 1) as u8;
        Self::new(format, sign, exp, mant)
    }

    pub fn to_bits(&self) -> u64 {
        ((self.sign as u64) << (self.format.total_bits - 1)) | ((self.exponent as u64) << self.format.mant_bits) | self.mantissa
    }

    /// Parses a hexadecimal bit pattern such as `0x3C00`.
    pub fn parse_hex(format: FpFormat, text: &str) -> Result<Self> {
        let t = text.trim();
        let digits = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
        let bits = u64::from_str_radix(digits, 16).map_err(|_| AxError::InvalidParameter(format!("not a hex pattern: '{text}'")))?;
        Self::from_bits(format, bits)
    }

    pub fn classify(&self) -> FpClass {
        fp_classify(self)
    }

    /// Significand 1.M as an m-bit integer.
    pub fn significand(&self) -> u64 {
        (1u64 << self.format.mant_bits) | self.mantissa
    }

    /// Decoded value for normal, zero and subnormal data.
    pub fn to_f64(&self) -> f64 {
        let f = self.format;
        let s = if self.sign == 1 { -1.0 } else { 1.0 };
        match self.classify() {
            FpClass::Zero => s * 0.0,
            FpClass::Infinite => s * f64::INFINITY,
            FpClass::NaN => f64::NAN,
            FpClass::Subnormal => s * self.mantissa as f64 * 2f64.powi((1 - f.bias - f.mant_bits as i64) as i32),
            FpClass::Normal => s * self.significand() as f64 * 2f64.powi((self.exponent as i64 - f.bias - f.mant_bits as i64) as i32),
        }
    }
}

impl fmt::Display for FpDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.format.total_bits.div_ceil(4) as usize;
        write!(f, "0x{:0width$X}", self.to_bits(), width = digits)
    }
}

pub fn fp_classify(x: &FpDatum) -> FpClass {
    let top = x.format.max_exponent();
    match (x.exponent, x.mantissa) {
        (0, 0) => FpClass::Zero,
        (0, _) => FpClass::Subnormal,
        (e, 0) if e == top => FpClass::Infinite,
        (e, _) if e == top => FpClass::NaN,
        _ => FpClass::Normal,
    }
}

/// Outcome class of a floating-point product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Normal,
    Overflow,
    Underflow,
}

/// A product together with the bookkeeping needed for error accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FpProduct {
    pub verdict: Verdict,
    pub sign: u8,
    /// Present only for normal results.
    pub datum: Option<FpDatum>,
    /// Biased result exponent including the normalization increment, before
    /// the range check.
    pub exponent: i64,
    pub normalized: bool,
    /// Unrounded significand product, scaled by 2^(2(m-1)).
    pub significand_product: u128,
}

fn check_normal(x: &FpDatum, fmt: FpFormat) -> Result<()> {
    if x.format != fmt {
        return Err(AxError::InvalidParameter("operand format differs from the requested format".into()));
    }
    if x.classify() != FpClass::Normal {
        return Err(AxError::NonNormalInput(x.to_string()));
    }
    Ok(())
}

fn range_verdict(e: i64, fmt: FpFormat) -> Verdict {
    if e < 1 {
        Verdict::Underflow
    } else if e > fmt.max_exponent() as i64 - 1 {
        Verdict::Overflow
    } else {
        Verdict::Normal
    }
}

fn finish(fmt: FpFormat, sign: u8, e: i64, normalized: bool, mant: u64, product: u128) -> FpProduct {
    let verdict = range_verdict(e, fmt);
    let datum = match verdict {
        Verdict::Normal => Some(FpDatum { format: fmt, sign, exponent: e as u32, mantissa: mant }),
        _ => None,
    };
    FpProduct { verdict, sign, datum, exponent: e, normalized, significand_product: product }
}

/// Round-to-nearest-even multiplication of two normal data.
pub fn fp_multiply_accurate(a: &FpDatum, b: &FpDatum, fmt: FpFormat) -> Result<FpProduct> {
    check_normal(a, fmt)?;
    check_normal(b, fmt)?;
    let m = fmt.significand_bits();
    let sign = a.sign ^ b.sign;
    let e0 = a.exponent as i64 + b.exponent as i64 - fmt.bias;
    let product = a.significand() as u128 * b.significand() as u128;
    let mut normalized = product >> (2 * m - 1) != 0;
    let drop = (m - 1) + normalized as u32;
    let mut kept = product >> drop;
    let rem = product & ((1u128 << drop) - 1);
    let half = 1u128 << (drop - 1);
    if rem > half || (rem == half && kept & 1 == 1) {
        kept += 1;
    }
    if kept >> m != 0 {
        kept >>= 1;
        normalized = true;
    }
    let e = e0 + normalized as i64;
    let mant = (kept as u64) & ((1u64 << fmt.mant_bits) - 1);
    Ok(finish(fmt, sign, e, normalized, mant, product))
}

fn check_fp_pr(p: u32, r: u32, fmt: FpFormat) -> Result<()> {
    let m = fmt.significand_bits();
    if 2 * p + 2 >= m || (r + 1 >= m && r != 0) {
        return Err(AxError::InvalidParameter(format!("P={p}, R={r} out of range for {m}-bit significands")));
    }
    check_pr(p, r, fmt.engine_width())
}

/// Builds the approximate result from a significand product computed by an
/// approximate engine. No rounding unit: the mantissa is truncated. A product
/// whose two integer bits read 00 (below 1.0, or wrapped past 4.0) is reported
/// as overflow unless the exponent already underflows.
pub fn fp_assemble_truncated(a: &FpDatum, b: &FpDatum, fmt: FpFormat, product: i128) -> FpProduct {
    let m = fmt.significand_bits();
    let sign = a.sign ^ b.sign;
    let e0 = a.exponent as i64 + b.exponent as i64 - fmt.bias;
    let p = product.max(0) as u128;
    if product < 0 || p >> (2 * m) != 0 || p >> (2 * m - 2) == 0 {
        let verdict = if e0 < 1 { Verdict::Underflow } else { Verdict::Overflow };
        return FpProduct { verdict, sign, datum: None, exponent: e0, normalized: false, significand_product: p };
    }
    let normalized = p >> (2 * m - 1) != 0;
    let kept = p >> ((m - 1) + normalized as u32);
    let mant = (kept as u64) & ((1u64 << fmt.mant_bits) - 1);
    finish(fmt, sign, e0 + normalized as i64, normalized, mant, p)
}

pub fn fp_multiply_axfpu(a: &FpDatum, b: &FpDatum, fmt: FpFormat, p: u32, r: u32) -> Result<FpProduct> {
    check_normal(a, fmt)?;
    check_normal(b, fmt)?;
    check_fp_pr(p, r, fmt)?;
    let prod = axfxu_raw(a.significand() as i64, b.significand() as i64, fmt.engine_width(), p, r, RoundingMode::DropR);
    Ok(fp_assemble_truncated(a, b, fmt, prod))
}

/// Runtime-masked variant; masks are over the significand engine width.
pub fn fp_multiply_dyfpu(a: &FpDatum, b: &FpDatum, fmt: FpFormat, mask_a: u64, mask_b: u64) -> Result<FpProduct> {
    check_normal(a, fmt)?;
    check_normal(b, fmt)?;
    let n = fmt.engine_width();
    let (p, r) = decode_dyfxu_masks(mask_a, mask_b, n)?;
    check_fp_pr(p, r, fmt)?;
    let prod = dyfxu_raw(a.significand() as i64, b.significand() as i64, n, mask_a, mask_b, p, r);
    Ok(fp_assemble_truncated(a, b, fmt, prod))
}

/// A floating-point multiplier whose significand product is computed by any
/// fixed-point configuration. `Accurate` selects the rounding multiplier.
#[derive(Debug, Clone)]
pub struct FpMultiplier {
    fmt: FpFormat,
    engine: Option<Multiplier>,
}

impl FpMultiplier {
    pub fn new(cfg: &AxConfig, fmt: FpFormat) -> Result<Self> {
        let engine = match cfg {
            AxConfig::Accurate => None,
            AxConfig::AxFxu { p, r } => {
                check_fp_pr(*p, *r, fmt)?;
                Some(Multiplier::new(cfg, fmt.engine_width())?)
            }
            AxConfig::Perf { p } => {
                check_fp_pr(*p, 0, fmt)?;
                Some(Multiplier::new(cfg, fmt.engine_width())?)
            }
            other => Some(Multiplier::new(other, fmt.engine_width())?),
        };
        Ok(Self { fmt, engine })
    }

    pub fn format(&self) -> FpFormat {
        self.fmt
    }

    pub fn multiply(&self, a: &FpDatum, b: &FpDatum) -> Result<FpProduct> {
        match &self.engine {
            None => fp_multiply_accurate(a, b, self.fmt),
            Some(engine) => {
                check_normal(a, self.fmt)?;
                check_normal(b, self.fmt)?;
                let prod = engine.mul(a.significand() as i64, b.significand() as i64);
                Ok(fp_assemble_truncated(a, b, self.fmt, prod))
            }
        }
    }
}

/// Converts a host `f32` into a single-precision datum.
pub fn from_f32(x: f32) -> FpDatum {
    FpDatum::from_bits(FpFormat::SINGLE, x.to_bits() as u64).expect("32-bit pattern")
}

/// Converts a single-precision datum into a host `f32`.
pub fn to_f32(x: &FpDatum) -> f32 {
    f32::from_bits(x.to_bits() as u32)
}
