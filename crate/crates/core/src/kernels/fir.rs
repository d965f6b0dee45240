//! Direct-form FIR filtering with a configurable multiplier.

use std::f64::consts::PI;

use crate::approx::Multiplier;
use crate::error::{AxError, Result};

/// Hamming-windowed sinc low-pass taps quantized to `bits`-bit signed values
/// with `bits - 1` fractional bits.
pub fn lowpass_taps(count: usize, cutoff_hz: f64, sample_rate_hz: f64, bits: u32) -> Vec<i64> {
    let fc = cutoff_hz / sample_rate_hz;
    let mid = (count as f64 - 1.0) / 2.0;
    let scale = (1i64 << (bits - 1)) as f64;
    let max = (1i64 << (bits - 1)) - 1;
    (0..count)
        .map(|i| {
            let t = i as f64 - mid;
            let sinc = if t == 0.0 { 2.0 * fc } else { (2.0 * PI * fc * t).sin() / (PI * t) };
            let window = 0.54 - 0.46 * (2.0 * PI * i as f64 / (count as f64 - 1.0)).cos();
            ((sinc * window * scale).round() as i64).clamp(-max - 1, max)
        })
        .collect()
}

/// The 32-tap, 20 kHz (at 48 kHz) low-pass filter with 16-bit coefficients.
pub fn default_taps() -> Vec<i64> {
    lowpass_taps(32, 20_000.0, 48_000.0, 16)
}

/// y[t] = Σ_i mul(h_i, x[t-i]) with zero history. The sample is the B operand.
pub fn fir(signal: &[i64], taps: &[i64], mul: &Multiplier) -> Result<Vec<i128>> {
    if taps.is_empty() {
        return Err(AxError::InvalidParameter("FIR needs at least one tap".into()));
    }
    let n = mul.width();
    let (lo, hi) = (crate::fixed::min_value(n), crate::fixed::max_value(n));
    let fits = |v: &i64| (*v as i128) >= lo && (*v as i128) <= hi;
    if !taps.iter().all(fits) || !signal.iter().all(fits) {
        return Err(AxError::InvalidParameter(format!("operands do not fit the {n}-bit multiplier")));
    }
    let acc_bits = 2 * n + taps.len().next_power_of_two().trailing_zeros();
    let limit = 1i128 << (acc_bits.min(127) - 1);
    let mut out = Vec::with_capacity(signal.len());
    for t in 0..signal.len() {
        let mut acc = 0i128;
        for (i, &h) in taps.iter().enumerate().take(t + 1) {
            acc += mul.mul(h, signal[t - i]);
        }
        if acc >= limit || acc < -limit {
            return Err(AxError::AccumulatorOverflow(format!("sample {t}")));
        }
        out.push(acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::AxConfig;

    fn acc() -> Multiplier {
        Multiplier::new(&AxConfig::Accurate, 16).unwrap()
    }

    #[test]
    fn zero_and_impulse() {
        let taps = default_taps();
        assert!(fir(&[0; 64], &taps, &acc()).unwrap().iter().all(|&v| v == 0));
        let mut x = vec![0; 40];
        x[0] = 1;
        let y = fir(&x, &taps, &acc()).unwrap();
        for (i, &h) in taps.iter().enumerate() {
            assert_eq!(y[i], h as i128);
        }
    }

    #[test]
    fn taps_are_symmetric_low_pass() {
        let t = default_taps();
        assert_eq!(t.len(), 32);
        for i in 0..16 {
            assert_eq!(t[i], t[31 - i]);
        }
        let dc: i64 = t.iter().sum();
        assert!((dc - 32768).abs() < 400, "DC gain {dc}");
    }

    #[test]
    fn rejects_empty_taps_and_wide_samples() {
        assert!(fir(&[1], &[], &acc()).is_err());
        assert!(fir(&[1 << 20], &[1], &acc()).is_err());
    }
}
