//! 3×3 Gaussian blur in single precision through an approximate
//! floating-point multiplier.

use super::image::GrayImage;
use crate::error::{AxError, Result};
use crate::float::{from_f32, to_f32, FpFormat, FpMultiplier, Verdict};

const WEIGHTS: [f32; 9] = [1.0, 2.0, 1.0, 2.0, 4.0, 2.0, 1.0, 2.0, 1.0];

/// Blurs with weights [1 2 1; 2 4 2; 1 2 1]/16 and zero padding. Products
/// run through `mul` with the pixel as operand A and the weight as operand B;
/// zero pixels contribute zero without a multiply, and sums are native
/// single-precision additions. Results round to nearest and clamp to 0..=255.
pub fn gaussian_blur_fp(img: &GrayImage, mul: &FpMultiplier) -> Result<GrayImage> {
    if mul.format() != FpFormat::SINGLE {
        return Err(AxError::InvalidParameter("blur runs in single precision".into()));
    }
    let weights: Vec<_> = WEIGHTS.iter().map(|w| from_f32(w / 16.0)).collect();
    let mut out = GrayImage::filled(img.width(), img.height(), 0);
    for y in 0..img.height() {
        for x in 0..img.width() {
            let mut acc = 0.0f32;
            for u in 0..3 {
                for v in 0..3 {
                    let p = img.get_padded(x as isize + v as isize - 1, y as isize + u as isize - 1);
                    if p == 0 {
                        continue;
                    }
                    let prod = mul.multiply(&from_f32(p as f32), &weights[u * 3 + v])?;
                    acc += match (prod.verdict, prod.datum) {
                        (Verdict::Normal, Some(d)) => to_f32(&d),
                        (Verdict::Overflow, _) => f32::INFINITY,
                        _ => 0.0,
                    };
                }
            }
            out.set(x, y, acc.round().clamp(0.0, 255.0) as u8);
        }
    }
    Ok(out)
}
