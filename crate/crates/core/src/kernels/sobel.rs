//! Sobel edge detection and the correct-edge ratio.

use super::conv::{conv2d, Kernel2D};
use super::image::GrayImage;
use crate::approx::Multiplier;
use crate::error::{AxError, Result};

/// Fractional bits given to the Sobel coefficients, so that operand rounding
/// in A never erases a ±1 coefficient.
pub const SOBEL_FRAC_BITS: u32 = 8;

const GX: [i64; 9] = [-1, 0, 1, -2, 0, 2, -1, 0, 1];
const GY: [i64; 9] = [-1, -2, -1, 0, 0, 0, 1, 2, 1];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    pub width: usize,
    pub height: usize,
    pub edges: Vec<bool>,
}

impl EdgeMap {
    pub fn count(&self) -> usize {
        self.edges.iter().filter(|&&e| e).count()
    }

    /// Edges as a black/white image (edge = 255).
    pub fn to_image(&self) -> GrayImage {
        let px = self.edges.iter().map(|&e| if e { 255 } else { 0 }).collect();
        GrayImage::new(self.width, self.height, px).expect("dimensions match")
    }
}

/// Gradient magnitude |Gx| + |Gy| in coefficient-scaled units.
pub fn sobel_magnitude(img: &GrayImage, mul: &Multiplier) -> Result<Vec<i64>> {
    let gx = conv2d(img, &Kernel2D::from_integers(3, &GX, SOBEL_FRAC_BITS)?, mul)?;
    let gy = conv2d(img, &Kernel2D::from_integers(3, &GY, SOBEL_FRAC_BITS)?, mul)?;
    Ok(gx.data.iter().zip(&gy.data).map(|(a, b)| a.abs() + b.abs()).collect())
}

/// Marks pixels whose gradient magnitude exceeds `threshold` (pixel units).
pub fn sobel(img: &GrayImage, mul: &Multiplier, threshold: f64) -> Result<EdgeMap> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(AxError::InvalidParameter(format!("threshold {threshold}")));
    }
    let scaled = threshold * (1u64 << SOBEL_FRAC_BITS) as f64;
    let mag = sobel_magnitude(img, mul)?;
    Ok(EdgeMap { width: img.width(), height: img.height(), edges: mag.iter().map(|&m| m as f64 > scaled).collect() })
}

/// Fraction of reference edges also present in `test`; 1 when the reference
/// has no edges.
pub fn cer(test: &EdgeMap, reference: &EdgeMap) -> Result<f64> {
    if (test.width, test.height) != (reference.width, reference.height) {
        return Err(AxError::DimensionMismatch("edge maps differ in size".into()));
    }
    let total = reference.count();
    if total == 0 {
        return Ok(1.0);
    }
    let hit = test.edges.iter().zip(&reference.edges).filter(|(&t, &r)| t && r).count();
    Ok(hit as f64 / total as f64)
}
