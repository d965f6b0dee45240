//! Direct 2D convolution through a configurable multiplier, and the
//! F(2×2, 3×3) Winograd minimal-filtering algorithm.

use rayon::prelude::*;

use super::image::{GrayImage, Raster};
use crate::approx::Multiplier;
use crate::error::{AxError, Result};

/// Square kernel of fixed-point coefficients, each scaled by 2^frac_bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel2D {
    size: usize,
    coeffs: Vec<i64>,
    frac_bits: u32,
}

impl Kernel2D {
    pub fn new(size: usize, coeffs: Vec<i64>, frac_bits: u32) -> Result<Self> {
        if size == 0 || size.is_multiple_of(2) {
            return Err(AxError::InvalidParameter(format!("kernel size {size} must be odd")));
        }
        if coeffs.len() != size * size {
            return Err(AxError::DimensionMismatch(format!("{} coefficients for a {size}x{size} kernel", coeffs.len())));
        }
        Ok(Self { size, coeffs, frac_bits })
    }

    /// Integer coefficients scaled up by 2^frac_bits.
    pub fn from_integers(size: usize, values: &[i64], frac_bits: u32) -> Result<Self> {
        Self::new(size, values.iter().map(|v| v << frac_bits).collect(), frac_bits)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn coeff(&self, row: usize, col: usize) -> i64 {
        self.coeffs[row * self.size + col]
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coefficients as reals.
    pub fn real(&self, row: usize, col: usize) -> f64 {
        self.coeff(row, col) as f64 / (1u64 << self.frac_bits) as f64
    }
}

/// out(x, y) = Σ_{u,v} mul(k[u][v], img(x+v-c, y+u-c)) with zero padding.
/// The pixel is the multiplier's B operand, left-aligned below the sign bit
/// (shifted up by n-9 bits); each sum is shifted back down, so accurate
/// results are in plain pixel units. Rows are computed in parallel.
pub fn conv2d(img: &GrayImage, k: &Kernel2D, mul: &Multiplier) -> Result<Raster<i64>> {
    let n = mul.width();
    let (lo, hi) = (crate::fixed::min_value(n), crate::fixed::max_value(n));
    if k.coeffs.iter().any(|&c| (c as i128) < lo || (c as i128) > hi) || hi < 255 {
        return Err(AxError::InvalidParameter(format!("operands do not fit the {n}-bit multiplier")));
    }
    let acc_bits = 2 * n + (k.size * k.size).next_power_of_two().trailing_zeros();
    let limit = 1i128 << (acc_bits.min(127) - 1);
    let (w, h) = (img.width(), img.height());
    let c = (k.size / 2) as isize;
    let shift = n - 9;
    let rows: Vec<Result<Vec<i64>>> = (0..h)
        .into_par_iter()
        .map(|y| {
            let mut row = Vec::with_capacity(w);
            for x in 0..w {
                let mut acc = 0i128;
                for u in 0..k.size {
                    for v in 0..k.size {
                        let p = img.get_padded(x as isize + v as isize - c, y as isize + u as isize - c);
                        acc += mul.mul(k.coeff(u, v), (p as i64) << shift);
                    }
                }
                let acc = acc >> shift;
                if acc >= limit || acc < -limit || acc > i64::MAX as i128 || acc < i64::MIN as i128 {
                    return Err(AxError::AccumulatorOverflow(format!("pixel ({x}, {y})")));
                }
                row.push(acc as i64);
            }
            Ok(row)
        })
        .collect();
    let mut data = Vec::with_capacity(w * h);
    for r in rows {
        data.extend(r?);
    }
    Ok(Raster { width: w, height: h, data })
}

// Kernel transform (4×3), input transform Bᵀ (4×4) and output transform Cᵀ (2×4).
const KT: [[f64; 3]; 4] = [[1.0, 0.0, 0.0], [0.5, 0.5, 0.5], [0.5, -0.5, 0.5], [0.0, 0.0, 1.0]];
const BT: [[f64; 4]; 4] = [[1.0, 0.0, -1.0, 0.0], [0.0, 1.0, 1.0, 0.0], [0.0, -1.0, 1.0, 0.0], [0.0, 1.0, 0.0, -1.0]];
const CT: [[f64; 4]; 2] = [[1.0, 1.0, 1.0, 0.0], [0.0, 1.0, -1.0, -1.0]];

/// Winograd F(2×2, 3×3) over the valid region: output is (w-2)×(h-2) with
/// out(x, y) aligned to the direct result at (x+1, y+1).
pub fn winograd_conv3x3(img: &GrayImage, k: &Kernel2D) -> Result<Raster<f64>> {
    if k.size != 3 {
        return Err(AxError::InvalidParameter("Winograd F(2x2,3x3) needs a 3x3 kernel".into()));
    }
    let (w, h) = (img.width(), img.height());
    if w % 2 == 1 || h % 2 == 1 || w < 4 || h < 4 {
        return Err(AxError::DimensionMismatch(format!("Winograd needs even dimensions of at least 4, got {w}x{h}")));
    }
    let mut g = [[0.0; 3]; 3];
    for (r, row) in g.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = k.real(r, c);
        }
    }
    // G = KT · g · KTᵀ
    let mut kg = [[0.0; 3]; 4];
    for i in 0..4 {
        for j in 0..3 {
            kg[i][j] = (0..3).map(|t| KT[i][t] * g[t][j]).sum();
        }
    }
    let mut gt = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            gt[i][j] = (0..3).map(|t| kg[i][t] * KT[j][t]).sum();
        }
    }
    let (ow, oh) = (w - 2, h - 2);
    let mut data = vec![0.0; ow * oh];
    for ty in (0..oh).step_by(2) {
        for tx in (0..ow).step_by(2) {
            let mut d = [[0.0; 4]; 4];
            for (i, row) in d.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = img.get(tx + j, ty + i) as f64;
                }
            }
            // D = Bᵀ d B
            let mut bd = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    bd[i][j] = (0..4).map(|t| BT[i][t] * d[t][j]).sum();
                }
            }
            let mut f = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    let dij: f64 = (0..4).map(|t| bd[i][t] * BT[j][t]).sum();
                    f[i][j] = dij * gt[i][j];
                }
            }
            // Y = Cᵀ F C
            let mut cf = [[0.0; 4]; 2];
            for i in 0..2 {
                for j in 0..4 {
                    cf[i][j] = (0..4).map(|t| CT[i][t] * f[t][j]).sum();
                }
            }
            for i in 0..2 {
                for j in 0..2 {
                    data[(ty + i) * ow + tx + j] = (0..4).map(|t| cf[i][t] * CT[j][t]).sum();
                }
            }
        }
    }
    Ok(Raster { width: ow, height: oh, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::AxConfig;

    fn acc16() -> Multiplier {
        Multiplier::new(&AxConfig::Accurate, 16).unwrap()
    }

    #[test]
    fn zero_image_gives_zero() {
        let k = Kernel2D::from_integers(3, &[1, 2, 3, 4, 5, 6, 7, 8, 9], 0).unwrap();
        let out = conv2d(&GrayImage::filled(6, 4, 0), &k, &acc16()).unwrap();
        assert!(out.data.iter().all(|&v| v == 0));
        let wg = winograd_conv3x3(&GrayImage::filled(6, 4, 0), &k).unwrap();
        assert!(wg.data.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn impulse_imprints_flipped_kernel() {
        let mut img = GrayImage::filled(5, 5, 0);
        img.set(2, 2, 1);
        let vals = [1, 2, 3, 4, 5, 6, 7, 8, 9];
        let k = Kernel2D::from_integers(3, &vals, 0).unwrap();
        let out = conv2d(&img, &k, &acc16()).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(out.get(1 + v, 1 + u), vals[(2 - u) * 3 + (2 - v)]);
            }
        }
    }

    #[test]
    fn winograd_identity_kernel() {
        let px: Vec<u8> = (0..36).map(|i| (i * 7 % 256) as u8).collect();
        let img = GrayImage::new(6, 6, px).unwrap();
        let k = Kernel2D::from_integers(3, &[0, 0, 0, 0, 1, 0, 0, 0, 0], 0).unwrap();
        let out = winograd_conv3x3(&img, &k).unwrap();
        for y in 0..4 {
            for x in 0..4 {
                assert_eq!(out.get(x, y), img.get(x + 1, y + 1) as f64);
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Kernel2D::new(2, vec![0; 4], 0).is_err());
        assert!(Kernel2D::new(3, vec![0; 8], 0).is_err());
        let k = Kernel2D::from_integers(3, &[0; 9], 0).unwrap();
        assert!(winograd_conv3x3(&GrayImage::filled(5, 6, 0), &k).is_err());
        let k5 = Kernel2D::from_integers(5, &[0; 25], 0).unwrap();
        assert!(winograd_conv3x3(&GrayImage::filled(6, 6, 0), &k5).is_err());
        let big = Kernel2D::new(3, vec![1 << 20; 9], 0).unwrap();
        assert!(conv2d(&GrayImage::filled(4, 4, 1), &big, &acc16()).is_err());
    }
}
