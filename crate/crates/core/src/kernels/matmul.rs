//! Tiled integer matrix multiplication with a configurable multiplier.

use crate::approx::Multiplier;
use crate::error::{AxError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(AxError::DimensionMismatch(format!("{rows}x{cols} matrix with {} entries", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Self { rows: n, cols: n, data }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        if r < self.rows && c < self.cols {
            self.data[r * self.cols + c]
        } else {
            0
        }
    }
}

/// C = A·B computed tile by tile; each scalar product goes through `mul`
/// with the A entry as multiplicand and the B entry as the encoded operand.
/// Sizes that are not multiples of the tile are zero-padded.
pub fn matmul_tiled(a: &Matrix, b: &Matrix, mul: &Multiplier, tile: usize) -> Result<Vec<i128>> {
    if a.cols != b.rows {
        return Err(AxError::DimensionMismatch(format!("{}x{} times {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    if tile == 0 {
        return Err(AxError::InvalidParameter("tile size 0".into()));
    }
    let pad = |v: usize| v.div_ceil(tile) * tile;
    let (pr, pk, pc) = (pad(a.rows), pad(a.cols), pad(b.cols));
    let mut c = vec![0i128; pr * pc];
    for i0 in (0..pr).step_by(tile) {
        for j0 in (0..pc).step_by(tile) {
            for k0 in (0..pk).step_by(tile) {
                for i in i0..i0 + tile {
                    for j in j0..j0 + tile {
                        let mut s = 0i128;
                        for k in k0..k0 + tile {
                            s += mul.mul(a.get(i, k), b.get(k, j));
                        }
                        c[i * pc + j] += s;
                    }
                }
            }
        }
    }
    let mut out = Vec::with_capacity(a.rows * b.cols);
    for i in 0..a.rows {
        out.extend_from_slice(&c[i * pc..i * pc + b.cols]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::AxConfig;

    #[test]
    fn identity_and_hand_case() {
        let mul = Multiplier::new(&AxConfig::Accurate, 16).unwrap();
        let m = Matrix::new(4, 5, (0..20).map(|v| v * 3 - 17).collect()).unwrap();
        let out = matmul_tiled(&Matrix::identity(4), &m, &mul, 3).unwrap();
        assert_eq!(out, m.data.iter().map(|&v| v as i128).collect::<Vec<_>>());
        let a = Matrix::new(3, 3, vec![1, 2, 3, 4, 5, 6, 7, 8, 9]).unwrap();
        let b = Matrix::new(3, 3, vec![9, 8, 7, 6, 5, 4, 3, 2, 1]).unwrap();
        assert_eq!(matmul_tiled(&a, &b, &mul, 3).unwrap(), vec![30, 24, 18, 84, 69, 54, 138, 114, 90]);
        assert!(matmul_tiled(&a, &m, &mul, 3).is_err());
        assert!(matmul_tiled(&a, &b, &mul, 0).is_err());
    }
}
