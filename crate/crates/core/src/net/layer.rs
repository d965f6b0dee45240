use crate::error::{AxError, Result};

/// Channel-major 8-bit activation tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QTensor {
    pub channels: usize,
    pub height: usize,
    pub width: usize,
    pub data: Vec<u8>,
}

impl QTensor {
    pub fn new(channels: usize, height: usize, width: usize, data: Vec<u8>) -> Result<Self> {
        if channels * height * width != data.len() {
            return Err(AxError::DimensionMismatch(format!("{channels}x{height}x{width} tensor with {} values", data.len())));
        }
        Ok(Self { channels, height, width, data })
    }

    pub fn get(&self, c: usize, y: usize, x: usize) -> u8 {
        self.data[(c * self.height + y) * self.width + x]
    }
}

/// Affine quantization: real = scale · (q - zero_point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quant {
    pub scale: f64,
    pub zero_point: u8,
}

/// Quantized convolution layer with unsigned 8-bit weights of shape
/// filters × channels × kernel × kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantConvLayer {
    pub name: String,
    pub channels: usize,
    pub filters: usize,
    pub kernel: usize,
    pub stride: usize,
    pub padding: usize,
    pub weights: Vec<u8>,
    pub weight_quant: Quant,
    pub output_quant: Quant,
}

impl QuantConvLayer {
    pub fn validate(&self) -> Result<()> {
        if self.channels == 0 || self.filters == 0 || self.kernel == 0 || self.stride == 0 {
            return Err(AxError::MalformedNetwork(format!("layer '{}' has a zero dimension", self.name)));
        }
        let expected = self.filters * self.channels * self.kernel * self.kernel;
        if self.weights.len() != expected {
            return Err(AxError::MalformedNetwork(format!("layer '{}' needs {expected} weights, has {}", self.name, self.weights.len())));
        }
        for q in [self.weight_quant, self.output_quant] {
            if !(q.scale.is_finite() && q.scale > 0.0) {
                return Err(AxError::MalformedNetwork(format!("layer '{}' has a bad scale", self.name)));
            }
        }
        Ok(())
    }

    pub fn weight(&self, f: usize, c: usize, u: usize, v: usize) -> u8 {
        self.weights[((f * self.channels + c) * self.kernel + u) * self.kernel + v]
    }

    /// Output height and width for an input of the given size.
    pub fn output_dims(&self, height: usize, width: usize) -> Result<(usize, usize)> {
        let (ph, pw) = (height + 2 * self.padding, width + 2 * self.padding);
        if ph < self.kernel || pw < self.kernel {
            return Err(AxError::DimensionMismatch(format!("layer '{}' input too small", self.name)));
        }
        Ok(((ph - self.kernel) / self.stride + 1, (pw - self.kernel) / self.stride + 1))
    }
}
