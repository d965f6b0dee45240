//! Quantized convolution networks with per-unit multiplier assignment and a
//! count-based energy estimate.

mod energy;
mod file;
mod layer;
mod scheme;

pub use energy::{estimate_energy, EnergyReport, EnergyTable, LayerEnergy};
pub use file::{read_axnet, write_axnet};
pub use layer::{QTensor, Quant, QuantConvLayer};
pub use scheme::{assign, AssignmentScheme, Granularity, ResolvedView, QUANT_WIDTH};

use rand::RngCore;
use rayon::prelude::*;

use crate::error::{AxError, Result};
use crate::metrics::sampling::rng_from_seed;

/// A chain of quantized convolutions. Each layer reads the previous layer's
/// output quantization.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub input_channels: usize,
    pub input_height: usize,
    pub input_width: usize,
    pub input_quant: Quant,
    pub layers: Vec<QuantConvLayer>,
}

impl Network {
    pub fn validate(&self) -> Result<()> {
        if !(self.input_quant.scale.is_finite() && self.input_quant.scale > 0.0) {
            return Err(AxError::MalformedNetwork("bad input scale".into()));
        }
        let (mut c, mut h, mut w) = (self.input_channels, self.input_height, self.input_width);
        for l in &self.layers {
            l.validate()?;
            if l.channels != c {
                return Err(AxError::MalformedNetwork(format!("layer '{}' expects {} channels, gets {c}", l.name, l.channels)));
            }
            (h, w) = l.output_dims(h, w)?;
            c = l.filters;
        }
        Ok(())
    }

    /// Input quantization seen by layer `i`.
    pub fn layer_input_quant(&self, i: usize) -> Quant {
        if i == 0 {
            self.input_quant
        } else {
            self.layers[i - 1].output_quant
        }
    }

    /// (channels, height, width) entering each layer, plus the final output shape.
    pub fn shapes(&self) -> Result<Vec<(usize, usize, usize)>> {
        let mut out = vec![(self.input_channels, self.input_height, self.input_width)];
        for l in &self.layers {
            let &(_, h, w) = out.last().unwrap();
            let (oh, ow) = l.output_dims(h, w)?;
            out.push((l.filters, oh, ow));
        }
        Ok(out)
    }

    pub fn forward(&self, input: &QTensor, view: &ResolvedView) -> Result<QTensor> {
        if view.layers.len() != self.layers.len() {
            return Err(AxError::DimensionMismatch("view does not match network".into()));
        }
        let mut x = input.clone();
        for i in 0..self.layers.len() {
            x = conv_forward_quant(self, i, &x, view)?;
        }
        Ok(x)
    }

    pub fn forward_batch(&self, inputs: &[QTensor], view: &ResolvedView) -> Result<Vec<QTensor>> {
        inputs.par_iter().map(|x| self.forward(x, view)).collect()
    }

    /// Seeded uniform random input tensors.
    pub fn random_inputs(&self, count: usize, seed: u64) -> Vec<QTensor> {
        let mut rng = rng_from_seed(seed);
        let len = self.input_channels * self.input_height * self.input_width;
        (0..count)
            .map(|_| {
                let mut data = vec![0u8; len];
                rng.fill_bytes(&mut data);
                QTensor { channels: self.input_channels, height: self.input_height, width: self.input_width, data }
            })
            .collect()
    }
}

/// Runs layer `index` of `net` with every multiplication dispatched through
/// its assigned multiplier. Activations are operand A, weights operand B.
/// Padding uses the input zero point so it represents a real zero.
pub fn conv_forward_quant(net: &Network, index: usize, input: &QTensor, view: &ResolvedView) -> Result<QTensor> {
    let layer = net.layers.get(index).ok_or_else(|| AxError::DimensionMismatch(format!("no layer {index}")))?;
    let mults = view.layers.get(index).ok_or_else(|| AxError::DimensionMismatch(format!("view has no layer {index}")))?;
    if input.channels != layer.channels || input.data.len() != input.channels * input.height * input.width {
        return Err(AxError::DimensionMismatch(format!(
            "layer '{}' expects {} channels, input has {}",
            layer.name, layer.channels, input.channels
        )));
    }
    let (oh, ow) = layer.output_dims(input.height, input.width)?;
    let iq = net.layer_input_quant(index);
    let zx = iq.zero_point as i128;
    let zw = layer.weight_quant.zero_point as i128;
    let zo = layer.output_quant.zero_point as f64;
    let ratio = iq.scale * layer.weight_quant.scale / layer.output_quant.scale;
    let r = layer.kernel;
    let taps = (layer.channels * r * r) as i128;
    let pad = layer.padding as isize;

    let mut out = vec![0u8; layer.filters * oh * ow];
    out.par_chunks_mut(oh * ow).enumerate().for_each(|(f, plane)| {
        let mut sum_w = 0i128;
        for c in 0..layer.channels {
            for u in 0..r {
                for v in 0..r {
                    sum_w += layer.weight(f, c, u, v) as i128;
                }
            }
        }
        for oy in 0..oh {
            for ox in 0..ow {
                let (mut prod, mut sum_x) = (0i128, 0i128);
                for c in 0..layer.channels {
                    for u in 0..r {
                        for v in 0..r {
                            let y = (oy * layer.stride + u) as isize - pad;
                            let x = (ox * layer.stride + v) as isize - pad;
                            let xv = if y < 0 || x < 0 || y >= input.height as isize || x >= input.width as isize {
                                iq.zero_point
                            } else {
                                input.get(c, y as usize, x as usize)
                            };
                            let m = &mults[view.unit(f, c, u, v)];
                            prod += m.mul(xv as i64, layer.weight(f, c, u, v) as i64);
                            sum_x += xv as i128;
                        }
                    }
                }
                let acc = prod - zw * sum_x - zx * sum_w + taps * zx * zw;
                let q = (acc as f64 * ratio).round() + zo;
                plane[oy * ow + ox] = q.clamp(0.0, 255.0) as u8;
            }
        }
    });
    QTensor::new(layer.filters, oh, ow, out)
}

/// One minus the mean absolute output difference from the accurate network,
/// as a fraction of the 8-bit range. Exact outputs score 1.
pub fn fidelity(net: &Network, scheme: &AssignmentScheme, inputs: &[QTensor]) -> Result<f64> {
    let exact = assign(net, &AssignmentScheme::uniform(net, crate::approx::AxConfig::Accurate))?;
    let view = assign(net, scheme)?;
    let reference = net.forward_batch(inputs, &exact)?;
    let approx = net.forward_batch(inputs, &view)?;
    let (mut diff, mut total) = (0u64, 0u64);
    for (a, b) in reference.iter().zip(&approx) {
        total += a.data.len() as u64;
        diff += a.data.iter().zip(&b.data).map(|(&x, &y)| x.abs_diff(y) as u64).sum::<u64>();
    }
    Ok(if total == 0 { 1.0 } else { 1.0 - diff as f64 / (255.0 * total as f64) })
}

/// The two-layer toy network shipped with the crate.
pub fn bundled_network() -> Network {
    Network::from_axnet(include_str!("../../data/toy.axnet")).expect("bundled network parses")
}

/// Cost table for 16-bit multipliers shipped with the crate.
pub fn bundled_energy_table() -> EnergyTable {
    EnergyTable::from_csv(include_str!("../../data/energy_table.csv").as_bytes()).expect("bundled table parses")
}
