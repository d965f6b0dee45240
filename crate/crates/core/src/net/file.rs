//! `.axnet` files: TOML with one `[[layer]]` table per convolution and
//! base-64 weight blobs.

use std::path::Path;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};

use super::{Network, Quant, QuantConvLayer};
use crate::error::{AxError, Result};

#[derive(Serialize, Deserialize)]
struct RawInput {
    channels: usize,
    height: usize,
    width: usize,
    scale: f64,
    zero_point: u8,
}

#[derive(Serialize, Deserialize)]
struct RawLayer {
    name: String,
    channels: usize,
    filters: usize,
    kernel: usize,
    #[serde(default = "one")]
    stride: usize,
    #[serde(default)]
    padding: usize,
    weight_scale: f64,
    weight_zero_point: u8,
    output_scale: f64,
    output_zero_point: u8,
    weights: String,
}

fn one() -> usize {
    1
}

#[derive(Serialize, Deserialize)]
struct RawNet {
    input: RawInput,
    #[serde(default, rename = "layer")]
    layers: Vec<RawLayer>,
}

impl Network {
    pub fn from_axnet(text: &str) -> Result<Self> {
        let raw: RawNet = toml::from_str(text).map_err(|e| AxError::MalformedNetwork(e.to_string()))?;
        let layers = raw
            .layers
            .into_iter()
            .map(|l| {
                let weights = STANDARD
                    .decode(l.weights.split_whitespace().collect::<String>())
                    .map_err(|e| AxError::MalformedNetwork(format!("layer '{}' weights: {e}", l.name)))?;
                Ok(QuantConvLayer {
                    name: l.name,
                    channels: l.channels,
                    filters: l.filters,
                    kernel: l.kernel,
                    stride: l.stride,
                    padding: l.padding,
                    weights,
                    weight_quant: Quant { scale: l.weight_scale, zero_point: l.weight_zero_point },
                    output_quant: Quant { scale: l.output_scale, zero_point: l.output_zero_point },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let net = Network {
            input_channels: raw.input.channels,
            input_height: raw.input.height,
            input_width: raw.input.width,
            input_quant: Quant { scale: raw.input.scale, zero_point: raw.input.zero_point },
            layers,
        };
        net.validate()?;
        Ok(net)
    }

    pub fn to_axnet(&self) -> String {
        let raw = RawNet {
            input: RawInput {
                channels: self.input_channels,
                height: self.input_height,
                width: self.input_width,
                scale: self.input_quant.scale,
                zero_point: self.input_quant.zero_point,
            },
            layers: self
                .layers
                .iter()
                .map(|l| RawLayer {
                    name: l.name.clone(),
                    channels: l.channels,
                    filters: l.filters,
                    kernel: l.kernel,
                    stride: l.stride,
                    padding: l.padding,
                    weight_scale: l.weight_quant.scale,
                    weight_zero_point: l.weight_quant.zero_point,
                    output_scale: l.output_quant.scale,
                    output_zero_point: l.output_quant.zero_point,
                    weights: STANDARD.encode(&l.weights),
                })
                .collect(),
        };
        toml::to_string(&raw).expect("network serializes")
    }
}

pub fn read_axnet(path: &Path) -> Result<Network> {
    Network::from_axnet(&std::fs::read_to_string(path)?)
}

pub fn write_axnet(path: &Path, net: &Network) -> Result<()> {
    std::fs::write(path, net.to_axnet())?;
    Ok(())
}
