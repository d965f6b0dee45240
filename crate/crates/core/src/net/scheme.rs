use serde::Deserialize;

use super::Network;
use crate::approx::{AxConfig, Multiplier};
use crate::error::{AxError, Result};

/// Operand width of the signed engine that the unsigned 8-bit operands are
/// zero-extended into.
pub const QUANT_WIDTH: u32 = 10;

/// How multiplications are grouped into units that share a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Granularity {
    Layer,
    /// Consecutive filters in groups of `group_size`.
    Filter {
        group_size: usize,
    },
    /// By input channel within each kernel.
    KernelChannel,
    /// By row within each kernel window.
    KernelRow,
    /// By column within each kernel window.
    KernelColumn,
}

/// Per-layer lists of configurations indexed by unit.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentScheme {
    pub granularity: Granularity,
    pub layers: Vec<Vec<AxConfig>>,
}

impl AssignmentScheme {
    pub fn uniform(net: &Network, cfg: AxConfig) -> Self {
        Self { granularity: Granularity::Layer, layers: vec![vec![cfg]; net.layers.len()] }
    }

    /// Number of units a layer is split into under `granularity`.
    pub fn unit_count(granularity: Granularity, layer: &super::QuantConvLayer) -> Result<usize> {
        Ok(match granularity {
            Granularity::Layer => 1,
            Granularity::Filter { group_size } => {
                if group_size == 0 {
                    return Err(AxError::InvalidParameter("filter group size 0".into()));
                }
                layer.filters.div_ceil(group_size)
            }
            Granularity::KernelChannel => layer.channels,
            Granularity::KernelRow | Granularity::KernelColumn => layer.kernel,
        })
    }

    /// The same assignment expressed at filter level, one group per layer.
    pub fn layer_to_filter_level(&self, net: &Network) -> Result<AssignmentScheme> {
        if self.granularity != Granularity::Layer {
            return Err(AxError::InvalidParameter("scheme is not layer-level".into()));
        }
        let group_size = net.layers.iter().map(|l| l.filters).max().unwrap_or(1);
        Ok(AssignmentScheme { granularity: Granularity::Filter { group_size }, layers: self.layers.clone() })
    }

    /// Parses the TOML scheme format:
    /// `granularity = "filter"`, `group_size = 2`, `layers = [["rad:k=6", "acc"], ["acc"]]`.
    pub fn from_toml(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            granularity: String,
            group_size: Option<usize>,
            layers: Vec<Vec<String>>,
        }
        let raw: Raw = toml::from_str(text).map_err(|e| AxError::InvalidParameter(format!("scheme: {e}")))?;
        let granularity = match raw.granularity.as_str() {
            "layer" => Granularity::Layer,
            "filter" => Granularity::Filter {
                group_size: raw.group_size.ok_or_else(|| AxError::InvalidParameter("filter granularity needs group_size".into()))?,
            },
            "kernel-channel" => Granularity::KernelChannel,
            "kernel-row" => Granularity::KernelRow,
            "kernel-column" => Granularity::KernelColumn,
            g => return Err(AxError::InvalidParameter(format!("unknown granularity '{g}'"))),
        };
        let layers =
            raw.layers.iter().map(|l| l.iter().map(|c| c.parse()).collect::<Result<Vec<AxConfig>>>()).collect::<Result<Vec<_>>>()?;
        Ok(Self { granularity, layers })
    }
}

/// Per-layer multipliers resolved from a scheme.
#[derive(Debug, Clone)]
pub struct ResolvedView {
    pub granularity: Granularity,
    pub layers: Vec<Vec<Multiplier>>,
}

impl ResolvedView {
    /// Unit index of multiplication (filter f, channel c, kernel row u, column v).
    #[inline]
    pub fn unit(&self, f: usize, c: usize, u: usize, v: usize) -> usize {
        match self.granularity {
            Granularity::Layer => 0,
            Granularity::Filter { group_size } => f / group_size,
            Granularity::KernelChannel => c,
            Granularity::KernelRow => u,
            Granularity::KernelColumn => v,
        }
    }

    pub fn multiplier(&self, layer: usize, f: usize, c: usize, u: usize, v: usize) -> &Multiplier {
        &self.layers[layer][self.unit(f, c, u, v)]
    }

    pub fn config(&self, layer: usize, f: usize, c: usize, u: usize, v: usize) -> &AxConfig {
        self.multiplier(layer, f, c, u, v).config()
    }
}

/// Resolves every unit of every layer to a validated multiplier.
pub fn assign(net: &Network, scheme: &AssignmentScheme) -> Result<ResolvedView> {
    if scheme.layers.len() != net.layers.len() {
        return Err(AxError::UncoveredUnit(format!("scheme lists {} layers, network has {}", scheme.layers.len(), net.layers.len())));
    }
    let mut layers = Vec::with_capacity(net.layers.len());
    for (li, (layer, cfgs)) in net.layers.iter().zip(&scheme.layers).enumerate() {
        let units = AssignmentScheme::unit_count(scheme.granularity, layer)?;
        if cfgs.len() < units {
            return Err(AxError::UncoveredUnit(format!("layer {li} unit {}", cfgs.len())));
        }
        if cfgs.len() > units {
            return Err(AxError::InvalidParameter(format!("layer {li} has {} configurations for {units} units", cfgs.len())));
        }
        layers.push(cfgs.iter().map(|c| Multiplier::new(c, QUANT_WIDTH)).collect::<Result<Vec<_>>>()?);
    }
    Ok(ResolvedView { granularity: scheme.granularity, layers })
}
