use std::collections::BTreeMap;
use std::io::Read;

use serde::Deserialize;

use super::{AssignmentScheme, Network};
use crate::approx::AxConfig;
use crate::error::{AxError, Result};

/// Per-multiplication cost in abstract energy units, keyed by canonical
/// configuration text.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyTable {
    costs: BTreeMap<String, f64>,
    sources: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerEnergy {
    pub name: String,
    pub multiplications: u64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub total: f64,
    pub layers: Vec<LayerEnergy>,
}

impl EnergyTable {
    pub fn new(entries: &[(AxConfig, f64)]) -> Result<Self> {
        let mut t = EnergyTable::default();
        for (cfg, cost) in entries {
            t.insert(cfg, *cost, "")?;
        }
        t.check()?;
        Ok(t)
    }

    fn insert(&mut self, cfg: &AxConfig, cost: f64, source: &str) -> Result<()> {
        if !(cost.is_finite() && cost > 0.0) {
            return Err(AxError::InvalidParameter(format!("cost of {cfg} must be positive, got {cost}")));
        }
        self.costs.insert(cfg.to_string(), cost);
        self.sources.insert(cfg.to_string(), source.to_string());
        Ok(())
    }

    fn check(&self) -> Result<()> {
        if !self.costs.contains_key(&AxConfig::Accurate.to_string()) {
            return Err(AxError::MissingCost("acc".into()));
        }
        Ok(())
    }

    /// Reads `config,cost_units,source` CSV; lines starting with `#` are comments.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            config: String,
            cost_units: f64,
            #[serde(default)]
            source: String,
        }
        let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
        let mut t = EnergyTable::default();
        for row in rd.deserialize::<Row>() {
            let row = row.map_err(|e| AxError::ConfigParse(format!("energy table: {e}")))?;
            t.insert(&row.config.parse()?, row.cost_units, &row.source)?;
        }
        t.check()?;
        Ok(t)
    }

    pub fn cost(&self, cfg: &AxConfig) -> Result<f64> {
        self.costs.get(&cfg.to_string()).copied().ok_or_else(|| AxError::MissingCost(cfg.to_string()))
    }

    pub fn source(&self, cfg: &AxConfig) -> Option<&str> {
        self.sources.get(&cfg.to_string()).map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, f64)> {
        self.costs.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// Σ over every multiplication of its configuration's cost. Pure counting:
/// padded positions count as multiplications.
pub fn estimate_energy(net: &Network, scheme: &AssignmentScheme, table: &EnergyTable) -> Result<EnergyReport> {
    if scheme.layers.len() != net.layers.len() {
        return Err(AxError::UncoveredUnit(format!("scheme lists {} layers, network has {}", scheme.layers.len(), net.layers.len())));
    }
    let shapes = net.shapes()?;
    let mut layers = Vec::with_capacity(net.layers.len());
    for (i, (layer, cfgs)) in net.layers.iter().zip(&scheme.layers).enumerate() {
        let units = AssignmentScheme::unit_count(scheme.granularity, layer)?;
        if cfgs.len() != units {
            return Err(AxError::UncoveredUnit(format!("layer {i} has {} of {units} units", cfgs.len())));
        }
        let (_, oh, ow) = shapes[i + 1];
        let positions = (oh * ow) as u64;
        let (m, n, r) = (layer.channels as u64, layer.filters as u64, layer.kernel as u64);
        // multiplications per output position covered by each unit
        let per_unit: Vec<u64> = match scheme.granularity {
            super::Granularity::Layer => vec![n * m * r * r],
            super::Granularity::Filter { group_size } => (0..units as u64)
                .map(|g| {
                    let lo = g * group_size as u64;
                    (n.min(lo + group_size as u64) - lo) * m * r * r
                })
                .collect(),
            super::Granularity::KernelChannel => vec![n * r * r; units],
            super::Granularity::KernelRow | super::Granularity::KernelColumn => vec![n * m * r; units],
        };
        let mut energy = 0.0;
        let mut count = 0u64;
        for (cfg, &k) in cfgs.iter().zip(&per_unit) {
            energy += (k * positions) as f64 * table.cost(cfg)?;
            count += k * positions;
        }
        layers.push(LayerEnergy { name: layer.name.clone(), multiplications: count, energy });
    }
    Ok(EnergyReport { total: layers.iter().map(|l| l.energy).sum(), layers })
}
