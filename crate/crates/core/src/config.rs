//! Experiment configuration: a single JSON document.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::density::{Density, DensitySpec};
use crate::edge::FredholmConfig;
use crate::error::{Error, Result};
use crate::kernel::ContourConfig;
use crate::partition::HalfInt;
use crate::sampler::Statistic;
use crate::schur::Specialization;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecConfig {
    pub f: Density,
    pub g: Density,
    pub c: f64,
    pub n: usize,
    pub k: usize,
}

impl SpecConfig {
    pub fn density(&self) -> Result<DensitySpec> {
        DensitySpec::new(self.f.clone(), self.g.clone(), self.c)
    }

    pub fn specialization(&self) -> Result<Specialization> {
        Specialization::from_density(&self.density()?, self.n, self.k)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleParams {
    pub count: usize,
    pub statistic: Statistic,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams { count: 1000, statistic: Statistic::FirstRow }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitShapeParams {
    pub grid_step: f64,
}

impl Default for LimitShapeParams {
    fn default() -> Self {
        LimitShapeParams { grid_step: 0.01 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContourChoice {
    Default,
    /// Circles through the complex saddle for positions near `n t`.
    Saddle { t: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelParams {
    /// Kernel entries are computed for every ordered pair of these half-integers.
    pub positions: Vec<HalfInt>,
    pub contour: ContourChoice,
    pub nodes: usize,
    pub max_nodes: usize,
    pub tol: f64,
}

impl Default for KernelParams {
    fn default() -> Self {
        KernelParams {
            positions: vec![HalfInt::from_floor(-1), HalfInt::from_floor(0)],
            contour: ContourChoice::Default,
            nodes: ContourConfig::DEFAULT_NODES,
            max_nodes: ContourConfig::DEFAULT_MAX_NODES,
            tol: ContourConfig::DEFAULT_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwTableParams {
    pub from: f64,
    pub to: f64,
    pub step: f64,
    pub fredholm: FredholmConfig,
}

impl Default for TwTableParams {
    fn default() -> Self {
        TwTableParams { from: -8.0, to: 6.0, step: 0.01, fredholm: FredholmConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FluctuationParams {
    pub count: usize,
    pub table: TwTableParams,
}

impl Default for FluctuationParams {
    fn default() -> Self {
        FluctuationParams { count: 10_000, table: TwTableParams::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriticalParams {
    pub deltas: Vec<u32>,
    pub samples: usize,
}

impl Default for CriticalParams {
    fn default() -> Self {
        CriticalParams { deltas: vec![1, 2], samples: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub spec: SpecConfig,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; 0 uses all cores.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub sample: SampleParams,
    #[serde(default)]
    pub limit_shape: LimitShapeParams,
    #[serde(default)]
    pub kernel: KernelParams,
    #[serde(default)]
    pub fluctuations: FluctuationParams,
    #[serde(default)]
    pub critical: CriticalParams,
    #[serde(default)]
    pub tw_table: TwTableParams,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::ConfigInvalid(msg.into()))
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        // A manifest carries its config under "config".
        let v = match v.get("manifest_version").and(v.get("config")) {
            Some(inner) => inner.clone(),
            None => v,
        };
        let cfg: ExperimentConfig = serde_json::from_value(v).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConfigInvalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.spec;
        if s.n == 0 {
            return invalid("n must be positive");
        }
        s.density()?;
        let expect = (s.c * s.n as f64).round();
        if s.k as f64 != expect {
            return invalid(format!("k = {} does not match round(c n) = {expect}", s.k));
        }
        s.specialization().map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        if self.sample.count == 0 || self.fluctuations.count == 0 || self.critical.samples == 0 {
            return invalid("sample counts must be positive");
        }
        if !(self.limit_shape.grid_step > 0.0) {
            return invalid("grid_step must be positive");
        }
        let k = &self.kernel;
        if !(k.tol > 0.0) || k.nodes < 4 || k.max_nodes < k.nodes {
            return invalid("kernel tol must be positive and 4 <= nodes <= max_nodes");
        }
        for t in [&self.tw_table, &self.fluctuations.table] {
            if !(t.step > 0.0 && t.to > t.from && t.fredholm.tol > 0.0) {
                return invalid("TW table needs from < to, and positive step and tol");
            }
            if t.fredholm.nodes < 2 || t.fredholm.max_nodes < t.fredholm.nodes {
                return invalid("Fredholm nodes out of range");
            }
        }
        if self.critical.deltas.is_empty() || self.critical.deltas.contains(&0) {
            return invalid("deltas must be nonempty and at least 1");
        }
        Ok(())
    }
}
