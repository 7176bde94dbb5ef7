//! Run configuration shared by the command-line tools and the benchmark
//! harness. Every field has a default, so `{}` is a complete configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::BaselineConfig;
use crate::evaluation::EvaluationWeights;
use crate::ilmsa2d::PlannerConfig;
use crate::planner3d::{ObstacleProjection, SweepConfig};
use crate::smoothing::SplineConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config field `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Plane-sweep settings that are not shared with other planners.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSettings {
    pub delta_theta: f64,
    pub projection: ObstacleProjection,
    pub parallel: bool,
}

impl Default for SweepSettings {
    fn default() -> Self {
        let d = SweepConfig::default();
        Self { delta_theta: d.delta_theta, projection: d.projection, parallel: d.parallel }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    /// Optional SVG rendering of a planned path.
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub planner: PlannerConfig,
    pub sweep: SweepSettings,
    pub spline: SplineConfig,
    pub weights: EvaluationWeights,
    pub baseline: BaselineConfig,
    pub outputs: OutputPaths,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Schema {
            field: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::from_json(&text)
    }

    pub fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            delta_theta: self.sweep.delta_theta,
            planner: self.planner,
            weights: self.weights,
            spline: self.spline,
            projection: self.sweep.projection,
            parallel: self.sweep.parallel,
        }
    }

    /// Checks every section against its module's invariants.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |e: &dyn std::fmt::Display| ConfigError::Invalid(e.to_string());
        self.sweep_config().validate().map_err(|e| invalid(&e))?;
        self.baseline.validate().map_err(|e| invalid(&e))?;
        Ok(())
    }
}
