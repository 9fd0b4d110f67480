//! Run configuration: a flat TOML file declaring the scenario, the
//! experiment, sweep indices, grid, Monte Carlo settings, and output.
//!
//! The parsed form re-serializes to a canonical TOML document (`config
//! echo`); the sha-256 of that canonical text is the configuration
//! identity stamped into output headers, so formatting differences in the
//! user's file never split golden data.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use zmx_core::scenarios::{ScenarioSpec, TableRow};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    MaxLimit,
    MinLimit,
    Joint,
    Range,
    BandSweep,
    BranchingSurvival,
    ConditionedLaw,
    MaxfamLimit,
    LargeDeviation,
    Regimes,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::MaxLimit => "max-limit",
            Experiment::MinLimit => "min-limit",
            Experiment::Joint => "joint",
            Experiment::Range => "range",
            Experiment::BandSweep => "band-sweep",
            Experiment::BranchingSurvival => "branching-survival",
            Experiment::ConditionedLaw => "conditioned-law",
            Experiment::MaxfamLimit => "maxfam-limit",
            Experiment::LargeDeviation => "large-deviation",
            Experiment::Regimes => "regimes",
        }
    }

    /// Row-extrema experiments need row counts; branching-side ones need an
    /// offspring schedule.
    pub fn needs_rows(&self) -> bool {
        matches!(
            self,
            Experiment::MaxLimit
                | Experiment::MinLimit
                | Experiment::Joint
                | Experiment::Range
                | Experiment::LargeDeviation
                | Experiment::Regimes
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl Default for OutputFormat {
    fn default() -> Self {
        OutputFormat::Csv
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRowConfig {
    pub nu: u64,
    pub a: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScenarioConfig {
    Power {
        alpha: f64,
        delta: f64,
        gamma: f64,
        zeta: f64,
        #[serde(default = "default_nu_base")]
        nu_base: f64,
    },
    LogPower {
        alpha: f64,
        delta: f64,
        coefficient: f64,
        zeta: f64,
        #[serde(default = "default_nu_base")]
        nu_base: f64,
    },
    Table {
        rows: Vec<TableRowConfig>,
    },
    BirthDeath {
        birth_rate: f64,
        death_rate: f64,
        times: Vec<f64>,
    },
}

fn default_nu_base() -> f64 {
    2.0
}

impl ScenarioConfig {
    pub fn to_spec(&self) -> ScenarioSpec {
        match self.clone() {
            ScenarioConfig::Power {
                alpha,
                delta,
                gamma,
                zeta,
                nu_base,
            } => ScenarioSpec::Power {
                alpha,
                delta,
                gamma,
                zeta,
                nu_base,
            },
            ScenarioConfig::LogPower {
                alpha,
                delta,
                coefficient,
                zeta,
                nu_base,
            } => ScenarioSpec::LogPower {
                alpha,
                delta,
                coefficient,
                zeta,
                nu_base,
            },
            ScenarioConfig::Table { rows } => ScenarioSpec::Table {
                rows: rows
                    .into_iter()
                    .map(|r| TableRow {
                        nu: r.nu,
                        a: r.a,
                        p: r.p,
                    })
                    .collect(),
            },
            ScenarioConfig::BirthDeath {
                birth_rate,
                death_rate,
                times,
            } => ScenarioSpec::BirthDeath {
                birth_rate,
                death_rate,
                times,
            },
        }
    }

    pub fn is_birth_death(&self) -> bool {
        matches!(self, ScenarioConfig::BirthDeath { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexRange {
    pub start: u32,
    pub end: u32,
    #[serde(default = "default_step")]
    pub step: u32,
}

fn default_step() -> u32 {
    1
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_range: Option<IndexRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
}

impl SweepConfig {
    /// The explicit index list, from either form.
    pub fn resolve_indices(&self) -> Result<Vec<u32>, CliError> {
        match (&self.indices, &self.index_range) {
            (Some(_), Some(_)) => Err(CliError::validation(
                "sweep: give either indices or index_range, not both",
            )),
            (Some(list), None) => {
                if list.is_empty() {
                    return Err(CliError::validation("sweep.indices is empty"));
                }
                Ok(list.clone())
            }
            (None, Some(range)) => {
                if range.step == 0 || range.end < range.start {
                    return Err(CliError::validation("sweep.index_range is empty or malformed"));
                }
                Ok((range.start..=range.end).step_by(range.step as usize).collect())
            }
            (None, None) => Err(CliError::validation(
                "sweep needs indices or index_range for this experiment",
            )),
        }
    }

    pub fn resolve_horizon(&self) -> Result<usize, CliError> {
        self.horizon
            .ok_or_else(|| CliError::validation("sweep.horizon is required for this experiment"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Limit-law quantile levels the grid is built from.
    #[serde(default = "default_quantiles")]
    pub quantiles: Vec<f64>,
    /// Extra explicit evaluation points.
    #[serde(default)]
    pub points: Vec<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            quantiles: default_quantiles(),
            points: Vec::new(),
        }
    }
}

fn default_quantiles() -> Vec<f64> {
    vec![
        0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999,
    ]
}

impl GridConfig {
    pub fn to_grid(&self) -> zmx_core::asymptotics::GridSpec {
        zmx_core::asymptotics::GridSpec {
            quantile_levels: self.quantiles.clone(),
            extra_points: self.points.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    /// 0 disables Monte Carlo columns everywhere.
    #[serde(default)]
    pub paths: u64,
    #[serde(default)]
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { paths: 0, seed: 0 }
    }
}

/// Experiment-specific knobs, all optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    /// Gumbel shift `c` of the max-limit reference law.
    #[serde(default)]
    pub gumbel_shift: f64,
    /// `beta` of the min-limit reference law; defaults to `beta_n` of the
    /// last swept row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Truncation tolerance of the exact range law.
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    /// Largest range value tabulated by the range experiment.
    #[serde(default = "default_range_max")]
    pub range_max: u64,
    /// Largest family-size value tabulated by maxfam-limit.
    #[serde(default = "default_x_max")]
    pub x_max: u64,
    /// Largest k tabulated by conditioned-law.
    #[serde(default = "default_k_max")]
    pub k_max: u64,
    /// Evaluation point of the large-deviation ratio.
    #[serde(default)]
    pub ld_x: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            gumbel_shift: 0.0,
            beta: None,
            tail_tol: default_tail_tol(),
            range_max: default_range_max(),
            x_max: default_x_max(),
            k_max: default_k_max(),
            ld_x: 0.0,
        }
    }
}

fn default_tail_tol() -> f64 {
    1e-9
}

fn default_range_max() -> u64 {
    40
}

fn default_x_max() -> u64 {
    30
}

fn default_k_max() -> u64 {
    30
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub format: OutputFormat,
    /// Output file; resolved against the output directory unless absolute.
    pub output: String,
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub mc: McConfig,
    #[serde(default)]
    pub params: ParamsConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::config_parse(format!("{e}")))
    }

    /// Canonical TOML form: defaults filled, struct field order.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn config_sha(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical().as_bytes());
        let digest = hasher.finalize();
        let mut out = String::with_capacity(64);
        for byte in digest {
            use std::fmt::Write;
            write!(out, "{byte:02x}").expect("write to string");
        }
        out
    }

    /// Experiment/scenario compatibility, checked before any work happens.
    pub fn validate(&self) -> Result<(), CliError> {
        self.scenario
            .to_spec()
            .validate()
            .map_err(|e| CliError::validation(format!("scenario: {e}")))?;
        if self.experiment.needs_rows() && self.scenario.is_birth_death() {
            return Err(CliError::validation(format!(
                "{} needs a row-count scenario; birth-death defines none",
                self.experiment.name()
            )));
        }
        if self.grid.quantiles.is_empty() && self.grid.points.is_empty() {
            return Err(CliError::validation("grid resolves to no points"));
        }
        if self
            .grid
            .quantiles
            .iter()
            .any(|q| !(*q > 0.0 && *q < 1.0))
        {
            return Err(CliError::validation("grid.quantiles must lie in (0,1)"));
        }
        if self.experiment == Experiment::Range
            && !(self.params.tail_tol > 0.0 && self.params.tail_tol <= 1e-8)
        {
            return Err(CliError::validation("params.tail_tol must lie in (0, 1e-8]"));
        }
        Ok(())
    }
}
