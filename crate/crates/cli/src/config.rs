use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use rectiflow::devices::DeviceFamily;
use rectiflow::pareto::{uniform_alphas, Interval, OptimizerSettings, ParameterBox, RegionAxis};
use rectiflow::EngineMode;

use crate::CliError;

/// A scalar, an explicit list, or an evenly spaced range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sweep {
    Value(f64),
    Values(Vec<f64>),
    Linspace { from: f64, to: f64, points: usize },
}

impl Sweep {
    pub fn parse_flag(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("--t-hot `{s}`: expected `from:to:points` or a list"));
        if let [from, to, points] = s.split(':').collect::<Vec<_>>()[..] {
            return Ok(Sweep::Linspace {
                from: from.trim().parse().map_err(|_| bad())?,
                to: to.trim().parse().map_err(|_| bad())?,
                points: points.trim().parse().map_err(|_| bad())?,
            });
        }
        s.split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map(Sweep::Values)
            .map_err(|_| bad())
    }

    pub fn values(&self, field: &str) -> Result<Vec<f64>, CliError> {
        let v = match self {
            Sweep::Value(x) => vec![*x],
            Sweep::Values(v) => v.clone(),
            Sweep::Linspace { points: 0, .. } => Vec::new(),
            Sweep::Linspace { from, points: 1, .. } => vec![*from],
            Sweep::Linspace { from, to, points } => Interval::new(*from, *to).grid(*points),
        };
        if v.is_empty() {
            return Err(CliError::Config(format!("`{field}`: empty sweep")));
        }
        if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
            return Err(CliError::Config(format!("`{field}`: non-finite value {bad}")));
        }
        Ok(v)
    }
}

/// A fixed value or an optimization interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bounds {
    Fixed(f64),
    Range { lo: f64, hi: f64 },
}

impl Bounds {
    fn interval(self) -> Interval {
        match self {
            Bounds::Fixed(x) => Interval::point(x),
            Bounds::Range { lo, hi } => Interval::new(lo, hi),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxOverride {
    pub chi: Option<Bounds>,
    pub delta: Option<Bounds>,
    pub g: Option<Bounds>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Analytic,
    Numeric,
    Both,
}

impl Engine {
    /// Mode used for optimization; `both` optimizes on the numeric engine.
    pub fn mode(self) -> EngineMode {
        match self {
            Engine::Analytic => EngineMode::Analytic,
            Engine::Numeric | Engine::Both => EngineMode::Numeric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// `"uniform:N"` or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaGrid {
    Spec(String),
    List(Vec<f64>),
}

impl AlphaGrid {
    pub fn parse_flag(s: &str) -> Result<Self, CliError> {
        if s.starts_with("uniform:") {
            return Ok(AlphaGrid::Spec(s.to_string()));
        }
        s.split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map(AlphaGrid::List)
            .map_err(|e| CliError::Config(format!("--alpha-grid `{s}`: {e}")))
    }

    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        let v = match self {
            AlphaGrid::List(v) => v.clone(),
            AlphaGrid::Spec(s) => {
                let n = s
                    .strip_prefix("uniform:")
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| CliError::Config(format!("`alpha_grid`: expected `uniform:N`, got `{s}`")))?;
                if n == 0 {
                    Vec::new()
                } else {
                    uniform_alphas(n)
                }
            }
        };
        if v.is_empty() {
            return Err(CliError::Config("`alpha_grid`: empty".into()));
        }
        if let Some(a) = v.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(CliError::Config(format!("`alpha_grid`: {a} outside [0, 1]")));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    #[serde(default = "default_coarse")]
    pub coarse_points: usize,
    #[serde(default = "default_refine")]
    pub refine_points: usize,
    #[serde(default = "default_rounds")]
    pub rounds: usize,
}

fn default_coarse() -> usize {
    OptimizerSettings::default().coarse_points
}
fn default_refine() -> usize {
    OptimizerSettings::default().refine_points
}
fn default_rounds() -> usize {
    OptimizerSettings::default().rounds
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            coarse_points: default_coarse(),
            refine_points: default_refine(),
            rounds: default_rounds(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionsConfig {
    pub first: DeviceFamily,
    pub second: DeviceFamily,
    pub axis: RegionAxis,
    pub values: Sweep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "all_devices")]
    pub devices: Vec<DeviceFamily>,
    #[serde(default = "one")]
    pub epsilon: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_t_cold")]
    pub t_cold: f64,
    #[serde(default = "default_t_hot")]
    pub t_hot: Sweep,
    #[serde(default)]
    pub chi: Option<Bounds>,
    #[serde(default)]
    pub delta: Option<Bounds>,
    #[serde(default)]
    pub g: Option<Bounds>,
    /// Per-device overrides of `chi`, `delta`, `g`.
    #[serde(default)]
    pub boxes: BTreeMap<DeviceFamily, BoxOverride>,
    #[serde(default = "default_alphas")]
    pub alpha_grid: AlphaGrid,
    /// Switches `tradeoff` to maximizing R subject to J ≥ j_min (γε).
    #[serde(default)]
    pub j_min: Option<f64>,
    #[serde(default = "default_engine")]
    pub engine: Engine,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub regions: Option<RegionsConfig>,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default = "default_format")]
    pub format: Format,
}

fn all_devices() -> Vec<DeviceFamily> {
    vec![DeviceFamily::A, DeviceFamily::B, DeviceFamily::C]
}
fn one() -> f64 {
    1.0
}
fn default_gamma() -> f64 {
    0.001
}
fn default_t_cold() -> f64 {
    0.01
}
fn default_t_hot() -> Sweep {
    Sweep::Value(2.0)
}
fn default_alphas() -> AlphaGrid {
    AlphaGrid::Spec("uniform:101".into())
}
fn default_engine() -> Engine {
    Engine::Analytic
}
fn default_format() -> Format {
    Format::Csv
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults deserialize")
    }
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn settings(&self) -> OptimizerSettings {
        OptimizerSettings {
            coarse_points: self.optimizer.coarse_points,
            refine_points: self.optimizer.refine_points,
            rounds: self.optimizer.rounds,
            mode: self.engine.mode(),
        }
    }

    /// Canonical serialization without the output path; its hash identifies
    /// the experiment.
    pub fn canonical(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        serde_json::to_string(&c).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.devices.is_empty() {
            return Err(CliError::Config("`devices`: empty".into()));
        }
        self.t_hot.values("t_hot")?;
        self.alpha_grid.values()?;
        if let Some(r) = &self.regions {
            r.values.values("regions.values")?;
        }
        if let Some(j) = self.j_min {
            if !(j >= 0.0) {
                return Err(CliError::Config(format!("`j_min`: must be non-negative, got {j}")));
            }
        }
        Ok(())
    }

    /// Search box for `family` at `t_hot`: reference ranges (scaled by ε),
    /// then top-level overrides, then per-device overrides.
    pub fn parameter_box(&self, family: DeviceFamily, t_hot: f64) -> ParameterBox {
        let mut bx = ParameterBox::reference(family, t_hot);
        let scale = |iv: Interval| Interval::new(iv.lo * self.epsilon, iv.hi * self.epsilon);
        bx.delta = scale(bx.delta);
        bx.g = scale(bx.g);
        bx.epsilon = self.epsilon;
        bx.gamma = self.gamma;
        bx.t_cold = self.t_cold;
        let local = self.boxes.get(&family).copied().unwrap_or_default();
        if let Some(b) = local.chi.or(self.chi) {
            bx.chi = b.interval();
        }
        if family == DeviceFamily::B {
            if let Some(b) = local.delta.or(self.delta) {
                bx.delta = b.interval();
            }
        }
        if family != DeviceFamily::A {
            if let Some(b) = local.g.or(self.g) {
                bx.g = b.interval();
            }
        }
        bx
    }
}
