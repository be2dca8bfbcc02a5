use crate::disorder::DisorderSpec;
use crate::error::{Error, Result};
use crate::graph::{CylinderGraph, HGraph};
use crate::transfer::Caps;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Poly,
    #[default]
    Scalar,
}

/// The fiber graph `H`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberConfig {
    /// `path`, `cycle`, `complete`, `empty` or `edges`.
    pub kind: String,
    pub h: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize)>>,
}

impl FiberConfig {
    pub fn path(h: usize) -> Self {
        Self {
            kind: "path".into(),
            h,
            edges: None,
        }
    }

    pub fn build(&self) -> Result<HGraph> {
        match self.kind.as_str() {
            "path" => HGraph::path(self.h),
            "cycle" => HGraph::cycle(self.h),
            "complete" => HGraph::complete(self.h),
            "empty" => HGraph::empty(self.h),
            "edges" => HGraph::new(
                self.h,
                self.edges
                    .clone()
                    .ok_or_else(|| Error::Config("fiber kind `edges` needs an edge list".into()))?,
            ),
            other => Err(Error::Config(format!("unknown fiber kind `{other}`"))),
        }
    }

    pub fn cylinder(&self, n: usize) -> Result<CylinderGraph> {
        CylinderGraph::new(n, self.build()?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderConfig {
    pub n: Vec<usize>,
    pub replicas: usize,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: Mode,
    /// Worker threads; 0 uses every core.
    #[serde(default)]
    pub threads: usize,
    /// Section statistics at the cut `⌊n/2⌋`.
    #[serde(default = "default_true")]
    pub sections: bool,
    #[serde(default = "default_true")]
    pub ground: bool,
    /// Spectrum summary per row (polynomial mode).
    #[serde(default)]
    pub spectrum: bool,
    /// The first entry is the tilt for the spectrum columns (0 when empty).
    #[serde(default)]
    pub x_grid: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            mode: Mode::Scalar,
            threads: 0,
            sections: true,
            ground: true,
            spectrum: false,
            x_grid: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LlnCheck {
    #[serde(default = "default_true")]
    pub enabled: bool,
    /// Relative drift of `mean(log Z)/n` between the top two `n`.
    #[serde(default = "LlnCheck::default_mean_drift")]
    pub mean_drift: f64,
    /// Relative drift of `var(log Z)/n` between the top two `n`.
    #[serde(default = "LlnCheck::default_var_drift")]
    pub var_drift: f64,
    /// Standard errors by which `var(log Z)/n` must exceed zero.
    #[serde(default = "LlnCheck::default_se")]
    pub var_se: f64,
}

impl LlnCheck {
    fn default_mean_drift() -> f64 {
        0.01
    }
    fn default_var_drift() -> f64 {
        0.10
    }
    fn default_se() -> f64 {
        3.0
    }
}

impl Default for LlnCheck {
    fn default() -> Self {
        Self {
            enabled: true,
            mean_drift: 0.01,
            var_drift: 0.10,
            var_se: 3.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CltCheck {
    #[serde(default = "default_true")]
    pub enabled: bool,
    /// Layer count the check looks at; the top of the ladder by default.
    #[serde(default)]
    pub n: Option<usize>,
    /// Any of `log_z`, `mean_u`, `m_n`.
    #[serde(default = "CltCheck::default_metrics")]
    pub metrics: Vec<String>,
}

impl CltCheck {
    fn default_metrics() -> Vec<String> {
        vec!["log_z".into(), "mean_u".into(), "m_n".into()]
    }
}

impl Default for CltCheck {
    fn default() -> Self {
        Self {
            enabled: true,
            n: None,
            metrics: Self::default_metrics(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnealedCheck {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default = "LlnCheck::default_se")]
    pub se: f64,
}

impl Default for AnnealedCheck {
    fn default() -> Self {
        Self { enabled: false, se: 3.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuenchedCheck {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default = "QuenchedCheck::default_envs")]
    pub environments: usize,
    #[serde(default = "QuenchedCheck::default_distance")]
    pub max_distance: f64,
    /// Fraction of environments that must pass.
    #[serde(default = "QuenchedCheck::default_fraction")]
    pub fraction: f64,
}

impl QuenchedCheck {
    fn default_envs() -> usize {
        100
    }
    fn default_distance() -> f64 {
        0.05
    }
    fn default_fraction() -> f64 {
        0.95
    }
}

impl Default for QuenchedCheck {
    fn default() -> Self {
        Self {
            enabled: false,
            environments: 100,
            max_distance: 0.05,
            fraction: 0.95,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointCheck {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default = "JointCheck::default_envs")]
    pub environments: usize,
    /// `n` for the covariance bound.
    pub cov_n: usize,
    /// `n` for the section variance comparison.
    pub var_n: usize,
    #[serde(default = "JointCheck::default_cov")]
    pub cov_ratio: f64,
    #[serde(default = "LlnCheck::default_var_drift")]
    pub var_tol: f64,
}

impl JointCheck {
    fn default_envs() -> usize {
        20
    }
    fn default_cov() -> f64 {
        0.02
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BrownianCheck {
    #[serde(default)]
    pub enabled: bool,
    pub n: usize,
    /// Environments, one Gibbs draw each.
    pub samples: usize,
    /// The grid has `2^grid_log2` increments.
    #[serde(default = "BrownianCheck::default_grid")]
    pub grid_log2: u32,
    #[serde(default = "BrownianCheck::default_var_tol")]
    pub var_tol: f64,
    #[serde(default = "BrownianCheck::default_corr")]
    pub corr_max: f64,
}

impl BrownianCheck {
    fn default_grid() -> u32 {
        3
    }
    fn default_var_tol() -> f64 {
        0.15
    }
    fn default_corr() -> f64 {
        0.1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthCheck {
    #[serde(default)]
    pub enabled: bool,
    /// Bound on `|mean⟨U⟩_m − m û|` over the ladder.
    #[serde(default = "GrowthCheck::default_dev")]
    pub max_deviation: f64,
}

impl GrowthCheck {
    fn default_dev() -> f64 {
        3.0
    }
}

impl Default for GrowthCheck {
    fn default() -> Self {
        Self {
            enabled: false,
            max_deviation: 3.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ThoulessCheck {
    #[serde(default)]
    pub enabled: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ChecksConfig {
    #[serde(default)]
    pub lln: LlnCheck,
    #[serde(default)]
    pub clt: CltCheck,
    #[serde(default)]
    pub annealed: AnnealedCheck,
    #[serde(default)]
    pub quenched: QuenchedCheck,
    #[serde(default)]
    pub joint: Option<JointCheck>,
    #[serde(default)]
    pub brownian: Option<BrownianCheck>,
    #[serde(default)]
    pub growth: GrowthCheck,
    #[serde(default)]
    pub thouless: ThoulessCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "OutputConfig::default_dir")]
    pub dir: PathBuf,
}

impl OutputConfig {
    fn default_dir() -> PathBuf {
        PathBuf::from("out")
    }
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: Self::default_dir(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub fiber: FiberConfig,
    pub disorder: DisorderSpec,
    pub ladder: LadderConfig,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    /// Minimal configuration with every check at its default.
    pub fn new(fiber: FiberConfig, disorder: DisorderSpec, n: Vec<usize>, replicas: usize) -> Self {
        Self {
            fiber,
            disorder,
            ladder: LadderConfig { n, replicas },
            run: RunConfig::default(),
            checks: ChecksConfig::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.disorder.validate()?;
        let h = self.fiber.build()?.h();
        if self.ladder.n.is_empty() || self.ladder.n.contains(&0) {
            return Err(Error::Config("ladder needs positive layer counts".into()));
        }
        if self.ladder.n.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("ladder must be strictly increasing".into()));
        }
        if self.ladder.replicas < 2 {
            return Err(Error::InsufficientReplicas {
                needed: 2,
                got: self.ladder.replicas,
            });
        }
        let caps = Caps::default();
        let top = *self.ladder.n.last().expect("nonempty ladder");
        let poly = self.run.mode == Mode::Poly || self.run.spectrum;
        if poly && (h > caps.poly_fiber || top > caps.poly_layers) {
            return Err(Error::Config(format!(
                "polynomial mode supports h ≤ {} and n ≤ {}",
                caps.poly_fiber, caps.poly_layers
            )));
        }
        if h > caps.scalar_fiber {
            return Err(Error::Config(format!("scalar mode supports h ≤ {}", caps.scalar_fiber)));
        }
        for m in &self.checks.clt.metrics {
            if !["log_z", "mean_u", "m_n"].contains(&m.as_str()) {
                return Err(Error::Config(format!("unknown metric `{m}`")));
            }
        }
        if self.checks.thouless.enabled && h != 1 {
            return Err(Error::Config("the Thouless check needs h = 1".into()));
        }
        Ok(())
    }

    pub fn top_n(&self) -> usize {
        *self.ladder.n.last().expect("validated ladder")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[fiber]
kind = "path"
h = 2

[disorder]
vertex = { law = "normal", mean = 0.0, sd = 1.0 }
edge = { law = "uniform", low = -1.0, high = 1.0 }

[ladder]
n = [8, 16]
replicas = 4

[run]
seed = 11
mode = "poly"

[checks.quenched]
enabled = true
environments = 3
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ExperimentConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(cfg.run.mode, Mode::Poly);
        assert_eq!(cfg.checks.quenched.environments, 3);
        assert!(cfg.checks.lln.enabled);
        let again = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::from_toml(&SAMPLE.replace("replicas = 4", "replicas = 1")).is_err());
        assert!(ExperimentConfig::from_toml(&SAMPLE.replace("[8, 16]", "[16, 8]")).is_err());
        assert!(ExperimentConfig::from_toml(&SAMPLE.replace("h = 2", "h = 7")).is_err());
        assert!(ExperimentConfig::from_toml(&format!("{SAMPLE}\nbogus = 1\n")).is_err());
    }
}
