//! TOML run configuration.
//!
//! ```toml
//! [problem]
//! generator = "bilinear"
//! dim_x = 10
//! q = 2.0
//! matrix = "gaussian"
//!
//! [problem.phi]
//! amplitude = 0.2
//! negative_directions = 1
//!
//! [solver]
//! epsilon = 1e-3
//!
//! [report]
//! seed = 7
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub report: ReportConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    Bilinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    Identity,
    #[default]
    Gaussian,
    LogDiagonal,
    Zero,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeasibleKind {
    #[default]
    Cube,
    Ball,
    Simplex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompositeKind {
    #[default]
    Zero,
    L1,
    Quadratic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub generator: Generator,
    pub dim_x: usize,
    /// Defaults to `dim_x`.
    pub dim_y: Option<usize>,
    #[serde(default = "two")]
    pub q: f64,
    #[serde(default = "one")]
    pub sigma: f64,
    /// Replaces the derived uniform convexity modulus; meant for checking
    /// that the validators catch a wrong declaration.
    pub sigma_q_override: Option<f64>,
    #[serde(default)]
    pub matrix: MatrixKind,
    /// Identity multiplier, Gaussian entry scale, or largest log-diagonal entry.
    #[serde(default = "one")]
    pub matrix_scale: f64,
    /// Smallest log-diagonal entry.
    #[serde(default = "default_matrix_min")]
    pub matrix_min: f64,
    /// Dense text matrix, resolved against the config file's directory.
    pub matrix_file: Option<PathBuf>,
    #[serde(default)]
    pub feasible: FeasibleKind,
    /// Cube half-width, ball radius, or simplex scale.
    #[serde(default = "one")]
    pub radius: f64,
    #[serde(default)]
    pub composite: CompositeKind,
    #[serde(default)]
    pub composite_weight: f64,
    #[serde(default)]
    pub phi: PhiConfig,
    /// Explicit starting point; defaults to the center of the feasible set.
    pub x0: Option<Vec<f64>>,
}

/// `φ(x) = Σ a sin(b xᵢ) + ½ xᵀ diag(c) x + l Σ xᵢ`, where the first
/// `negative_directions` entries of `c` equal `−negative_curvature` and the rest
/// are log-spaced from `curvature_max` down to `curvature_min`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiConfig {
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default = "one")]
    pub frequency: f64,
    #[serde(default)]
    pub negative_directions: usize,
    #[serde(default = "one")]
    pub negative_curvature: f64,
    #[serde(default = "one")]
    pub curvature_max: f64,
    #[serde(default = "one")]
    pub curvature_min: f64,
    #[serde(default)]
    pub linear: f64,
}

impl Default for PhiConfig {
    fn default() -> Self {
        Self {
            amplitude: 0.0,
            frequency: 1.0,
            negative_directions: 0,
            negative_curvature: 1.0,
            curvature_max: 1.0,
            curvature_min: 1.0,
            linear: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stationarity {
    Norm,
    #[default]
    NormSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InnerBaseKind {
    #[default]
    FastGradient,
    Synthetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusKind {
    #[default]
    Analytic,
    Certified,
    Doubling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "one")]
    pub l0: f64,
    #[serde(default = "default_max_outer")]
    pub max_outer_iterations: usize,
    #[serde(default = "default_max_doublings")]
    pub max_doublings: usize,
    #[serde(default)]
    pub stationarity: Stationarity,
    #[serde(default)]
    pub inner_base: InnerBaseKind,
    /// `c_A` of the synthetic base; its distance exponent is `q` and its rate exponent `synthetic_rate`.
    #[serde(default = "default_synthetic_c_a")]
    pub synthetic_c_a: f64,
    #[serde(default = "two")]
    pub synthetic_rate: f64,
    #[serde(default)]
    pub radius: RadiusKind,
    #[serde(default = "one")]
    pub radius_initial: f64,
    /// Radius doublings allowed per inner solve under `radius = "doubling"`.
    #[serde(default = "default_radius_doublings")]
    pub radius_max_doublings: u32,
    #[serde(default = "default_max_restarts")]
    pub max_restarts: usize,
    #[serde(default = "default_max_inner_iterations")]
    pub max_inner_iterations: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            epsilon: default_epsilon(),
            l0: 1.0,
            max_outer_iterations: default_max_outer(),
            max_doublings: default_max_doublings(),
            stationarity: Stationarity::default(),
            inner_base: InnerBaseKind::default(),
            synthetic_c_a: default_synthetic_c_a(),
            synthetic_rate: 2.0,
            radius: RadiusKind::default(),
            radius_initial: 1.0,
            radius_max_doublings: default_radius_doublings(),
            max_restarts: default_max_restarts(),
            max_inner_iterations: default_max_inner_iterations(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportConfig {
    /// Root directory for run artifacts; `SADDLE_OUTPUT_ROOT` takes precedence.
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Run directory name; defaults to the config file stem.
    pub name: Option<String>,
    #[serde(default)]
    pub seed: u64,
    /// Write the per-iteration CSV.
    #[serde(default = "yes")]
    pub trace: bool,
    #[serde(default = "default_validation_samples")]
    pub validation_samples: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            output_dir: default_output_dir(),
            name: None,
            seed: 0,
            trace: true,
            validation_samples: default_validation_samples(),
        }
    }
}

/// Environment variable that overrides `report.output_dir`.
pub const OUTPUT_ROOT_ENV: &str = "SADDLE_OUTPUT_ROOT";

fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}
fn yes() -> bool {
    true
}
fn default_matrix_min() -> f64 {
    1e-2
}
fn default_epsilon() -> f64 {
    1e-3
}
fn default_max_outer() -> usize {
    100_000
}
fn default_max_doublings() -> usize {
    60
}
fn default_synthetic_c_a() -> f64 {
    4.0
}
fn default_radius_doublings() -> u32 {
    30
}
fn default_max_restarts() -> usize {
    200
}
fn default_max_inner_iterations() -> u64 {
    5_000_000
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("runs")
}
fn default_validation_samples() -> usize {
    1000
}

/// A parsed config together with the location it was read from.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    /// Directory that relative paths in the config are resolved against.
    pub base_dir: PathBuf,
    pub stem: String,
}

impl LoadedConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let config: RunConfig = toml::from_str(&text).map_err(|source| HarnessError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        config.validate()?;
        Ok(Self {
            config,
            base_dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
            stem: path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "run".into()),
        })
    }

    /// `$SADDLE_OUTPUT_ROOT/<name>` or `<output_dir>/<name>`, with relative
    /// `output_dir` resolved against the config directory.
    pub fn run_dir(&self) -> PathBuf {
        let root = match std::env::var_os(OUTPUT_ROOT_ENV) {
            Some(root) if !root.is_empty() => PathBuf::from(root),
            _ => self.base_dir.join(&self.config.report.output_dir),
        };
        root.join(self.config.report.name.as_deref().unwrap_or(&self.stem))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let p = &self.problem;
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if p.dim_x == 0 || p.dim_y == Some(0) {
            return bad("dimensions must be positive".into());
        }
        if p.matrix == MatrixKind::File && p.matrix_file.is_none() {
            return bad("matrix = \"file\" needs matrix_file".into());
        }
        if p.matrix != MatrixKind::File && p.matrix_file.is_some() {
            return bad("matrix_file is only read when matrix = \"file\"".into());
        }
        if matches!(p.matrix, MatrixKind::Identity | MatrixKind::LogDiagonal)
            && self.dim_y() != p.dim_x
        {
            return bad(format!("{:?} coupling needs dim_y = dim_x", p.matrix));
        }
        if let Some(x0) = &p.x0 {
            if x0.len() != p.dim_x {
                return bad(format!(
                    "x0 has {} entries, expected dim_x = {}",
                    x0.len(),
                    p.dim_x
                ));
            }
        }
        if p.phi.negative_directions > p.dim_x {
            return bad("phi.negative_directions exceeds dim_x".into());
        }
        let s = &self.solver;
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(s.epsilon) || !positive(s.l0) || !positive(s.radius_initial) {
            return bad(
                "solver.epsilon, solver.l0 and solver.radius_initial must be positive".into(),
            );
        }
        if s.max_outer_iterations == 0 || s.max_doublings == 0 || s.max_restarts == 0 {
            return bad("solver iteration limits must be positive".into());
        }
        Ok(())
    }

    pub fn dim_y(&self) -> usize {
        self.problem.dim_y.unwrap_or(self.problem.dim_x)
    }
}
