//! Run configuration (TOML) and deterministic run manifests.

use crate::metrics::Regime;
use crate::optimize::{
    circular_gait_control, traveling_wave_gait, OptimizationProblem, DEFAULT_CONTROL_POINTS,
};
use crate::power::EfficiencyReport;
use crate::shape::{CurvatureModel, GaitTrajectory, Grid, ModeKind, ModeSet};
use crate::{Error, Result};
use nalgebra::DMatrix;
use std::collections::BTreeMap;
use std::path::Path;

/// Hydrodynamic regime section of a run config.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RegimeConfig {
    Low { drag_ratio: f64 },
    High { density: f64, cross_radius: f64 },
}

impl RegimeConfig {
    pub fn regime(&self) -> Regime {
        match *self {
            RegimeConfig::Low { drag_ratio } => Regime::LowRe { drag_ratio },
            RegimeConfig::High {
                density,
                cross_radius,
            } => Regime::HighRe {
                density,
                cross_radius,
            },
        }
    }
}

impl Default for RegimeConfig {
    fn default() -> Self {
        RegimeConfig::Low { drag_ratio: 2.0 }
    }
}

/// Swimmer family under study.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    ThreeLink,
    Serpenoid,
    TwoMode,
    ThreeMode,
    Infinite,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::ThreeLink => "three-link",
            Family::Serpenoid => "serpenoid",
            Family::TwoMode => "two-mode",
            Family::ThreeMode => "three-mode",
            Family::Infinite => "infinite",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "three-link" => Ok(Family::ThreeLink),
            "serpenoid" => Ok(Family::Serpenoid),
            "two-mode" => Ok(Family::TwoMode),
            "three-mode" => Ok(Family::ThreeMode),
            "infinite" => Ok(Family::Infinite),
            other => Err(Error::Config(format!("unknown swimmer family '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SwimmerConfig {
    pub family: Family,
    /// Initial gait amplitude for the circular / traveling-wave start.
    pub amplitude: f64,
}

impl Default for SwimmerConfig {
    fn default() -> Self {
        Self {
            family: Family::Serpenoid,
            amplitude: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GridConfig {
    pub n_s: usize,
    pub n_t: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n_s: 100, n_t: 128 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SplineConfig {
    /// Control points per shape mode (P).
    pub mode_points: usize,
    /// Control points per shape variable (Q).
    pub gait_points: usize,
}

impl Default for SplineConfig {
    fn default() -> Self {
        Self {
            mode_points: DEFAULT_CONTROL_POINTS,
            gait_points: DEFAULT_CONTROL_POINTS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OptimizerConfig {
    pub kappa_max: f64,
    pub rel_tol: f64,
    pub max_iters: usize,
    pub restarts: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            kappa_max: 8.0,
            rel_tol: 1e-6,
            max_iters: 500,
            restarts: 5,
        }
    }
}

/// A complete run configuration; round-trips losslessly through TOML.
#[derive(Clone, Debug, PartialEq, Default, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub regime: RegimeConfig,
    pub swimmer: SwimmerConfig,
    pub grid: GridConfig,
    pub splines: SplineConfig,
    pub optimizer: OptimizerConfig,
    pub seed: u64,
    pub out_dir: String,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.regime.regime().validate()?;
        if self.grid.n_s < 2 || self.grid.n_t < 8 {
            return Err(Error::Config(format!(
                "grid too coarse: n_s = {}, n_t = {}",
                self.grid.n_s, self.grid.n_t
            )));
        }
        if self.splines.mode_points < 2 || self.splines.gait_points < 3 {
            return Err(Error::Config("spline sizes too small".into()));
        }
        if self.optimizer.kappa_max <= 0.0 {
            return Err(Error::Config("kappa_max must be positive".into()));
        }
        Ok(())
    }

    pub fn grid_(&self) -> Grid {
        Grid::new(self.grid.n_s, self.grid.n_t)
    }

    fn mode_count(&self) -> usize {
        match self.swimmer.family {
            Family::ThreeLink | Family::Serpenoid | Family::TwoMode => 2,
            Family::ThreeMode => 3,
            Family::Infinite => DEFAULT_CONTROL_POINTS,
        }
    }

    /// Initial design modes of the configured family.
    pub fn initial_modes(&self) -> Result<ModeSet> {
        match self.swimmer.family {
            Family::ThreeLink => Ok(ModeSet::three_link()),
            Family::Serpenoid => Ok(ModeSet::serpenoid()),
            Family::TwoMode => ModeSet::spline(crate::optimize::harmonic_mode_control(
                2,
                self.splines.mode_points,
            )),
            Family::ThreeMode => ModeSet::spline(crate::optimize::harmonic_mode_control(
                3,
                self.splines.mode_points,
            )),
            Family::Infinite => ModeSet::unit_modes(DEFAULT_CONTROL_POINTS),
        }
    }

    /// Initial gait control of the configured family.
    pub fn initial_gait(&self) -> DMatrix<f64> {
        let q = self.splines.gait_points;
        match self.swimmer.family {
            Family::Infinite => {
                traveling_wave_gait(DEFAULT_CONTROL_POINTS, q, self.swimmer.amplitude)
            }
            _ => circular_gait_control(self.mode_count(), q, self.swimmer.amplitude),
        }
    }

    /// The configured model at the initial point.
    pub fn model(&self) -> Result<CurvatureModel> {
        CurvatureModel::new(
            self.initial_modes()?,
            GaitTrajectory::new(self.initial_gait())?,
            self.grid_(),
        )
    }

    /// The configured optimization problem.
    pub fn problem(&self) -> Result<OptimizationProblem> {
        let regime = self.regime.regime();
        let grid = self.grid_();
        let mut problem = match self.swimmer.family {
            Family::TwoMode => OptimizationProblem::co_design(
                regime,
                2,
                self.splines.mode_points,
                self.initial_gait(),
                grid,
                self.seed,
            )?,
            Family::ThreeMode => OptimizationProblem::co_design(
                regime,
                3,
                self.splines.mode_points,
                self.initial_gait(),
                grid,
                self.seed,
            )?,
            Family::Infinite => OptimizationProblem::infinite(
                regime,
                DEFAULT_CONTROL_POINTS,
                self.initial_gait(),
                grid,
                self.seed,
            )?,
            _ => OptimizationProblem::gait_only(
                regime,
                self.initial_modes()?,
                self.initial_gait(),
                grid,
                self.seed,
            ),
        };
        problem.kappa_max = self.optimizer.kappa_max;
        problem.rel_tol = self.optimizer.rel_tol;
        problem.max_iters = self.optimizer.max_iters;
        problem.restarts = self.optimizer.restarts;
        Ok(problem)
    }
}

/// Everything needed to replay a run and verify its outputs.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config: RunConfig,
    pub mode_kind: ModeKind,
    pub final_kappa_c: DMatrix<f64>,
    pub final_alpha_c: DMatrix<f64>,
    pub report: EfficiencyReport,
    /// file name -> SHA-256 hex digest of every exported file.
    pub checksums: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(
        config: &RunConfig,
        modes: &ModeSet,
        gait: &DMatrix<f64>,
        report: EfficiencyReport,
    ) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            mode_kind: modes.kind(),
            final_kappa_c: modes.control().clone(),
            final_alpha_c: gait.clone(),
            report,
            checksums: BTreeMap::new(),
        }
    }

    /// Rebuild the final model recorded in the manifest.
    pub fn model(&self) -> Result<CurvatureModel> {
        let modes = match self.mode_kind {
            ModeKind::ThreeLink => ModeSet::three_link(),
            ModeKind::Serpenoid => ModeSet::serpenoid(),
            ModeKind::Spline => ModeSet::spline(self.final_kappa_c.clone())?,
            ModeKind::UnitModes => {
                let mut m = ModeSet::unit_modes(self.final_kappa_c.nrows())?;
                m.set_control(self.final_kappa_c.clone())?;
                m
            }
        };
        CurvatureModel::new(
            modes,
            GaitTrajectory::new(self.final_alpha_c.clone())?,
            self.config.grid_(),
        )
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        toml::from_str(&std::fs::read_to_string(path)?).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_numerical_setup() {
        let config = RunConfig::default();
        assert_eq!(config.regime, RegimeConfig::Low { drag_ratio: 2.0 });
        assert_eq!(config.grid.n_s, 100);
        assert_eq!(config.grid.n_t, 128);
        assert_eq!(config.splines.mode_points, 10);
        assert_eq!(config.splines.gait_points, 10);
        config.validate().unwrap();
    }

    #[test]
    fn toml_round_trip_is_lossless() {
        let mut config = RunConfig::default();
        config.regime = RegimeConfig::High {
            density: 1.0,
            cross_radius: 0.005,
        };
        config.swimmer.family = Family::TwoMode;
        config.swimmer.amplitude = 0.75;
        config.seed = 1234;
        config.out_dir = "runs/demo".into();
        let text = config.to_toml();
        let parsed = RunConfig::from_toml(&text).unwrap();
        assert_eq!(parsed, config);
        // canonical form: emit(parse(emit(c))) == emit(c)
        assert_eq!(parsed.to_toml(), text);
    }

    #[test]
    fn partial_configs_fill_defaults() {
        let config = RunConfig::from_toml(
            "seed = 7\n[swimmer]\nfamily = \"three-link\"\namplitude = 0.4\n",
        )
        .unwrap();
        assert_eq!(config.seed, 7);
        assert_eq!(config.swimmer.family, Family::ThreeLink);
        assert_eq!(config.grid.n_s, 100);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(RunConfig::from_toml("[regime]\nkind = \"warp\"\n").is_err());
        let mut config = RunConfig::default();
        config.grid.n_s = 1;
        assert!(config.validate().is_err());
        config = RunConfig::default();
        config.optimizer.kappa_max = -1.0;
        assert!(config.validate().is_err());
    }

    #[test]
    fn families_build_consistent_models() {
        for family in [
            Family::ThreeLink,
            Family::Serpenoid,
            Family::TwoMode,
            Family::ThreeMode,
            Family::Infinite,
        ] {
            let mut config = RunConfig::default();
            config.swimmer.family = family;
            config.grid = GridConfig { n_s: 20, n_t: 8 };
            let model = config.model().unwrap();
            assert_eq!(model.modes.mode_count(), model.gait.mode_count());
            let problem = config.problem().unwrap();
            problem.validate().unwrap();
        }
    }

    #[test]
    fn manifest_round_trip_rebuilds_the_model() {
        let mut config = RunConfig::default();
        config.swimmer.family = Family::TwoMode;
        config.grid = GridConfig { n_s: 20, n_t: 8 };
        let model = config.model().unwrap();
        let report = crate::power::efficiency(&model, &config.regime.regime()).unwrap();
        let manifest = RunManifest::new(
            &config,
            &model.modes,
            model.gait.control(),
            report,
        );
        let text = manifest.to_toml();
        let parsed: RunManifest = toml::from_str(&text).unwrap();
        let rebuilt = parsed.model().unwrap();
        for &(s, t) in &[(0.3, 0.2), (0.8, 0.9)] {
            assert_eq!(rebuilt.eval_curvature(s, t), model.eval_curvature(s, t));
        }
    }
}
