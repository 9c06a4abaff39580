//! Curvature parameterization: shape modes, gait trajectories, and the
//! bilinear curvature field `kappa(s, t) = sum_i kappa_i(s) alpha_i(t)`.

use crate::spline::{NaturalSplineBasis, PeriodicSplineBasis};
use crate::{Error, Result};
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Width of the boxcar "joints" realizing the three-link preset, in
/// normalized arclength. The boxcar height is 1/width so a unit shape
/// variable produces a unit joint angle.
pub const THREE_LINK_JOINT_WIDTH: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ModeKind {
    Spline,
    ThreeLink,
    Serpenoid,
    UnitModes,
}

/// A set of shape modes: fixed spatial deformation patterns along the
/// backbone. Spline and unit-mode sets carry control points over a cardinal
/// natural spline basis; the three-link and serpenoid presets are analytic.
#[derive(Clone, Debug)]
pub struct ModeSet {
    kind: ModeKind,
    /// m x P control matrix; empty (m x 0) for analytic presets.
    control: DMatrix<f64>,
    basis: Option<NaturalSplineBasis>,
    mode_count: usize,
}

/// Cardinal natural spline basis on `p` uniform knots; the building block of
/// spline mode sets.
pub fn build_mode_basis(p: usize) -> Result<NaturalSplineBasis> {
    NaturalSplineBasis::new(p)
}

/// Cardinal periodic spline basis on `q` uniform knots over one period.
pub fn build_gait_basis(q: usize) -> Result<PeriodicSplineBasis> {
    PeriodicSplineBasis::new(q)
}

impl ModeSet {
    /// Spline modes from an m x P control matrix.
    pub fn spline(control: DMatrix<f64>) -> Result<Self> {
        let basis = build_mode_basis(control.ncols())?;
        Ok(Self {
            kind: ModeKind::Spline,
            mode_count: control.nrows(),
            control,
            basis: Some(basis),
        })
    }

    /// Two boxcar joint modes at s = 1/3 and s = 2/3.
    pub fn three_link() -> Self {
        Self {
            kind: ModeKind::ThreeLink,
            control: DMatrix::zeros(2, 0),
            basis: None,
            mode_count: 2,
        }
    }

    /// sin/cos single-wave modes along the backbone.
    pub fn serpenoid() -> Self {
        Self {
            kind: ModeKind::Serpenoid,
            control: DMatrix::zeros(2, 0),
            basis: None,
            mode_count: 2,
        }
    }

    /// m cardinal spline modes with identity control points: the
    /// "infinitely flexible" parameterization.
    pub fn unit_modes(m: usize) -> Result<Self> {
        let basis = build_mode_basis(m)?;
        Ok(Self {
            kind: ModeKind::UnitModes,
            control: DMatrix::identity(m, m),
            basis: Some(basis),
            mode_count: m,
        })
    }

    pub fn kind(&self) -> ModeKind {
        self.kind
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    /// Number of control-point columns (0 for analytic presets).
    pub fn control_cols(&self) -> usize {
        self.control.ncols()
    }

    pub fn control(&self) -> &DMatrix<f64> {
        &self.control
    }

    /// Replace the control matrix (spline kinds only). Used by the
    /// co-design optimizer.
    pub fn set_control(&mut self, control: DMatrix<f64>) -> Result<()> {
        if self.control.shape() != control.shape() {
            return Err(Error::InvalidParameter(format!(
                "control shape {:?} does not match mode set {:?}",
                control.shape(),
                self.control.shape()
            )));
        }
        self.control = control;
        Ok(())
    }

    pub fn basis(&self) -> Option<&NaturalSplineBasis> {
        self.basis.as_ref()
    }

    /// Value of mode `i` at arclength `s`.
    pub fn mode_value(&self, i: usize, s: f64) -> f64 {
        match self.kind {
            ModeKind::Spline | ModeKind::UnitModes => {
                let basis = self.basis.as_ref().unwrap();
                (0..self.control.ncols())
                    .map(|j| self.control[(i, j)] * basis.eval(j, s))
                    .sum()
            }
            ModeKind::ThreeLink => {
                let center = if i == 0 { 1.0 / 3.0 } else { 2.0 / 3.0 };
                if (s - center).abs() < THREE_LINK_JOINT_WIDTH / 2.0 {
                    1.0 / THREE_LINK_JOINT_WIDTH
                } else {
                    0.0
                }
            }
            ModeKind::Serpenoid => {
                if i == 0 {
                    (2.0 * PI * s).sin()
                } else {
                    (2.0 * PI * s).cos()
                }
            }
        }
    }

    /// m x n table of mode values at the given arclength samples.
    pub fn sample(&self, samples: &[f64]) -> DMatrix<f64> {
        let mut table = DMatrix::zeros(self.mode_count, samples.len());
        for (c, &s) in samples.iter().enumerate() {
            for i in 0..self.mode_count {
                table[(i, c)] = self.mode_value(i, s);
            }
        }
        table
    }
}

/// Periodic gait trajectory: shape-variable amplitudes over one normalized
/// period, parameterized by an m x Q control matrix over the periodic basis.
#[derive(Clone, Debug)]
pub struct GaitTrajectory {
    control: DMatrix<f64>,
    basis: PeriodicSplineBasis,
}

impl GaitTrajectory {
    pub fn new(control: DMatrix<f64>) -> Result<Self> {
        let basis = build_gait_basis(control.ncols())?;
        Ok(Self { control, basis })
    }

    pub fn mode_count(&self) -> usize {
        self.control.nrows()
    }

    pub fn control_cols(&self) -> usize {
        self.control.ncols()
    }

    pub fn control(&self) -> &DMatrix<f64> {
        &self.control
    }

    pub fn set_control(&mut self, control: DMatrix<f64>) -> Result<()> {
        if self.control.shape() != control.shape() {
            return Err(Error::InvalidParameter(
                "gait control shape mismatch".into(),
            ));
        }
        self.control = control;
        Ok(())
    }

    pub fn basis(&self) -> &PeriodicSplineBasis {
        &self.basis
    }

    pub fn value(&self, i: usize, t: f64) -> f64 {
        (0..self.control.ncols())
            .map(|k| self.control[(i, k)] * self.basis.eval(k, t))
            .sum()
    }

    pub fn rate(&self, i: usize, t: f64) -> f64 {
        (0..self.control.ncols())
            .map(|k| self.control[(i, k)] * self.basis.deriv(k, t))
            .sum()
    }

    /// All shape variables at time `t`.
    pub fn values(&self, t: f64) -> Vec<f64> {
        (0..self.mode_count()).map(|i| self.value(i, t)).collect()
    }

    pub fn rates(&self, t: f64) -> Vec<f64> {
        (0..self.mode_count()).map(|i| self.rate(i, t)).collect()
    }
}

/// Discretization: `n_s` backbone segments and `n_t` time samples per period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Grid {
    pub n_s: usize,
    pub n_t: usize,
}

impl Grid {
    pub fn new(n_s: usize, n_t: usize) -> Self {
        Self { n_s, n_t }
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 / self.n_s as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n_s).map(|i| self.node(i)).collect()
    }

    /// Node plus midpoint samples: 2 n_s + 1 points, even indices are nodes.
    pub fn half_grid(&self) -> Vec<f64> {
        (0..=2 * self.n_s)
            .map(|k| k as f64 / (2 * self.n_s) as f64)
            .collect()
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 / self.n_t as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_t).map(|j| self.time(j)).collect()
    }

    pub fn ds(&self) -> f64 {
        1.0 / self.n_s as f64
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.n_t as f64
    }

    /// Trapezoid weight of arclength node `i` (ds/2 at the ends).
    pub fn node_weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.n_s {
            self.ds() / 2.0
        } else {
            self.ds()
        }
    }
}

/// A complete deformation model: modes, gait, and evaluation grid.
#[derive(Clone, Debug)]
pub struct CurvatureModel {
    pub modes: ModeSet,
    pub gait: GaitTrajectory,
    pub grid: Grid,
}

/// Jacobian of `kappa(s, t)` (or of its time rate) with respect to the
/// control points, as a pair of m x P and m x Q matrices.
#[derive(Clone, Debug)]
pub struct ControlJacobian {
    pub d_kappa_c: DMatrix<f64>,
    pub d_alpha_c: DMatrix<f64>,
}

impl CurvatureModel {
    pub fn new(modes: ModeSet, gait: GaitTrajectory, grid: Grid) -> Result<Self> {
        if modes.mode_count() != gait.mode_count() {
            return Err(Error::InvalidParameter(format!(
                "mode count mismatch: {} modes vs {} gait rows",
                modes.mode_count(),
                gait.mode_count()
            )));
        }
        Ok(Self { modes, gait, grid })
    }

    pub fn eval_curvature(&self, s: f64, t: f64) -> f64 {
        (0..self.modes.mode_count())
            .map(|i| self.modes.mode_value(i, s) * self.gait.value(i, t))
            .sum()
    }

    /// Analytic time derivative of the curvature.
    pub fn eval_curvature_rate(&self, s: f64, t: f64) -> f64 {
        (0..self.modes.mode_count())
            .map(|i| self.modes.mode_value(i, s) * self.gait.rate(i, t))
            .sum()
    }

    /// d kappa(s,t) / d(kappa_c, alpha_c). The kappa_c block is empty for
    /// analytic presets (frozen designs).
    pub fn jacobian_controls(&self, s: f64, t: f64) -> ControlJacobian {
        let m = self.modes.mode_count();
        let p = self.modes.control_cols();
        let q = self.gait.control_cols();
        let mut d_kappa_c = DMatrix::zeros(m, p);
        if let Some(basis) = self.modes.basis() {
            for i in 0..m {
                let alpha = self.gait.value(i, t);
                for j in 0..p {
                    d_kappa_c[(i, j)] = basis.eval(j, s) * alpha;
                }
            }
        }
        let mut d_alpha_c = DMatrix::zeros(m, q);
        for i in 0..m {
            let mode = self.modes.mode_value(i, s);
            for k in 0..q {
                d_alpha_c[(i, k)] = mode * self.gait.basis().eval(k, t);
            }
        }
        ControlJacobian {
            d_kappa_c,
            d_alpha_c,
        }
    }

    /// d kappa_t(s,t) / d(kappa_c, alpha_c).
    pub fn jacobian_rate_controls(&self, s: f64, t: f64) -> ControlJacobian {
        let m = self.modes.mode_count();
        let p = self.modes.control_cols();
        let q = self.gait.control_cols();
        let mut d_kappa_c = DMatrix::zeros(m, p);
        if let Some(basis) = self.modes.basis() {
            for i in 0..m {
                let rate = self.gait.rate(i, t);
                for j in 0..p {
                    d_kappa_c[(i, j)] = basis.eval(j, s) * rate;
                }
            }
        }
        let mut d_alpha_c = DMatrix::zeros(m, q);
        for i in 0..m {
            let mode = self.modes.mode_value(i, s);
            for k in 0..q {
                d_alpha_c[(i, k)] = mode * self.gait.basis().deriv(k, t);
            }
        }
        ControlJacobian {
            d_kappa_c,
            d_alpha_c,
        }
    }

    /// Largest |kappa| over the evaluation grid.
    pub fn max_abs_curvature(&self) -> f64 {
        let samples = self.grid.half_grid();
        let table = self.modes.sample(&samples);
        let mut max = 0.0f64;
        for t in self.grid.times() {
            let alpha = self.gait.values(t);
            for c in 0..samples.len() {
                let kappa: f64 = (0..alpha.len()).map(|i| table[(i, c)] * alpha[i]).sum();
                max = max.max(kappa.abs());
            }
        }
        max
    }
}
