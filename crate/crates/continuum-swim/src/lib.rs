//! Geometric mechanics of planar soft continuum swimmers.
//!
//! The library models a unit-length planar backbone whose deformation is a
//! curvature field `kappa(s, t)` built from shape modes (the actuator design)
//! and periodic shape variables (the gait). Swimming at low Reynolds number
//! (resistive drag) and high Reynolds number (fluid-added inertia) both reduce
//! to the same kinematic form: a local connection maps curvature rate to body
//! velocity. On top of that reduction the crate provides net-displacement
//! evaluation, constraint-curvature fields, variational displacement
//! gradients, power/efficiency metrics, and gradient-based co-optimization of
//! design and gait.
//!
//! Entry points:
//! - [`se2`]: exact SE(2)/se(2) kernel.
//! - [`shape`]: spline curvature parameterization and presets.
//! - [`kinematics`]: backbone transforms, group velocities, floating base.
//! - [`metrics`]: regime metrics, pulled-back blocks, local connection.
//! - [`fields`]: displacement, constraint curvature, gradients.
//! - [`power`]: dissipated power, covariant-acceleration cost, path-length cost, efficiency.
//! - [`optimize`]: projected gradient ascent and swimmer comparison.
//! - [`config`], [`export`], [`cli`]: run configs, manifests, CSV/SVG export.

pub mod cli;
pub mod config;
pub mod export;
pub mod fields;
pub mod kinematics;
pub mod metrics;
pub mod ode;
pub mod optimize;
pub mod power;
pub mod se2;
pub mod shape;
pub mod spline;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("log undefined: |theta| = {0} is outside the principal branch (-pi, pi)")]
    LogBranch(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("integrated metric is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),
    #[error("operation requires the {expected} regime")]
    WrongRegime { expected: &'static str },
    #[error("integrator step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("non-finite objective at iteration {0}")]
    NonFinite(usize),
    #[error("zero cost with nonzero displacement ({displacement}); inconsistent state")]
    InconsistentCost { displacement: f64 },
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
