//! Regime-appropriate cost of motion and efficiency.
//!
//! Low Reynolds number: drag power dissipated into the fluid,
//! `P(t) = int xi_sec' mu xi_sec ds` at the solved body velocity. High
//! Reynolds number: covariant-acceleration cost, the mass-weighted squared
//! inertial acceleration of the section frames along the momentum-conserving
//! trajectory.
//!
//! Efficiency is forward progress per unit cost of motion, where the cost is
//! the pace-invariant metric length of the shape trajectory,
//! `L = oint sqrt(P(t)) dt`. By Cauchy-Schwarz `L^2 <= int P dt` at unit
//! period, with equality exactly at constant-power pacing, so `L^2` is the
//! cycle energy of the cheapest traversal of the path: efficiency compares
//! gait paths, not the pacing along them. Normalizing by the cycle energy
//! `int P dt` itself instead would be degenerate: a traveling wave of spatial
//! frequency k has displacement ~ 1/k^3 but energy ~ 1/k^4 per cycle, so
//! displacement-per-energy grows without bound in k (tiny, slow wiggles look
//! "free"), and no interior optimum over designs exists.

use crate::fields::{displacement, displacement_gradient, Component, DisplacementResult};
use crate::kinematics::BaseFrame;
use crate::metrics::{local_metric, velocity_field, Regime};
use crate::se2::AlgebraVector;
use crate::shape::CurvatureModel;
use crate::{Error, Result};
use nalgebra::{DMatrix, Vector3};
use rayon::prelude::*;

/// Instantaneous and cycle cost of a gait.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct CostBreakdown {
    pub regime: Regime,
    /// P(t_j) at the uniform time samples t_j = j / N_t.
    pub instantaneous: Vec<f64>,
    /// Cycle energy C = int_0^1 P dt.
    pub cycle: f64,
    /// Metric length of the shape trajectory, L = int_0^1 sqrt(P) dt
    /// (pace-invariant; L^2 is the cycle energy at constant-power pacing).
    pub length: f64,
    /// High-Re only: the part of `cycle` contributed by the rotational
    /// added-inertia term (1/4 rho pi r^4); zero at low Re.
    pub rotational_cycle: f64,
}

/// Efficiency of a gait with its supporting quantities.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct EfficiencyReport {
    pub regime: Regime,
    /// |Delta x| of the exact displacement divided by the metric path length.
    pub efficiency: f64,
    /// Exact pose after one cycle and the constraint-curvature approximation.
    pub exact: crate::se2::GroupElement,
    pub approx: AlgebraVector,
    pub cost: CostBreakdown,
    /// Gradient of the approximated x-displacement over the controls.
    pub grad_x_kappa_c: DMatrix<f64>,
    pub grad_x_alpha_c: DMatrix<f64>,
}

/// Drag power of a section-velocity field under the regime metric
/// (trapezoid in arclength).
pub fn drag_power_of_sections(
    sections: &[AlgebraVector],
    regime: &Regime,
    ds: f64,
) -> Result<f64> {
    let mu = local_metric(regime)?;
    let n = sections.len() - 1;
    let mut acc = 0.0;
    for (i, xi) in sections.iter().enumerate() {
        let w = if i == 0 || i == n { ds / 2.0 } else { ds };
        let v = xi.as_vector();
        acc += w * (mu * v).dot(&v);
    }
    Ok(acc)
}

/// Instantaneous drag power dissipated into the fluid at time `t` (low Re).
pub fn dissipated_power(model: &CurvatureModel, regime: &Regime, t: f64) -> Result<f64> {
    if !regime.is_low() {
        return Err(Error::WrongRegime { expected: "low-Re" });
    }
    let field = velocity_field(model, regime, t, BaseFrame::Center)?;
    drag_power_of_sections(&field.sections, regime, model.grid.ds())
}

/// Inertial section accelerations from a 5-sample stencil of section
/// velocities at times t + k dt, k = -2..=2: a = (xi_dot_lin + omega x
/// xi_lin, omega_dot), expressed in the section frame.
pub fn section_accelerations(
    stencil: &[Vec<AlgebraVector>; 5],
    dt: f64,
) -> Vec<Vector3<f64>> {
    let n = stencil[2].len();
    (0..n)
        .map(|i| {
            let d = |f: fn(&AlgebraVector) -> f64| {
                (8.0 * (f(&stencil[3][i]) - f(&stencil[1][i]))
                    - (f(&stencil[4][i]) - f(&stencil[0][i])))
                    / (12.0 * dt)
            };
            let xi = &stencil[2][i];
            Vector3::new(
                d(|x| x.vx) - xi.omega * xi.vy,
                d(|x| x.vy) + xi.omega * xi.vx,
                d(|x| x.omega),
            )
        })
        .collect()
}

/// Mass-weighted squared acceleration, split into (total, rotational part).
pub fn acceleration_power(
    accels: &[Vector3<f64>],
    regime: &Regime,
    ds: f64,
) -> Result<(f64, f64)> {
    if regime.is_low() {
        return Err(Error::WrongRegime { expected: "high-Re" });
    }
    let m = local_metric(regime)?;
    let n = accels.len() - 1;
    let (mut total, mut rot) = (0.0, 0.0);
    for (i, a) in accels.iter().enumerate() {
        let w = if i == 0 || i == n { ds / 2.0 } else { ds };
        total += w * (m * a).dot(a);
        rot += w * m[(2, 2)] * a.z * a.z;
    }
    Ok((total, rot))
}

fn acceleration_cost_with_rotational(
    model: &CurvatureModel,
    regime: &Regime,
    t: f64,
) -> Result<(f64, f64)> {
    let dt = model.grid.dt();
    let mut stencil: Vec<Vec<AlgebraVector>> = Vec::with_capacity(5);
    for k in -2i32..=2 {
        let field = velocity_field(model, regime, t + k as f64 * dt, BaseFrame::Center)?;
        stencil.push(field.sections);
    }
    let stencil: [Vec<AlgebraVector>; 5] = stencil.try_into().expect("five stencil samples");
    let accels = section_accelerations(&stencil, dt);
    acceleration_power(&accels, regime, model.grid.ds())
}

/// Instantaneous covariant-acceleration cost at time `t` (high Re).
pub fn covariant_acceleration_cost(
    model: &CurvatureModel,
    regime: &Regime,
    t: f64,
) -> Result<f64> {
    Ok(acceleration_cost_with_rotational(model, regime, t)?.0)
}

/// Instantaneous cost on the time grid and its cycle integral.
pub fn cost_breakdown(model: &CurvatureModel, regime: &Regime) -> Result<CostBreakdown> {
    let nt = model.grid.n_t;
    let dt = model.grid.dt();
    let samples: Vec<(f64, f64)> = if regime.is_low() {
        (0..nt)
            .into_par_iter()
            .map(|j| Ok((dissipated_power(model, regime, model.grid.time(j))?, 0.0)))
            .collect::<Result<_>>()?
    } else {
        // the acceleration stencil offsets are exactly +-1, +-2 time-grid
        // steps, so the N_t periodic section-velocity fields are shared
        // across all stencils instead of being recomputed five times each
        let fields: Vec<Vec<AlgebraVector>> = (0..nt)
            .into_par_iter()
            .map(|j| {
                Ok(velocity_field(model, regime, model.grid.time(j), BaseFrame::Center)?.sections)
            })
            .collect::<Result<_>>()?;
        (0..nt)
            .into_par_iter()
            .map(|j| {
                let at = |k: i64| fields[(j as i64 + k).rem_euclid(nt as i64) as usize].clone();
                let stencil = [at(-2), at(-1), at(0), at(1), at(2)];
                let accels = section_accelerations(&stencil, dt);
                acceleration_power(&accels, regime, model.grid.ds())
            })
            .collect::<Result<_>>()?
    };
    let instantaneous: Vec<f64> = samples.iter().map(|&(p, _)| p).collect();
    let cycle = instantaneous.iter().sum::<f64>() * dt;
    let length = instantaneous.iter().map(|p| p.max(0.0).sqrt()).sum::<f64>() * dt;
    let rotational_cycle = samples.iter().map(|&(_, r)| r).sum::<f64>() * dt;
    Ok(CostBreakdown {
        regime: *regime,
        instantaneous,
        cycle,
        length,
        rotational_cycle,
    })
}

/// Tolerance below which displacement and cost count as exactly zero.
const ZERO_TOL: f64 = 1e-12;

/// Efficiency = |Delta x| / metric path length (see the module docs for why
/// the length, not the cycle energy), with the zero-gait 0/0 guarded to 0.
pub fn efficiency(model: &CurvatureModel, regime: &Regime) -> Result<EfficiencyReport> {
    let DisplacementResult { exact, approx } = displacement(model, regime)?;
    let cost = cost_breakdown(model, regime)?;
    let progress = exact.x.abs();
    let efficiency = if cost.length <= ZERO_TOL {
        if progress > ZERO_TOL {
            return Err(Error::InconsistentCost {
                displacement: progress,
            });
        }
        0.0
    } else {
        progress / cost.length
    };
    let grad = displacement_gradient(model, regime, Component::X)?;
    Ok(EfficiencyReport {
        regime: *regime,
        efficiency,
        exact,
        approx,
        cost,
        grad_x_kappa_c: grad.d_kappa_c,
        grad_x_alpha_c: grad.d_alpha_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{BackboneState, ShapeSample};
    use crate::se2;
    use crate::shape::{GaitTrajectory, Grid, ModeSet};
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    const LOW: Regime = Regime::LowRe { drag_ratio: 2.0 };
    const HIGH: Regime = Regime::HighRe {
        density: 1.0,
        cross_radius: 0.005,
    };

    fn circular_gait(amplitude: f64, q: usize) -> DMatrix<f64> {
        DMatrix::from_fn(2, q, |i, k| {
            let t = k as f64 / q as f64;
            if i == 0 {
                amplitude * (2.0 * PI * t).cos()
            } else {
                amplitude * (2.0 * PI * t).sin()
            }
        })
    }

    fn serpenoid_model(amplitude: f64, grid: Grid) -> CurvatureModel {
        CurvatureModel::new(
            ModeSet::serpenoid(),
            GaitTrajectory::new(circular_gait(amplitude, 6)).unwrap(),
            grid,
        )
        .unwrap()
    }

    #[test]
    fn motionless_body_costs_nothing() {
        let model = CurvatureModel::new(
            ModeSet::serpenoid(),
            GaitTrajectory::new(DMatrix::zeros(2, 6)).unwrap(),
            Grid::new(30, 16),
        )
        .unwrap();
        assert_abs_diff_eq!(dissipated_power(&model, &LOW, 0.3).unwrap(), 0.0);
        assert_abs_diff_eq!(
            covariant_acceleration_cost(&model, &HIGH, 0.3).unwrap(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn straight_body_drag_power_closed_forms() {
        // rigid straight body dragged axially at v: P = v^2; laterally: 2 v^2
        let n = 50;
        let v = 0.7;
        let axial: Vec<AlgebraVector> = (0..=n).map(|_| AlgebraVector::new(v, 0.0, 0.0)).collect();
        let lateral: Vec<AlgebraVector> = (0..=n).map(|_| AlgebraVector::new(0.0, v, 0.0)).collect();
        let ds = 1.0 / n as f64;
        assert_abs_diff_eq!(
            drag_power_of_sections(&axial, &LOW, ds).unwrap(),
            v * v,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            drag_power_of_sections(&lateral, &LOW, ds).unwrap(),
            2.0 * v * v,
            epsilon = 1e-12
        );
    }

    #[test]
    fn regime_mismatch_is_rejected() {
        let model = serpenoid_model(0.5, Grid::new(20, 8));
        assert!(matches!(
            dissipated_power(&model, &HIGH, 0.1),
            Err(Error::WrongRegime { .. })
        ));
        assert!(matches!(
            acceleration_power(&[Vector3::zeros()], &LOW, 1.0),
            Err(Error::WrongRegime { .. })
        ));
    }

    #[test]
    fn perturbing_the_solved_velocity_increases_drag_power() {
        let model = serpenoid_model(0.8, Grid::new(40, 16));
        let field = velocity_field(&model, &LOW, 0.27, BaseFrame::Center).unwrap();
        let solved = drag_power_of_sections(&field.sections, &LOW, model.grid.ds()).unwrap();
        let kappa_t: Vec<f64> = (0..=40)
            .map(|i| model.eval_curvature_rate(model.grid.node(i), 0.27))
            .collect();
        let g_circ = field.slice.state.group_velocities(&kappa_t);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let delta = Vector3::new(
                rng.gen_range(-0.1..0.1),
                rng.gen_range(-0.1..0.1),
                rng.gen_range(-0.1..0.1),
            );
            let xi = AlgebraVector::from_vector(field.xi_base.as_vector() + delta);
            let sections: Vec<AlgebraVector> = (0..=40)
                .map(|i| field.slice.state.frame_body_velocity(i, &xi, &g_circ))
                .collect();
            let perturbed = drag_power_of_sections(&sections, &LOW, model.grid.ds()).unwrap();
            assert!(
                perturbed > solved + 1e-12,
                "perturbed {perturbed} vs solved {solved}"
            );
        }
    }

    #[test]
    fn rigid_translation_is_free_and_rotation_is_not_at_high_re() {
        // straight body under externally imposed constant base twists
        let shape = ShapeSample::new(vec![0.0; 101]);
        let state = BackboneState::build(&shape, BaseFrame::Center);
        let sections_of = |xi: &AlgebraVector| -> Vec<AlgebraVector> {
            (0..=50)
                .map(|i| {
                    se2::adjoint_apply(&se2::inverse(&state.g[i]), xi)
                })
                .collect()
        };
        let dt = 1e-2;
        let cost_of = |xi: &AlgebraVector| {
            let s = sections_of(xi);
            let stencil = [s.clone(), s.clone(), s.clone(), s.clone(), s];
            let accels = section_accelerations(&stencil, dt);
            acceleration_power(&accels, &HIGH, state.ds()).unwrap().0
        };
        assert_abs_diff_eq!(cost_of(&AlgebraVector::new(0.8, 0.0, 0.0)), 0.0);
        assert!(cost_of(&AlgebraVector::new(0.8, 0.0, 1.2)) > 1e-8);
    }

    #[test]
    fn doubling_gait_speed_scales_the_cycle_cost_by_sixteen() {
        // base gait on 12 knots; the doubled-speed traversal alpha(2t) is
        // exactly the tiled control on 24 knots (two traversals per period,
        // each costing 8x: acceleration x4, squared x16, half the duration)
        let base_control = circular_gait(0.6, 12);
        let doubled = DMatrix::from_fn(2, 24, |i, k| base_control[(i, k % 12)]);
        let base = CurvatureModel::new(
            ModeSet::serpenoid(),
            GaitTrajectory::new(base_control).unwrap(),
            Grid::new(40, 32),
        )
        .unwrap();
        let fast = CurvatureModel::new(
            ModeSet::serpenoid(),
            GaitTrajectory::new(doubled).unwrap(),
            Grid::new(40, 64),
        )
        .unwrap();
        let c_base = cost_breakdown(&base, &HIGH).unwrap().cycle;
        let c_fast = cost_breakdown(&fast, &HIGH).unwrap().cycle;
        let ratio = c_fast / c_base;
        assert_abs_diff_eq!(ratio, 16.0, epsilon = 1e-6 * 16.0);
    }

    #[test]
    fn mirrored_gait_costs_the_same() {
        let grid = Grid::new(30, 32);
        let model = serpenoid_model(0.8, grid);
        let mirrored = CurvatureModel::new(
            ModeSet::serpenoid(),
            GaitTrajectory::new(circular_gait(0.8, 6).scale(-1.0)).unwrap(),
            grid,
        )
        .unwrap();
        for regime in [LOW, HIGH] {
            let c = cost_breakdown(&model, &regime).unwrap().cycle;
            let cm = cost_breakdown(&mirrored, &regime).unwrap().cycle;
            assert_abs_diff_eq!(c, cm, epsilon = 1e-8 * c.max(1.0));
        }
    }

    #[test]
    fn zero_gait_efficiency_is_zero() {
        let model = CurvatureModel::new(
            ModeSet::serpenoid(),
            GaitTrajectory::new(DMatrix::zeros(2, 6)).unwrap(),
            Grid::new(30, 16),
        )
        .unwrap();
        for regime in [LOW, HIGH] {
            let report = efficiency(&model, &regime).unwrap();
            assert_eq!(report.efficiency, 0.0);
            assert!(report.cost.cycle <= 1e-12);
        }
    }

    #[test]
    fn efficiency_is_gauge_invariant() {
        let kc = DMatrix::from_fn(2, 5, |i, j| {
            let s = j as f64 / 4.0;
            if i == 0 {
                (2.0 * PI * s).sin()
            } else {
                (2.0 * PI * s).cos()
            }
        });
        let grid = Grid::new(30, 16);
        let gait = circular_gait(0.7, 6);
        let base = CurvatureModel::new(
            ModeSet::spline(kc.clone()).unwrap(),
            GaitTrajectory::new(gait.clone()).unwrap(),
            grid,
        )
        .unwrap();
        let c = 3.0;
        let gauged = CurvatureModel::new(
            ModeSet::spline(kc.scale(c)).unwrap(),
            GaitTrajectory::new(gait.scale(1.0 / c)).unwrap(),
            grid,
        )
        .unwrap();
        let e0 = efficiency(&base, &LOW).unwrap().efficiency;
        let e1 = efficiency(&gauged, &LOW).unwrap().efficiency;
        assert_abs_diff_eq!(e1, e0, epsilon = 1e-9 * e0.max(1.0));
    }

    #[test]
    fn nonuniform_pacing_increases_low_re_cost_at_equal_displacement() {
        // tau(t) = t - 0.2 sin(2 pi t)/(2 pi): same path, nonuniform speed.
        // The reparameterized instantaneous power is P(tau) tau'^2 (drag
        // power is quadratic in velocity), so the cycle cost is a direct
        // quadrature; displacement is unchanged (fields.rs covers that).
        let model = serpenoid_model(0.8, Grid::new(40, 32));
        let uniform = cost_breakdown(&model, &LOW).unwrap().cycle;
        let n = 256;
        let reparam: f64 = (0..n)
            .map(|j| {
                let t = j as f64 / n as f64;
                let tau = t - 0.2 * (2.0 * PI * t).sin() / (2.0 * PI);
                let dtau = 1.0 - 0.2 * (2.0 * PI * t).cos();
                dissipated_power(&model, &LOW, tau).unwrap() * dtau * dtau
            })
            .sum::<f64>()
            / n as f64;
        assert!(
            reparam > uniform * 1.001,
            "reparam {reparam} vs uniform {uniform}"
        );
    }

    #[test]
    fn cycle_cost_is_smooth_in_the_gait_controls() {
        let model = serpenoid_model(0.6, Grid::new(25, 16));
        for regime in [LOW, HIGH] {
            let slope_at = |h: f64| {
                let shift = |sign: f64| {
                    let mut m = model.clone();
                    let mut c = m.gait.control().clone();
                    c[(0, 2)] += sign * h;
                    m.gait.set_control(c).unwrap();
                    cost_breakdown(&m, &regime).unwrap().cycle
                };
                (shift(1.0) - shift(-1.0)) / (2.0 * h)
            };
            let s1 = slope_at(1e-3);
            let s2 = slope_at(2e-3);
            assert!(
                (s1 - s2).abs() <= 1e-2 * s1.abs().max(1e-9),
                "{regime:?}: slopes {s1} vs {s2}"
            );
        }
    }

    #[test]
    fn rotational_term_is_reported_and_small() {
        let model = serpenoid_model(0.8, Grid::new(30, 32));
        let cost = cost_breakdown(&model, &HIGH).unwrap();
        assert!(cost.rotational_cycle > 0.0);
        assert!(cost.rotational_cycle < 1e-2 * cost.cycle);
        let low = cost_breakdown(&model, &LOW).unwrap();
        assert_eq!(low.rotational_cycle, 0.0);
    }

    #[test]
    fn report_is_finite_and_self_consistent() {
        let model = serpenoid_model(0.5, Grid::new(20, 8));
        let report = efficiency(&model, &LOW).unwrap();
        assert!(report.efficiency.is_finite());
        assert!(report.cost.cycle > 0.0);
        assert_abs_diff_eq!(
            report.efficiency,
            report.exact.x.abs() / report.cost.length,
            epsilon = 1e-15
        );
        // Cauchy-Schwarz: L^2 <= cycle energy, equality only at constant power
        assert!(report.cost.length.powi(2) <= report.cost.cycle + 1e-15);
    }
}
