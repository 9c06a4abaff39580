//! Regime-dependent local metrics, pulled-back metric blocks, and the local
//! connection mapping curvature rate to base body velocity.
//!
//! Both regimes share the same reduction: the body velocity minimizes the
//! metric-weighted square of the section velocities, giving the stationarity
//! solution `A(s) = -(int M_gg)^-1 M_gk(s)` and
//! `xi_base = int A(s) kappa_t(s) ds`.

use crate::kinematics::{BackboneState, BaseFrame, ShapeSample};
use crate::se2::{self, AlgebraVector};
use crate::shape::CurvatureModel;
use crate::{Error, Result};
use nalgebra::{Matrix3, Vector3};

/// Condition-number guard for the integrated metric.
pub const COND_LIMIT: f64 = 1e12;

/// Hydrodynamic regime.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Regime {
    /// Resistive (Stokes) drag with lateral/axial drag ratio `drag_ratio`.
    LowRe { drag_ratio: f64 },
    /// Fluid-added inertia of a neutrally buoyant slender body with circular
    /// cross-section of radius `cross_radius`.
    HighRe { density: f64, cross_radius: f64 },
}

impl Regime {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Regime::LowRe { drag_ratio } if drag_ratio <= 0.0 => Err(Error::InvalidParameter(
                format!("drag ratio must be positive, got {drag_ratio}"),
            )),
            Regime::HighRe {
                density,
                cross_radius,
            } if density <= 0.0 || cross_radius <= 0.0 || cross_radius >= 1.0 => {
                Err(Error::InvalidParameter(format!(
                    "high-Re regime needs density > 0 and 0 < cross_radius < 1, got rho = {density}, r = {cross_radius}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn is_low(&self) -> bool {
        matches!(self, Regime::LowRe { .. })
    }
}

/// The constant per-arclength local metric of the regime.
pub fn local_metric(regime: &Regime) -> Result<Matrix3<f64>> {
    regime.validate()?;
    Ok(match *regime {
        Regime::LowRe { drag_ratio } => Matrix3::from_diagonal(&Vector3::new(1.0, drag_ratio, 0.0)),
        Regime::HighRe {
            density,
            cross_radius,
        } => {
            let section = std::f64::consts::PI * cross_radius * cross_radius * density;
            // body inertia + added lateral mass of the circular section
            Matrix3::from_diagonal(&Vector3::new(
                section,
                2.0 * section,
                0.25 * section * cross_radius * cross_radius,
            ))
        }
    })
}

/// Pulled-back metric blocks over the arclength grid at one instant.
#[derive(Clone, Debug)]
pub struct MetricField {
    /// M_gg(s_i) = Ad^T_{g_i^-1} mu Ad_{g_i^-1}.
    pub m_gg: Vec<Matrix3<f64>>,
    /// M_gk(s_i) = (int_{s_i}^1 M_gg dsigma) Ad_{g_i} e3.
    pub m_gk: Vec<Vector3<f64>>,
    /// Trapezoidal integral of M_gg over the backbone.
    pub integral: Matrix3<f64>,
    /// Condition number of the integrated metric.
    pub cond: f64,
}

/// Local connection samples A(s_i) at one instant.
#[derive(Clone, Debug)]
pub struct ConnectionField {
    pub a: Vec<Vector3<f64>>,
    pub cond: f64,
}

pub fn pullback_blocks(state: &BackboneState, regime: &Regime) -> Result<MetricField> {
    let mu = local_metric(regime)?;
    let n = state.n_s;
    let ds = state.ds();
    let m_gg: Vec<Matrix3<f64>> = state
        .g
        .iter()
        .map(|g| {
            let ad_inv = se2::adjoint(&se2::inverse(g));
            ad_inv.transpose() * mu * ad_inv
        })
        .collect();
    let mut integral = Matrix3::zeros();
    for i in 0..n {
        integral += (m_gg[i] + m_gg[i + 1]) * (ds / 2.0);
    }
    // trapezoidal tail integrals for M_gk, with the two diagonal corner
    // half-cells adjusted so this quadrature is the exact transpose of the
    // prefix-trapezoid used for the shape velocities: body_velocity is then
    // the exact minimizer of the discrete dissipated power (the two
    // conventions otherwise differ by (ds^2/4)(M_n c_n - M_0 c_0), visible
    // only through the rotational entry of the high-Re metric)
    let mut suffix = vec![Matrix3::zeros(); n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + (m_gg[i] + m_gg[i + 1]) * (ds / 2.0);
    }
    suffix[0] -= m_gg[0] * (ds / 2.0);
    suffix[n] = m_gg[n] * (ds / 2.0);
    // geometric-center gauge: the base frame drifts with the shape
    // (w^-1 w_dot), which enters the coupling block as
    // M_gk_j -= (int M_gg) B_j / w_j so that the solved base velocity is
    // the world velocity of the center frame, drift included, and the
    // discrete energy stays an exact quadratic in (xi, kappa_t)
    let drift = state.center_drift_kernel();
    let m_gk = (0..=n)
        .map(|i| {
            let g = &state.g[i];
            let w = if i == 0 || i == n { ds / 2.0 } else { ds };
            suffix[i] * Vector3::new(g.y, -g.x, 1.0) - integral * (drift[i] / w)
        })
        .collect();
    let eig = integral.symmetric_eigenvalues();
    let max = eig.amax();
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let cond = if min > 0.0 { max / min } else { f64::INFINITY };
    Ok(MetricField {
        m_gg,
        m_gk,
        integral,
        cond,
    })
}

/// The local connection A(s) = -(int M_gg)^-1 M_gk(s).
pub fn local_connection(field: &MetricField) -> Result<ConnectionField> {
    if !field.cond.is_finite() || field.cond > COND_LIMIT {
        return Err(Error::IllConditioned(field.cond));
    }
    // Jacobi equilibration: the high-Re metric mixes O(r^2) translational
    // and O(r^4) rotational entries, and solving the raw system loses
    // several digits. The symmetrically scaled system is well conditioned.
    let d = Matrix3::from_diagonal(&Vector3::new(
        field.integral[(0, 0)].abs().sqrt(),
        field.integral[(1, 1)].abs().sqrt(),
        field.integral[(2, 2)].abs().sqrt(),
    ));
    let d_inv = d
        .try_inverse()
        .ok_or(Error::IllConditioned(f64::INFINITY))?;
    let inv = (d_inv * field.integral * d_inv)
        .try_inverse()
        .ok_or(Error::IllConditioned(f64::INFINITY))?;
    Ok(ConnectionField {
        a: field
            .m_gk
            .iter()
            .map(|m| -(d_inv * (inv * (d_inv * m))))
            .collect(),
        cond: field.cond,
    })
}

/// Per-instant dynamics pipeline: backbone state, metric blocks, connection.
#[derive(Clone, Debug)]
pub struct ConnectionSlice {
    pub state: BackboneState,
    pub metric: MetricField,
    pub a: Vec<Vector3<f64>>,
    pub cond: f64,
}

pub fn connection_slice(
    shape: &ShapeSample,
    regime: &Regime,
    base: BaseFrame,
) -> Result<ConnectionSlice> {
    let state = BackboneState::build(shape, base);
    let metric = pullback_blocks(&state, regime)?;
    let conn = local_connection(&metric)?;
    Ok(ConnectionSlice {
        state,
        metric,
        a: conn.a,
        cond: conn.cond,
    })
}

impl ConnectionSlice {
    fn trapz_dot(values: &[Vector3<f64>], kappa_t: &[f64], ds: f64) -> Vector3<f64> {
        let n = values.len() - 1;
        let mut acc = Vector3::zeros();
        for i in 0..=n {
            let w = if i == 0 || i == n { ds / 2.0 } else { ds };
            acc += values[i] * (kappa_t[i] * w);
        }
        acc
    }

    /// Body velocity of the base frame for the given nodal curvature rate:
    /// xi_base = int A(s) kappa_t(s) ds.
    pub fn body_velocity(&self, kappa_t: &[f64]) -> AlgebraVector {
        AlgebraVector::from_vector(Self::trapz_dot(&self.a, kappa_t, self.state.ds()))
    }

    /// Stationarity (net wrench / momentum) residual
    /// `int (M_gg xi_base + M_gk kappa_t) ds` at the solved velocity.
    pub fn stationarity_residual(&self, kappa_t: &[f64]) -> Vector3<f64> {
        let ds = self.state.ds();
        let xi = Self::trapz_dot(&self.a, kappa_t, ds);
        let n = self.state.n_s;
        let mut acc = Vector3::zeros();
        for i in 0..=n {
            let w = if i == 0 || i == n { ds / 2.0 } else { ds };
            acc += (self.metric.m_gg[i] * xi + self.metric.m_gk[i] * kappa_t[i]) * w;
        }
        acc
    }
}

/// Per-instant velocity solution: base twist and section twists.
#[derive(Clone, Debug)]
pub struct VelocityField {
    pub xi_base: AlgebraVector,
    pub sections: Vec<AlgebraVector>,
    pub slice: ConnectionSlice,
}

pub fn velocity_field(
    model: &CurvatureModel,
    regime: &Regime,
    t: f64,
    base: BaseFrame,
) -> Result<VelocityField> {
    let shape = ShapeSample::from_model(model, t);
    let slice = connection_slice(&shape, regime, base)?;
    let kappa_t: Vec<f64> = (0..=model.grid.n_s)
        .map(|i| model.eval_curvature_rate(model.grid.node(i), t))
        .collect();
    let xi_base = slice.body_velocity(&kappa_t);
    let g_circ = slice.state.group_velocities(&kappa_t);
    let sections = (0..=model.grid.n_s)
        .map(|i| slice.state.frame_body_velocity(i, &xi_base, &g_circ))
        .collect();
    Ok(VelocityField {
        xi_base,
        sections,
        slice,
    })
}

/// Reduced body velocity of the geometric-center base at time `t`.
pub fn body_velocity(model: &CurvatureModel, regime: &Regime, t: f64) -> Result<AlgebraVector> {
    let shape = ShapeSample::from_model(model, t);
    let slice = connection_slice(&shape, regime, BaseFrame::Center)?;
    let kappa_t: Vec<f64> = (0..=model.grid.n_s)
        .map(|i| model.eval_curvature_rate(model.grid.node(i), t))
        .collect();
    Ok(slice.body_velocity(&kappa_t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::{GaitTrajectory, Grid, ModeSet};
    use approx::assert_abs_diff_eq;
    use nalgebra::{DMatrix, Matrix3, Vector3};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    const LOW: Regime = Regime::LowRe { drag_ratio: 2.0 };
    const HIGH: Regime = Regime::HighRe {
        density: 1.0,
        cross_radius: 0.005,
    };

    fn random_model(seed: u64, grid: Grid, amplitude: f64) -> CurvatureModel {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let kc = DMatrix::from_fn(2, 6, |_, _| rng.gen_range(-1.0..1.0));
        let ac = DMatrix::from_fn(2, 6, |_, _| rng.gen_range(-amplitude..amplitude));
        CurvatureModel::new(
            ModeSet::spline(kc).unwrap(),
            GaitTrajectory::new(ac).unwrap(),
            grid,
        )
        .unwrap()
    }

    fn straight_state(n: usize) -> BackboneState {
        let shape = ShapeSample::new(vec![0.0; 2 * n + 1]);
        BackboneState::build(&shape, BaseFrame::Center)
    }

    fn nodal_rate(model: &CurvatureModel, t: f64) -> Vec<f64> {
        (0..=model.grid.n_s)
            .map(|i| model.eval_curvature_rate(model.grid.node(i), t))
            .collect()
    }

    #[test]
    fn low_re_metric_values() {
        let mu = local_metric(&LOW).unwrap();
        assert_eq!(mu, Matrix3::from_diagonal(&Vector3::new(1.0, 2.0, 0.0)));
        assert!(local_metric(&Regime::LowRe { drag_ratio: -1.0 }).is_err());
    }

    #[test]
    fn high_re_metric_values() {
        let mu = local_metric(&HIGH).unwrap();
        let section = PI * 0.005 * 0.005;
        assert_abs_diff_eq!(mu[(0, 0)], section, epsilon = 1e-18);
        assert_abs_diff_eq!(mu[(1, 1)], 2.0 * section, epsilon = 1e-18);
        assert_abs_diff_eq!(mu[(2, 2)], 0.25 * section * 0.005 * 0.005, epsilon = 1e-22);
        assert_abs_diff_eq!(mu[(1, 1)], 2.0 * mu[(0, 0)], epsilon = 0.0);
        assert!(local_metric(&Regime::HighRe {
            density: 0.0,
            cross_radius: 0.005
        })
        .is_err());
    }

    #[test]
    fn straight_body_integrated_metric() {
        let state = straight_state(100);
        let field = pullback_blocks(&state, &LOW).unwrap();
        assert_abs_diff_eq!(field.integral[(0, 0)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(field.integral[(1, 1)], 2.0, epsilon = 1e-12);
        // trapezoid error on the quadratic lever arm term is O(ds^2)
        assert_abs_diff_eq!(field.integral[(2, 2)], 2.0 / 12.0, epsilon = 1e-4);
        assert_abs_diff_eq!(field.integral[(0, 1)], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(field.integral[(1, 2)], 0.0, epsilon = 1e-10);
    }

    #[test]
    fn m_gk_at_the_head_is_the_corner_half_cell() {
        // the transpose-consistent quadrature leaves exactly the diagonal
        // half-cell (ds/2) M_gg(1) Ad_{g(1)} e3 at the head, plus the
        // center-gauge drift coupling -(int M_gg) B(1) / w(1)
        let model = random_model(5, Grid::new(40, 8), 1.0);
        let shape = ShapeSample::from_model(&model, 0.3);
        let state = BackboneState::build(&shape, BaseFrame::Center);
        let drift = state.center_drift_kernel();
        for regime in [LOW, HIGH] {
            let field = pullback_blocks(&state, &regime).unwrap();
            let g = &state.g[40];
            let expected = field.m_gg[40] * Vector3::new(g.y, -g.x, 1.0) * (state.ds() / 2.0)
                - field.integral * (drift[40] / (state.ds() / 2.0));
            assert!((field.m_gk[40] - expected).amax() < 1e-14);
        }
    }

    #[test]
    fn m_gg_is_symmetric_everywhere() {
        let model = random_model(6, Grid::new(30, 8), 1.5);
        let shape = ShapeSample::from_model(&model, 0.7);
        let state = BackboneState::build(&shape, BaseFrame::Center);
        for regime in [LOW, HIGH] {
            let field = pullback_blocks(&state, &regime).unwrap();
            for m in &field.m_gg {
                assert!((m - m.transpose()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn straight_body_connection_has_zero_surge_component() {
        let state = straight_state(60);
        let field = pullback_blocks(&state, &LOW).unwrap();
        let conn = local_connection(&field).unwrap();
        for a in &conn.a {
            assert_abs_diff_eq!(a.x, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn static_shape_gives_zero_body_velocity() {
        let model = random_model(9, Grid::new(30, 8), 1.0);
        let shape = ShapeSample::from_model(&model, 0.2);
        let slice = connection_slice(&shape, &LOW, BaseFrame::Center).unwrap();
        let xi = slice.body_velocity(&vec![0.0; 31]);
        assert_eq!(xi.as_vector(), Vector3::zeros());
    }

    #[test]
    fn body_velocity_is_linear_in_curvature_rate() {
        let model = random_model(13, Grid::new(30, 16), 1.0);
        for regime in [LOW, HIGH] {
            let v1 = body_velocity(&model, &regime, 0.3).unwrap().as_vector();
            let shape = ShapeSample::from_model(&model, 0.3);
            let slice = connection_slice(&shape, &regime, BaseFrame::Center).unwrap();
            let kt = nodal_rate(&model, 0.3);
            let kt2: Vec<f64> = kt.iter().map(|k| 2.0 * k).collect();
            let v2 = slice.body_velocity(&kt2).as_vector();
            assert!((v2 - 2.0 * v1).amax() < 1e-12);
            let neg: Vec<f64> = kt.iter().map(|k| -k).collect();
            let vn = slice.body_velocity(&neg).as_vector();
            assert!((vn + v1).amax() < 1e-12);
        }
    }

    #[test]
    fn stationarity_residual_is_tiny() {
        for (seed, regime) in [(21u64, LOW), (22, HIGH)] {
            let model = random_model(seed, Grid::new(50, 16), 1.5);
            for &t in &[0.0, 0.21, 0.63, 0.9] {
                let shape = ShapeSample::from_model(&model, t);
                let slice = connection_slice(&shape, &regime, BaseFrame::Center).unwrap();
                let res = slice.stationarity_residual(&nodal_rate(&model, t));
                assert!(res.amax() < 1e-10, "residual {res:?}");
            }
        }
    }

    // Brute-force oracle: probe the quadratic energy
    //   E(xi) = int (xi^T M_gg xi + 2 xi^T M_gk kappa_t) ds
    // at a handful of points to recover its Hessian and linear term exactly,
    // then minimize by a dense solve. Independent of the A(s) formula.
    fn brute_force_xi(model: &CurvatureModel, regime: &Regime, t: f64) -> Vector3<f64> {
        let shape = ShapeSample::from_model(model, t);
        let state = BackboneState::build(&shape, BaseFrame::Center);
        let field = pullback_blocks(&state, regime).unwrap();
        let kt = nodal_rate(model, t);
        let n = model.grid.n_s;
        let ds = 1.0 / n as f64;
        let energy = |xi: Vector3<f64>| {
            let mut e = 0.0;
            for i in 0..=n {
                let w = if i == 0 || i == n { ds / 2.0 } else { ds };
                e += w * (xi.dot(&(field.m_gg[i] * xi)) + 2.0 * xi.dot(&field.m_gk[i]) * kt[i]);
            }
            e
        };
        let e0 = energy(Vector3::zeros());
        let basis = [Vector3::x(), Vector3::y(), Vector3::z()];
        let mut hess = Matrix3::zeros();
        let mut lin = Vector3::zeros();
        for (j, ej) in basis.iter().enumerate() {
            let ep = energy(*ej);
            let em = energy(-ej);
            hess[(j, j)] = ep + em - 2.0 * e0;
            lin[j] = (ep - em) / 2.0;
        }
        for j in 0..3 {
            for k in (j + 1)..3 {
                let e_jk = energy(basis[j] + basis[k]);
                let cross = e_jk - e0 - lin[j] - lin[k] - hess[(j, j)] / 2.0 - hess[(k, k)] / 2.0;
                hess[(j, k)] = cross;
                hess[(k, j)] = cross;
            }
        }
        // minimize E = 1/2 xi^T H xi + lin^T xi  =>  H xi = -lin
        hess.full_piv_lu().solve(&(-lin)).unwrap()
    }

    #[test]
    fn body_velocity_matches_brute_force_minimization() {
        for (seed, regime) in [(31u64, LOW), (32, HIGH), (33, LOW), (34, HIGH)] {
            let model = random_model(seed, Grid::new(40, 16), 1.2);
            for &t in &[0.17, 0.58] {
                let xi = body_velocity(&model, &regime, t).unwrap().as_vector();
                let oracle = brute_force_xi(&model, &regime, t);
                assert!(
                    (xi - oracle).amax() < 1e-9,
                    "regime {regime:?}: {xi:?} vs {oracle:?}"
                );
            }
        }
    }

    #[test]
    fn rotational_equivariance_of_the_minimizer() {
        // Rotating every frame by R maps the solved twist through Ad_R:
        // the linear part rotates, omega is unchanged.
        let model = random_model(41, Grid::new(30, 8), 1.0);
        let shape = ShapeSample::from_model(&model, 0.4);
        let kt = nodal_rate(&model, 0.4);
        let rot = crate::se2::GroupElement::new(0.0, 0.0, 0.77);
        for regime in [LOW, HIGH] {
            let mu = local_metric(&regime).unwrap();
            let state = BackboneState::build(&shape, BaseFrame::Center);
            let solve = |rotate: bool| {
                let n = state.n_s;
                let ds = state.ds();
                let mut m_gg = Vec::with_capacity(n + 1);
                let mut e3col = Vec::with_capacity(n + 1);
                for g in &state.g {
                    let frame = if rotate { se2::compose(&rot, g) } else { *g };
                    let ad_inv = se2::adjoint(&se2::inverse(&frame));
                    m_gg.push(ad_inv.transpose() * mu * ad_inv);
                    e3col.push(Vector3::new(frame.y, -frame.x, 1.0));
                }
                let mut integral = Matrix3::zeros();
                for i in 0..n {
                    integral += (m_gg[i] + m_gg[i + 1]) * (ds / 2.0);
                }
                let mut suffix = vec![Matrix3::zeros(); n + 1];
                for i in (0..n).rev() {
                    suffix[i] = suffix[i + 1] + (m_gg[i] + m_gg[i + 1]) * (ds / 2.0);
                }
                let mut rhs = Vector3::zeros();
                for i in 0..=n {
                    let w = if i == 0 || i == n { ds / 2.0 } else { ds };
                    rhs += suffix[i] * e3col[i] * kt[i] * w;
                }
                integral.try_inverse().unwrap() * (-rhs)
            };
            let xi = solve(false);
            let xi_rot = solve(true);
            let expected = se2::adjoint(&rot) * xi;
            assert!((xi_rot - expected).amax() < 1e-10);
            assert_abs_diff_eq!(xi_rot.z, xi.z, epsilon = 1e-10);
        }
    }

    #[test]
    fn connection_depends_only_on_shape_and_is_gauge_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(55);
        let kc = DMatrix::from_fn(2, 6, |_, _| rng.gen_range(-1.0..1.0));
        let ac = DMatrix::from_fn(2, 6, |_, _| rng.gen_range(-1.0..1.0));
        let grid = Grid::new(30, 8);
        let base = CurvatureModel::new(
            ModeSet::spline(kc.clone()).unwrap(),
            GaitTrajectory::new(ac.clone()).unwrap(),
            grid,
        )
        .unwrap();
        let gauged = CurvatureModel::new(
            ModeSet::spline(kc.scale(3.0)).unwrap(),
            GaitTrajectory::new(ac.scale(1.0 / 3.0)).unwrap(),
            grid,
        )
        .unwrap();
        for regime in [LOW, HIGH] {
            let s1 = connection_slice(
                &ShapeSample::from_model(&base, 0.3),
                &regime,
                BaseFrame::Center,
            )
            .unwrap();
            let s2 = connection_slice(
                &ShapeSample::from_model(&gauged, 0.3),
                &regime,
                BaseFrame::Center,
            )
            .unwrap();
            for (a1, a2) in s1.a.iter().zip(&s2.a) {
                assert!((a1 - a2).amax() < 1e-10);
            }
        }
    }

    #[test]
    fn mirror_symmetry_of_the_connection() {
        let model = random_model(71, Grid::new(30, 8), 1.0);
        let shape = ShapeSample::from_model(&model, 0.25);
        let mirrored = ShapeSample::new(shape.half.iter().map(|k| -k).collect());
        for regime in [LOW, HIGH] {
            let s1 = connection_slice(&shape, &regime, BaseFrame::Center).unwrap();
            let s2 = connection_slice(&mirrored, &regime, BaseFrame::Center).unwrap();
            for (a, am) in s1.a.iter().zip(&s2.a) {
                // pairing the reflected connection with the reflected rate
                // (-kappa_t) must mirror the velocity (x same, y/theta
                // negated), so A'(s) = (-A_x, A_y, A_theta)
                assert_abs_diff_eq!(am.x, -a.x, epsilon = 1e-10);
                assert_abs_diff_eq!(am.y, a.y, epsilon = 1e-10);
                assert_abs_diff_eq!(am.z, a.z, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn rigid_section_velocities_recover_base_twist() {
        // with kappa_t = 0 every section carries the same world twist as the
        // base (sanity on velocity_field wiring)
        let model = random_model(81, Grid::new(40, 8), 1.0);
        let field = velocity_field(&model, &LOW, 0.3, BaseFrame::Center).unwrap();
        assert_eq!(field.sections.len(), 41);
        let shape = ShapeSample::from_model(&model, 0.3);
        let slice = connection_slice(&shape, &LOW, BaseFrame::Center).unwrap();
        let g_circ = slice.state.group_velocities(&vec![0.0; 41]);
        let xi = AlgebraVector::new(0.3, -0.2, 0.9);
        for i in 0..=40 {
            let sec = slice.state.frame_body_velocity(i, &xi, &g_circ);
            let back = se2::adjoint(&slice.state.g[i]) * sec.as_vector();
            assert!((back - xi.as_vector()).amax() < 1e-12);
        }
    }

    #[test]
    fn ill_conditioned_metric_is_reported() {
        // a degenerate metric field with zero integral
        let field = MetricField {
            m_gg: vec![Matrix3::zeros(); 2],
            m_gk: vec![Vector3::zeros(); 2],
            integral: Matrix3::zeros(),
            cond: f64::INFINITY,
        };
        assert!(matches!(
            local_connection(&field),
            Err(Error::IllConditioned(_))
        ));
    }
}
