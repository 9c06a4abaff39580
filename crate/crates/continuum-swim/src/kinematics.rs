//! Backbone kinematics: product-of-exponentials transforms along the
//! arclength, group velocities under shape change, and the geometric-center
//! floating base.

use crate::se2::{self, AlgebraVector, GroupElement};
use crate::shape::CurvatureModel;
use nalgebra::{Matrix3, Vector2, Vector3};

/// Which frame the backbone is expressed relative to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseFrame {
    /// Frames anchored at the tail (s = 0 is the identity).
    Tail,
    /// Frames re-based at the geometric center of the backbone.
    Center,
}

/// Curvature sampled on the half grid (nodes and segment midpoints) at one
/// instant. This is the raw input of the dynamics pipeline, which lets the
/// constraint-curvature machinery perturb shapes directly.
#[derive(Clone, Debug)]
pub struct ShapeSample {
    /// 2 n_s + 1 curvature values; even indices are nodes.
    pub half: Vec<f64>,
    pub n_s: usize,
}

impl ShapeSample {
    pub fn new(half: Vec<f64>) -> Self {
        assert!(half.len() % 2 == 1 && half.len() >= 3);
        let n_s = (half.len() - 1) / 2;
        Self { half, n_s }
    }

    pub fn from_model(model: &CurvatureModel, t: f64) -> Self {
        let samples = model.grid.half_grid();
        let table = model.modes.sample(&samples);
        let alpha = model.gait.values(t);
        let half = (0..samples.len())
            .map(|c| (0..alpha.len()).map(|i| table[(i, c)] * alpha[i]).sum())
            .collect();
        Self::new(half)
    }

    /// Same as [`from_model`] but reusing a precomputed mode table (hot path
    /// in trajectory integration).
    pub fn from_table(table: &nalgebra::DMatrix<f64>, alpha: &[f64]) -> Self {
        let half = (0..table.ncols())
            .map(|c| (0..alpha.len()).map(|i| table[(i, c)] * alpha[i]).sum())
            .collect();
        Self::new(half)
    }

    pub fn node(&self, i: usize) -> f64 {
        self.half[2 * i]
    }

    pub fn mid(&self, i: usize) -> f64 {
        self.half[2 * i + 1]
    }

    /// Add a hat perturbation of the given trapezoid mass centered at node
    /// `j` (peak mass/w_j, half that at the adjacent midpoints).
    pub fn perturb_node(&mut self, j: usize, mass: f64) {
        let ds = 1.0 / self.n_s as f64;
        let w = if j == 0 || j == self.n_s { ds / 2.0 } else { ds };
        let peak = mass / w;
        self.half[2 * j] += peak;
        if j > 0 {
            self.half[2 * j - 1] += peak / 2.0;
        }
        if j < self.n_s {
            self.half[2 * j + 1] += peak / 2.0;
        }
    }
}

/// Backbone frames at one instant: tail-anchored transforms, the floating
/// base, and the re-based frames.
#[derive(Clone, Debug)]
pub struct BackboneState {
    /// Tail-anchored transforms h(s_i), h[0] = identity.
    pub h: Vec<GroupElement>,
    /// Tail-to-base transform (identity for a tail base).
    pub base: GroupElement,
    /// Frames relative to the base: g_i = base^-1 h_i.
    pub g: Vec<GroupElement>,
    /// Which gauge the re-based frames use.
    pub frame: BaseFrame,
    pub n_s: usize,
}

/// Per-segment product of exact constant-twist exponentials with midpoint
/// curvature; converges at second order in 1/n_s to the continuous product
/// integral.
pub fn backbone_transforms(shape: &ShapeSample) -> Vec<GroupElement> {
    let n = shape.n_s;
    let ds = 1.0 / n as f64;
    let mut h = Vec::with_capacity(n + 1);
    h.push(GroupElement::identity());
    for i in 0..n {
        let step = se2::exp(&AlgebraVector::new(ds, 0.0, shape.mid(i) * ds));
        h.push(se2::compose(&h[i], &step));
    }
    h
}

/// Trapezoidal mean pose of the backbone: mean position, mean unwrapped
/// angle.
pub fn center_of(h: &[GroupElement]) -> GroupElement {
    let n = h.len() - 1;
    let mut x = 0.0;
    let mut y = 0.0;
    let mut theta = 0.0;
    for (i, hi) in h.iter().enumerate() {
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        x += w * hi.x;
        y += w * hi.y;
        theta += w * hi.theta;
    }
    GroupElement::new(x / n as f64, y / n as f64, theta / n as f64)
}

impl BackboneState {
    pub fn build(shape: &ShapeSample, base: BaseFrame) -> Self {
        let h = backbone_transforms(shape);
        let base_frame = match base {
            BaseFrame::Tail => GroupElement::identity(),
            BaseFrame::Center => center_of(&h),
        };
        let base_inv = se2::inverse(&base_frame);
        let g = h.iter().map(|hi| se2::compose(&base_inv, hi)).collect();
        let n_s = h.len() - 1;
        Self {
            h,
            base: base_frame,
            g,
            frame: base,
            n_s,
        }
    }

    pub fn ds(&self) -> f64 {
        1.0 / self.n_s as f64
    }

    /// Sensitivity of the geometric-center drift to the nodal curvature
    /// rate: kernel B_j = d(w^-1 w_dot)/d(kappa_t_j), so that the center
    /// frame's shape-induced body twist is `c = sum_j B_j kappa_t_j`.
    ///
    /// The center pose w = (mean position, mean angle) of the tail-anchored
    /// frames moves when the shape changes; the world velocity of the center
    /// base therefore carries this drift in addition to the connection
    /// pairing. Node j rotates every material point i >= j about the point
    /// h_j with the prefix-trapezoid weight, so
    /// `dp_i/dkappa_t_j = w~_{ji} (h_j.y - h_i.y, h_i.x - h_j.x)` and
    /// `dtheta_i/dkappa_t_j = w~_{ji}`; B_j is the trapezoidal mean over i,
    /// with the linear part rotated into the center frame. Zero in the tail
    /// gauge.
    pub fn center_drift_kernel(&self) -> Vec<Vector3<f64>> {
        let n = self.n_s;
        if self.frame == BaseFrame::Tail {
            return vec![Vector3::zeros(); n + 1];
        }
        let ds = self.ds();
        // trapezoidal mean weights W_i over the backbone (sum to 1)
        let mean_w = |i: usize| {
            if i == 0 || i == n {
                0.5 / n as f64
            } else {
                1.0 / n as f64
            }
        };
        // suffix sums T1_j = sum_{i>=j} W_i, T2_j = sum_{i>=j} W_i p_i
        let mut t1 = vec![0.0; n + 2];
        let mut t2 = vec![Vector2::zeros(); n + 2];
        for i in (0..=n).rev() {
            let w = mean_w(i);
            t1[i] = t1[i + 1] + w;
            t2[i] = t2[i + 1] + Vector2::new(self.h[i].x, self.h[i].y) * w;
        }
        let rot_t = rot_lift(-self.base.theta);
        (0..=n)
            .map(|j| {
                // S1_j = sum_i W_i w~_{ji}, S2_j = sum_i W_i w~_{ji} p_i,
                // with prefix-trapezoid weights w~_{ji} = ds/2 at i = j or
                // j = 0, ds for interior pairs, 0 for i < j.
                let (s1, s2) = if j == 0 {
                    (t1[1] * (ds / 2.0), t2[1] * (ds / 2.0))
                } else {
                    let w = mean_w(j);
                    (
                        t1[j + 1] * ds + w * (ds / 2.0),
                        t2[j + 1] * ds
                            + Vector2::new(self.h[j].x, self.h[j].y) * (w * ds / 2.0),
                    )
                };
                let hj = &self.h[j];
                let lin = Vector3::new(hj.y * s1 - s2.y, s2.x - hj.x * s1, s1);
                rot_t * lin
            })
            .collect()
    }

    /// Shape-change group velocities of the based transforms for a given
    /// nodal curvature rate:
    /// g_circ(s) = Ad_{g^-1(s)} [int_0^s Ad_{g(sigma)} (0,0,kappa_t) dsigma
    ///             - w^-1 w_dot],
    /// trapezoidal in sigma, where the drift term is the shape-induced body
    /// twist of the geometric-center base (zero in the tail gauge).
    pub fn group_velocities(&self, kappa_t_nodes: &[f64]) -> Vec<Vector3<f64>> {
        let n = self.n_s;
        let ds = self.ds();
        let c: Vec<Vector3<f64>> = (0..=n)
            .map(|i| {
                let gi = &self.g[i];
                // adjoint(g) * e3 = (y, -x, 1) * kappa_t
                Vector3::new(gi.y, -gi.x, 1.0) * kappa_t_nodes[i]
            })
            .collect();
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(Vector3::zeros());
        for i in 1..=n {
            prefix.push(prefix[i - 1] + (c[i - 1] + c[i]) * (ds / 2.0));
        }
        let drift: Vector3<f64> = self
            .center_drift_kernel()
            .iter()
            .zip(kappa_t_nodes)
            .map(|(b, &k)| b * k)
            .sum();
        (0..=n)
            .map(|i| se2::adjoint(&se2::inverse(&self.g[i])) * (prefix[i] - drift))
            .collect()
    }

    /// Body velocity of frame `i` relative to the world:
    /// Ad_{g_i^-1} xi_base + g_circ(s_i).
    pub fn frame_body_velocity(
        &self,
        i: usize,
        xi_base: &AlgebraVector,
        g_circ: &[Vector3<f64>],
    ) -> AlgebraVector {
        let ad_inv = se2::adjoint(&se2::inverse(&self.g[i]));
        AlgebraVector::from_vector(ad_inv * xi_base.as_vector() + g_circ[i])
    }
}

/// The per-arclength twist generating the backbone: (L, 0, kappa) with L = 1.
pub fn backbone_flow(model: &CurvatureModel, s: f64, t: f64) -> AlgebraVector {
    AlgebraVector::new(1.0, 0.0, model.eval_curvature(s, t))
}

/// Tail-to-s transform at time t, discretized with the model's segment
/// density over [0, s].
pub fn backbone_transform(model: &CurvatureModel, s: f64, t: f64) -> GroupElement {
    if s <= 0.0 {
        return GroupElement::identity();
    }
    let n = ((s * model.grid.n_s as f64).ceil() as usize).max(1);
    let ds = s / n as f64;
    let mut g = GroupElement::identity();
    for i in 0..n {
        let mid = (i as f64 + 0.5) * ds;
        let kappa = model.eval_curvature(mid, t);
        g = se2::compose(&g, &se2::exp(&AlgebraVector::new(ds, 0.0, kappa * ds)));
    }
    g
}

/// Group velocity of the tail-anchored backbone transform at node index
/// closest to `s`.
pub fn group_velocity(model: &CurvatureModel, s: f64, t: f64) -> AlgebraVector {
    let shape = ShapeSample::from_model(model, t);
    let state = BackboneState::build(&shape, BaseFrame::Tail);
    let kappa_t: Vec<f64> = (0..=model.grid.n_s)
        .map(|i| model.eval_curvature_rate(model.grid.node(i), t))
        .collect();
    let g_circ = state.group_velocities(&kappa_t);
    let i = ((s * model.grid.n_s as f64).round() as usize).min(model.grid.n_s);
    AlgebraVector::from_vector(g_circ[i])
}

/// Tail-to-geometric-center transform at time t.
pub fn geometric_center_frame(model: &CurvatureModel, t: f64) -> GroupElement {
    let shape = ShapeSample::from_model(model, t);
    center_of(&backbone_transforms(&shape))
}

/// Rotation lift [[R(theta), 0], [0, 1]] used when mixing world vectors and
/// twists.
pub fn rot_lift(theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// World-frame linear velocity of a frame with pose `g` and body twist `xi`.
pub fn world_linear_velocity(g: &GroupElement, xi: &AlgebraVector) -> Vector2<f64> {
    let (s, c) = g.theta.sin_cos();
    Vector2::new(c * xi.vx - s * xi.vy, s * xi.vx + c * xi.vy)
}
