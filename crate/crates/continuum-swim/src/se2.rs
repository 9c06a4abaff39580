//! Exact planar Lie group/algebra kernel.
//!
//! `GroupElement` is a pose on SE(2) with the angle stored unwrapped (no
//! modular reduction), so net rotation accumulated over a gait stays
//! well-defined. `AlgebraVector` is a planar twist in se(2). All operations
//! are closed-form; the `omega -> 0` limits of `exp`/`log` are handled by
//! explicit Taylor series.

use crate::{Error, Result};
use nalgebra::{Matrix3, Vector3};

/// Planar pose (x, y, theta). Lengths are body lengths, theta in radians.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GroupElement {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

/// Planar twist (vx, vy, omega).
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AlgebraVector {
    pub vx: f64,
    pub vy: f64,
    pub omega: f64,
}

impl GroupElement {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self { x, y, theta }
    }

    pub fn identity() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    /// Homogeneous 3x3 matrix representation (used by test oracles).
    pub fn matrix(&self) -> Matrix3<f64> {
        let (s, c) = self.theta.sin_cos();
        Matrix3::new(c, -s, self.x, s, c, self.y, 0.0, 0.0, 1.0)
    }
}

impl AlgebraVector {
    pub fn new(vx: f64, vy: f64, omega: f64) -> Self {
        Self { vx, vy, omega }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.vx, self.vy, self.omega)
    }

    pub fn from_vector(v: Vector3<f64>) -> Self {
        Self::new(v.x, v.y, v.z)
    }

    /// se(2) matrix representation (hat map).
    pub fn hat(&self) -> Matrix3<f64> {
        Matrix3::new(
            0.0,
            -self.omega,
            self.vx,
            self.omega,
            0.0,
            self.vy,
            0.0,
            0.0,
            0.0,
        )
    }
}

/// Group product. Theta adds without wrapping.
pub fn compose(g1: &GroupElement, g2: &GroupElement) -> GroupElement {
    let (s, c) = g1.theta.sin_cos();
    GroupElement::new(
        g1.x + c * g2.x - s * g2.y,
        g1.y + s * g2.x + c * g2.y,
        g1.theta + g2.theta,
    )
}

pub fn inverse(g: &GroupElement) -> GroupElement {
    let (s, c) = g.theta.sin_cos();
    GroupElement::new(-(c * g.x + s * g.y), -(-s * g.x + c * g.y), -g.theta)
}

// sin(w)/w and (1 - cos(w))/w with Taylor fallbacks near w = 0.
fn sinc_pair(w: f64) -> (f64, f64) {
    if w.abs() < 1e-4 {
        let w2 = w * w;
        (
            1.0 - w2 / 6.0 + w2 * w2 / 120.0,
            w / 2.0 - w * w2 / 24.0 + w * w2 * w2 / 720.0,
        )
    } else {
        ((w.sin()) / w, (1.0 - w.cos()) / w)
    }
}

/// Closed-form constant-twist screw motion.
pub fn exp(xi: &AlgebraVector) -> GroupElement {
    let (a, b) = sinc_pair(xi.omega);
    GroupElement::new(
        a * xi.vx - b * xi.vy,
        b * xi.vx + a * xi.vy,
        xi.omega,
    )
}

/// Principal-branch logarithm; requires |theta| < pi.
pub fn log(g: &GroupElement) -> Result<AlgebraVector> {
    if g.theta.abs() >= std::f64::consts::PI {
        return Err(Error::LogBranch(g.theta.abs()));
    }
    let (a, b) = sinc_pair(g.theta);
    let det = a * a + b * b;
    Ok(AlgebraVector::new(
        (a * g.x + b * g.y) / det,
        (-b * g.x + a * g.y) / det,
        g.theta,
    ))
}

/// Adjoint action of `g` on twists, as a 3x3 matrix.
pub fn adjoint(g: &GroupElement) -> Matrix3<f64> {
    let (s, c) = g.theta.sin_cos();
    Matrix3::new(c, -s, g.y, s, c, -g.x, 0.0, 0.0, 1.0)
}

/// Dual adjoint, realized as the transpose of [`adjoint`] so that the
/// pullback `Ad^T mu Ad` of a symmetric metric stays symmetric.
pub fn dual_adjoint(g: &GroupElement) -> Matrix3<f64> {
    adjoint(g).transpose()
}

/// Apply `adjoint(g)` to a twist without building the matrix.
pub fn adjoint_apply(g: &GroupElement, xi: &AlgebraVector) -> AlgebraVector {
    let (s, c) = g.theta.sin_cos();
    AlgebraVector::new(
        c * xi.vx - s * xi.vy + g.y * xi.omega,
        s * xi.vx + c * xi.vy - g.x * xi.omega,
        xi.omega,
    )
}

/// Local Lie bracket on se(2). The angular component is structurally zero.
pub fn lie_bracket(xi1: &AlgebraVector, xi2: &AlgebraVector) -> AlgebraVector {
    AlgebraVector::new(
        xi2.omega * xi1.vy - xi1.omega * xi2.vy,
        xi1.omega * xi2.vx - xi2.omega * xi1.vx,
        0.0,
    )
}

/// Bracket on raw 3-vectors (vx, vy, omega); used by the constraint-curvature
/// assembly which works in `Vector3` form.
pub fn lie_bracket_vec(a: &Vector3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
    Vector3::new(b.z * a.y - a.z * b.y, a.z * b.x - b.z * a.x, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn assert_group_eq(a: &GroupElement, b: &GroupElement, tol: f64) {
        assert_abs_diff_eq!(a.x, b.x, epsilon = tol);
        assert_abs_diff_eq!(a.y, b.y, epsilon = tol);
        assert_abs_diff_eq!(a.theta, b.theta, epsilon = tol);
    }

    // Oracle: recover (x, y, theta) from a homogeneous matrix, tracking theta
    // through atan2 only for |theta| < pi cases used below.
    fn from_matrix(m: &Matrix3<f64>) -> GroupElement {
        GroupElement::new(m[(0, 2)], m[(1, 2)], m[(1, 0)].atan2(m[(0, 0)]))
    }

    #[test]
    fn compose_identity_and_translations() {
        let g = GroupElement::new(0.3, -0.7, 1.1);
        assert_group_eq(&compose(&GroupElement::identity(), &g), &g, 0.0);
        let a = GroupElement::new(1.0, 0.0, 0.0);
        let b = GroupElement::new(2.0, 0.0, 0.0);
        assert_group_eq(&compose(&a, &b), &GroupElement::new(3.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn compose_matches_homogeneous_matrix_product() {
        let a = GroupElement::new(1.0, 0.0, FRAC_PI_2);
        let b = GroupElement::new(1.0, 0.0, 0.0);
        let got = compose(&a, &b);
        assert_group_eq(&got, &GroupElement::new(1.0, 1.0, FRAC_PI_2), 1e-15);
        let oracle = from_matrix(&(a.matrix() * b.matrix()));
        assert_group_eq(&got, &oracle, 1e-14);
    }

    #[test]
    fn inverse_examples() {
        assert_group_eq(
            &inverse(&GroupElement::identity()),
            &GroupElement::identity(),
            0.0,
        );
        assert_group_eq(
            &inverse(&GroupElement::new(1.0, 0.0, 0.0)),
            &GroupElement::new(-1.0, 0.0, 0.0),
            0.0,
        );
        let g = GroupElement::new(1.0, 1.0, FRAC_PI_2);
        let inv = inverse(&g);
        assert_group_eq(&inv, &GroupElement::new(-1.0, 1.0, -FRAC_PI_2), 1e-15);
        let oracle = from_matrix(&g.matrix().try_inverse().unwrap());
        assert_group_eq(&inv, &oracle, 1e-14);
    }

    #[test]
    fn exp_examples() {
        assert_group_eq(
            &exp(&AlgebraVector::new(1.0, 0.0, 0.0)),
            &GroupElement::new(1.0, 0.0, 0.0),
            0.0,
        );
        assert_group_eq(
            &exp(&AlgebraVector::new(0.0, 0.0, PI)),
            &GroupElement::new(0.0, 0.0, PI),
            1e-15,
        );
        // Constant-twist arc formula.
        assert_group_eq(
            &exp(&AlgebraVector::new(FRAC_PI_2, 0.0, FRAC_PI_2)),
            &GroupElement::new(1.0, 1.0, FRAC_PI_2),
            1e-14,
        );
    }

    #[test]
    fn log_examples_and_branch_error() {
        let xi = log(&GroupElement::identity()).unwrap();
        assert_eq!(xi.as_vector(), Vector3::zeros());
        let xi = log(&GroupElement::new(1.0, 0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(xi.vx, 1.0, epsilon = 0.0);
        let xi = log(&GroupElement::new(1.0, 1.0, FRAC_PI_2)).unwrap();
        assert_abs_diff_eq!(xi.vx, FRAC_PI_2, epsilon = 1e-14);
        assert_abs_diff_eq!(xi.vy, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(xi.omega, FRAC_PI_2, epsilon = 0.0);
        assert!(log(&GroupElement::new(0.0, 0.0, PI)).is_err());
        assert!(log(&GroupElement::new(0.0, 0.0, 4.0)).is_err());
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(adjoint(&GroupElement::identity()), Matrix3::identity());
        let m = adjoint(&GroupElement::new(2.0, -3.0, 0.0));
        let expect = Matrix3::new(1.0, 0.0, -3.0, 0.0, 1.0, -2.0, 0.0, 0.0, 1.0);
        assert!((m - expect).norm() == 0.0);
    }

    #[test]
    fn adjoint_matches_matrix_conjugation_on_basis_twists() {
        let g = GroupElement::new(0.4, -1.2, 0.9);
        let gm = g.matrix();
        let gm_inv = gm.try_inverse().unwrap();
        for basis in [
            AlgebraVector::new(1.0, 0.0, 0.0),
            AlgebraVector::new(0.0, 1.0, 0.0),
            AlgebraVector::new(0.0, 0.0, 1.0),
        ] {
            let conj = gm * basis.hat() * gm_inv;
            let got = adjoint(&g) * basis.as_vector();
            // read the twist back off the conjugated hat matrix
            let oracle = Vector3::new(conj[(0, 2)], conj[(1, 2)], conj[(1, 0)]);
            assert!((got - oracle).norm() < 1e-14);
        }
    }

    #[test]
    fn dual_adjoint_is_transpose_and_duality_pairing_holds() {
        let g = GroupElement::new(-0.8, 0.3, 2.4);
        assert_eq!(dual_adjoint(&g), adjoint(&g).transpose());
        let m = Vector3::new(0.2, -1.4, 0.7);
        let xi = Vector3::new(1.1, 0.5, -0.9);
        let lhs = (dual_adjoint(&g) * m).dot(&xi);
        let rhs = m.dot(&(adjoint(&g) * xi));
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-13);
        // congruence preserves symmetry
        let mu = Matrix3::new(1.0, 0.2, 0.0, 0.2, 2.0, -0.1, 0.0, -0.1, 0.5);
        let pulled = dual_adjoint(&g) * mu * adjoint(&g);
        assert!((pulled - pulled.transpose()).norm() < 1e-13);
    }

    #[test]
    fn bracket_examples() {
        let xi = AlgebraVector::new(0.3, -0.2, 1.7);
        assert_eq!(lie_bracket(&xi, &xi).as_vector(), Vector3::zeros());
        let b = lie_bracket(
            &AlgebraVector::new(1.0, 0.0, 0.0),
            &AlgebraVector::new(0.0, 0.0, 1.0),
        );
        assert_eq!(b.as_vector(), Vector3::new(0.0, -1.0, 0.0));
        let b = lie_bracket(
            &AlgebraVector::new(0.0, 1.0, 0.0),
            &AlgebraVector::new(0.0, 0.0, 1.0),
        );
        assert_eq!(b.as_vector(), Vector3::new(1.0, 0.0, 0.0));
    }

    #[test]
    fn bracket_matches_matrix_commutator() {
        let xi1 = AlgebraVector::new(0.7, -1.1, 0.4);
        let xi2 = AlgebraVector::new(-0.3, 0.9, -1.6);
        let comm = xi1.hat() * xi2.hat() - xi2.hat() * xi1.hat();
        let got = lie_bracket(&xi1, &xi2);
        assert!(
            (got.as_vector() - Vector3::new(comm[(0, 2)], comm[(1, 2)], comm[(1, 0)])).norm()
                < 1e-14
        );
        assert_eq!(got.omega, 0.0);
    }

    proptest! {
        #[test]
        fn exp_log_round_trip(
            vx in -2.0f64..2.0,
            vy in -2.0f64..2.0,
            theta in -3.0f64..3.0,
        ) {
            let g = GroupElement::new(vx, vy, theta);
            let back = exp(&log(&g).unwrap());
            prop_assert!((back.x - g.x).abs() < 1e-10);
            prop_assert!((back.y - g.y).abs() < 1e-10);
            prop_assert!((back.theta - g.theta).abs() < 1e-10);
        }

        #[test]
        fn compose_with_inverse_is_identity(
            x in -5.0f64..5.0, y in -5.0f64..5.0, theta in -6.0f64..6.0,
        ) {
            let g = GroupElement::new(x, y, theta);
            let id = compose(&g, &inverse(&g));
            prop_assert!(id.x.abs() < 1e-12 && id.y.abs() < 1e-12 && id.theta.abs() < 1e-12);
        }

        #[test]
        fn adjoint_is_group_homomorphism(
            x1 in -2.0f64..2.0, y1 in -2.0f64..2.0, t1 in -3.0f64..3.0,
            x2 in -2.0f64..2.0, y2 in -2.0f64..2.0, t2 in -3.0f64..3.0,
        ) {
            let g1 = GroupElement::new(x1, y1, t1);
            let g2 = GroupElement::new(x2, y2, t2);
            let lhs = adjoint(&compose(&g1, &g2));
            let rhs = adjoint(&g1) * adjoint(&g2);
            prop_assert!((lhs - rhs).norm() < 1e-12);
            let inv = adjoint(&inverse(&g1));
            prop_assert!((inv - adjoint(&g1).try_inverse().unwrap()).norm() < 1e-12);
        }

        #[test]
        fn adjoint_is_linear(
            x in -2.0f64..2.0, y in -2.0f64..2.0, t in -3.0f64..3.0,
            a in -2.0f64..2.0, b in -2.0f64..2.0,
        ) {
            let g = GroupElement::new(x, y, t);
            let xi1 = AlgebraVector::new(0.3, -0.5, 0.8);
            let xi2 = AlgebraVector::new(-1.2, 0.4, -0.6);
            let combo = AlgebraVector::new(
                a * xi1.vx + b * xi2.vx,
                a * xi1.vy + b * xi2.vy,
                a * xi1.omega + b * xi2.omega,
            );
            let lhs = adjoint_apply(&g, &combo).as_vector();
            let rhs = a * adjoint_apply(&g, &xi1).as_vector() + b * adjoint_apply(&g, &xi2).as_vector();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn jacobi_identity(
            a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0,
            d in -2.0f64..2.0, e in -2.0f64..2.0, f in -2.0f64..2.0,
        ) {
            let x = AlgebraVector::new(a, b, c);
            let y = AlgebraVector::new(d, e, f);
            let z = AlgebraVector::new(b - d, c + a, e * 0.5);
            let t1 = lie_bracket(&x, &lie_bracket(&y, &z));
            let t2 = lie_bracket(&y, &lie_bracket(&z, &x));
            let t3 = lie_bracket(&z, &lie_bracket(&x, &y));
            let sum = t1.as_vector() + t2.as_vector() + t3.as_vector();
            prop_assert!(sum.amax() <= 1e-12);
            prop_assert!(t1.omega == 0.0 && t2.omega == 0.0 && t3.omega == 0.0);
        }
    }
}
