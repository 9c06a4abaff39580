//! Adaptive Dormand-Prince 5(4) integration for small fixed-size states.

use crate::{Error, Result};
use nalgebra::Vector3;

/// Integration tolerances and limits.
#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            max_steps: 1_000_000,
        }
    }
}

// Dormand-Prince coefficients (the classic RK45 pair behind ode45).
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `dy/dt = f(t, y)` from `t0` to `t1` (t1 > t0) with adaptive step
/// control, returning the final state.
pub fn integrate<F>(f: F, t0: f64, t1: f64, y0: Vector3<f64>, opts: &OdeOptions) -> Result<Vector3<f64>>
where
    F: Fn(f64, &Vector3<f64>) -> Result<Vector3<f64>>,
{
    let mut t = t0;
    let mut y = y0;
    let mut h = (t1 - t0) / 100.0;
    let h_min = (t1 - t0) * 1e-14;
    let mut k = [Vector3::zeros(); 7];
    k[0] = f(t, &y)?;
    for _ in 0..opts.max_steps {
        if t >= t1 {
            return Ok(y);
        }
        h = h.min(t1 - t);
        if h < h_min {
            return Err(Error::StepUnderflow { t });
        }
        for i in 1..7 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(i) {
                yi += kj * (h * A[i][j]);
            }
            k[i] = f(t + C[i] * h, &yi)?;
        }
        let mut y5 = y;
        let mut y4 = y;
        for i in 0..7 {
            y5 += k[i] * (h * B5[i]);
            y4 += k[i] * (h * B4[i]);
        }
        // weighted RMS error against mixed tolerance
        let mut err: f64 = 0.0;
        for i in 0..3 {
            let scale = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
            err += ((y5[i] - y4[i]) / scale).powi(2);
        }
        err = (err / 3.0).sqrt();
        if !err.is_finite() {
            return Err(Error::NonFinite(0));
        }
        if err <= 1.0 {
            t += h;
            y = y5;
            k[0] = k[6]; // FSAL
        } else {
            k[0] = f(t, &y)?;
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
    }
    Err(Error::StepUnderflow { t })
}
