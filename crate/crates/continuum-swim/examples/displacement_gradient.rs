//! Net displacement per gait cycle: exact (trajectory integration) versus the
//! constraint-curvature area approximation, plus the variational gradient of
//! the approximate x-displacement checked against finite differences.
//!
//! Run with: `cargo run --example displacement_gradient`

use continuum_swim::fields::{displacement, displacement_approx, displacement_gradient, Component};
use continuum_swim::metrics::Regime;
use continuum_swim::optimize::circular_gait_control;
use continuum_swim::shape::{CurvatureModel, GaitTrajectory, Grid, ModeSet};

fn main() -> continuum_swim::Result<()> {
    let grid = Grid::new(60, 48);
    let gait = circular_gait_control(2, 10, 0.8);
    let model = CurvatureModel::new(
        ModeSet::serpenoid(),
        GaitTrajectory::new(gait.clone())?,
        grid.clone(),
    )?;
    let regime = Regime::LowRe { drag_ratio: 2.0 };

    let d = displacement(&model, &regime)?;
    println!("exact  per-cycle displacement: dx = {:+.6e}, dy = {:+.6e}, dtheta = {:+.6e}",
        d.exact.x, d.exact.y, d.exact.theta);
    println!("approx per-cycle displacement: dx = {:+.6e}, dy = {:+.6e}, dtheta = {:+.6e}",
        d.approx.vx, d.approx.vy, d.approx.omega);
    println!(
        "relative error on dx: {:.2}%\n",
        100.0 * (d.exact.x - d.approx.vx).abs() / d.exact.x.abs()
    );

    // gradient of the approximate dx with respect to the gait controls
    let grad = displacement_gradient(&model, &regime, Component::X)?;
    println!("gradient check against central differences (gait controls):");
    println!("{:>10} {:>14} {:>14} {:>10}", "control", "analytic", "fd", "rel err");
    let h = 1e-5;
    for &(i, c) in &[(0, 0), (0, 5), (1, 3), (1, 8)] {
        let fd = {
            let mut plus = gait.clone();
            plus[(i, c)] += h;
            let mut minus = gait.clone();
            minus[(i, c)] -= h;
            let f = |g| -> continuum_swim::Result<f64> {
                let m = CurvatureModel::new(
                    ModeSet::serpenoid(),
                    GaitTrajectory::new(g)?,
                    grid.clone(),
                )?;
                Ok(displacement_approx(&m, &regime)?.vx)
            };
            (f(plus)? - f(minus)?) / (2.0 * h)
        };
        let analytic = grad.d_alpha_c[(i, c)];
        println!(
            "{:>10} {:>14.6e} {:>14.6e} {:>10.2e}",
            format!("({i},{c})"),
            analytic,
            fd,
            (analytic - fd).abs() / fd.abs().max(1e-12)
        );
    }
    Ok(())
}
