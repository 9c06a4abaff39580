//! Evaluate the local connection A(s) of a serpenoid swimmer at several
//! phases of its gait and verify the force/torque balance it encodes.
//!
//! Run with: `cargo run --example local_connection`

use continuum_swim::kinematics::{BaseFrame, ShapeSample};
use continuum_swim::metrics::{connection_slice, Regime};
use continuum_swim::optimize::circular_gait_control;
use continuum_swim::shape::{CurvatureModel, GaitTrajectory, Grid, ModeSet};

fn main() -> continuum_swim::Result<()> {
    let grid = Grid::new(100, 32);
    let model = CurvatureModel::new(
        ModeSet::serpenoid(),
        GaitTrajectory::new(circular_gait_control(2, 10, 1.0))?,
        grid.clone(),
    )?;
    let regime = Regime::LowRe { drag_ratio: 2.0 };

    for &t in &[0.0, 0.25, 0.5] {
        let shape = ShapeSample::from_model(&model, t);
        let slice = connection_slice(&shape, &regime, BaseFrame::Center)?;
        println!("t = {t:.2}  (metric condition number {:.2e})", slice.cond);
        println!("{:>6} {:>12} {:>12} {:>12}", "s", "A_x", "A_y", "A_theta");
        for i in (0..grid.n_s).step_by(grid.n_s / 10) {
            let a = &slice.a[i];
            println!(
                "{:>6.2} {:>12.4e} {:>12.4e} {:>12.4e}",
                grid.node(i),
                a.x,
                a.y,
                a.z
            );
        }
        // the connection is defined by total force/torque balance: the
        // residual of that linear system should sit at solver precision
        let kappa_t: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|&s| model.eval_curvature_rate(s, t))
            .collect();
        let residual = slice.stationarity_residual(&kappa_t);
        println!("balance residual: {:.2e}\n", residual.amax());
    }
    Ok(())
}
