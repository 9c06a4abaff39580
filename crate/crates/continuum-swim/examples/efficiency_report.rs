//! Cycle cost and efficiency (displacement per unit metric path length) of
//! one gait under both hydrodynamic regimes: resistive drag at low Reynolds
//! number and fluid-added inertia at high Reynolds number.
//!
//! Run with: `cargo run --example efficiency_report`

use continuum_swim::metrics::Regime;
use continuum_swim::optimize::circular_gait_control;
use continuum_swim::power::efficiency;
use continuum_swim::shape::{CurvatureModel, GaitTrajectory, Grid, ModeSet};

fn main() -> continuum_swim::Result<()> {
    let model = CurvatureModel::new(
        ModeSet::serpenoid(),
        GaitTrajectory::new(circular_gait_control(2, 10, 1.0))?,
        Grid::new(60, 48),
    )?;
    let regimes = [
        Regime::LowRe { drag_ratio: 2.0 },
        Regime::HighRe {
            density: 1.0,
            cross_radius: 0.005,
        },
    ];
    for regime in regimes {
        let report = efficiency(&model, &regime)?;
        let peak = report
            .cost
            .instantaneous
            .iter()
            .cloned()
            .fold(0.0_f64, f64::max);
        println!("{:?}", regime);
        println!("  dx per cycle     {:+.6e}", report.exact.x);
        println!("  cycle energy     {:.6e}", report.cost.cycle);
        println!("  path length      {:.6e}", report.cost.length);
        println!("  peak power       {:.6e}", peak);
        if !regime.is_low() {
            println!(
                "  rotational part  {:.6e} ({:.3}% of cycle cost)",
                report.cost.rotational_cycle,
                100.0 * report.cost.rotational_cycle / report.cost.cycle
            );
        }
        println!("  efficiency       {:.6e}\n", report.efficiency);
    }
    Ok(())
}
