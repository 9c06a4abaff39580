//! Gait-only optimization of a three-link swimmer at low Reynolds number:
//! projected gradient ascent on efficiency (displacement per unit path length), with the
//! iteration trace printed as it improves.
//!
//! Run with: `cargo run --example optimize_gait`

use continuum_swim::metrics::Regime;
use continuum_swim::optimize::{circular_gait_control, optimize, OptimizationProblem};
use continuum_swim::shape::{Grid, ModeSet};

fn main() -> continuum_swim::Result<()> {
    let mut problem = OptimizationProblem::gait_only(
        Regime::LowRe { drag_ratio: 2.0 },
        ModeSet::three_link(),
        circular_gait_control(2, 10, 0.8),
        Grid::new(40, 32),
        42,
    );
    problem.restarts = 2;
    problem.max_iters = 60;

    let trace = optimize(&problem)?;
    println!("{:>5} {:>14} {:>14} {:>12} {:>10}", "iter", "efficiency", "dx", "cost", "|grad|");
    for record in trace.records.iter().step_by(5) {
        println!(
            "{:>5} {:>14.6e} {:>14.6e} {:>12.4e} {:>10.2e}",
            record.iteration, record.efficiency, record.displacement, record.cost, record.grad_norm
        );
    }
    let last = trace.records.last().unwrap();
    println!(
        "\nbest restart: {} | final efficiency {:.6e} after {} iterations",
        trace.restart, last.efficiency, last.iteration
    );
    println!("optimized gait controls (modes x knots):\n{:.4}", trace.final_gait);
    Ok(())
}
