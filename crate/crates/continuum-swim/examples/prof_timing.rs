use continuum_swim::metrics::Regime;
use continuum_swim::optimize::{circular_gait_control, optimize, OptimizationProblem};
use continuum_swim::shape::{Grid, ModeSet};
use std::time::Instant;

fn main() {
    let high = Regime::HighRe { density: 1.0, cross_radius: 0.005 };
    let mut problem = OptimizationProblem::co_design(
        high,
        2,
        10,
        circular_gait_control(2, 6, 1.0),
        Grid::new(100, 128),
        242,
    )
    .unwrap();
    problem.restarts = 5;
    problem.max_iters = 500;
    let t0 = Instant::now();
    let trace = optimize(&problem).unwrap();
    println!("elapsed {:.1?}, {} records", t0.elapsed(), trace.records.len());
    for r in trace.records.iter().step_by(60) {
        println!(
            "  iter {:>4} eff {:.6e} step {:.2e} |g| {:.2e}",
            r.iteration, r.efficiency, r.step, r.grad_norm
        );
    }
    let n = trace.records.len();
    for r in &trace.records[n.saturating_sub(3)..] {
        println!(
            "  tail iter {:>4} eff {:.10e} step {:.2e}",
            r.iteration, r.efficiency, r.step
        );
    }
}
