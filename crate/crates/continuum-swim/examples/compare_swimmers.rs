//! Optimize every swimmer family under a common budget and rank their
//! efficiencies. Uses a reduced grid and iteration budget so the whole
//! comparison runs in about a minute; the `compare` CLI command runs the
//! full-resolution version.
//!
//! Run with: `cargo run --release --example compare_swimmers`

use continuum_swim::metrics::Regime;
use continuum_swim::optimize::compare_swimmers_with;
use continuum_swim::shape::Grid;

fn main() -> continuum_swim::Result<()> {
    let entries = compare_swimmers_with(
        Regime::LowRe { drag_ratio: 2.0 },
        Grid::new(50, 48),
        10,  // gait control points per shape variable
        42,  // seed
        2,   // restarts
        80,  // iteration budget
    )?;
    println!("{:<12} {:>14} {:>12}", "swimmer", "efficiency", "normalized");
    for entry in &entries {
        println!(
            "{:<12} {:>14.6e} {:>12.4}",
            entry.name, entry.report.efficiency, entry.normalized
        );
    }
    Ok(())
}
