//! Render SVG snapshots of a swimmer over one gait cycle: the backbone is
//! colored by signed curvature and decorated with body-velocity whiskers.
//! Files land in `target/snapshots/`.
//!
//! Run with: `cargo run --example render_snapshots`

use continuum_swim::export::render_snapshot;
use continuum_swim::metrics::Regime;
use continuum_swim::optimize::circular_gait_control;
use continuum_swim::shape::{CurvatureModel, GaitTrajectory, Grid, ModeSet};

fn main() -> continuum_swim::Result<()> {
    let model = CurvatureModel::new(
        ModeSet::serpenoid(),
        GaitTrajectory::new(circular_gait_control(2, 10, 1.2))?,
        Grid::new(100, 32),
    )?;
    let regime = Regime::LowRe { drag_ratio: 2.0 };
    let dir = std::path::Path::new("target/snapshots");
    std::fs::create_dir_all(dir)?;
    let frames = 8;
    for frame in 0..frames {
        let t = frame as f64 / frames as f64;
        let path = dir.join(format!("snapshot_{frame}.svg"));
        render_snapshot(&model, &regime, t, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
