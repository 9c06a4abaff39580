//! Deterministic exporters: CSV field grids, SVG gait snapshots, checksums.
//!
//! CSV numbers use 17 significant digits so replayed runs are byte-identical;
//! SVG uses a y-up convention with the unit body length mapped to 500 px and
//! a red-white-black curvature colormap.

use crate::fields::{gradient_with_form, reference_two_form, Component};
use crate::kinematics::{BackboneState, BaseFrame, ShapeSample};
use crate::metrics::{connection_slice, local_metric, velocity_field, Regime};
use crate::optimize::IterationRecord;
use crate::shape::CurvatureModel;
use crate::Result;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::Path;

/// 17-significant-digit decimal form used in every CSV cell.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// SHA-256 hex digest of a file's bytes.
pub fn checksum(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Local connection A(s,t) over the evaluation grid.
pub fn connection_csv(model: &CurvatureModel, regime: &Regime, path: &Path) -> Result<()> {
    let mut out = String::from("t,s,a_x,a_y,a_theta\n");
    for j in 0..model.grid.n_t {
        let t = model.grid.time(j);
        let shape = ShapeSample::from_model(model, t);
        let slice = connection_slice(&shape, regime, BaseFrame::Center)?;
        for (i, a) in slice.a.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_num(t),
                fmt_num(model.grid.node(i)),
                fmt_num(a.x),
                fmt_num(a.y),
                fmt_num(a.z)
            )
            .expect("string write");
        }
    }
    write_text(path, &out)
}

/// Displacement-gradient grid fields for all three components.
pub fn gradient_csv(model: &CurvatureModel, regime: &Regime, path: &Path) -> Result<()> {
    let form = reference_two_form(model, regime)?;
    let gx = gradient_with_form(model, &form, Component::X)?;
    let gy = gradient_with_form(model, &form, Component::Y)?;
    let gt = gradient_with_form(model, &form, Component::Theta)?;
    let mut out = String::from("t,s,grad_x,grad_y,grad_theta\n");
    for j in 0..model.grid.n_t {
        for i in 0..=model.grid.n_s {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_num(model.grid.time(j)),
                fmt_num(model.grid.node(i)),
                fmt_num(gx.grid[(i, j)]),
                fmt_num(gy.grid[(i, j)]),
                fmt_num(gt.grid[(i, j)])
            )
            .expect("string write");
        }
    }
    write_text(path, &out)
}

/// Curvature and curvature-rate fields over the grid.
pub fn curvature_csv(model: &CurvatureModel, path: &Path) -> Result<()> {
    let mut out = String::from("t,s,kappa,kappa_t\n");
    for j in 0..model.grid.n_t {
        let t = model.grid.time(j);
        for i in 0..=model.grid.n_s {
            let s = model.grid.node(i);
            writeln!(
                out,
                "{},{},{},{}",
                fmt_num(t),
                fmt_num(s),
                fmt_num(model.eval_curvature(s, t)),
                fmt_num(model.eval_curvature_rate(s, t))
            )
            .expect("string write");
        }
    }
    write_text(path, &out)
}

/// Optimizer trace as line-delimited records.
pub fn trace_csv(records: &[IterationRecord], path: &Path) -> Result<()> {
    let mut out = String::from("iteration,efficiency,displacement,cost,step,grad_norm\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.iteration,
            fmt_num(r.efficiency),
            fmt_num(r.displacement),
            fmt_num(r.cost),
            fmt_num(r.step),
            fmt_num(r.grad_norm)
        )
        .expect("string write");
    }
    write_text(path, &out)
}

/// Ranked swimmer comparison.
pub fn comparison_csv(entries: &[crate::optimize::ComparisonEntry], path: &Path) -> Result<()> {
    let mut out = String::from("swimmer,efficiency,normalized\n");
    for e in entries {
        writeln!(
            out,
            "{},{},{}",
            e.name,
            fmt_num(e.report.efficiency),
            fmt_num(e.normalized)
        )
        .expect("string write");
    }
    write_text(path, &out)
}

/// Amplitude sweep rows: (amplitude, exact dx, approx dx, cycle cost,
/// efficiency).
pub fn sweep_csv(rows: &[(f64, f64, f64, f64, f64)], path: &Path) -> Result<()> {
    let mut out = String::from("amplitude,dx_exact,dx_approx,cycle_cost,efficiency\n");
    for &(a, dx, dxa, c, e) in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_num(a),
            fmt_num(dx),
            fmt_num(dxa),
            fmt_num(c),
            fmt_num(e)
        )
        .expect("string write");
    }
    write_text(path, &out)
}

/// Red-white-black colormap on u in [-1, 1]: red for negative curvature,
/// white at zero, black for positive.
fn curvature_color(u: f64) -> String {
    let u = u.clamp(-1.0, 1.0);
    let (r, g, b) = if u < 0.0 {
        let w = -u;
        let lerp = |a: f64, b: f64| a + (b - a) * w;
        (lerp(255.0, 200.0), lerp(255.0, 30.0), lerp(255.0, 30.0))
    } else {
        let lerp = |a: f64, b: f64| a + (b - a) * u;
        (lerp(255.0, 20.0), lerp(255.0, 20.0), lerp(255.0, 20.0))
    };
    format!("rgb({},{},{})", r.round() as u8, g.round() as u8, b.round() as u8)
}

const BODY_PX: f64 = 500.0;
const CANVAS: f64 = 700.0;

/// Render the swimmer at time `t`: backbone polyline colored by curvature
/// plus gray whiskers showing the per-section drag force (low Re) or
/// negative added linear momentum (high Re), mu * xi_body.
pub fn render_snapshot(
    model: &CurvatureModel,
    regime: &Regime,
    t: f64,
    path: &Path,
) -> Result<()> {
    let shape = ShapeSample::from_model(model, t);
    let state = BackboneState::build(&shape, BaseFrame::Center);
    let field = velocity_field(model, regime, t, BaseFrame::Center)?;
    let mu = local_metric(regime)?;
    // y-up: world y maps to decreasing SVG y
    let cx = CANVAS / 2.0;
    let cy = CANVAS / 2.0;
    let px = |x: f64, y: f64| (cx + BODY_PX * x, cy - BODY_PX * y);
    let kappa_ref = shape
        .half
        .iter()
        .fold(0.0f64, |m, &k| m.max(k.abs()))
        .max(1e-9);
    let whisker_max = field
        .sections
        .iter()
        .map(|xi| {
            let f = mu * xi.as_vector();
            (f.x * f.x + f.y * f.y).sqrt()
        })
        .fold(0.0f64, f64::max);
    let whisker_scale = if whisker_max > 1e-12 {
        0.15 / whisker_max
    } else {
        0.0
    };
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">"
    )
    .expect("string write");
    writeln!(out, "<rect width=\"{CANVAS}\" height=\"{CANVAS}\" fill=\"white\"/>").expect("string write");
    // whiskers first so the backbone draws on top
    for (i, (g, xi)) in state.g.iter().zip(field.sections.iter()).enumerate() {
        let f = mu * xi.as_vector();
        let (sn, cs) = g.theta.sin_cos();
        let wx = cs * f.x - sn * f.y;
        let wy = sn * f.x + cs * f.y;
        let (x0, y0) = px(g.x, g.y);
        let (x1, y1) = px(g.x + whisker_scale * wx, g.y + whisker_scale * wy);
        if whisker_scale > 0.0 {
            writeln!(
                out,
                "<line x1=\"{x0:.3}\" y1=\"{y0:.3}\" x2=\"{x1:.3}\" y2=\"{y1:.3}\" stroke=\"gray\" stroke-width=\"1.5\" data-node=\"{i}\"/>"
            )
            .expect("string write");
        }
    }
    for i in 0..state.n_s {
        let a = &state.g[i];
        let b = &state.g[i + 1];
        let (x0, y0) = px(a.x, a.y);
        let (x1, y1) = px(b.x, b.y);
        let color = curvature_color(shape.mid(i) / kappa_ref);
        writeln!(
            out,
            "<line x1=\"{x0:.3}\" y1=\"{y0:.3}\" x2=\"{x1:.3}\" y2=\"{y1:.3}\" stroke=\"{color}\" stroke-width=\"6\" stroke-linecap=\"round\"/>"
        )
        .expect("string write");
    }
    writeln!(out, "</svg>").expect("string write");
    write_text(path, &out)
}
