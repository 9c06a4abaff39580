//! Command-line entry points: evaluate, optimize, compare, render, sweep.
//!
//! Exit codes (mapped in the binary): 0 success, 2 configuration error,
//! 3 numerical failure.

use crate::config::{Family, RegimeConfig, RunConfig, RunManifest};
use crate::export;
use crate::fields;
use crate::optimize::{compare_swimmers_with, optimize};
use crate::power::{cost_breakdown, efficiency};
use crate::shape::{CurvatureModel, GaitTrajectory};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Number of gait snapshots exported after an optimization run.
pub const SNAPSHOT_FRAMES: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "continuum-swim", about = "Geometric gait analysis and optimization for planar soft continuum swimmers", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override the regime: low | high (default parameters per regime).
    #[arg(long)]
    pub regime: Option<String>,
    /// Override the swimmer family:
    /// three-link | serpenoid | two-mode | three-mode | infinite.
    #[arg(long)]
    pub swimmer: Option<String>,
    /// Field export selection: connection | gradient | curvature | none.
    #[arg(long, default_value = "none")]
    pub export: String,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    /// Manifest of the run to render.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Comma-separated times in [0, 1]; default: 8 uniform frames.
    #[arg(long)]
    pub times: Option<String>,
    /// Override the output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate displacement, cost, and efficiency of the configured gait.
    Evaluate(CommonArgs),
    /// Optimize the gait (and design, for co-design families).
    Optimize(CommonArgs),
    /// Optimize every swimmer family and rank efficiencies.
    Compare(CommonArgs),
    /// Render SVG snapshots from a run manifest.
    Render(RenderArgs),
    /// Sweep the gait amplitude and tabulate displacement and cost.
    Sweep(CommonArgs),
}

fn load_config(args: &CommonArgs) -> Result<RunConfig> {
    let mut config = match &args.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = &args.out {
        config.out_dir = out.to_string_lossy().into_owned();
    }
    if let Some(regime) = &args.regime {
        config.regime = match regime.as_str() {
            "low" => RegimeConfig::Low { drag_ratio: 2.0 },
            "high" => RegimeConfig::High {
                density: 1.0,
                cross_radius: 0.005,
            },
            other => return Err(Error::Config(format!("unknown regime '{other}'"))),
        };
    }
    if let Some(swimmer) = &args.swimmer {
        config.swimmer.family = Family::parse(swimmer)?;
    }
    if config.out_dir.is_empty() {
        config.out_dir = "out".into();
    }
    config.validate()?;
    Ok(config)
}

fn export_fields(
    config: &RunConfig,
    model: &CurvatureModel,
    selection: &str,
    dir: &Path,
    checksums: &mut BTreeMap<String, String>,
) -> Result<()> {
    let regime = config.regime.regime();
    let targets: Vec<(&str, &str)> = match selection {
        "none" => vec![],
        "connection" => vec![("connection", "connection.csv")],
        "gradient" => vec![("gradient", "gradient.csv")],
        "curvature" => vec![("curvature", "curvature.csv")],
        other => {
            return Err(Error::Config(format!(
                "unknown export selection '{other}' (connection | gradient | curvature | none)"
            )))
        }
    };
    for (kind, name) in targets {
        let path = dir.join(name);
        match kind {
            "connection" => export::connection_csv(model, &regime, &path)?,
            "gradient" => export::gradient_csv(model, &regime, &path)?,
            _ => export::curvature_csv(model, &path)?,
        }
        checksums.insert(name.to_string(), export::checksum(&path)?);
    }
    Ok(())
}

/// `evaluate`: report on the configured initial gait, plus optional field
/// CSVs; writes `manifest.toml`.
pub fn cmd_evaluate(args: &CommonArgs) -> Result<()> {
    let config = load_config(args)?;
    let dir = PathBuf::from(&config.out_dir);
    std::fs::create_dir_all(&dir)?;
    let model = config.model()?;
    let report = efficiency(&model, &config.regime.regime())?;
    let mut manifest = RunManifest::new(&config, &model.modes, model.gait.control(), report);
    export_fields(&config, &model, &args.export, &dir, &mut manifest.checksums)?;
    manifest.write(&dir.join("manifest.toml"))?;
    println!(
        "efficiency {:.6e}  dx {:.6e}  path length {:.6e}  energy {:.6e}",
        manifest.report.efficiency,
        manifest.report.exact.x,
        manifest.report.cost.length,
        manifest.report.cost.cycle
    );
    Ok(())
}

/// `optimize`: run the configured optimization, write the manifest, trace,
/// and a sequence of gait snapshots.
pub fn cmd_optimize(args: &CommonArgs) -> Result<()> {
    let config = load_config(args)?;
    let dir = PathBuf::from(&config.out_dir);
    std::fs::create_dir_all(&dir)?;
    let problem = config.problem()?;
    let trace = optimize(&problem)?;
    let model = CurvatureModel::new(
        trace.final_modes.clone(),
        GaitTrajectory::new(trace.final_gait.clone())?,
        config.grid_(),
    )?;
    let regime = config.regime.regime();
    let report = efficiency(&model, &regime)?;
    let mut manifest = RunManifest::new(&config, &model.modes, model.gait.control(), report);
    let trace_path = dir.join("trace.csv");
    export::trace_csv(&trace.records, &trace_path)?;
    manifest
        .checksums
        .insert("trace.csv".into(), export::checksum(&trace_path)?);
    for frame in 0..SNAPSHOT_FRAMES {
        let t = frame as f64 / SNAPSHOT_FRAMES as f64;
        let name = format!("frame_{frame}.svg");
        let path = dir.join(&name);
        export::render_snapshot(&model, &regime, t, &path)?;
        manifest.checksums.insert(name, export::checksum(&path)?);
    }
    export_fields(&config, &model, &args.export, &dir, &mut manifest.checksums)?;
    manifest.write(&dir.join("manifest.toml"))?;
    println!(
        "optimized efficiency {:.6e} after {} iterations (restart {})",
        trace.final_efficiency,
        trace.records.len() - 1,
        trace.restart
    );
    Ok(())
}

/// `compare`: rank all swimmer families; writes `comparison.csv`.
pub fn cmd_compare(args: &CommonArgs) -> Result<()> {
    let config = load_config(args)?;
    let dir = PathBuf::from(&config.out_dir);
    std::fs::create_dir_all(&dir)?;
    let entries = compare_swimmers_with(
        config.regime.regime(),
        config.grid_(),
        config.splines.gait_points,
        config.seed,
        config.optimizer.restarts,
        config.optimizer.max_iters,
    )?;
    export::comparison_csv(&entries, &dir.join("comparison.csv"))?;
    for e in &entries {
        println!("{:<12} {:.6e}  (normalized {:.4})", e.name, e.report.efficiency, e.normalized);
    }
    Ok(())
}

/// `render`: SVG snapshots at the requested times from a manifest.
pub fn cmd_render(args: &RenderArgs) -> Result<()> {
    let manifest = RunManifest::from_path(&args.manifest)?;
    let model = manifest.model()?;
    let regime = manifest.config.regime.regime();
    let dir = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&manifest.config.out_dir));
    std::fs::create_dir_all(&dir)?;
    let times: Vec<f64> = match &args.times {
        Some(list) => list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("bad time '{s}': {e}")))
            })
            .collect::<Result<_>>()?,
        None => (0..SNAPSHOT_FRAMES)
            .map(|f| f as f64 / SNAPSHOT_FRAMES as f64)
            .collect(),
    };
    for (idx, &t) in times.iter().enumerate() {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Config(format!("render time {t} outside [0, 1]")));
        }
        export::render_snapshot(&model, &regime, t, &dir.join(format!("render_{idx}.svg")))?;
    }
    println!("rendered {} frames into {}", times.len(), dir.display());
    Ok(())
}

/// `sweep`: scale the configured gait amplitude over a 20-point range and
/// tabulate displacement (exact and approximate), cost, and efficiency.
pub fn cmd_sweep(args: &CommonArgs) -> Result<()> {
    let config = load_config(args)?;
    let dir = PathBuf::from(&config.out_dir);
    std::fs::create_dir_all(&dir)?;
    let regime = config.regime.regime();
    let base_gait = config.initial_gait();
    let modes = config.initial_modes()?;
    let mut rows = Vec::new();
    for step in 1..=20 {
        let factor = step as f64 / 10.0;
        let model = CurvatureModel::new(
            modes.clone(),
            GaitTrajectory::new(base_gait.scale(factor))?,
            config.grid_(),
        )?;
        if model.max_abs_curvature() > config.optimizer.kappa_max {
            break;
        }
        let d = fields::displacement(&model, &regime)?;
        let cost = cost_breakdown(&model, &regime)?;
        let eff = if cost.length <= 1e-12 {
            0.0
        } else {
            d.exact.x.abs() / cost.length
        };
        rows.push((
            factor * config.swimmer.amplitude,
            d.exact.x,
            d.approx.vx,
            cost.cycle,
            eff,
        ));
    }
    export::sweep_csv(&rows, &dir.join("sweep.csv"))?;
    println!("swept {} amplitudes into {}", rows.len(), dir.display());
    Ok(())
}

/// Dispatch a parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Render(args) => cmd_render(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

/// Exit code for an error per the CLI contract: 2 for configuration or I/O
/// problems, 3 for numerical failures.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::InvalidParameter(_) | Error::Io(_) => 2,
        _ => 3,
    }
}
