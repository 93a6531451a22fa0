//! Command-line front end: single simulations, particle systems, limit
//! shapes, comparison experiments, convergence sweeps, and SVG rendering.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};

use droplets::clock::ClockField;
use droplets::dynamics::{run_graphical, run_kmc, Trajectory};
use droplets::export;
use droplets::geometry::{offset_shape, PlanarShape, Point, SupportFunction};
use droplets::harness::{
    self, convergence_sweep, run_experiment, ExperimentConfig,
};
use droplets::lattice::{BoundaryRule, FieldParameter, SpinConfiguration};
use droplets::limits;
use droplets::particles::{
    simulate_exclusion, simulate_zero_range, ClockKeying, OccupationField, ZeroRangeState,
    ZrpRateMode,
};
use droplets::render::{render_snapshot, Layer, Style};

#[derive(Parser)]
#[command(name = "droplets", about = "Zero-temperature Ising droplet laboratory", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one droplet simulation and export snapshots.
    Simulate(SimulateArgs),
    /// Run a one-dimensional particle system.
    Particles(ParticlesArgs),
    /// Emit deterministic limit shapes.
    LimitShape(LimitShapeArgs),
    /// Run a comparison experiment from a JSON config.
    Compare(CompareArgs),
    /// Run a convergence sweep from a JSON config (needs >= 2 window sizes).
    Sweep(SweepArgs),
    /// Render polygon CSV / RLE snapshots to SVG.
    Render(RenderArgs),
}

fn parse_extended(s: &str) -> Result<f64> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "+inf" => Ok(f64::INFINITY),
        other => other.parse::<f64>().context("expected a number or 'inf'"),
    }
}

fn parse_times(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for tok in s.split(',').filter(|t| !t.trim().is_empty()) {
        out.push(tok.trim().parse::<f64>().context("bad time list")?);
    }
    Ok(out)
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeKind {
    Square,
    Disk,
    PolygonFile,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum, default_value = "square")]
    shape: ShapeKind,
    /// Disk radius when --shape disk.
    #[arg(long, default_value_t = 0.5)]
    radius: f64,
    /// Polygon CSV path when --shape polygon-file.
    #[arg(long)]
    shape_file: Option<PathBuf>,
    /// Window half-width L.
    #[arg(short = 'L', long)]
    l: i64,
    /// External field (number or 'inf').
    #[arg(long, value_parser = parse_extended)]
    h: f64,
    /// Inverse temperature (number or 'inf').
    #[arg(long, value_parser = parse_extended, default_value = "inf")]
    beta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Natural-time sample points, comma separated.
    #[arg(long, value_parser = parse_times, default_value = "")]
    sample_times: std::vec::Vec<f64>,
    #[arg(long, value_enum, default_value = "kmc")]
    engine: CliEngine,
    /// Natural-time horizon; defaults to a generous multiple of the window.
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliEngine {
    Graphical,
    Kmc,
}

fn build_shape(kind: ShapeKind, radius: f64, file: &Option<PathBuf>) -> Result<PlanarShape> {
    Ok(match kind {
        ShapeKind::Square => PlanarShape::square(1.0),
        ShapeKind::Disk => PlanarShape::circle(Point::new(0.0, 0.0), radius, 2048),
        ShapeKind::PolygonFile => {
            let path = file.as_ref().context("--shape-file required for polygon-file")?;
            export::shape_from_csv(&std::fs::read_to_string(path)?)?
        }
    })
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let shape = build_shape(args.shape, args.radius, &args.shape_file)?;
    let params = FieldParameter::new(args.h, args.beta);
    let config = SpinConfiguration::init_from_shape(&shape, args.l, BoundaryRule::AllPlus)?;
    let horizon = args.horizon.unwrap_or_else(|| {
        let last = args.sample_times.last().copied().unwrap_or(0.0);
        (6.0 * harness::time_scale(args.h, args.l)).max(last)
    });
    let traj: Trajectory = match args.engine {
        CliEngine::Kmc => run_kmc(&config, &params, horizon, args.seed, &args.sample_times)?,
        CliEngine::Graphical => run_graphical(
            &config,
            &ClockField::new(args.seed),
            &params,
            horizon,
            &args.sample_times,
        )?,
    };
    std::fs::create_dir_all(&args.out)?;
    let meta = serde_json::json!({
        "l": args.l,
        "h": if args.h.is_infinite() { serde_json::json!("inf") } else { serde_json::json!(args.h) },
        "seed": args.seed,
        "event_count": traj.event_count,
        "ring_count": traj.ring_count,
        "extinction_time": traj.extinction_time,
        "overflow_count": traj.overflow.count,
        "overflow_first_time": traj.overflow.first_time,
        "sample_times": traj.sampled_times,
    });
    std::fs::write(args.out.join("trajectory.json"), serde_json::to_vec_pretty(&meta)?)?;
    for (k, snap) in traj.snapshots.iter().enumerate() {
        let d = snap.droplet();
        let mut rle = Vec::new();
        export::write_rle_json(&d, &mut rle)?;
        std::fs::write(args.out.join(format!("snapshot_{k:03}.rle.json")), rle)?;
        std::fs::write(args.out.join(format!("snapshot_{k:03}.pbm")), export::droplet_to_pbm(&d))?;
        std::fs::write(
            args.out.join(format!("snapshot_{k:03}.csv")),
            export::shape_to_csv(&d.to_shape_rescaled()),
        )?;
    }
    println!(
        "simulated L={} h={} events={} extinction={:?} -> {}",
        args.l,
        args.h,
        traj.event_count,
        traj.extinction_time,
        args.out.display()
    );
    Ok(())
}

#[derive(Clone, Copy, ValueEnum)]
enum ParticleSystem {
    Ssep,
    Asep,
    Tasep,
    Zrp,
}

#[derive(Args)]
struct ParticlesArgs {
    #[arg(long, value_enum)]
    system: ParticleSystem,
    /// Step profile half-width (sites span [-half, half)).
    #[arg(long, default_value_t = 200)]
    half_width: i64,
    /// Occupation (0/1 per line) or signed-count file for zrp.
    #[arg(long)]
    profile_file: Option<PathBuf>,
    #[arg(long, value_parser = parse_extended, default_value = "0")]
    h: f64,
    #[arg(long)]
    horizon: f64,
    #[arg(long, value_parser = parse_times, default_value = "")]
    sample_times: std::vec::Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-site rate reading for the zero-range process.
    #[arg(long, value_enum, default_value = "unit-site-rate")]
    zrp_rates: CliZrpMode,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliZrpMode {
    UnitSiteRate,
    PileSuppressed,
}

fn read_int_lines(path: &Path) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for line in std::fs::read_to_string(path)?.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(line.parse::<i64>()?);
    }
    Ok(out)
}

fn cmd_particles(args: ParticlesArgs) -> Result<()> {
    std::fs::create_dir_all(&args.out)?;
    let clocks = ClockField::new(args.seed);
    let samples =
        if args.sample_times.is_empty() { vec![args.horizon] } else { args.sample_times.clone() };
    let mut csv = String::from("time,site,value\n");
    let summary;
    match args.system {
        ParticleSystem::Ssep | ParticleSystem::Asep | ParticleSystem::Tasep => {
            let h = match args.system {
                ParticleSystem::Ssep => 0.0,
                ParticleSystem::Tasep => f64::INFINITY,
                ParticleSystem::Asep => {
                    if args.h <= 0.0 {
                        bail!("asep needs --h > 0");
                    }
                    args.h
                }
                ParticleSystem::Zrp => unreachable!(),
            };
            let occ = match &args.profile_file {
                None => OccupationField::step(args.half_width),
                Some(path) => {
                    let bits = read_int_lines(path)?;
                    let n = bits.len() as i64;
                    OccupationField::new(-n / 2, bits.iter().map(|&b| b != 0).collect(), n / 2)
                }
            };
            let params = FieldParameter::zero_temperature(h);
            let traj = simulate_exclusion(
                &occ,
                &params,
                &clocks,
                args.horizon,
                &samples,
                ClockKeying::Columns,
            )?;
            for (k, snap) in traj.occupations.iter().enumerate() {
                let t = traj.sampled_times[k];
                for x in snap.start()..snap.start() + snap.len() as i64 {
                    csv.push_str(&format!("{t},{x},{}\n", u8::from(snap.occupied(x))));
                }
            }
            summary = serde_json::json!({
                "system": "exclusion",
                "h": if h.is_infinite() { serde_json::json!("inf") } else { serde_json::json!(h) },
                "jump_count": traj.jump_count,
                "particles": traj.occupations.last().map(|o| o.particle_count()),
            });
        }
        ParticleSystem::Zrp => {
            let signed = match &args.profile_file {
                None => {
                    let mut v = vec![0i64; (2 * args.half_width) as usize];
                    let mid = v.len() / 2;
                    v[mid - 4] = 2;
                    v[mid + 4] = -2;
                    v
                }
                Some(path) => read_int_lines(path)?,
            };
            let n = signed.len() as i64;
            let z = ZeroRangeState::new(-n / 2, signed);
            let mode = match args.zrp_rates {
                CliZrpMode::UnitSiteRate => ZrpRateMode::UnitSiteRate,
                CliZrpMode::PileSuppressed => ZrpRateMode::PileSuppressed,
            };
            let traj = simulate_zero_range(&z, &clocks, args.horizon, &samples, mode)?;
            for (k, snap) in traj.snapshots.iter().enumerate() {
                let t = traj.sampled_times[k];
                for (off, &v) in snap.signed().iter().enumerate() {
                    csv.push_str(&format!("{t},{},{v}\n", snap.first_site() + off as i64));
                }
            }
            summary = serde_json::json!({
                "system": "zero-range",
                "event_count": traj.event_count,
                "annihilations": traj.annihilations,
                "signed_mass": traj.snapshots.last().map(|s| s.signed_mass()),
            });
        }
    }
    std::fs::write(args.out.join("trajectory.csv"), csv)?;
    std::fs::write(args.out.join("summary.json"), serde_json::to_vec_pretty(&summary)?)?;
    println!("particles -> {}", args.out.display());
    Ok(())
}

#[derive(Clone, Copy, ValueEnum)]
enum LimitModel {
    CurveShortening,
    Drift,
    SquareExplicit,
    Crossover,
}

#[derive(Args)]
struct LimitShapeArgs {
    #[arg(long, value_enum)]
    model: LimitModel,
    /// Rescaled times, comma separated.
    #[arg(long, value_parser = parse_times)]
    t: std::vec::Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 4096)]
    angles: usize,
    #[arg(long, value_enum, default_value = "square")]
    shape: ShapeKind,
    #[arg(long, default_value_t = 0.5)]
    radius: f64,
    #[arg(long)]
    shape_file: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

fn cmd_limit_shape(args: LimitShapeArgs) -> Result<()> {
    std::fs::create_dir_all(&args.out)?;
    let shape = build_shape(args.shape, args.radius, &args.shape_file)?;
    let support = SupportFunction::from_shape(&shape, args.angles);
    let mut times = args.t.clone();
    times.sort_by(f64::total_cmp);
    for (k, &t) in times.iter().enumerate() {
        let (label, poly, supp): (&str, PlanarShape, Option<SupportFunction>) = match args.model {
            LimitModel::SquareExplicit => {
                ("square-explicit", limits::square_limit_shape(t)?, None)
            }
            LimitModel::Drift => ("drift", limits::weak_solution_shape(&support, t), None),
            LimitModel::CurveShortening | LimitModel::Crossover => {
                let alpha =
                    if matches!(args.model, LimitModel::Crossover) { args.alpha } else { 0.0 };
                let res = limits::evolve_flow(&support, alpha, t, None)?;
                if res.stop.is_some() && res.reached_time < t {
                    ("flow", PlanarShape::empty(), Some(res.support))
                } else {
                    ("flow", res.support.to_shape(), Some(res.support))
                }
            }
        };
        std::fs::write(
            args.out.join(format!("{label}_{k:02}.csv")),
            export::shape_to_csv(&poly),
        )?;
        if let Some(s) = supp {
            let mut text = String::from("theta,h\n");
            for i in 0..s.len() {
                text.push_str(&format!("{},{}\n", s.theta(i), s.value(i)));
            }
            std::fs::write(args.out.join(format!("{label}_{k:02}_support.csv")), text)?;
        }
    }
    println!("limit shapes -> {}", args.out.display());
    Ok(())
}

#[derive(Args)]
struct CompareArgs {
    /// ExperimentConfig JSON file.
    #[arg(long)]
    config: PathBuf,
    /// Replaces the seed list with a single seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_config(path: &Path, seed: Option<u64>, out: &Option<PathBuf>) -> Result<ExperimentConfig> {
    let mut cfg: ExperimentConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if let Some(s) = seed {
        cfg.seeds = vec![s];
    }
    if out.is_some() {
        cfg.out_dir = out.clone();
    }
    Ok(cfg)
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let cfg = load_config(&args.config, args.seed, &args.out)?;
    let result = run_experiment(&cfg)?;
    for agg in &result.time_aggregates {
        println!(
            "L={} t={}: hausdorff mean {:.5} max {:.5} over {} replicas",
            agg.l, agg.t, agg.mean_hausdorff, agg.max_hausdorff, agg.replicas
        );
    }
    for tau in &result.tau_aggregates {
        println!(
            "L={}: rescaled tau mean {:.5} (sd {:.5}), {}/{} censored",
            tau.l, tau.mean_rescaled_tau, tau.std_rescaled_tau, tau.censored, tau.replicas
        );
    }
    if let Some(dir) = &cfg.out_dir {
        println!("results -> {}", dir.display());
    }
    Ok(())
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Expected rescaled extinction constant (e.g. 2.0 for the square at
    /// zero field).
    #[arg(long)]
    expected_tau: Option<f64>,
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let cfg = load_config(&args.config, args.seed, &args.out)?;
    let (_result, table) = convergence_sweep(&cfg, args.expected_tau)?;
    println!("L,mean_hausdorff,hausdorff_se,tau_error,tau_se");
    for row in &table.rows {
        println!(
            "{},{:.6},{:.6},{},{}",
            row.l,
            row.mean_hausdorff,
            row.hausdorff_se,
            row.tau_error.map(|v| format!("{v:.6}")).unwrap_or_default(),
            row.tau_se.map(|v| format!("{v:.6}")).unwrap_or_default(),
        );
    }
    println!(
        "hausdorff non-increasing: {}; tau error non-increasing: {}",
        table.hausdorff_nonincreasing, table.tau_error_nonincreasing
    );
    if let Some(dir) = &cfg.out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("sweep.json"), serde_json::to_vec_pretty(&table)?)?;
        println!("results -> {}", dir.display());
    }
    Ok(())
}

#[derive(Args)]
struct RenderArgs {
    /// Droplet snapshot: polygon CSV (rescaled units) or RLE JSON.
    #[arg(long)]
    input: PathBuf,
    /// Optional overlay shape (polygon CSV, rescaled units).
    #[arg(long)]
    overlay: Option<PathBuf>,
    /// Draw +-delta offset bands around the overlay.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

fn cmd_render(args: RenderArgs) -> Result<()> {
    let input_text = std::fs::read_to_string(&args.input)?;
    let droplet_shape = if args.input.extension().and_then(|e| e.to_str()) == Some("json") {
        let rle = export::read_rle_json(input_text.as_bytes())?;
        let sites = export::rle_minus_sites(&rle)?;
        let cfg =
            SpinConfiguration::with_minus_sites(rle.half_width, BoundaryRule::AllPlus, &sites)?;
        cfg.droplet().to_shape_rescaled()
    } else {
        export::shape_from_csv(&input_text)?
    };
    let mut layers = vec![Layer { shape: &droplet_shape, style: Style::droplet() }];
    let overlay = match &args.overlay {
        Some(path) => Some(export::shape_from_csv(&std::fs::read_to_string(path)?)?),
        None => None,
    };
    let bands = match (&overlay, args.delta) {
        (Some(shape), Some(delta)) => {
            Some((offset_shape(shape, -delta)?, offset_shape(shape, delta)?))
        }
        _ => None,
    };
    if let Some(shape) = &overlay {
        layers.push(Layer { shape, style: Style::limit() });
    }
    if let Some((inner, outer)) = &bands {
        layers.push(Layer { shape: inner, style: Style::band() });
        layers.push(Layer { shape: outer, style: Style::band() });
    }
    std::fs::write(&args.out, render_snapshot(&layers))?;
    println!("svg -> {}", args.out.display());
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Particles(args) => cmd_particles(args),
        Command::LimitShape(args) => cmd_limit_shape(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Render(args) => cmd_render(args),
    }
}
