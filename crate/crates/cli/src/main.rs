//! Command-line pipeline for curved-leg robot design and gait simulation:
//! generate leg geometries, search the design space, export moment-arm
//! contours and controller thresholds, run episodes, and summarize traces.

mod csvio;
mod manifest;
mod plots;
mod svg;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use manifest::RunManifest;
use rollgait_core::control::{ControllerConfig, GaitController, Mode};
use rollgait_core::error::Error as CoreError;
use rollgait_core::geometry::{generate_leg, BodyParams, RobotDesign};
use rollgait_core::io as core_io;
use rollgait_core::search::{bin_by_max_radius, pareto_front, run_search, SearchConstraints};
use rollgait_core::sim::{run_episode, EpisodeConfig, SensorConfig, SimTrace, Terrain};
use rollgait_core::statics::{build_moment_field, optimal_trajectory, select_thresholds};
use rollgait_core::{fixtures, GRAVITY};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "rollgait", version, about = "Curved-leg walking/rolling robot design & simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a leg geometry and render it.
    Generate(GenerateArgs),
    /// Randomized design-space search with Pareto scoring.
    Search(SearchArgs),
    /// Export the moment-arm contour map and controller thresholds.
    Contour(ContourArgs),
    /// Run a closed-loop gait episode.
    Simulate(SimulateArgs),
    /// Summarize trace files into a benchmark table.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Generation seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Body parameter JSON file (defaults to the nominal 60 mm body).
    #[arg(long)]
    body: Option<PathBuf>,
    /// Emit the bundled reference design instead of generating.
    #[arg(long)]
    reference: bool,
    /// Emit the ideal-wheel fixture with this rolling diameter (m).
    #[arg(long)]
    circle: Option<f64>,
    /// Output design file.
    #[arg(long)]
    out: PathBuf,
    /// Optional SVG render of the closed and open stances.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// Search constraints JSON (defaults match the nominal body).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, env = "ROLLGAIT_OUT_DIR")]
    out_dir: PathBuf,
    /// Skip writing one design file per sample.
    #[arg(long)]
    no_designs: bool,
}

#[derive(Args)]
struct ContourArgs {
    #[arg(long)]
    design: PathBuf,
    #[arg(long, env = "ROLLGAIT_OUT_DIR")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 720)]
    n_theta: usize,
    #[arg(long, default_value_t = 56)]
    n_dphi: usize,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    design: PathBuf,
    /// Controller config JSON; derived from the design's moment field when
    /// omitted.
    #[arg(long)]
    controller: Option<PathBuf>,
    /// Terrain JSON; flat ground with μ = 1 when omitted.
    #[arg(long)]
    terrain: Option<PathBuf>,
    #[arg(long, value_parser = parse_mode, default_value = "rolling")]
    mode: Mode,
    #[arg(long, default_value_t = 10.0)]
    duration: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Sensor noise seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Mode-change script JSON: [[t, "walking"|"rolling"], ...].
    #[arg(long)]
    script: Option<PathBuf>,
    #[arg(long, env = "ROLLGAIT_OUT_DIR")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Trace CSV files produced by `simulate`.
    traces: Vec<PathBuf>,
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    match s {
        "rolling" => Ok(Mode::Rolling),
        "walking" => Ok(Mode::Walking),
        other => Err(format!("unknown mode '{other}' (rolling|walking)")),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}

/// Exit codes: 0 success, 2 configuration error, 3 infeasible/circuit
/// breaker, 4 I/O.
fn exit_code_for(e: &anyhow::Error) -> i32 {
    if let Some(core) = e.downcast_ref::<CoreError>() {
        return match core {
            CoreError::InfeasibleProfile { .. }
            | CoreError::SearchCircuitBreaker { .. }
            | CoreError::SimInvalid { .. } => 3,
            CoreError::Io(_) => 4,
            CoreError::Json(_) | CoreError::Format(_) => 2,
            _ => 2,
        };
    }
    if e.downcast_ref::<std::io::Error>().is_some() {
        return 4;
    }
    2
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Search(args) => cmd_search(args),
        Command::Contour(args) => cmd_contour(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Report(args) => cmd_report(args),
    }
}

fn load_body(path: &Option<PathBuf>) -> Result<BodyParams> {
    match path {
        None => Ok(BodyParams::nominal()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(CoreError::from)
                .with_context(|| format!("reading {}", p.display()))?;
            let body: BodyParams = serde_json::from_str(&text).map_err(CoreError::from)?;
            body.validate()?;
            Ok(body)
        }
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let t0 = Instant::now();
    let body = load_body(&args.body)?;
    let design = if args.reference {
        fixtures::reference_design()
    } else if let Some(d) = args.circle {
        fixtures::circle_design(d)
    } else {
        let front = generate_leg(args.seed, &body)?;
        RobotDesign::new(body, front, fixtures::LEG_MASS, fixtures::leg_rate_limit())?
    };
    core_io::save_design(&design, &args.out)?;
    if let Some(svg_path) = &args.svg {
        std::fs::write(svg_path, plots::render_design(&design))?;
    }
    let mut m = RunManifest::new(
        "generate",
        serde_json::json!({
            "seed": args.seed,
            "reference": args.reference,
            "circle": args.circle,
            "body": args.body,
        }),
        vec![args.seed],
    );
    m.outputs.push(args.out.clone());
    if let Some(s) = &args.svg {
        m.outputs.push(s.clone());
    }
    m.wall_clock_s = t0.elapsed().as_secs_f64();
    m.write_for(&args.out)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_search(args: SearchArgs) -> Result<()> {
    let t0 = Instant::now();
    let mut constraints = match &args.config {
        None => SearchConstraints::default(),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(CoreError::from)?;
            serde_json::from_str(&text).map_err(CoreError::from)?
        }
    };
    if let Some(n) = args.samples {
        constraints.samples = n;
    }
    if let Some(s) = args.seed {
        constraints.master_seed = s;
    }
    std::fs::create_dir_all(&args.out_dir)?;

    let scored = run_search(&constraints)?;

    let mut design_paths = Vec::with_capacity(scored.len());
    if args.no_designs {
        design_paths.resize(scored.len(), String::new());
    } else {
        let dir = args.out_dir.join("designs");
        std::fs::create_dir_all(&dir)?;
        for s in &scored {
            let p = dir.join(format!("design_{}.json", s.seed));
            core_io::save_design(&s.design, &p)?;
            design_paths.push(p.display().to_string());
        }
    }

    let csv_path = args.out_dir.join("results.csv");
    csvio::write_results_csv(&csv_path, &scored, &design_paths)?;

    let binned = bin_by_max_radius(&scored, &constraints.bin_edges)?;
    let svg_path = args.out_dir.join("scatter.svg");
    std::fs::write(&svg_path, plots::render_scatter(&binned))?;

    let front = pareto_front(&scored)?;
    let front_path = args.out_dir.join("pareto.csv");
    let front_paths = vec![String::new(); front.len()];
    csvio::write_results_csv(&front_path, &front, &front_paths)?;

    let mut m = RunManifest::new(
        "search",
        serde_json::to_value(&constraints)?,
        vec![constraints.master_seed],
    );
    m.outputs = vec![csv_path.clone(), svg_path, front_path];
    m.wall_clock_s = t0.elapsed().as_secs_f64();
    m.write_for(&csv_path)?;
    println!(
        "scored {} designs ({} on the front)",
        scored.len(),
        front.len()
    );
    Ok(())
}

fn cmd_contour(args: ContourArgs) -> Result<()> {
    let t0 = Instant::now();
    let design = core_io::load_design(&args.design)?;
    std::fs::create_dir_all(&args.out_dir)?;
    let field = build_moment_field(&design, args.n_theta, args.n_dphi);
    let thresholds = select_thresholds(&field, std::f64::consts::PI / 6.0)?;

    let csv_path = args.out_dir.join("contour.csv");
    csvio::write_contour_csv(&csv_path, &field)?;
    let svg_path = args.out_dir.join("contour.svg");
    std::fs::write(&svg_path, plots::render_contour(&field))?;
    let thr_path = args.out_dir.join("thresholds.json");
    std::fs::write(
        &thr_path,
        serde_json::to_string_pretty(&thresholds).map_err(CoreError::from)?,
    )?;
    // A ready-to-use controller file with default gains and timing.
    let ctrl_path = args.out_dir.join("controller.json");
    core_io::save_controller(&ControllerConfig::new(thresholds.clone()), &ctrl_path)?;

    let traj = optimal_trajectory(&field);
    let mut m = RunManifest::new(
        "contour",
        serde_json::json!({
            "design": args.design,
            "n_theta": args.n_theta,
            "n_dphi": args.n_dphi,
            "max_slope": traj.max_slope,
        }),
        vec![],
    );
    m.inputs = vec![args.design.clone()];
    m.outputs = vec![csv_path.clone(), svg_path, thr_path, ctrl_path];
    m.wall_clock_s = t0.elapsed().as_secs_f64();
    m.write_for(&csv_path)?;
    println!(
        "contour {}x{}; max trajectory slope {:.3}",
        args.n_theta, args.n_dphi, traj.max_slope
    );
    Ok(())
}

/// Post-episode summary written next to the trace.
#[derive(Debug, Serialize, Deserialize)]
struct EpisodeReport {
    mode: String,
    duration_s: f64,
    distance_m: f64,
    speed_mps: f64,
    body_lengths_per_s: f64,
    revolutions: f64,
    energy_j: f64,
    mean_power_w: f64,
    cost_of_transport: f64,
    truncated: Option<String>,
}

fn episode_report(trace: &SimTrace, design: &RobotDesign, mode: &str) -> EpisodeReport {
    let duration = trace.duration();
    let distance = trace.net_forward().abs();
    let speed = trace.mean_speed();
    let energy = trace.ledger.total();
    let length = design.resting_length();
    EpisodeReport {
        mode: mode.to_string(),
        duration_s: duration,
        distance_m: distance,
        speed_mps: speed,
        body_lengths_per_s: if length > 0.0 { speed / length } else { 0.0 },
        revolutions: trace.revolutions(),
        energy_j: energy,
        mean_power_w: if duration > 0.0 { energy / duration } else { 0.0 },
        cost_of_transport: if distance > 0.0 {
            energy / (design.body.mass * GRAVITY * distance)
        } else {
            f64::INFINITY
        },
        truncated: trace.truncated.clone(),
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let t0 = Instant::now();
    let design = core_io::load_design(&args.design)?;
    std::fs::create_dir_all(&args.out_dir)?;

    let ctrl_cfg = match &args.controller {
        Some(p) => core_io::load_controller(p)?,
        None => {
            let field = build_moment_field(&design, 720, 56);
            ControllerConfig::new(select_thresholds(&field, std::f64::consts::PI / 6.0)?)
        }
    };
    let terrain = match &args.terrain {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(CoreError::from)?;
            let t: Terrain = serde_json::from_str(&text).map_err(CoreError::from)?;
            t.validate()?;
            t
        }
        None => Terrain::flat(1.0),
    };
    let mut cfg = EpisodeConfig::new(args.duration);
    cfg.dt = args.dt;
    cfg.sensor = SensorConfig {
        rng_seed: args.seed,
        ..SensorConfig::default()
    };
    if let Some(p) = &args.script {
        let text = std::fs::read_to_string(p).map_err(CoreError::from)?;
        let raw: Vec<(f64, String)> = serde_json::from_str(&text).map_err(CoreError::from)?;
        cfg.mode_script = raw
            .into_iter()
            .map(|(t, m)| parse_mode(&m).map(|m| (t, m)).map_err(anyhow::Error::msg))
            .collect::<Result<_>>()?;
    }
    if args.mode == Mode::Walking {
        cfg.initial_tilt = 0.0;
    }

    let ctrl = GaitController::new(ctrl_cfg.clone(), args.mode, 0.0);
    let trace = run_episode(&design, ctrl, &terrain, &cfg)?;

    let trace_path = args.out_dir.join("trace.csv");
    csvio::write_trace_csv(&trace_path, &trace)?;
    let svg_path = args.out_dir.join("trajectory.svg");
    std::fs::write(&svg_path, plots::render_trajectory(&trace, &design))?;
    let report = episode_report(
        &trace,
        &design,
        if args.mode == Mode::Walking { "walking" } else { "rolling" },
    );
    let report_path = args.out_dir.join("report.json");
    std::fs::write(
        &report_path,
        serde_json::to_string_pretty(&report).map_err(CoreError::from)?,
    )?;

    let mut m = RunManifest::new(
        "simulate",
        serde_json::json!({
            "design": args.design,
            "mode": report.mode,
            "duration": args.duration,
            "dt": args.dt,
            "mass_kg": design.body.mass,
            "body_length_m": design.resting_length(),
            "voltage_v": ctrl_cfg.electrical.voltage,
            "stall_current_a": ctrl_cfg.electrical.stall_current,
            "terrain": args.terrain,
            "script": args.script,
        }),
        vec![args.seed],
    );
    m.inputs = vec![args.design.clone()];
    m.outputs = vec![trace_path.clone(), svg_path, report_path];
    m.wall_clock_s = t0.elapsed().as_secs_f64();
    m.write_for(&trace_path)?;
    println!(
        "episode: {:.2} m in {:.1} s ({:.3} m/s, {:.2} rev), CoT {:.2}{}",
        report.distance_m,
        report.duration_s,
        report.speed_mps,
        report.revolutions,
        report.cost_of_transport,
        trace
            .truncated
            .as_ref()
            .map(|r| format!(" [truncated: {r}]"))
            .unwrap_or_default()
    );
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    if args.traces.is_empty() {
        bail!("usage: rollgait report <trace.csv>...");
    }
    println!(
        "{:<28} {:>7} {:>8} {:>4} {:>9} {:>7} {:>8} {:>7}",
        "trace", "mass", "length", "DoF", "speed", "BL/s", "power", "CoT"
    );
    for path in &args.traces {
        let records = csvio::read_trace_csv(path)?;
        let manifest_path = manifest::manifest_path(path);
        let manifest: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(&manifest_path)
                .with_context(|| format!("manifest {}", manifest_path.display()))?,
        )?;
        let cfg = &manifest["config"];
        let mass = cfg["mass_kg"].as_f64().context("manifest mass_kg")?;
        let length = cfg["body_length_m"].as_f64().context("manifest body_length_m")?;
        let voltage = cfg["voltage_v"].as_f64().context("manifest voltage_v")?;
        let stall = cfg["stall_current_a"].as_f64().context("manifest stall_current_a")?;

        let (duration, distance) = match (records.first(), records.last()) {
            (Some(a), Some(b)) => (b.t - a.t, (b.com_y - a.com_y).abs()),
            _ => (0.0, 0.0),
        };
        // Motor energy re-derived from the duty columns (two motors per leg).
        let mut energy = 0.0;
        for w in records.windows(2) {
            let dt = w[1].t - w[0].t;
            energy += (2.0 * w[1].duty_front + 2.0 * w[1].duty_rear) * voltage * stall * dt;
        }
        let speed = if duration > 0.0 { distance / duration } else { 0.0 };
        let cot = if distance > 0.0 {
            energy / (mass * GRAVITY * distance)
        } else {
            f64::INFINITY
        };
        println!(
            "{:<28} {:>7.3} {:>8.3} {:>4} {:>9.3} {:>7.2} {:>8.3} {:>7.2}",
            path.file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
            mass,
            length,
            2,
            speed,
            if length > 0.0 { speed / length } else { 0.0 },
            if duration > 0.0 { energy / duration } else { 0.0 },
            cot
        );
    }
    Ok(())
}
