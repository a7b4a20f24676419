use rollgait_core::control::{ControllerConfig, GaitController, Mode};
use rollgait_core::fixtures::reference_design;
use rollgait_core::sim::{run_episode, EpisodeConfig, SensorConfig, Terrain};
use rollgait_core::statics::{build_moment_field, select_thresholds};
use std::f64::consts::PI;

fn main() {
    let design = reference_design();
    let field = build_moment_field(&design, 720, 56);
    let ts = select_thresholds(&field, PI / 6.0).unwrap();
    let mut cfg = EpisodeConfig::new(10.0);
    cfg.sensor = SensorConfig { rng_seed: 97, ..SensorConfig::default() };
    cfg.record_every = 25;
    let ctrl = GaitController::new(ControllerConfig::new(ts), Mode::Rolling, 0.0);
    let tr = run_episode(&design, ctrl, &Terrain::flat(1.0), &cfg).unwrap();
    for r in &tr.records {
        if !r.event.is_empty() || ((r.t * 2.0).round() - r.t * 2.0).abs() < 1e-9 {
            println!(
                "{:5.2} {:>2} θu={:8.2} ω={:6.2} y={:7.2}  {}",
                r.t, r.state, r.theta_g, r.omega, r.com_y, r.event
            );
        }
    }
}
