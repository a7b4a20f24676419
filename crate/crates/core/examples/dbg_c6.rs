use rollgait_core::control::{ControllerConfig, GaitController, Mode};
use rollgait_core::fixtures::reference_design;
use rollgait_core::sim::{run_episode, EpisodeConfig, SensorConfig, Terrain};
use rollgait_core::statics::{build_moment_field, select_thresholds};
use std::f64::consts::PI;

fn main() {
    let design = reference_design();
    let field = build_moment_field(&design, 720, 56);
    let ts = select_thresholds(&field, PI / 6.0).unwrap();
    let mut cfg = EpisodeConfig::new(24.0);
    cfg.initial_tilt = 0.0;
    cfg.sensor = SensorConfig { rng_seed: 3, ..SensorConfig::default() };
    cfg.mode_script = vec![(4.0, Mode::Rolling), (10.0, Mode::Walking)];
    cfg.record_every = 10;
    let ctrl = GaitController::new(ControllerConfig::new(ts.clone()), Mode::Walking, 0.0);
    let tr = run_episode(&design, ctrl, &Terrain::flat(1.0), &cfg).unwrap();
    for r in &tr.records {
        let tick = (r.t * 2.0 - (r.t * 2.0).round()).abs() < 1e-6;
        if (r.t >= 9.5 && r.event.contains("mode_request"))
            || r.event.contains("TRUNC")
            || (tick && r.t >= 10.0)
        {
            println!(
                "{:6.2} {:>2} θu={:8.2} ω={:6.2} y={:7.3} {}",
                r.t, r.state, r.theta_g, r.omega, r.com_y, r.event
            );
        }
    }
    println!("trunc={:?} net fwd={:.3}", tr.truncated, tr.net_forward());
}
