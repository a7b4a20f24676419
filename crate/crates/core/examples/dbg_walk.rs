use rollgait_core::control::{ControllerConfig, GaitController, Mode};
use rollgait_core::fixtures::reference_design;
use rollgait_core::sim::{run_episode, EpisodeConfig, SensorConfig, Terrain};
use rollgait_core::statics::{build_moment_field, select_thresholds};
use std::f64::consts::PI;

fn main() {
    let design = reference_design();
    let field = build_moment_field(&design, 720, 56);
    let ts = select_thresholds(&field, PI / 6.0).unwrap();
    let ctrl = GaitController::new(ControllerConfig::new(ts), Mode::Walking, 0.0);
    let mut cfg = EpisodeConfig::new(3.2);
    cfg.initial_tilt = 0.0;
    cfg.sensor = SensorConfig::ideal();
    cfg.record_every = 20;
    let tr = run_episode(&design, ctrl, &Terrain::flat(1.0), &cfg).unwrap();
    println!("t     state θ      com_y    legF    legR   event");
    for r in &tr.records {
        if !r.event.is_empty() || (r.t * 20.0).round() / 20.0 == r.t {
            println!(
                "{:5.2}  {:>2} {:7.3} {:8.4} {:7.3} {:7.3}  {}",
                r.t, r.state, r.theta_g, r.com_y, r.leg_front, r.leg_rear, r.event
            );
        }
    }
    println!("net fwd {:.4} m, trunc={:?}", tr.net_forward(), tr.truncated);
}
