use rollgait_core::control::{ControllerConfig, GaitController, Mode};
use rollgait_core::fixtures::reference_design;
use rollgait_core::sim::{run_episode, EpisodeConfig, SensorConfig, Terrain};
use rollgait_core::statics::{build_moment_field, select_thresholds};
use rollgait_core::GRAVITY;
use std::f64::consts::PI;

fn main() {
    let design = reference_design();
    let field = build_moment_field(&design, 720, 56);
    let ts = select_thresholds(&field, PI / 6.0).unwrap();
    for (mode, tilt) in [(Mode::Rolling, -0.06), (Mode::Walking, 0.0)] {
        let mut cfg = EpisodeConfig::new(10.0);
        cfg.sensor = SensorConfig { rng_seed: 1, ..SensorConfig::default() };
        cfg.initial_tilt = tilt;
        cfg.record_every = 50;
        let ctrl = GaitController::new(ControllerConfig::new(ts.clone()), mode, 0.0);
        let tr = run_episode(&design, ctrl, &Terrain::flat(1.0), &cfg).unwrap();
        let d = tr.net_forward().abs().max(1e-9);
        let e = tr.ledger.total();
        println!(
            "{mode:?}: fwd={:.3} m E={e:.1} J speed={:.3} CoT={:.2} power={:.2} W",
            tr.net_forward(),
            tr.mean_speed(),
            e / (design.body.mass * GRAVITY * d),
            e / 10.0
        );
    }
}
