use rollgait_core::control::{ControllerConfig, GaitController, Mode};
use rollgait_core::fixtures::reference_design;
use rollgait_core::sim::{run_episode, EpisodeConfig, SensorConfig, Terrain};
use rollgait_core::statics::{build_moment_field, select_thresholds};
use rayon::prelude::*;
use std::f64::consts::PI;

fn main() {
    let design = reference_design();
    let field = build_moment_field(&design, 720, 56);
    let ts = select_thresholds(&field, PI / 6.0).unwrap();
    for (tilt, dwell, stall) in [
        (-0.06, 0.4, 0.8),
        (-0.09, 0.4, 0.8),
        (-0.06, 0.3, 0.6),
        (-0.09, 0.3, 0.6),
        (-0.12, 0.3, 0.7),
    ] {
        let mut cc = ControllerConfig::new(ts.clone());
        cc.recovery_dwell = dwell;
        cc.stall_timeout = stall;
        let fails: Vec<(u64, f64, f64)> = (0..100u64)
            .into_par_iter()
            .filter_map(|s| {
                let mut cfg = EpisodeConfig::new(10.0);
                cfg.sensor = SensorConfig { rng_seed: s, ..SensorConfig::default() };
                cfg.record_every = 100;
                cfg.initial_tilt = tilt;
                let ctrl = GaitController::new(cc.clone(), Mode::Rolling, 0.0);
                let tr = run_episode(&design, ctrl, &Terrain::flat(1.0), &cfg).unwrap();
                let revs = tr.revolutions();
                let ok = tr.net_forward() > 0.0 && revs >= 3.0;
                if ok { None } else { Some((s, revs, tr.net_forward())) }
            })
            .collect();
        println!("tilt={tilt} dwell={dwell} stall={stall}: {} failures {:?}", fails.len(), fails);
    }
}
