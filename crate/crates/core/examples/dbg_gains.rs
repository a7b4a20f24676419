use rollgait_core::control::{ControllerConfig, GaitController, Mode, PidGains};
use rollgait_core::fixtures::{leg_rate_limit, LEG_MASS};
use rollgait_core::geometry::{generate_leg, BodyParams, RobotDesign};
use rollgait_core::sim::{run_episode, EpisodeConfig, SensorConfig, Terrain};
use rollgait_core::statics::{build_moment_field, select_thresholds};
use rollgait_core::vec2::Vec2;
use rayon::prelude::*;
use std::f64::consts::PI;

fn main() {
    let candidates: Vec<(f64, f64, u64)> = vec![
        (0.012, -0.006, 112), (0.012, -0.006, 88), (0.012, -0.006, 157),
        (0.014, -0.007, 88), (0.014, -0.007, 147), (0.014, -0.007, 157),
        (0.014, -0.007, 49), (0.016, -0.006, 147), (0.013, -0.006, 70),
        (0.013, -0.006, 104), (0.016, -0.006, 116), (0.012, -0.006, 20),
    ];
    for kp in [2.0, 4.0, 8.0] {
        for &(gy, gz, seed) in &candidates {
            let mut body = BodyParams::nominal();
            body.com_offset = Vec2::new(gy, gz);
            let front = generate_leg(seed, &body).unwrap();
            let design = RobotDesign::new(body, front, LEG_MASS, leg_rate_limit()).unwrap();
            let field = build_moment_field(&design, 720, 56);
            let ts = select_thresholds(&field, PI / 6.0).unwrap();
            let mut cc = ControllerConfig::new(ts);
            cc.gains = PidGains { kp, ki: 0.5, kd: 0.02, i_clamp: 0.3 };
            let results: Vec<(bool, f64)> = (0..20u64)
                .into_par_iter()
                .map(|s| {
                    let mut cfg = EpisodeConfig::new(10.0);
                    cfg.sensor = SensorConfig { rng_seed: s, ..SensorConfig::default() };
                    cfg.record_every = 100;
                    let ctrl = GaitController::new(cc.clone(), Mode::Rolling, 0.0);
                    let tr = run_episode(&design, ctrl, &Terrain::flat(1.0), &cfg).unwrap();
                    (tr.net_forward() > 0.0 && tr.revolutions() >= 3.0, tr.mean_speed())
                })
                .collect();
            let ok = results.iter().filter(|(o, _)| *o).count();
            let mean_v = results.iter().map(|(_, v)| v).sum::<f64>() / 20.0;
            let vmax = results.iter().map(|(_, v)| *v).fold(0.0f64, f64::max);
            if ok >= 18 {
                println!("kp={kp} ({gy},{gz},{seed}): ok={ok}/20 v={mean_v:.3}/{vmax:.3}");
            }
        }
    }
}
