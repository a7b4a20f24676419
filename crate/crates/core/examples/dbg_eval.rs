use rollgait_core::control::{ControllerConfig, GaitController, Mode};
use rollgait_core::fixtures::{leg_rate_limit, LEG_MASS};
use rollgait_core::geometry::{generate_leg, BodyParams, RobotDesign};
use rollgait_core::sim::{run_episode, EpisodeConfig, SensorConfig, Terrain};
use rollgait_core::statics::{build_moment_field, optimal_trajectory, select_thresholds};
use rollgait_core::vec2::Vec2;
use std::f64::consts::PI;

fn main() {
    let candidates = [
        (0.014, -0.007, 10u64),
        (0.012, -0.006, 20),
        (0.016, -0.006, 116),
        (0.012, -0.006, 97),
        (0.018, -0.008, 61),
        (0.018, -0.008, 73),
        (0.018, -0.008, 87),
        (0.016, -0.006, 119),
    ];
    for (gy, gz, seed) in candidates {
        let mut body = BodyParams::nominal();
        body.com_offset = Vec2::new(gy, gz);
        let front = generate_leg(seed, &body).unwrap();
        let design = RobotDesign::new(body, front, LEG_MASS, leg_rate_limit()).unwrap();
        let field = build_moment_field(&design, 720, 56);
        let ts = select_thresholds(&field, PI / 6.0).unwrap();
        let traj = optimal_trajectory(&field);
        let mut ok = 0;
        let mut speeds = Vec::new();
        let mut revs_all = Vec::new();
        for s in 0..20u64 {
            let mut cfg = EpisodeConfig::new(10.0);
            cfg.sensor = SensorConfig { rng_seed: s, ..SensorConfig::default() };
            cfg.record_every = 50;
            let ctrl = GaitController::new(ControllerConfig::new(ts.clone()), Mode::Rolling, 0.0);
            let tr = run_episode(&design, ctrl, &Terrain::flat(1.0), &cfg).unwrap();
            let fwd = tr.net_forward();
            let revs = tr.revolutions() * fwd.signum();
            let speed = tr.mean_speed();
            revs_all.push(revs);
            speeds.push(speed);
            if revs >= 3.0 && fwd > 0.0 && speed >= 0.05 && speed <= 0.5 {
                ok += 1;
            }
        }
        let smin = speeds.iter().cloned().fold(f64::INFINITY, f64::min);
        let smax = speeds.iter().cloned().fold(0.0f64, f64::max);
        let rmin = revs_all.iter().cloned().fold(f64::INFINITY, f64::min);
        println!(
            "com=({gy},{gz}) seed={seed}: ok={ok}/20 speed=[{smin:.3},{smax:.3}] minrevs={rmin:.2} θ12={:.2} slope={:.3} maxR={:.3}",
            ts.theta_12, traj.max_slope, design.max_leg_radius()
        );
    }
}
