use rollgait_core::control::{ControllerConfig, GaitController, Mode};
use rollgait_core::fixtures::reference_design;
use rollgait_core::sim::{run_episode, EpisodeConfig, SensorConfig, Terrain};
use rollgait_core::statics::{build_moment_field, eval_j1, eval_j2, optimal_trajectory, select_thresholds};
use rollgait_core::GRAVITY;
use rayon::prelude::*;
use std::f64::consts::PI;

fn main() {
    let design = reference_design();
    let field = build_moment_field(&design, 720, 56);
    let ts = select_thresholds(&field, PI / 6.0).unwrap();
    let traj = optimal_trajectory(&field);
    println!("J1={:.3} J2={:.3} slope={:.3}", eval_j1(&field), eval_j2(&field), traj.max_slope);
    println!("θ12={:.4} θ23={:.4} width={:.4}", ts.theta_12, ts.theta_23, ts.theta_12 - ts.theta_23);
    println!("|θ12+π/2|={:.3} vs width {:.3}", (ts.theta_12 + PI/2.0).abs(), ts.theta_12 - ts.theta_23);
    println!("levels=({:.3},{:.3},{:.3})", ts.levels.closed, ts.levels.mid, ts.levels.open);

    let results: Vec<(bool, f64, f64)> = (0..100u64).into_par_iter().map(|s| {
        let mut cfg = EpisodeConfig::new(10.0);
        cfg.sensor = SensorConfig { rng_seed: s, ..SensorConfig::default() };
        cfg.record_every = 100;
        let ctrl = GaitController::new(ControllerConfig::new(ts.clone()), Mode::Rolling, 0.0);
        let tr = run_episode(&design, ctrl, &Terrain::flat(1.0), &cfg).unwrap();
        let d = tr.net_forward().abs().max(1e-9);
        (tr.net_forward() > 0.0 && tr.revolutions() >= 3.0, tr.mean_speed(),
         tr.ledger.total() / (design.body.mass * GRAVITY * d))
    }).collect();
    let ok = results.iter().filter(|(o, ..)| *o).count();
    let mean_v = results.iter().map(|(_, v, _)| v).sum::<f64>() / 100.0;
    let vmax = results.iter().map(|(_, v, _)| *v).fold(0.0f64, f64::max);
    let vmin = results.iter().map(|(_, v, _)| *v).fold(f64::MAX, f64::min);
    let mut cots: Vec<f64> = results.iter().map(|(_, _, c)| *c).collect();
    cots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    println!("rolling: ok={ok}/100 v mean={mean_v:.3} range=[{vmin:.3},{vmax:.3}] CoT median={:.2}", cots[50]);

    let mut cfg = EpisodeConfig::new(10.0);
    cfg.sensor = SensorConfig { rng_seed: 1, ..SensorConfig::default() };
    cfg.initial_tilt = 0.0;
    let ctrl = GaitController::new(ControllerConfig::new(ts.clone()), Mode::Walking, 0.0);
    let tr = run_episode(&design, ctrl, &Terrain::flat(1.0), &cfg).unwrap();
    let d = tr.net_forward().abs().max(1e-9);
    let cot_w = tr.ledger.total() / (design.body.mass * GRAVITY * d);
    println!("walking: fwd={:.3} v={:.3} CoT={:.2} ratio={:.2}", tr.net_forward(), tr.mean_speed(), cot_w, cot_w / cots[50]);
}
