use rollgait_core::control::{ControllerConfig, GaitController, Mode};
use rollgait_core::fixtures::{leg_rate_limit, LEG_MASS};
use rollgait_core::geometry::{generate_leg, BodyParams, RobotDesign};
use rollgait_core::sim::{run_episode, EpisodeConfig, SensorConfig, Terrain};
use rollgait_core::statics::{build_moment_field, select_thresholds};
use rollgait_core::vec2::Vec2;
use rollgait_core::GRAVITY;
use rayon::prelude::*;
use std::f64::consts::PI;

fn main() {
    let coms = [(0.012, -0.006), (0.013, -0.0065), (0.014, -0.007)];
    let mut jobs = Vec::new();
    for &(gy, gz) in &coms {
        for seed in 0..250u64 {
            jobs.push((gy, gz, seed));
        }
    }
    let survivors: Vec<String> = jobs
        .par_iter()
        .filter_map(|&(gy, gz, seed)| {
            let mut body = BodyParams::nominal();
            body.com_offset = Vec2::new(gy, gz);
            let front = generate_leg(seed, &body).ok()?;
            let design = RobotDesign::new(body, front, LEG_MASS, leg_rate_limit()).ok()?;
            // The closed upright stance must tip forward.
            let (lo, _) = design.dphi_range();
            let mut governing = f64::INFINITY;
            // combined = lower of the two candidates (tie -> front/fwd)
            let cf = rollgait_core::geometry::find_contact(&design, 0.0, lo, lo);
            governing = governing.min(cf.point_global.y - design.body.com_offset.y);
            if governing >= -0.002 {
                return None;
            }
            let field = build_moment_field(&design, 360, 28);
            let ts = select_thresholds(&field, PI / 6.0).ok()?;

            // 12-seed rolling bundle.
            let results: Vec<(bool, f64, f64, f64)> = (0..12u64)
                .into_iter()
                .map(|s| {
                    let mut cfg = EpisodeConfig::new(10.0);
                    cfg.sensor = SensorConfig { rng_seed: s, ..SensorConfig::default() };
                    cfg.record_every = 100;
                    let ctrl = GaitController::new(ControllerConfig::new(ts.clone()), Mode::Rolling, 0.0);
                    let tr = run_episode(&design, ctrl, &Terrain::flat(1.0), &cfg).ok()?;
                    let d = tr.net_forward().abs().max(1e-9);
                    Some((
                        tr.net_forward() > 0.0 && tr.revolutions() >= 3.0,
                        tr.mean_speed(),
                        tr.ledger.total() / (design.body.mass * GRAVITY * d),
                        tr.revolutions(),
                    ))
                })
                .collect::<Option<Vec<_>>>()?;
            let ok = results.iter().filter(|(o, ..)| *o).count();
            if ok < 11 {
                return None;
            }
            let mean_v = results.iter().map(|(_, v, ..)| v).sum::<f64>() / 12.0;
            let vmax = results.iter().map(|(_, v, ..)| *v).fold(0.0f64, f64::max);
            if !(0.05..=0.5).contains(&mean_v) || vmax > 0.6 {
                return None;
            }
            let mut cots: Vec<f64> = results.iter().map(|(.., c, _)| *c).collect();
            cots.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let cot_roll = cots[cots.len() / 2];

            // One walking episode for the ratio.
            let mut cfg = EpisodeConfig::new(10.0);
            cfg.sensor = SensorConfig { rng_seed: 1, ..SensorConfig::default() };
            cfg.initial_tilt = 0.0;
            cfg.record_every = 100;
            let ctrl = GaitController::new(ControllerConfig::new(ts.clone()), Mode::Walking, 0.0);
            let tw = run_episode(&design, ctrl, &Terrain::flat(1.0), &cfg).ok()?;
            let dw = tw.net_forward().abs().max(1e-9);
            if tw.net_forward() <= 0.01 {
                return None;
            }
            let cot_walk = tw.ledger.total() / (design.body.mass * GRAVITY * dw);
            let ratio = cot_walk / cot_roll;
            Some(format!(
                "com=({gy},{gz}) seed={seed}: v={mean_v:.3}/{vmax:.3} cot_r={cot_roll:.2} cot_w={cot_walk:.2} ratio={ratio:.2} θ12={:.2} walkv={:.3}",
                ts.theta_12, tw.mean_speed()
            ))
        })
        .collect();
    for s in &survivors {
        println!("{s}");
    }
    println!("{} survivors", survivors.len());
}
