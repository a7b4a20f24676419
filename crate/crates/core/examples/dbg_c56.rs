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

    // Criterion 5: 8 mm bump, 20 seeds.
    let terrain = Terrain::with_bump(1.0, 0.25, 0.06, 0.008);
    let stats: Vec<(bool, bool, bool)> = (0..20u64).into_par_iter().map(|s| {
        let mut cfg = EpisodeConfig::new(10.0);
        cfg.sensor = SensorConfig { rng_seed: s, ..SensorConfig::default() };
        cfg.record_every = 10;
        let ctrl = GaitController::new(ControllerConfig::new(ts.clone()), Mode::Rolling, 0.0);
        let tr = run_episode(&design, ctrl, &terrain, &cfg).unwrap();
        let mut recovery_then_forward = false;
        for (i, r) in tr.records.iter().enumerate() {
            if r.state == "R1" || r.state == "R2" {
                let y0 = r.com_y;
                if tr.records[i..].iter().any(|q| q.com_y > y0 + 0.05) {
                    recovery_then_forward = true;
                }
                break;
            }
        }
        let mut deadlock = false;
        let mut w = 0;
        for i in 1..tr.records.len() {
            let a = &tr.records[w];
            let b = &tr.records[i];
            if b.state != a.state || (b.theta_g - a.theta_g).abs() > 0.02 {
                w = i;
            } else if b.t - a.t > 3.0 {
                deadlock = true;
                break;
            }
        }
        let entered = tr.records.iter().any(|r| r.state == "R1" || r.state == "R2");
        (entered, recovery_then_forward, deadlock)
    }).collect();
    let entered = stats.iter().filter(|(e, ..)| *e).count();
    let rec_fwd = stats.iter().filter(|(_, r, _)| *r).count();
    let deadlocks = stats.iter().filter(|(.., d)| *d).count();
    println!("criterion5: entered={entered}/20 recovered-forward={rec_fwd}/20 deadlocks={deadlocks}");

    // Criterion 6: scripted walk→roll→walk.
    let mut cfg = EpisodeConfig::new(20.0);
    cfg.initial_tilt = 0.0;
    cfg.sensor = SensorConfig { rng_seed: 3, ..SensorConfig::default() };
    cfg.mode_script = vec![(4.0, Mode::Rolling), (12.0, Mode::Walking)];
    cfg.record_every = 10;
    let ctrl = GaitController::new(ControllerConfig::new(ts.clone()), Mode::Walking, 0.0);
    let tr = run_episode(&design, ctrl, &Terrain::flat(1.0), &cfg).unwrap();
    let evs: Vec<(f64, String)> = tr.records.iter().filter(|r| r.event.contains("mode_request") || r.event.contains("MODE"))
        .map(|r| (r.t, r.event.clone())).collect();
    for (t, e) in &evs { println!("{t:6.2} {e}"); }
    // window checks
    let find = |needle: &str, from: f64| tr.records.iter().find(|r| r.t >= from && r.event.contains(needle)).map(|r| r.t);
    let t_roll = find("reason=mode_request", 3.9);
    let t_walk = t_roll.and_then(|t| find("reason=mode_request", t + 2.0));
    println!("t_roll={t_roll:?} t_walk={t_walk:?} trunc={:?}", tr.truncated);
    if let (Some(tr1), Some(tw)) = (t_roll, t_walk) {
        let w1: Vec<_> = tr.records.iter().filter(|r| r.t >= tr1 - 0.5 && r.t <= tr1 + 1.0).collect();
        let fwd_ok = w1.windows(2).all(|p| p[1].com_y >= p[0].com_y - 5e-4);
        let w2: Vec<_> = tr.records.iter().filter(|r| r.t >= tw && r.t <= tw + 2.5).collect();
        let y0 = w2.first().unwrap().com_y;
        let min_after = w2.iter().map(|r| r.com_y).fold(f64::INFINITY, f64::min);
        let rolled = tr.records.iter().any(|r| r.t > tr1 && r.t < tw && (r.state == "2" || r.state == "3"));
        let walked = tr.records.iter().any(|r| r.t > tw + 1.0 && (r.state == "A" || r.state == "B" || r.state == "C"));
        println!("fwd_ok={fwd_ok} backstep={:.1}mm rolled={rolled} walked={walked}", (y0 - min_after) * 1e3);
    }
}
