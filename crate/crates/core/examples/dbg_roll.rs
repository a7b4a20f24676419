use rollgait_core::control::{ControllerConfig, GaitController, Mode};
use rollgait_core::fixtures::reference_design;
use rollgait_core::sim::{run_episode, EpisodeConfig, SensorConfig, Terrain};
use rollgait_core::statics::{build_moment_field, select_thresholds};

fn main() {
    let design = reference_design();
    let field = build_moment_field(&design, 720, 56);
    let ts = select_thresholds(&field, std::f64::consts::PI / 6.0).unwrap();
    println!(
        "thresholds: θ12={:.3} θ23={:.3} levels=({:.3},{:.3},{:.3})",
        ts.theta_12, ts.theta_23, ts.levels.closed, ts.levels.mid, ts.levels.open
    );
    let mut ok = 0;
    for seed in 0..10u64 {
        let mut cfg = EpisodeConfig::new(10.0);
        cfg.sensor = SensorConfig { rng_seed: seed, ..SensorConfig::default() };
        cfg.record_every = 10;
        let ctrl = GaitController::new(ControllerConfig::new(ts.clone()), Mode::Rolling, 0.0);
        let trace = run_episode(&design, ctrl, &Terrain::flat(1.0), &cfg).unwrap();
        let revs = trace.revolutions();
        let fwd = trace.net_forward();
        let speed = trace.mean_speed();
        let e = trace.ledger.total();
        let states: std::collections::BTreeMap<&str, usize> =
            trace.records.iter().fold(Default::default(), |mut m, r| {
                *m.entry(r.state.as_str()).or_default() += 1;
                m
            });
        println!(
            "seed {seed}: revs={revs:.2} fwd={fwd:.3} m speed={speed:.3} m/s E={e:.2} J trunc={:?} states={states:?}",
            trace.truncated
        );
        if revs >= 3.0 && fwd > 0.0 {
            ok += 1;
        }
    }
    println!("sustained: {ok}/10");
}
