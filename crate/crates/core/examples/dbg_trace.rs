use rollgait_core::control::{ControllerConfig, GaitController, Mode};
use rollgait_core::fixtures::reference_design;
use rollgait_core::geometry::find_contact;
use rollgait_core::sim::{run_episode, EpisodeConfig, SensorConfig, Terrain};
use rollgait_core::statics::{build_moment_field, select_thresholds};
use rollgait_core::vec2::{wrap_angle, Rot};
use std::f64::consts::PI;

fn main() {
    let design = reference_design();
    let field = build_moment_field(&design, 720, 56);
    let ts = select_thresholds(&field, PI / 6.0).unwrap();

    // Arm of each candidate recovery stance across the backward trap zone.
    println!("-- candidate stance arms over wrapped θ (positive = backward push)");
    println!("theta   (c,c)    (c,o)    (o,o)    (o,c)    (m,c)");
    let l = ts.levels;
    for k in 0..14 {
        let th = 0.2 + 2.4 * k as f64 / 13.0;
        let arm_of = |df: f64, dr: f64| {
            let c = find_contact(&design, th, df, dr);
            c.point_global.y - Rot::new(th).apply(design.body.com_offset).y
        };
        println!(
            "{th:5.2} {:8.4} {:8.4} {:8.4} {:8.4} {:8.4}",
            arm_of(l.closed, l.closed),
            arm_of(l.closed, l.open),
            arm_of(l.open, l.open),
            arm_of(l.open, l.closed),
            arm_of(l.mid, l.closed),
        );
    }

    // Ideal-sensor episode trace.
    let mut cfg = EpisodeConfig::new(6.0);
    cfg.sensor = SensorConfig::ideal();
    cfg.record_every = 50;
    let ctrl = GaitController::new(ControllerConfig::new(ts.clone()), Mode::Rolling, 0.0);
    let trace = run_episode(&design, ctrl, &Terrain::flat(1.0), &cfg).unwrap();
    println!("-- ideal-sensor episode");
    println!("t      θ_u      wrap    ω       state  com_y   event");
    for r in &trace.records {
        if (r.t * 10.0).fract().abs() < 1e-9 || !r.event.is_empty() {
            println!(
                "{:5.2} {:8.3} {:7.3} {:7.2}   {:>2}   {:7.3}  {}",
                r.t, r.theta_g, wrap_angle(r.theta_g), r.omega, r.state, r.com_y, r.event
            );
        }
    }
    println!("revs={:.2} fwd={:.3}", trace.revolutions(), trace.net_forward());
}
