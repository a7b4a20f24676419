use rollgait_core::fixtures::reference_design;
use rollgait_core::geometry::find_contact;
use rollgait_core::statics::{build_moment_field, select_thresholds};
use rollgait_core::vec2::{wrap_angle, Rot};
use std::f64::consts::PI;

fn main() {
    let design = reference_design();
    let field = build_moment_field(&design, 720, 56);
    let ts = select_thresholds(&field, PI / 6.0).unwrap();
    // Sweep one forward revolution: θ from 0 down to -2π, applying the
    // quantized state commands; tabulate arm(θ) and the accumulated work
    // integral -∮ arm dθ (per unit m g).
    let n = 720;
    let mut w = 0.0;
    let mut neg_measure = 0.0;
    println!("theta_unwrapped  wrapped  state  arm      cum_gain");
    for i in 0..n {
        let theta_u = -(i as f64) * 2.0 * PI / n as f64;
        let th = wrap_angle(theta_u);
        let state = if th > ts.theta_12 { 1 } else if th > ts.theta_23 { 2 } else { 3 };
        let (df, dr) = match state {
            1 => (ts.levels.closed, ts.levels.closed),
            2 => (ts.levels.mid, ts.levels.closed),
            _ => (ts.levels.open, ts.levels.open),
        };
        let c = find_contact(&design, th, df, dr);
        let com_y = Rot::new(th).apply(design.body.com_offset).y;
        let arm = c.point_global.y - com_y;
        let dth = 2.0 * PI / n as f64;
        w += -arm * (-dth); // dθ negative going forward
        if arm < 0.0 { neg_measure += dth; }
        if i % 30 == 0 {
            println!("{theta_u:9.3} {th:8.3}   {state}   {arm:8.4} {w:9.4}");
        }
    }
    println!("net ∮(-arm)dθ over forward rev = {w:.4} m·rad (positive = net energy gain)");
    println!("negative-arm measure = {neg_measure:.3} rad of 6.283");
    println!("energy gain per rev = {:.4} J (m g × above)", w * design.body.mass * 9.81);
}
