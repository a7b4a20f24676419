use rollgait_core::fixtures::reference_design;
use rollgait_core::sim::{check_walk_friction, DEFAULT_TORQUE_BUDGET};
use rollgait_core::statics::{build_moment_field, select_thresholds};

fn main() {
    let design = reference_design();
    let field = build_moment_field(&design, 240, 24);
    let ts = select_thresholds(&field, std::f64::consts::PI / 6.0).unwrap();
    println!("levels: closed={:.3} mid={:.3} open={:.3}", ts.levels.closed, ts.levels.mid, ts.levels.open);
    for (f, r, tag) in [
        (ts.levels.mid, ts.levels.closed, "mid/closed"),
        (ts.levels.open, ts.levels.closed, "open/closed"),
        (ts.levels.open, ts.levels.open, "open/open"),
    ] {
        match check_walk_friction(&design, f, r, 0.4, DEFAULT_TORQUE_BUDGET) {
            Ok(v) => println!("{tag}: N=({:.3},{:.3}) mu_max={:.3} push={} slide={}", v.normals.0, v.normals.1, v.mu_max, v.can_push, v.can_slide),
            Err(e) => println!("{tag}: err {e}"),
        }
    }
}
