use rollgait_core::fixtures::reference_design;
use rollgait_core::statics::{build_moment_field, select_thresholds};
use std::f64::consts::PI;

fn main() {
    let design = reference_design();
    let field = build_moment_field(&design, 720, 56);
    let ts = select_thresholds(&field, PI / 6.0).unwrap();
    let w = PI / 6.0;
    let j_closed = 0usize;
    let j_open = field.dphi.len() - 1;
    // mid index nearest the chosen level
    let mut j_mid = 0;
    let mut err = f64::MAX;
    for (j, d) in field.dphi.iter().enumerate() {
        if (d - ts.levels.mid).abs() < err { err = (d - ts.levels.mid).abs(); j_mid = j; }
    }
    let n = field.theta.len();
    println!("θ12(deg)  θ23(deg)  neg-measure(rad)");
    for a in 0..12i64 {
        let t12 = -PI + (a as f64 + 0.5) * w;
        if t12 > 0.0 { continue; }
        for b in 0..a {
            let t23 = -PI + (b as f64 + 0.5) * w;
            if t12 - t23 < w - 1e-9 || t23 + PI < w - 1e-9 { continue; }
            let mut meas = 0.0;
            for i in 0..n {
                let th = field.theta[i];
                let (jf, jr) = if th > t12 { (j_closed, j_closed) }
                    else if th > t23 { (j_mid, j_closed) }
                    else { (j_open, j_open) };
                if field.pair_arm(i, jf, jr) < -1e-7 { meas += 2.0 * PI / (n - 1) as f64; }
            }
            println!("{:8.0} {:8.0} {meas:10.4}", t12.to_degrees(), t23.to_degrees());
        }
    }
}
