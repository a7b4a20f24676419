//! Figure builders: leg-profile renders, contour heatmaps, search scatter,
//! and trajectory panels.

use crate::svg::{diverging_color, Frame, Svg};
use rollgait_core::geometry::{contour_world, leg_point_body, RobotDesign, Side};
use rollgait_core::search::BinnedDesigns;
use rollgait_core::sim::SimTrace;
use rollgait_core::statics::MomentField;

const BIN_COLORS: [&str; 6] = ["#335c81", "#d1495b", "#3a7d44", "#b07509", "#6b4e9b", "#444444"];

/// Two panels: upright stance with legs closed, and fully open. Contours are
/// class-tagged (`contour-closed-front`, `contour-open-rear`, ...) so the
/// geometry can be checked from the document.
pub fn render_design(design: &RobotDesign) -> String {
    let (lo, hi) = design.dphi_range();
    let mut out = Svg::new(880.0, 460.0);
    out.rect(0.0, 0.0, 880.0, 460.0, "#ffffff");
    for (panel, (dphi, label)) in [(lo, "closed"), (hi, "open")].iter().enumerate() {
        let frame = Frame {
            x0: -0.15,
            x1: 0.15,
            y0: -0.15,
            y1: 0.15,
            px: 20.0 + panel as f64 * 430.0,
            py: 30.0,
            pw: 400.0,
            ph: 400.0,
        };
        out.text(frame.px, 20.0, 14.0, &format!("{label} stance"));
        // Body rectangle.
        let hw = design.body.width / 2.0;
        let hh = design.body.height / 2.0;
        out.rect(
            frame.x(-hw),
            frame.y(hh),
            frame.x(hw) - frame.x(-hw),
            frame.y(-hh) - frame.y(hh),
            "#dddddd",
        );
        for side in [Side::Front, Side::Rear] {
            let pts: Vec<(f64, f64)> = contour_world(design, side, 0.0, *dphi)
                .into_iter()
                .map(|p| (frame.x(p.y), frame.y(p.z)))
                .collect();
            let color = if side == Side::Front { "#d1495b" } else { "#335c81" };
            let class = format!(
                "contour-{label}-{}",
                if side == Side::Front { "front" } else { "rear" }
            );
            out.polyline(&pts, color, 2.0, &class);
            let joint = design.joint(side);
            out.circle(frame.x(joint.y), frame.y(joint.z), 3.0, "#222222");
        }
        let g = design.body.com_offset;
        out.circle(frame.x(g.y), frame.y(g.z), 4.0, "#f2a33c");
    }
    out.finish()
}

/// Front/rear moment-arm heatmaps with the best-leg-angle trajectory
/// overlaid. The body-angle axis runs positive to negative so a forward roll
/// reads left to right.
pub fn render_contour(field: &MomentField) -> String {
    let mut out = Svg::new(940.0, 720.0);
    out.rect(0.0, 0.0, 940.0, 720.0, "#ffffff");
    let scale = field
        .arm_front
        .iter()
        .chain(field.arm_rear.iter())
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1e-9);
    let n_theta = field.theta.len();
    let n_dphi = field.dphi.len();
    for (panel, (arms, label)) in [(&field.arm_front, "front leg"), (&field.arm_rear, "rear leg")]
        .iter()
        .enumerate()
    {
        let frame = Frame {
            // Positive-to-negative horizontal axis.
            x0: field.theta[n_theta - 1],
            x1: field.theta[0],
            y0: field.dphi[0],
            y1: field.dphi[n_dphi - 1],
            px: 60.0,
            py: 40.0 + panel as f64 * 340.0,
            pw: 840.0,
            ph: 280.0,
        };
        out.text(frame.px, frame.py - 10.0, 14.0, label);
        let cw = frame.pw / n_theta as f64;
        let ch = frame.ph / n_dphi as f64;
        for i in 0..n_theta {
            for j in 0..n_dphi {
                let x = frame.x(field.theta[i]);
                let y = frame.y(field.dphi[j]);
                out.rect(
                    x - cw,
                    y - ch,
                    cw + 0.6,
                    ch + 0.6,
                    &diverging_color(arms[i][j] / scale),
                );
            }
        }
        let traj: Vec<(f64, f64)> = (0..n_theta)
            .map(|i| (frame.x(field.theta[i]), frame.y(field.argmin_dphi[i])))
            .collect();
        out.polyline(&traj, "#000000", 1.5, "argmin-trajectory");
        out.text(frame.px, frame.py + frame.ph + 18.0, 12.0, "body angle (rad, + to -)");
        out.text(8.0, frame.py + frame.ph / 2.0, 12.0, "leg angle");
    }
    out.finish()
}

/// J1 versus J2 scatter, colored by maximum-leg-radius bin.
pub fn render_scatter(binned: &BinnedDesigns) -> String {
    let mut out = Svg::new(760.0, 560.0);
    out.rect(0.0, 0.0, 760.0, 560.0, "#ffffff");
    let all: Vec<(f64, f64)> = binned
        .bins
        .iter()
        .flatten()
        .map(|s| (s.score.j2, s.score.j1))
        .collect();
    if all.is_empty() {
        return out.finish();
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (x, y) in &all {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    let frame = Frame {
        x0,
        x1: x1.max(x0 + 1e-9),
        y0,
        y1: y1.max(y0 + 1e-9),
        px: 70.0,
        py: 30.0,
        pw: 650.0,
        ph: 460.0,
    };
    for (k, bin) in binned.bins.iter().enumerate() {
        let color = BIN_COLORS[k % BIN_COLORS.len()];
        for s in bin {
            out.circle(frame.x(s.score.j2), frame.y(s.score.j1), 2.5, color);
        }
        let label = match (k, binned.edges.as_slice()) {
            (0, [e, ..]) => format!("r < {:.0} mm", e * 1e3),
            (k, e) if k == e.len() => format!("r >= {:.0} mm", e[k - 1] * 1e3),
            (k, e) => format!("{:.0}-{:.0} mm", e[k - 1] * 1e3, e[k] * 1e3),
        };
        out.circle(640.0, 50.0 + 18.0 * k as f64, 4.0, color);
        out.text(650.0, 54.0 + 18.0 * k as f64, 11.0, &label);
    }
    out.text(320.0, 540.0, 13.0, "J2: cumulative leg rotation (rad)");
    out.text(10.0, 260.0, 13.0, "J1 (m rad)");
    out.finish()
}

/// Two panels: forward position versus time, and CoM and contact paths in
/// the plane.
pub fn render_trajectory(trace: &SimTrace, design: &RobotDesign) -> String {
    let mut out = Svg::new(900.0, 640.0);
    out.rect(0.0, 0.0, 900.0, 640.0, "#ffffff");
    if trace.records.is_empty() {
        return out.finish();
    }
    let t1 = trace.records.last().unwrap().t.max(1e-9);
    let (mut y0, mut y1) = (f64::MAX, f64::MIN);
    for r in &trace.records {
        y0 = y0.min(r.com_y);
        y1 = y1.max(r.com_y);
    }
    let frame = Frame {
        x0: 0.0,
        x1: t1,
        y0,
        y1: y1.max(y0 + 1e-6),
        px: 60.0,
        py: 30.0,
        pw: 800.0,
        ph: 250.0,
    };
    let pts: Vec<(f64, f64)> = trace
        .records
        .iter()
        .map(|r| (frame.x(r.t), frame.y(r.com_y)))
        .collect();
    out.polyline(&pts, "#d1495b", 1.5, "com-forward-vs-time");
    out.text(frame.px, 20.0, 13.0, "forward CoM position vs time");

    let (mut z0, mut z1) = (0.0f64, f64::MIN);
    for r in &trace.records {
        z1 = z1.max(r.com_z);
        z0 = z0.min(r.contact_z);
    }
    let frame2 = Frame {
        x0: y0 - 0.05,
        x1: y1 + 0.05,
        y0: z0 - 0.01,
        y1: (z1 + design.body.height).max(z0 + 0.05),
        px: 60.0,
        py: 340.0,
        pw: 800.0,
        ph: 250.0,
    };
    let com: Vec<(f64, f64)> = trace
        .records
        .iter()
        .map(|r| (frame2.x(r.com_y), frame2.y(r.com_z)))
        .collect();
    out.polyline(&com, "#335c81", 1.5, "com-path");
    let contact: Vec<(f64, f64)> = trace
        .records
        .iter()
        .map(|r| (frame2.x(r.contact_y), frame2.y(r.contact_z)))
        .collect();
    out.polyline(&contact, "#3a7d44", 1.0, "contact-path");
    // Leg-tip trajectories reconstructed from the recorded pose.
    for (side, color, class) in [
        (Side::Front, "#d1495b", "tip-front-path"),
        (Side::Rear, "#b07509", "tip-rear-path"),
    ] {
        let tip_phi = design.leg(side).phi_max();
        let pts: Vec<(f64, f64)> = trace
            .records
            .iter()
            .map(|r| {
                let dphi = match side {
                    Side::Front => r.leg_front,
                    Side::Rear => r.leg_rear,
                };
                let origin = rollgait_core::vec2::Vec2::new(r.com_y, r.com_z)
                    - rollgait_core::vec2::Rot::new(r.theta_g).apply(design.body.com_offset);
                let tip =
                    origin + leg_point_body(design, side, dphi, tip_phi).rotated(r.theta_g);
                (frame2.x(tip.y), frame2.y(tip.z))
            })
            .collect();
        out.polyline(&pts, color, 0.8, class);
    }
    out.text(frame2.px, 330.0, 13.0, "CoM, contact, and leg-tip paths");
    out.finish()
}
