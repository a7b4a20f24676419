//! Bundled designs used by tests, examples, and the CLI defaults.

use crate::geometry::{generate_leg, BodyParams, LegProfile, RobotDesign};
use crate::vec2::Vec2;

/// Default lumped leg mass (kg), from the prototype's printed legs.
pub const LEG_MASS: f64 = 0.06;

/// Default servo slew limit (rad/s).
pub fn leg_rate_limit() -> f64 {
    400f64.to_radians()
}

/// Ideal-wheel fixture: each leg is a full constant-radius circle about its
/// joint, both joints coincide with the CoM at the body center.
///
/// Rotating a circle about its own center leaves it in place, so the ground
/// contact sits directly below the center for every body angle and leg
/// displacement: the gravitational moment arm is identically zero. This is
/// the closed-form oracle for contact search, flat moment fields, and
/// uniform rolling.
pub fn circle_design(diameter: f64) -> RobotDesign {
    let r_c = diameter / 2.0;
    let side = 0.045 * (diameter / 0.070);
    let mass = 0.373;
    let body = BodyParams {
        width: side,
        height: side,
        com_offset: Vec2::ZERO,
        joint_offset: Vec2::ZERO,
        mass,
        body_inertia: mass * (side * side + side * side) / 12.0,
    };

    let n = 256;
    let span = std::f64::consts::TAU - 0.02;
    let phi: Vec<f64> = (0..n)
        .map(|i| -span * (1.0 - i as f64 / (n - 1) as f64))
        .collect();
    let radius = vec![r_c; n];
    let stroke = 55f64.to_radians();
    let front = LegProfile {
        keypoints: vec![Vec2::new(0.0, r_c)],
        phi,
        radius,
        dphi_range: (-stroke, 0.0),
        mirrored: false,
    };
    RobotDesign::new(body, front, LEG_MASS, leg_rate_limit()).unwrap()
}

/// The reference design: a generated inverted-pendulum-class geometry on the
/// nominal 60 mm body, frozen by seed. Joints sit near the upper body
/// corners and the CoM is modestly forward and low, which yields a strongly
/// negative rolling objective with a single opening ramp near -π/2.
pub fn reference_design() -> RobotDesign {
    let body = BodyParams::nominal();
    let front = generate_leg(REFERENCE_SEED, &body).expect("reference seed is feasible");
    RobotDesign::new(body, front, LEG_MASS, leg_rate_limit()).unwrap()
}

/// Frozen seed for [`reference_design`].
pub const REFERENCE_SEED: u64 = 10;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{find_contact, TAU_JOIN};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn circle_contact_sits_below_center() {
        let design = circle_design(0.070);
        let (lo, hi) = design.dphi_range();
        for k in 0..33 {
            let theta = -PI + 1.9 * PI * k as f64 / 32.0;
            let d = lo + (hi - lo) * (k % 5) as f64 / 4.0;
            let c = find_contact(&design, theta, d, d);
            assert_relative_eq!(c.point_global.y, 0.0, epsilon = 2e-6);
            assert_relative_eq!(c.point_global.z, -0.035, epsilon = 2e-6);
        }
    }

    #[test]
    fn circle_contact_phi_tracks_body_angle_linearly() {
        let design = circle_design(0.070);
        let (lo, _) = design.dphi_range();
        let mut prev: Option<(f64, f64, crate::geometry::Side)> = None;
        for k in 0..200 {
            let theta = -2.5 + 5.0 * k as f64 / 199.0;
            let c = find_contact(&design, theta, lo, lo);
            if let Some((pt, pp, side)) = prev {
                let slope = (c.phi_p - pp) / (theta - pt);
                if side == c.leg && slope.abs() < 10.0 {
                    assert_relative_eq!(slope.abs(), 1.0, epsilon = 1e-2);
                }
            }
            prev = Some((theta, c.phi_p, c.leg));
        }
    }

    #[test]
    fn circle_junction_closes() {
        let design = circle_design(0.070);
        assert!(design.junction_gap() <= TAU_JOIN);
    }

    #[test]
    fn reference_design_builds() {
        let d = reference_design();
        assert!(d.junction_gap() <= TAU_JOIN);
        assert!(d.max_leg_radius() > d.body.height / 2.0);
    }
}
