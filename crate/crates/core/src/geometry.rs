//! Robot body and leg geometry.
//!
//! A leg is a planar curve of non-uniform radius `r(φ)` measured from its
//! joint, with `φ` the polar angle around the joint measured from straight up
//! in the leg's *nominal* pose (tip directly above the joint). Actuation
//! rotates the whole curve by `Δφ` within `dphi_range`; at `Δφ_max` (fully
//! open) the tips of the front and rear legs meet on the body centerline and
//! form one continuous rolling surface, while at `Δφ_min` (closed) the lower
//! arcs pull in under the body for a tippy, roll-ready stance.
//!
//! The rear leg is the mirror image of the front about the body's vertical
//! axis; both legs share the same sample table and logical `Δφ` convention
//! (closed = min, open = max), with the mirror applied at evaluation time.

use crate::error::{Error, Result};
use crate::vec2::{Rot, Vec2};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Lowest-point ties closer than this (m) are broken toward larger forward Y.
pub const TAU_CONTACT: f64 = 1e-6;

/// Maximum allowed gap (m) between front and rear contours at the open-pose
/// tip junction.
pub const TAU_JOIN: f64 = 1e-6;

/// Rigid body parameters. The body frame origin is the geometric center of
/// the rectangular body; `y` is forward, `z` is up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyParams {
    /// Body width along the forward axis (m).
    pub width: f64,
    /// Body height (m).
    pub height: f64,
    /// Center of mass offset from the geometric center (m).
    pub com_offset: Vec2,
    /// Front joint position from the geometric center (m); the rear joint is
    /// mirrored at (-y, z).
    pub joint_offset: Vec2,
    /// Total robot mass (kg).
    pub mass: f64,
    /// Body moment of inertia about the CoM (kg·m²).
    pub body_inertia: f64,
}

impl BodyParams {
    pub fn new(
        width: f64,
        height: f64,
        com_offset: Vec2,
        joint_offset: Vec2,
        mass: f64,
        body_inertia: f64,
    ) -> Result<Self> {
        let p = BodyParams {
            width,
            height,
            com_offset,
            joint_offset,
            mass,
            body_inertia,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        if !(self.width > 0.0 && self.height > 0.0) {
            return bad("body dimensions must be positive");
        }
        if self.com_offset.y.abs() >= self.width / 2.0 || self.com_offset.z.abs() >= self.height / 2.0
        {
            return bad("center of mass must lie strictly inside the body");
        }
        if self.joint_offset.y.abs() > self.width / 2.0
            || self.joint_offset.z.abs() > self.height / 2.0
        {
            return bad("joints must lie on or within the body envelope");
        }
        if !(self.mass > 0.0 && self.body_inertia > 0.0) {
            return bad("mass and inertia must be positive");
        }
        Ok(())
    }

    /// Nominal 60 mm cube body with the prototype's mass budget. The CoM
    /// sits forward and low so the closed stance tips into a forward roll.
    pub fn nominal() -> Self {
        let w = 0.060;
        let h = 0.060;
        let m = 0.373;
        BodyParams {
            width: w,
            height: h,
            com_offset: Vec2::new(0.012, -0.006),
            joint_offset: Vec2::new(0.027, 0.027),
            mass: m,
            // Uniform rectangular block about its center.
            body_inertia: m * (w * w + h * h) / 12.0,
        }
    }

    /// Body corner positions in the body frame.
    pub fn corners(&self) -> [Vec2; 4] {
        let hw = self.width / 2.0;
        let hh = self.height / 2.0;
        [
            Vec2::new(hw, hh),
            Vec2::new(hw, -hh),
            Vec2::new(-hw, -hh),
            Vec2::new(-hw, hh),
        ]
    }
}

/// Which leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Front,
    Rear,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Front => Side::Rear,
            Side::Rear => Side::Front,
        }
    }
}

/// Sampled leg curve in polar form about the joint.
///
/// `phi` ascends to exactly `0.0` at the tip; `radius[i] = r(phi[i])`.
/// `dphi_range` is the logical actuation interval shared by both legs
/// (closed = min, open = max). `mirrored` marks the rear leg: its geometry is
/// the front's reflected about the vertical axis, realized at evaluation time
/// by negating rotation angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegProfile {
    /// Generation keypoints (A, B, C, D, E, F) in the body frame, nominal pose.
    pub keypoints: Vec<Vec2>,
    pub phi: Vec<f64>,
    pub radius: Vec<f64>,
    pub dphi_range: (f64, f64),
    pub mirrored: bool,
}

impl LegProfile {
    pub fn phi_min(&self) -> f64 {
        self.phi[0]
    }

    pub fn phi_max(&self) -> f64 {
        *self.phi.last().unwrap()
    }

    pub fn max_radius(&self) -> f64 {
        self.radius.iter().cloned().fold(0.0, f64::max)
    }

    /// Stroke width of the actuation interval (rad).
    pub fn stroke(&self) -> f64 {
        self.dphi_range.1 - self.dphi_range.0
    }

    pub fn validate(&self) -> Result<()> {
        if self.phi.len() != self.radius.len() || self.phi.len() < 4 {
            return Err(Error::InvalidParams("profile needs ≥ 4 samples".into()));
        }
        if !self.phi.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidParams("phi grid must be strictly increasing".into()));
        }
        if !self.radius.iter().all(|&r| r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParams("radii must be positive".into()));
        }
        if !(self.dphi_range.1 > self.dphi_range.0) {
            return Err(Error::InvalidParams("empty actuation range".into()));
        }
        Ok(())
    }
}

/// Interpolated radius at `phi`, exact at stored samples.
///
/// Piecewise cubic (Catmull-Rom) over the uniform sample grid; continuous
/// with continuous first derivative, and reproduces linear-in-φ data exactly.
pub fn sample_radius(profile: &LegProfile, phi: f64) -> Result<f64> {
    let (lo, hi) = (profile.phi_min(), profile.phi_max());
    if !(lo..=hi).contains(&phi) {
        return Err(Error::AngleOutOfRange {
            value: phi,
            min: lo,
            max: hi,
        });
    }
    Ok(interp_radius(&profile.phi, &profile.radius, phi))
}

fn interp_radius(phi: &[f64], radius: &[f64], q: f64) -> f64 {
    let n = phi.len();
    let i = phi.partition_point(|&p| p <= q).clamp(1, n - 1) - 1;
    if q == phi[i] {
        return radius[i];
    }
    if q == phi[i + 1] {
        return radius[i + 1];
    }
    let t = (q - phi[i]) / (phi[i + 1] - phi[i]);
    let r0 = radius[i];
    let r1 = radius[i + 1];
    // One-sided slope estimates at the segment ends.
    let m0 = if i == 0 {
        r1 - r0
    } else {
        (r1 - radius[i - 1]) / 2.0
    };
    let m1 = if i + 2 >= n {
        r1 - r0
    } else {
        (radius[i + 2] - r0) / 2.0
    };
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * r0
        + (t3 - 2.0 * t2 + t) * m0
        + (-2.0 * t3 + 3.0 * t2) * r1
        + (t3 - t2) * m1
}

/// Complete robot: body plus mirrored leg pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotDesign {
    pub body: BodyParams,
    pub front_leg: LegProfile,
    pub rear_leg: LegProfile,
    /// Lumped mass of one leg (kg), used only for simulation inertia.
    pub leg_mass: f64,
    /// Servo slew limit (rad/s).
    pub leg_rate_limit: f64,
}

impl RobotDesign {
    /// Assemble a design from a front leg; the rear leg is its exact mirror.
    pub fn new(body: BodyParams, front_leg: LegProfile, leg_mass: f64, leg_rate_limit: f64) -> Result<Self> {
        body.validate()?;
        front_leg.validate()?;
        if leg_mass < 0.0 || leg_rate_limit <= 0.0 {
            return Err(Error::InvalidParams("leg mass/rate limit out of range".into()));
        }
        let rear_leg = mirror_leg(&front_leg);
        Ok(RobotDesign {
            body,
            front_leg,
            rear_leg,
            leg_mass,
            leg_rate_limit,
        })
    }

    pub fn leg(&self, side: Side) -> &LegProfile {
        match side {
            Side::Front => &self.front_leg,
            Side::Rear => &self.rear_leg,
        }
    }

    /// Joint position in the body frame.
    pub fn joint(&self, side: Side) -> Vec2 {
        match side {
            Side::Front => self.joint_offset_front(),
            Side::Rear => self.joint_offset_front().mirrored(),
        }
    }

    fn joint_offset_front(&self) -> Vec2 {
        self.body.joint_offset
    }

    pub fn dphi_range(&self) -> (f64, f64) {
        self.front_leg.dphi_range
    }

    pub fn max_leg_radius(&self) -> f64 {
        self.front_leg.max_radius().max(self.rear_leg.max_radius())
    }

    /// Gap between the front and rear contour endpoints at the open-pose tip
    /// junction on the centerline.
    pub fn junction_gap(&self) -> f64 {
        let open = self.dphi_range().1;
        let tip_f = leg_point_body(self, Side::Front, open, self.front_leg.phi_max());
        let tip_r = leg_point_body(self, Side::Rear, open, self.rear_leg.phi_max());
        (tip_f - tip_r).norm()
    }

    /// Horizontal extent of the upright stance with legs closed (m); the
    /// body length used for speed normalization.
    pub fn resting_length(&self) -> f64 {
        let closed = self.dphi_range().0;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for side in [Side::Front, Side::Rear] {
            for p in contour_world(self, side, 0.0, closed) {
                lo = lo.min(p.y);
                hi = hi.max(p.y);
            }
        }
        hi - lo
    }

    /// Uniformly scale every length by `s` (test/analysis helper). Masses are
    /// unchanged; body inertia scales by `s²` to stay consistent with a rigid
    /// body of fixed mass.
    pub fn scaled(&self, s: f64) -> RobotDesign {
        let scale_leg = |leg: &LegProfile| LegProfile {
            keypoints: leg.keypoints.iter().map(|&p| p * s).collect(),
            phi: leg.phi.clone(),
            radius: leg.radius.iter().map(|r| r * s).collect(),
            dphi_range: leg.dphi_range,
            mirrored: leg.mirrored,
        };
        RobotDesign {
            body: BodyParams {
                width: self.body.width * s,
                height: self.body.height * s,
                com_offset: self.body.com_offset * s,
                joint_offset: self.body.joint_offset * s,
                mass: self.body.mass,
                body_inertia: self.body.body_inertia * s * s,
            },
            front_leg: scale_leg(&self.front_leg),
            rear_leg: scale_leg(&self.rear_leg),
            leg_mass: self.leg_mass,
            leg_rate_limit: self.leg_rate_limit,
        }
    }
}

/// Reflect a leg about the body's vertical axis.
///
/// Radii and the sample grid are shared; the reflection is carried by the
/// `mirrored` flag (rotation angles negate at evaluation) and mirrored
/// keypoints. Applying it twice returns the original bit-for-bit.
pub fn mirror_leg(leg: &LegProfile) -> LegProfile {
    LegProfile {
        keypoints: leg.keypoints.iter().map(|p| p.mirrored()).collect(),
        phi: leg.phi.clone(),
        radius: leg.radius.clone(),
        dphi_range: leg.dphi_range,
        mirrored: !leg.mirrored,
    }
}

/// Point on a leg's outer contour in the body frame.
///
/// `dphi` is the logical leg displacement, `phi` the polar parameter along
/// the curve. For the front leg the point is `J + R(Δφ+φ)·(r(φ)·ẑ)`; the
/// rear leg negates the rotation (mirror image).
pub fn leg_point_body(design: &RobotDesign, side: Side, dphi: f64, phi: f64) -> Vec2 {
    let leg = design.leg(side);
    let r = sample_radius(leg, phi).expect("phi within profile range");
    let sign = if leg.mirrored { -1.0 } else { 1.0 };
    design.joint(side) + (Vec2::UP * r).rotated(sign * (dphi + phi))
}

/// Sampled outer contour of one leg in the world frame (body origin at the
/// world origin, body rotated by `theta_g`). Used for rendering and oracles.
pub fn contour_world(design: &RobotDesign, side: Side, theta_g: f64, dphi: f64) -> Vec<Vec2> {
    let rot = Rot::new(theta_g);
    let leg = design.leg(side);
    leg.phi
        .iter()
        .map(|&phi| rot.apply(leg_point_body(design, side, dphi, phi)))
        .collect()
}

/// Instantaneous ground-contact candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactInfo {
    pub leg: Side,
    /// Polar parameter of the contact point along the contour (rad).
    pub phi_p: f64,
    /// Contact location with the body origin at the world origin (m).
    pub point_global: Vec2,
}

/// Precomputed per-leg evaluation cache for repeated lowest-point queries.
#[derive(Debug, Clone)]
pub struct ContourCache {
    phi: Vec<f64>,
    radius: Vec<f64>,
    /// r(φ)·ẑ rotated by φ, with the mirror sign applied.
    cart: Vec<Vec2>,
    sign: f64,
    joint: Vec2,
}

impl ContourCache {
    pub fn new(design: &RobotDesign, side: Side) -> Self {
        let leg = design.leg(side);
        let sign = if leg.mirrored { -1.0 } else { 1.0 };
        let cart = leg
            .phi
            .iter()
            .zip(&leg.radius)
            .map(|(&phi, &r)| (Vec2::UP * r).rotated(sign * phi))
            .collect();
        ContourCache {
            phi: leg.phi.clone(),
            radius: leg.radius.clone(),
            cart,
            sign,
            joint: design.joint(side),
        }
    }

    fn local_point(&self, phi: f64) -> Vec2 {
        let r = interp_radius(&self.phi, &self.radius, phi);
        (Vec2::UP * r).rotated(self.sign * phi)
    }

    /// Globally lowest contour point at body angle `theta_g` and displacement
    /// `dphi`, with the body origin at the world origin. Returns
    /// `(phi, world point)`. Node scan plus local ternary refinement on the
    /// interpolated curve; ties within [`TAU_CONTACT`] prefer larger Y.
    pub fn lowest_point(&self, theta_g: f64, dphi: f64) -> (f64, Vec2) {
        self.lowest_point_by(theta_g, dphi, |p| p.z)
    }

    /// Lowest contour point under an arbitrary height cost (terrain-aware
    /// callers subtract the local ground height from `p.z`). The cost must be
    /// locally smooth in the world point.
    pub fn lowest_point_by(
        &self,
        theta_g: f64,
        dphi: f64,
        cost: impl Fn(Vec2) -> f64,
    ) -> (f64, Vec2) {
        let body_rot = Rot::new(theta_g);
        let leg_rot = Rot::new(theta_g + self.sign * dphi);
        let joint_w = body_rot.apply(self.joint);
        let n = self.cart.len();

        let z_at_node = |i: usize| cost(joint_w + leg_rot.apply(self.cart[i]));

        // Collect local minima of the node heights (including endpoints).
        let mut candidates: Vec<usize> = Vec::new();
        let mut z_prev = z_at_node(0);
        let mut z_cur = z_at_node(1);
        if z_prev <= z_cur {
            candidates.push(0);
        }
        for i in 1..n - 1 {
            let z_next = z_at_node(i + 1);
            if z_cur <= z_prev && z_cur <= z_next {
                candidates.push(i);
            }
            z_prev = z_cur;
            z_cur = z_next;
        }
        if z_cur <= z_prev {
            candidates.push(n - 1);
        }

        // Lower cost wins; ties within TAU_CONTACT prefer the more forward
        // point (the pivot in the rolling direction).
        let choose = |a: (f64, Vec2, f64), b: (f64, Vec2, f64)| {
            if (a.2 - b.2).abs() <= TAU_CONTACT {
                if b.1.y > a.1.y {
                    b
                } else {
                    a
                }
            } else if b.2 < a.2 {
                b
            } else {
                a
            }
        };

        let mut best: Option<(f64, Vec2, f64)> = None;
        for &i in &candidates {
            let lo = self.phi[i.saturating_sub(1)];
            let hi = self.phi[(i + 1).min(n - 1)];
            let (phi, pt) = self.refine_min(joint_w, leg_rot, lo, hi, &cost);
            let c = cost(pt);
            best = Some(match best {
                None => (phi, pt, c),
                Some(cur) => choose(cur, (phi, pt, c)),
            });
        }
        let (phi, pt, _) = best.expect("contour has at least one sample");
        (phi, pt)
    }

    fn refine_min(
        &self,
        joint_w: Vec2,
        leg_rot: Rot,
        mut lo: f64,
        mut hi: f64,
        cost: &impl Fn(Vec2) -> f64,
    ) -> (f64, Vec2) {
        let z_of = |phi: f64| cost(joint_w + leg_rot.apply(self.local_point(phi)));
        for _ in 0..48 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if z_of(m1) <= z_of(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let phi = 0.5 * (lo + hi);
        (phi, joint_w + leg_rot.apply(self.local_point(phi)))
    }

    /// Mean of the sampled contour points in the body frame at displacement
    /// `dphi`; the leg's lumped-mass location for inertia bookkeeping.
    pub fn centroid_body(&self, dphi: f64) -> Vec2 {
        let n = self.cart.len() as f64;
        let mut sum = Vec2::ZERO;
        for c in &self.cart {
            sum = sum + *c;
        }
        self.joint + (sum * (1.0 / n)).rotated(self.sign * dphi)
    }
}

fn pick_lower(a: (f64, Vec2), b: (f64, Vec2)) -> (f64, Vec2) {
    if (a.1.z - b.1.z).abs() <= TAU_CONTACT {
        // Tie: prefer the point further forward (rolling-direction pivot).
        if b.1.y > a.1.y {
            b
        } else {
            a
        }
    } else if b.1.z < a.1.z {
        b
    } else {
        a
    }
}

/// Find the globally lowest outer-contour point over both legs.
///
/// The world frame has the body origin at the world origin; callers tracking
/// a translated body add their own offset. Ties within [`TAU_CONTACT`] are
/// broken toward larger forward coordinate.
pub fn find_contact(
    design: &RobotDesign,
    theta_g: f64,
    dphi_front: f64,
    dphi_rear: f64,
) -> ContactInfo {
    let front = ContourCache::new(design, Side::Front);
    let rear = ContourCache::new(design, Side::Rear);
    find_contact_cached(&front, &rear, theta_g, dphi_front, dphi_rear)
}

/// [`find_contact`] against prebuilt caches; used by hot loops.
pub fn find_contact_cached(
    front: &ContourCache,
    rear: &ContourCache,
    theta_g: f64,
    dphi_front: f64,
    dphi_rear: f64,
) -> ContactInfo {
    let (phi_f, pt_f) = front.lowest_point(theta_g, dphi_front);
    let (phi_r, pt_r) = rear.lowest_point(theta_g, dphi_rear);
    let fr = ((phi_f, pt_f), (phi_r, pt_r));
    if pick_lower(fr.0, fr.1) == fr.0 {
        ContactInfo {
            leg: Side::Front,
            phi_p: phi_f,
            point_global: pt_f,
        }
    } else {
        ContactInfo {
            leg: Side::Rear,
            phi_p: phi_r,
            point_global: pt_r,
        }
    }
}

/// Generation parameters for the randomized leg-profile search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenConfig {
    /// Actuator range of motion (rad). Default 55°.
    pub stroke: f64,
    /// Number of uniform φ samples stored per profile.
    pub n_samples: usize,
    /// Rejection-sampling attempt budget.
    pub max_attempts: u32,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            stroke: 55f64.to_radians(),
            n_samples: 256,
            max_attempts: 10_000,
        }
    }
}

/// Generate a random front-leg profile for `body`.
///
/// Deterministic for a fixed seed. Keypoints are drawn in an xy frame with
/// origin at the bottom center of the body: the tip A starts on the
/// centerline above the body (`h < y_A < 2h`) with a horizontal tangent
/// (encoded by an infinitesimally offset point B), the pair is rotated about
/// the joint until the tip sits straight above it, and four ordered keypoints
/// C..F wrap forward and under the body with descending segment slopes. A
/// cubic spline through the keypoints in polar form is resampled to a uniform
/// grid; candidates whose radius gradient is not monotone are rejected and
/// redrawn.
pub fn generate_leg(rng_seed: u64, body: &BodyParams) -> Result<LegProfile> {
    generate_leg_with(rng_seed, body, &GenConfig::default())
}

pub fn generate_leg_with(rng_seed: u64, body: &BodyParams, cfg: &GenConfig) -> Result<LegProfile> {
    body.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for _ in 0..cfg.max_attempts {
        if let Some(profile) = attempt_leg(&mut rng, body, cfg) {
            return Ok(profile);
        }
    }
    Err(Error::InfeasibleProfile {
        attempts: cfg.max_attempts,
    })
}

/// One rejection-sampling attempt. Points are in the bottom-center frame
/// (x forward, y up); `None` means a constraint failed and the caller redraws.
fn attempt_leg(rng: &mut ChaCha8Rng, body: &BodyParams, cfg: &GenConfig) -> Option<LegProfile> {
    let w = body.width;
    let h = body.height;
    // Joint in the bottom-center frame.
    let joint = Vec2::new(body.joint_offset.y, body.joint_offset.z + h / 2.0);
    let eps = 1e-4 * h;

    // Tip above the body on the centerline, with a horizontal tangent probe.
    let y_a = rng.gen_range(h..2.0 * h);
    let a0 = Vec2::new(0.0, y_a);
    let b0 = Vec2::new(eps, y_a);

    // Rotate A (and B) about the joint so the tip sits straight above it.
    // The rotation angle is the fully-open displacement: at Δφ = beta the tip
    // returns to the centerline and meets its mirror twin.
    let beta = (a0 - joint).angle_from_up();
    let tip_r = (a0 - joint).norm();
    let a = joint + Vec2::new(0.0, tip_r);
    let b = joint + (b0 - joint).rotated(-beta);
    if segment_hits_body(a, b, w, h) {
        return None;
    }

    // Ordered keypoints outside the body, walking forward and down. Sampling
    // windows for the unbounded coordinates span one body dimension.
    let x_c = rng.gen_range(w / 2.0..w / 2.0 + w);
    let y_c = rng.gen_range(h..b.z.max(h + 1e-9));
    let c = Vec2::new(x_c, y_c);
    if y_c >= b.z {
        return None;
    }
    let m_ab = slope(a, b)?;
    let m_bc = slope(b, c)?;
    if !(m_bc < m_ab) {
        return None;
    }

    let x_d = rng.gen_range(x_c..x_c + w);
    let y_d = rng.gen_range(w / 2.0..h.max(w / 2.0 + 1e-9));
    let d = Vec2::new(x_d, y_d);
    if y_d >= h {
        return None;
    }
    let m_cd = slope(c, d)?;
    if !(m_cd < m_bc) {
        return None;
    }

    let x_e = rng.gen_range(w / 2.0..x_d);
    let y_e = rng.gen_range(-h..0.0);
    let e = Vec2::new(x_e, y_e);

    let x_f = rng.gen_range(0.0..w / 2.0);
    let y_f = rng.gen_range(y_e - h..y_e);
    let f = Vec2::new(x_f, y_f);
    let m_ef = slope(e, f)?;
    let m_ed = slope(e, d)?;
    if !(m_ef < m_ed) {
        return None;
    }

    // Polar conversion about the joint, unwrapped so φ decreases from the tip.
    let knots_pts = [a, c, d, e, f];
    let mut phis = [0.0f64; 5];
    let mut radii = [0.0f64; 5];
    let mut prev = 0.0;
    for (k, p) in knots_pts.iter().enumerate() {
        let rel = *p - joint;
        radii[k] = rel.norm();
        let mut ang = rel.angle_from_up();
        while ang > prev {
            ang -= std::f64::consts::TAU;
        }
        if k > 0 && ang >= prev {
            return None;
        }
        phis[k] = ang;
        prev = ang;
    }

    // Tip tangent in polar form from the probe point B.
    let phi_b = (b - joint).angle_from_up();
    let r_b = (b - joint).norm();
    if phi_b >= 0.0 {
        return None;
    }
    let tip_slope = (r_b - tip_r) / phi_b;

    // Knots in ascending φ (F..A) with the tangent clamp at the tip end.
    let xs: Vec<f64> = phis.iter().rev().cloned().collect();
    let ys: Vec<f64> = radii.iter().rev().cloned().collect();
    let spline = ClampedSpline::fit(&xs, &ys, tip_slope)?;

    let n = cfg.n_samples;
    let phi_lo = xs[0];
    let mut phi_grid = Vec::with_capacity(n);
    let mut r_grid = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        let phi = phi_lo * (1.0 - t); // ends exactly at 0.0
        let r = spline.eval(phi);
        if !(r > 0.0 && r.is_finite()) {
            return None;
        }
        phi_grid.push(phi);
        r_grid.push(r);
    }

    if !gradient_monotone(&r_grid) {
        return None;
    }

    // Keypoints stored in the body-center frame.
    let to_body = |p: Vec2| Vec2::new(p.y, p.z - h / 2.0);
    Some(LegProfile {
        keypoints: vec![a, b, c, d, e, f].into_iter().map(to_body).collect(),
        phi: phi_grid,
        radius: r_grid,
        dphi_range: (beta - cfg.stroke, beta),
        mirrored: false,
    })
}

fn slope(p: Vec2, q: Vec2) -> Option<f64> {
    let dx = q.y - p.y;
    if dx.abs() < 1e-12 {
        return None;
    }
    Some((q.z - p.z) / dx)
}

/// Monotone first differences (discrete convexity/concavity of r over the
/// uniform grid).
fn gradient_monotone(r: &[f64]) -> bool {
    let diffs: Vec<f64> = r.windows(2).map(|w| w[1] - w[0]).collect();
    let nondec = diffs.windows(2).all(|w| w[1] >= w[0]);
    let noninc = diffs.windows(2).all(|w| w[1] <= w[0]);
    nondec || noninc
}

fn segment_hits_body(p: Vec2, q: Vec2, w: f64, h: f64) -> bool {
    // Body rectangle in the bottom-center frame: [-w/2, w/2] × [0, h].
    let (lo_x, hi_x) = (-w / 2.0, w / 2.0);
    let (lo_y, hi_y) = (0.0, h);
    let inside = |v: Vec2| v.y >= lo_x && v.y <= hi_x && v.z >= lo_y && v.z <= hi_y;
    if inside(p) || inside(q) {
        return true;
    }
    // Conservative sampling along the (tiny) segment.
    for i in 1..8 {
        let t = i as f64 / 8.0;
        if inside(p + (q - p) * t) {
            return true;
        }
    }
    false
}

/// Cubic spline with a clamped first derivative at the right end (the leg
/// tip) and a natural left end.
struct ClampedSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    m: Vec<f64>, // second derivatives at knots
}

impl ClampedSpline {
    fn fit(xs: &[f64], ys: &[f64], right_slope: f64) -> Option<Self> {
        let n = xs.len();
        if n < 3 || !xs.windows(2).all(|w| w[1] > w[0]) {
            return None;
        }
        // Tridiagonal system for second derivatives m[0..n], natural at the
        // left end (m[0] = 0), clamped slope at the right end.
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        diag[0] = 1.0;
        for i in 1..n - 1 {
            let h0 = xs[i] - xs[i - 1];
            let h1 = xs[i + 1] - xs[i];
            sub[i] = h0;
            diag[i] = 2.0 * (h0 + h1);
            sup[i] = h1;
            rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
        }
        let hn = xs[n - 1] - xs[n - 2];
        sub[n - 1] = hn;
        diag[n - 1] = 2.0 * hn;
        rhs[n - 1] = 6.0 * (right_slope - (ys[n - 1] - ys[n - 2]) / hn);

        // Thomas algorithm.
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        c[0] = sup[0] / diag[0];
        d[0] = rhs[0] / diag[0];
        for i in 1..n {
            let denom = diag[i] - sub[i] * c[i - 1];
            if denom.abs() < 1e-30 {
                return None;
            }
            c[i] = if i < n - 1 { sup[i] / denom } else { 0.0 };
            d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
        }
        let mut m = vec![0.0; n];
        m[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = d[i] - c[i] * m[i + 1];
        }
        Some(ClampedSpline {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            m,
        })
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let mut i = match self
            .xs
            .binary_search_by(|v| v.partial_cmp(&x).unwrap())
        {
            Ok(k) => k.min(n - 2),
            Err(k) => k.saturating_sub(1).min(n - 2),
        };
        if i >= n - 1 {
            i = n - 2;
        }
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}
