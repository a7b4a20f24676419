//! Planar hybrid-dynamics simulation.
//!
//! Rolling is modeled as a single rigid body pivoting about the instantaneous
//! ground contact under the gravitational moment, with rolling-without-slip
//! kinematics, a rate-limited leg servo driven by the PID duty cycle, and an
//! angular-momentum-conserving impact map when the contact point hands off
//! discontinuously. Walking is quasi-static: the two-contact stance pose is
//! solved geometrically each step and the higher-loaded contact anchors the
//! body while the other slides. The body angle is sensed through a noisy,
//! quantized, delayed tilt estimate.

use crate::control::{accumulate_energy, EnergyLedger, GaitController, Mode};
use crate::error::{Error, Result};
use crate::geometry::{ContactInfo, ContourCache, RobotDesign, Side};
use crate::vec2::{wrap_angle, Rot, Vec2};
use crate::GRAVITY;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// Inertial tilt sensing limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorConfig {
    /// Sampling rate (Hz).
    pub sample_rate: f64,
    /// Gaussian angle noise σ (rad).
    pub angle_noise_sigma: f64,
    /// Quantization half-width (rad): readings snap to bins of twice this.
    pub quantization: f64,
    /// Reading latency (s).
    pub latency: f64,
    pub rng_seed: u64,
}

impl Default for SensorConfig {
    fn default() -> Self {
        SensorConfig {
            sample_rate: 100.0,
            angle_noise_sigma: 5f64.to_radians(),
            quantization: std::f64::consts::PI / 12.0,
            latency: 0.01,
            rng_seed: 1,
        }
    }
}

impl SensorConfig {
    /// Noiseless, unquantized, zero-latency sensor.
    pub fn ideal() -> Self {
        SensorConfig {
            sample_rate: 100.0,
            angle_noise_sigma: 0.0,
            quantization: 0.0,
            latency: 0.0,
            rng_seed: 0,
        }
    }
}

/// Noisy quantized tilt estimate from a (possibly delayed) body angle.
pub fn sense(theta_g: f64, cfg: &SensorConfig, rng: &mut ChaCha8Rng) -> f64 {
    let mut reading = wrap_angle(theta_g);
    if cfg.angle_noise_sigma > 0.0 {
        let normal = Normal::new(0.0, cfg.angle_noise_sigma).expect("sigma >= 0");
        reading += normal.sample(rng);
    }
    if cfg.quantization > 0.0 {
        let bin = 2.0 * cfg.quantization;
        reading = (reading / bin).round() * bin;
    }
    wrap_angle(reading)
}

/// Piecewise-flat ground with rectangular step obstacles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Terrain {
    pub bumps: Vec<Bump>,
    /// Coulomb friction coefficient.
    pub friction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    /// Forward position where the obstacle starts (m).
    pub start: f64,
    pub width: f64,
    /// Step height (m), non-negative.
    pub height: f64,
}

impl Terrain {
    pub fn flat(friction: f64) -> Self {
        Terrain {
            bumps: Vec::new(),
            friction,
        }
    }

    pub fn with_bump(friction: f64, start: f64, width: f64, height: f64) -> Self {
        Terrain {
            bumps: vec![Bump {
                start,
                width,
                height,
            }],
            friction,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.friction <= 0.0 {
            return Err(Error::InvalidParams("friction must be positive".into()));
        }
        if self.bumps.iter().any(|b| b.height < 0.0 || b.width <= 0.0) {
            return Err(Error::InvalidParams("bump heights/widths out of range".into()));
        }
        Ok(())
    }

    pub fn height(&self, y: f64) -> f64 {
        let mut h = 0.0f64;
        for b in &self.bumps {
            if y >= b.start && y <= b.start + b.width {
                h = h.max(b.height);
            }
        }
        h
    }
}

/// Full continuous state of the planar model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    /// Unwrapped body angle (rad); forward rolling decreases it.
    pub theta_g: f64,
    pub omega: f64,
    /// World CoM position (m).
    pub com_pos: Vec2,
    pub leg_angle_front: f64,
    pub leg_angle_rear: f64,
    pub leg_cmd_front: f64,
    pub leg_cmd_rear: f64,
    /// Contact in true world coordinates (translation included).
    pub contact: ContactInfo,
    pub t: f64,
    /// Cumulative count of contact-handoff impacts.
    pub impact_count: u64,
}

impl SimState {
    /// World position of the body's geometric center.
    pub fn body_origin(&self, design: &RobotDesign) -> Vec2 {
        self.com_pos - Rot::new(self.theta_g).apply(design.body.com_offset)
    }
}

/// Integrator and hybrid-event parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    /// Ground-penetration tolerance before a configuration is invalid (m).
    pub tau_pen: f64,
    /// Contact jumps longer than this trigger the impact map (m).
    pub handoff_jump: f64,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            tau_pen: 0.002,
            handoff_jump: 0.002,
        }
    }
}

/// Cached contour evaluators plus mass distribution for one design.
pub struct ContactSolver {
    pub front: ContourCache,
    pub rear: ContourCache,
}

impl ContactSolver {
    pub fn new(design: &RobotDesign) -> Self {
        ContactSolver {
            front: ContourCache::new(design, Side::Front),
            rear: ContourCache::new(design, Side::Rear),
        }
    }

    fn cache(&self, side: Side) -> &ContourCache {
        match side {
            Side::Front => &self.front,
            Side::Rear => &self.rear,
        }
    }

    /// Terrain-aware contact: minimize clearance over both legs. `origin` is
    /// the world position of the body center. Returns the contact in world
    /// coordinates together with its clearance above ground.
    pub fn resolve(
        &self,
        origin: Vec2,
        theta_g: f64,
        dphi_front: f64,
        dphi_rear: f64,
        terrain: &Terrain,
    ) -> (ContactInfo, f64) {
        let clearance = |p: Vec2| (origin.z + p.z) - terrain.height(origin.y + p.y);
        let (phi_f, pf) = self.front.lowest_point_by(theta_g, dphi_front, clearance);
        let (phi_r, pr) = self.rear.lowest_point_by(theta_g, dphi_rear, clearance);
        let (cf, cr) = (clearance(pf), clearance(pr));
        let front_wins = if (cf - cr).abs() <= crate::geometry::TAU_CONTACT {
            pf.y >= pr.y
        } else {
            cf < cr
        };
        let (leg, phi_p, p, c) = if front_wins {
            (Side::Front, phi_f, pf, cf)
        } else {
            (Side::Rear, phi_r, pr, cr)
        };
        (
            ContactInfo {
                leg,
                phi_p,
                point_global: origin + p,
            },
            c,
        )
    }

    /// Clearance of one leg's lowest point above ground (world origin given).
    pub fn leg_clearance(
        &self,
        side: Side,
        origin: Vec2,
        theta_g: f64,
        dphi: f64,
        terrain: &Terrain,
    ) -> (Vec2, f64) {
        let clearance = |p: Vec2| (origin.z + p.z) - terrain.height(origin.y + p.y);
        let (_, p) = self
            .cache(side)
            .lowest_point_by(theta_g, dphi, clearance);
        (origin + p, clearance(p))
    }
}

/// Masses with world positions for momentum/inertia sums: the body at its
/// CoM plus each leg lumped at its contour centroid.
fn mass_points(
    design: &RobotDesign,
    solver: &ContactSolver,
    origin: Vec2,
    theta_g: f64,
    dphi_front: f64,
    dphi_rear: f64,
) -> [(f64, Vec2); 3] {
    let rot = Rot::new(theta_g);
    let com = origin + rot.apply(design.body.com_offset);
    let cf = origin + rot.apply(solver.front.centroid_body(dphi_front));
    let cr = origin + rot.apply(solver.rear.centroid_body(dphi_rear));
    [
        (design.body.mass, com),
        (design.leg_mass, cf),
        (design.leg_mass, cr),
    ]
}

/// Composite moment of inertia about a pivot point.
fn inertia_about(design: &RobotDesign, masses: &[(f64, Vec2); 3], pivot: Vec2) -> f64 {
    design.body.body_inertia
        + masses
            .iter()
            .map(|(m, x)| m * (*x - pivot).norm_sq())
            .sum::<f64>()
}

/// Kinetic plus potential energy for a state rotating about `pivot`.
pub fn mechanical_energy(
    design: &RobotDesign,
    solver: &ContactSolver,
    state: &SimState,
) -> f64 {
    let origin = state.body_origin(design);
    let masses = mass_points(
        design,
        solver,
        origin,
        state.theta_g,
        state.leg_angle_front,
        state.leg_angle_rear,
    );
    let pivot = state.contact.point_global;
    let i_p = inertia_about(design, &masses, pivot);
    let ke = 0.5 * i_p * state.omega * state.omega;
    let pe: f64 = masses.iter().map(|(m, x)| m * GRAVITY * x.z).sum();
    ke + pe
}

/// Contact-handoff velocity map: angular momentum about the new pivot is
/// conserved through the instantaneous transfer. Kinetic energy never
/// increases.
pub fn impact(
    state: &SimState,
    design: &RobotDesign,
    solver: &ContactSolver,
    new_contact: &ContactInfo,
) -> SimState {
    let origin = state.body_origin(design);
    let masses = mass_points(
        design,
        solver,
        origin,
        state.theta_g,
        state.leg_angle_front,
        state.leg_angle_rear,
    );
    let p_old = state.contact.point_global;
    let p_new = new_contact.point_global;
    if (p_new - p_old).norm() == 0.0 {
        let mut s = *state;
        s.contact = *new_contact;
        return s;
    }
    // L about new pivot = I_G ω + Σ m (x - p') × (ω ⊥(x - p)).
    let mut l_new = design.body.body_inertia * state.omega;
    for (m, x) in &masses {
        l_new += m * state.omega * (*x - p_new).dot(*x - p_old);
    }
    let i_new = inertia_about(design, &masses, p_new);
    let mut s = *state;
    s.omega = l_new / i_new;
    s.contact = *new_contact;
    s.impact_count += 1;
    s
}

/// One dynamics step with explicit motor duty cycles: legs move at
/// `duty × rate limit`, the body pivots about the contact under the
/// gravitational moment, the contact is re-resolved, and the pose is
/// projected back onto the ground.
#[allow(clippy::too_many_arguments)]
pub fn step_driven(
    state: &SimState,
    design: &RobotDesign,
    terrain: &Terrain,
    dt: f64,
    solver: &ContactSolver,
    params: &SimParams,
    duty_front: f64,
    duty_rear: f64,
) -> Result<SimState> {
    if !(dt > 0.0 && dt <= 0.005) {
        return Err(Error::InvalidParams("dt must be in (0, 5 ms]".into()));
    }
    let mut s = *state;

    // Rate-limited servo driven by the PWM duty.
    let (lo, hi) = design.dphi_range();
    let rate = design.leg_rate_limit;
    s.leg_angle_front = (s.leg_angle_front + duty_front.clamp(-1.0, 1.0) * rate * dt).clamp(lo, hi);
    s.leg_angle_rear = (s.leg_angle_rear + duty_rear.clamp(-1.0, 1.0) * rate * dt).clamp(lo, hi);

    // Contact under the new leg pose; a long hop along the contour is a
    // hybrid handoff event.
    let origin = s.body_origin(design);
    let (contact, _) = solver.resolve(origin, s.theta_g, s.leg_angle_front, s.leg_angle_rear, terrain);
    if (contact.point_global - s.contact.point_global).norm() > params.handoff_jump {
        s = impact(&s, design, solver, &contact);
    } else {
        s.contact = contact;
    }

    // Pivot dynamics: I_P ω' = I_P ω + m g r_GP dt (symplectic Euler).
    let masses = mass_points(
        design,
        solver,
        origin,
        s.theta_g,
        s.leg_angle_front,
        s.leg_angle_rear,
    );
    let pivot = s.contact.point_global;
    let arm = s.com_pos.y - pivot.y; // r_GP = (P - G)·Ĵ = -(arm)
    let r_gp = -arm;
    let i_p = inertia_about(design, &masses, pivot);
    let alpha = design.body.mass * GRAVITY * r_gp / i_p;
    s.omega += alpha * dt;
    let dtheta = s.omega * dt;
    s.theta_g += dtheta;

    // Rotate the pose about the pivot, then re-seat on the ground. A
    // floating body settles freely, but a penetrating one means the contact
    // hopped across a contour hollow: that is a handoff, and lifting the
    // body out without the momentum transfer would inject energy. Smooth
    // rolling dips the adjacent contour by at most ~R·Δθ²/2 per step, so
    // only deeper penetration counts as a handoff.
    let rot = Rot::new(dtheta);
    s.com_pos = pivot + rot.apply(s.com_pos - pivot);
    let origin = s.body_origin(design);
    let (contact, clearance) =
        solver.resolve(origin, s.theta_g, s.leg_angle_front, s.leg_angle_rear, terrain);
    let rolling_dip = 1.5 * design.max_leg_radius() * dtheta * dtheta + 1e-7;
    if clearance < -rolling_dip {
        s = impact(&s, design, solver, &contact);
    }
    s.com_pos.z -= clearance;
    s.contact = ContactInfo {
        point_global: Vec2::new(contact.point_global.y, contact.point_global.z - clearance),
        ..contact
    };

    // Validity: body corners must stay above ground, state must stay finite.
    let origin = s.body_origin(design);
    let rot = Rot::new(s.theta_g);
    for corner in design.body.corners() {
        let w = origin + rot.apply(corner);
        if w.z - terrain.height(w.y) < -params.tau_pen {
            return Err(Error::SimInvalid {
                t: s.t,
                reason: format!("body corner below ground at y={:.4}", w.y),
            });
        }
    }
    if !(s.theta_g.is_finite() && s.omega.is_finite() && s.com_pos.y.is_finite() && s.com_pos.z.is_finite())
    {
        return Err(Error::SimInvalid {
            t: s.t,
            reason: "non-finite state".into(),
        });
    }
    s.t += dt;
    Ok(s)
}

/// [`step_driven`] with the servo slewing straight toward the stored leg
/// commands at the rate limit (saturated tracking).
pub fn step(
    state: &SimState,
    design: &RobotDesign,
    terrain: &Terrain,
    dt: f64,
    solver: &ContactSolver,
    params: &SimParams,
) -> Result<SimState> {
    let rate = design.leg_rate_limit * dt;
    let df = ((state.leg_cmd_front - state.leg_angle_front) / rate).clamp(-1.0, 1.0);
    let dr = ((state.leg_cmd_rear - state.leg_angle_rear) / rate).clamp(-1.0, 1.0);
    step_driven(state, design, terrain, dt, solver, params, df, dr)
}

/// Quasi-static walking step: solve the double-stance pose for the current
/// leg angles, hold the gripping contact fixed on the ground, and let the
/// other leg slide. The anchor follows the gait phase: the rear leg grips
/// while it kicks open (stance A), the front grips through the retraction
/// and weight-shift phases.
fn walk_step(
    state: &SimState,
    design: &RobotDesign,
    terrain: &Terrain,
    dt: f64,
    solver: &ContactSolver,
    anchor: Side,
    duty_front: f64,
    duty_rear: f64,
) -> Result<SimState> {
    let mut s = *state;
    let (lo, hi) = design.dphi_range();
    let rate = design.leg_rate_limit;
    s.leg_angle_front = (s.leg_angle_front + duty_front.clamp(-1.0, 1.0) * rate * dt).clamp(lo, hi);
    s.leg_angle_rear = (s.leg_angle_rear + duty_rear.clamp(-1.0, 1.0) * rate * dt).clamp(lo, hi);

    // Anchored contact position in the pre-step stance.
    let origin0 = s.body_origin(design);
    let (pf0, _) = solver.leg_clearance(Side::Front, origin0, state.theta_g, state.leg_angle_front, terrain);
    let (pr0, _) = solver.leg_clearance(Side::Rear, origin0, state.theta_g, state.leg_angle_rear, terrain);
    let anchor_y0 = match anchor {
        Side::Front => pf0.y,
        Side::Rear => pr0.y,
    };

    // Double-stance pose: body angle equalizing the two legs' clearances.
    let theta = solve_stance_theta(solver, terrain, origin0, &s, state.theta_g)?;
    s.omega = (theta - state.theta_g) / dt;
    s.theta_g = theta;

    // Re-seat: anchored contact keeps its world y; both legs on the ground.
    let origin = s.body_origin(design);
    let (pa, _) = solver.leg_clearance(anchor, origin, s.theta_g, leg_angle(&s, anchor), terrain);
    s.com_pos.y += anchor_y0 - pa.y;
    let origin = s.body_origin(design);
    let (_, clear) = solver.leg_clearance(anchor, origin, s.theta_g, leg_angle(&s, anchor), terrain);
    s.com_pos.z -= clear;

    let origin = s.body_origin(design);
    let (contact, _) = solver.resolve(origin, s.theta_g, s.leg_angle_front, s.leg_angle_rear, terrain);
    s.contact = contact;
    s.t += dt;
    Ok(s)
}

fn leg_angle(s: &SimState, side: Side) -> f64 {
    match side {
        Side::Front => s.leg_angle_front,
        Side::Rear => s.leg_angle_rear,
    }
}

/// Find the body angle at which both legs touch the ground, near `theta0`.
fn solve_stance_theta(
    solver: &ContactSolver,
    terrain: &Terrain,
    origin: Vec2,
    s: &SimState,
    theta0: f64,
) -> Result<f64> {
    let diff = |theta: f64| {
        let (_, cf) = solver.leg_clearance(Side::Front, origin, theta, s.leg_angle_front, terrain);
        let (_, cr) = solver.leg_clearance(Side::Rear, origin, theta, s.leg_angle_rear, terrain);
        cf - cr
    };
    // Scan for sign-change brackets, keep the one closest to the current
    // angle, bisect it.
    let span = 0.9f64;
    let n = 37;
    let mut best: Option<(f64, f64, f64, f64)> = None; // (a, b, fa, dist)
    let mut prev = (theta0 - span, diff(theta0 - span));
    for i in 1..=n {
        let th = theta0 - span + 2.0 * span * i as f64 / n as f64;
        let d = diff(th);
        if prev.1 * d <= 0.0 {
            let dist = (0.5 * (prev.0 + th) - theta0).abs();
            if best.map(|(.., bd)| dist < bd).unwrap_or(true) {
                best = Some((prev.0, th, prev.1, dist));
            }
        }
        prev = (th, d);
    }
    let Some((mut a, mut b, mut fa, _)) = best else {
        return Err(Error::SimInvalid {
            t: s.t,
            reason: "no double-stance pose for the current leg angles".into(),
        });
    };
    for _ in 0..48 {
        let m = 0.5 * (a + b);
        let fm = diff(m);
        if fa * fm <= 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}

/// Static two-contact force analysis for walking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrictionVerdict {
    /// Rear-leg traction demand is within the friction cone (the rear can
    /// push the body forward while the front slides).
    pub can_push: bool,
    /// Dragging the sliding leg at this friction stays within the actuator
    /// torque budget.
    pub can_slide: bool,
    /// Upper feasible friction coefficient for the slide phase.
    pub mu_max: f64,
    /// Normal forces (front, rear), N.
    pub normals: (f64, f64),
}

/// Checks whether a quasi-static double stance can walk at friction `mu`:
/// (a) the rear contact can supply the traction to overcome the sliding
/// front leg's friction drag, and (b) the drag torque on the sliding leg
/// stays below the actuator budget. The residual tangential indeterminacy is
/// resolved minimally: the slider saturates its friction cone and the anchor
/// matches it.
pub fn check_walk_friction(
    design: &RobotDesign,
    stance_front: f64,
    stance_rear: f64,
    mu: f64,
    torque_budget: f64,
) -> Result<FrictionVerdict> {
    let solver = ContactSolver::new(design);
    let terrain = Terrain::flat(mu.max(1e-6));
    let s = SimState {
        theta_g: 0.0,
        omega: 0.0,
        com_pos: Vec2::ZERO,
        leg_angle_front: stance_front,
        leg_angle_rear: stance_rear,
        leg_cmd_front: stance_front,
        leg_cmd_rear: stance_rear,
        contact: ContactInfo {
            leg: Side::Front,
            phi_p: 0.0,
            point_global: Vec2::ZERO,
        },
        t: 0.0,
        impact_count: 0,
    };
    let origin = Vec2::ZERO;
    let theta = solve_stance_theta(&solver, &terrain, origin, &s, 0.0)?;
    let (pf, cf) = solver.leg_clearance(Side::Front, origin, theta, stance_front, &terrain);
    let (pr, _) = solver.leg_clearance(Side::Rear, origin, theta, stance_rear, &terrain);
    // Seat on the ground and place the CoM.
    let com = Rot::new(theta).apply(design.body.com_offset) - Vec2::new(0.0, cf);
    let pf = Vec2::new(pf.y, 0.0);
    let pr = Vec2::new(pr.y, 0.0);

    let denom = pf.y - pr.y;
    if denom.abs() < 1e-6 {
        return Err(Error::SimInvalid {
            t: 0.0,
            reason: "contacts coincide; stance statically indeterminate".into(),
        });
    }
    let weight = design.body.mass * GRAVITY;
    let n_front = (weight * (com.y - pr.y) / denom).max(0.0);
    let n_rear = (weight - n_front).max(0.0);

    // (a) Rear traction demand: the slider resists with μ·N_front; a strict
    // margin is required, so μ = 0 can never push.
    let can_push = mu > 0.0 && n_rear > n_front;

    // (b) Drag torque on the sliding front leg about its joint.
    let rot = Rot::new(theta);
    let joint_w = rot.apply(design.joint(Side::Front)) - Vec2::new(0.0, cf);
    let lever = (joint_w.z - pf.z).abs().max(1e-6);
    let mu_max = torque_budget / (n_front * lever).max(1e-12);
    let can_slide = mu <= mu_max;

    Ok(FrictionVerdict {
        can_push,
        can_slide,
        mu_max,
        normals: (n_front, n_rear),
    })
}

/// Default actuator torque budget for dragging a sliding leg (N·m): two
/// geared micro-motors per leg at ~0.04 N·m each. Configuration, not a
/// measured value; with the bundled reference design it puts the slide
/// feasibility bound near μ ≈ 0.7.
pub const DEFAULT_TORQUE_BUDGET: f64 = 0.078;

/// One trace row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: f64,
    pub theta_g: f64,
    pub omega: f64,
    pub com_y: f64,
    pub com_z: f64,
    pub leg_front: f64,
    pub leg_rear: f64,
    pub cmd_front: f64,
    pub cmd_rear: f64,
    /// PWM duty magnitudes per leg pair, in [0, 1].
    pub duty_front: f64,
    pub duty_rear: f64,
    /// Latest sensed body angle.
    pub theta_hat: f64,
    /// Controller state label (1, 2, 3, R1, R2, A, B, C).
    pub state: String,
    pub contact_leg: Side,
    pub contact_y: f64,
    pub contact_z: f64,
    /// Event column: state transitions and hybrid events.
    pub event: String,
}

/// Timestamped record of a full episode plus its energy ledger.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimTrace {
    pub records: Vec<TraceRecord>,
    pub ledger: EnergyLedger,
    /// Populated when the episode ended early on a model error.
    pub truncated: Option<String>,
}

impl SimTrace {
    pub fn duration(&self) -> f64 {
        match (self.records.first(), self.records.last()) {
            (Some(a), Some(b)) => b.t - a.t,
            _ => 0.0,
        }
    }

    /// Net forward CoM displacement (m).
    pub fn net_forward(&self) -> f64 {
        match (self.records.first(), self.records.last()) {
            (Some(a), Some(b)) => b.com_y - a.com_y,
            _ => 0.0,
        }
    }

    /// Full revolutions of the body over the episode.
    pub fn revolutions(&self) -> f64 {
        match (self.records.first(), self.records.last()) {
            (Some(a), Some(b)) => (b.theta_g - a.theta_g).abs() / std::f64::consts::TAU,
            _ => 0.0,
        }
    }

    pub fn mean_speed(&self) -> f64 {
        let d = self.duration();
        if d > 0.0 {
            self.net_forward().abs() / d
        } else {
            0.0
        }
    }
}

/// Episode configuration: timing, sensing, scripting, and initial pose.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpisodeConfig {
    pub duration: f64,
    pub dt: f64,
    pub sensor: SensorConfig,
    pub params: SimParams,
    /// Initial body tilt (rad); a small forward lean starts the roll.
    pub initial_tilt: f64,
    /// Scripted mode-change requests (time, mode).
    pub mode_script: Vec<(f64, Mode)>,
    /// Record every n-th step (1 = every step).
    pub record_every: usize,
}

impl EpisodeConfig {
    pub fn new(duration: f64) -> Self {
        EpisodeConfig {
            duration,
            dt: 1e-3,
            sensor: SensorConfig::default(),
            params: SimParams::default(),
            initial_tilt: -0.06,
            mode_script: Vec::new(),
            record_every: 1,
        }
    }
}

/// Run a full closed-loop episode: sense at the sensor rate, decide, servo
/// and integrate at the sim rate, account energy, record everything.
/// Deterministic for fixed seeds; on a model error the trace is truncated
/// and labeled rather than lost.
pub fn run_episode(
    design: &RobotDesign,
    mut ctrl: GaitController,
    terrain: &Terrain,
    cfg: &EpisodeConfig,
) -> Result<SimTrace> {
    terrain.validate()?;
    if cfg.duration < 0.0 || cfg.dt <= 0.0 {
        return Err(Error::InvalidParams("duration/dt out of range".into()));
    }
    let solver = ContactSolver::new(design);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.sensor.rng_seed);
    let mut ledger = EnergyLedger::new(ctrl.cfg.electrical);

    // Initial pose: legs at the controller's entry targets, body tilted by
    // the configured lean, seated on the ground at y = 0.
    let (tf, tr) = ctrl.targets();
    let mut state = SimState {
        theta_g: cfg.initial_tilt,
        omega: 0.0,
        com_pos: Vec2::ZERO,
        leg_angle_front: tf,
        leg_angle_rear: tr,
        leg_cmd_front: tf,
        leg_cmd_rear: tr,
        contact: ContactInfo {
            leg: Side::Front,
            phi_p: 0.0,
            point_global: Vec2::ZERO,
        },
        t: 0.0,
        impact_count: 0,
    };
    // Seat the initial pose.
    {
        let origin = state.body_origin(design);
        let (contact, clearance) =
            solver.resolve(origin, state.theta_g, tf, tr, terrain);
        state.com_pos.z -= clearance;
        state.contact = ContactInfo {
            point_global: Vec2::new(contact.point_global.y, contact.point_global.z - clearance),
            ..contact
        };
    }

    let steps = (cfg.duration / cfg.dt).round() as usize;
    let sense_period = 1.0 / cfg.sensor.sample_rate;
    let mut next_sense = 0.0;
    let mut theta_hat = wrap_angle(state.theta_g);
    let mut delay_buf: VecDeque<(f64, f64)> = VecDeque::new();
    let mut script = cfg.mode_script.clone();
    script.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut script_idx = 0;
    let mut pending_events: Vec<String> = Vec::new();
    let mut records = Vec::with_capacity(steps / cfg.record_every + 1);
    let mut truncated = None;

    let record =
        |state: &SimState, ctrl: &GaitController, theta_hat: f64, duties: (f64, f64), events: &mut Vec<String>| {
            let r = TraceRecord {
                t: state.t,
                theta_g: state.theta_g,
                omega: state.omega,
                com_y: state.com_pos.y,
                com_z: state.com_pos.z,
                leg_front: state.leg_angle_front,
                leg_rear: state.leg_angle_rear,
                cmd_front: state.leg_cmd_front,
                cmd_rear: state.leg_cmd_rear,
                duty_front: duties.0.abs(),
                duty_rear: duties.1.abs(),
                theta_hat,
                state: format!("{}", ctrl.state),
                contact_leg: state.contact.leg,
                contact_y: state.contact.point_global.y,
                contact_z: state.contact.point_global.z,
                event: events.join(";"),
            };
            events.clear();
            r
        };

    records.push(record(&state, &ctrl, theta_hat, (0.0, 0.0), &mut pending_events));

    for step_idx in 0..steps {
        delay_buf.push_back((state.t, state.theta_g));
        while delay_buf.len() > 2 && state.t - delay_buf[1].0 >= cfg.sensor.latency {
            delay_buf.pop_front();
        }

        if state.t + 1e-12 >= next_sense {
            next_sense += sense_period;
            let delayed = delay_buf
                .iter()
                .rev()
                .find(|(ti, _)| state.t - ti >= cfg.sensor.latency)
                .map(|&(_, th)| th)
                .unwrap_or(delay_buf.front().map(|&(_, th)| th).unwrap_or(state.theta_g));
            theta_hat = sense(delayed, &cfg.sensor, &mut rng);

            while script_idx < script.len() && script[script_idx].0 <= state.t {
                let mode = script[script_idx].1;
                ctrl.request_mode_change(mode, theta_hat, state.t);
                pending_events.push(format!("MODE_REQUEST {mode:?}"));
                script_idx += 1;
            }

            let settled = ctrl.mode == Mode::Transition
                && (state.leg_angle_front - state.leg_cmd_front).abs() < 0.05
                && (state.leg_angle_rear - state.leg_cmd_rear).abs() < 0.05
                && state.omega.abs() < 0.5;
            let update = ctrl.update(theta_hat, state.t, settled);
            state.leg_cmd_front = update.front_target;
            state.leg_cmd_rear = update.rear_target;
            if let Some(ev) = update.event {
                pending_events.push(format!("{ev}"));
            }
        }

        let duties = ctrl.servo_duties(state.leg_angle_front, state.leg_angle_rear, cfg.dt);
        accumulate_energy(
            &mut ledger,
            &[
                duties.0.abs(),
                duties.0.abs(),
                duties.1.abs(),
                duties.1.abs(),
            ],
            cfg.dt,
        )?;

        let next = match ctrl.mode {
            Mode::Walking => {
                // Grip assignment per phase: the rear holds while it kicks
                // open (A) and while the front retracts over it (C); the
                // front holds while the rear slides back (B).
                let anchor = if ctrl.state == crate::control::State::WalkB {
                    Side::Front
                } else {
                    Side::Rear
                };
                walk_step(
                    &state, design, terrain, cfg.dt, &solver, anchor, duties.0, duties.1,
                )
            }
            _ => step_driven(
                &state, design, terrain, cfg.dt, &solver, &cfg.params, duties.0, duties.1,
            ),
        };
        match next {
            Ok(s) => {
                if s.impact_count > state.impact_count {
                    pending_events.push("IMPACT".to_string());
                }
                state = s;
            }
            Err(e) => {
                truncated = Some(format!("{e}"));
                pending_events.push(format!("TRUNCATED {e}"));
                records.push(record(&state, &ctrl, theta_hat, duties, &mut pending_events));
                break;
            }
        }

        if (step_idx + 1) % cfg.record_every == 0 || step_idx + 1 == steps {
            records.push(record(&state, &ctrl, theta_hat, duties, &mut pending_events));
        }
    }

    Ok(SimTrace {
        records,
        ledger,
        truncated,
    })
}
