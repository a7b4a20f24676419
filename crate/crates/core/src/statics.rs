//! Quasi-static rolling analysis.
//!
//! The central object is the [`MomentField`]: the gravitational moment arm
//! (forward distance from CoM to ground contact; negative drives a forward
//! roll) sampled per leg over a (body angle × leg angle) grid. From it come
//! the rolling objectives `J1` (cumulative best-case moment arm over a full
//! revolution) and `J2` (total leg rotation needed to track that best case),
//! the idealized leg trajectory, and the event-controller thresholds.

use crate::error::{Error, Result};
use crate::geometry::{ContourCache, RobotDesign, Side, TAU_CONTACT};
use crate::vec2::Rot;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default θ samples over [-π, π].
pub const DEFAULT_N_THETA: usize = 720;
/// Default Δφ samples over the actuation range.
pub const DEFAULT_N_DPHI: usize = 56;
/// Sliding window (rad of body rotation) for the leg-rate slope estimate.
pub const SLOPE_WINDOW: f64 = PI / 3.0;

/// How the per-θ best leg angle is selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ArgminMode {
    /// One Δφ schedule applied to both legs; the arm of whichever leg
    /// actually governs contact is minimized. Default.
    #[default]
    SharedSchedule,
    /// Each leg free to choose its own Δφ; minimizes the elementwise minimum
    /// of the per-leg candidate arms (idealized bound).
    IndependentLegs,
}

/// Gravitational moment-arm maps over a (θ_G × Δφ) grid, per leg, with the
/// extracted per-θ argmin trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentField {
    pub theta: Vec<f64>,
    pub dphi: Vec<f64>,
    /// Candidate moment arm of the front leg per (θ, Δφ) cell (m).
    pub arm_front: Vec<Vec<f64>>,
    pub arm_rear: Vec<Vec<f64>>,
    /// Heights of the per-leg contact candidates (decide which leg governs).
    pub z_front: Vec<Vec<f64>>,
    pub z_rear: Vec<Vec<f64>>,
    /// Forward coordinates of the candidates (tie-breaking).
    pub y_front: Vec<Vec<f64>>,
    pub y_rear: Vec<Vec<f64>>,
    /// Per-θ leg angle minimizing the arm under `mode`.
    pub argmin_dphi: Vec<f64>,
    /// The minimized arm per θ (m).
    pub argmin_arm: Vec<f64>,
    pub mode: ArgminMode,
}

/// Moment arm of one leg's contact candidate (m).
///
/// The queried leg's lowest contour point is used even when the other leg
/// would actually touch first; field construction resolves which leg governs.
/// Negative values put the contact behind the CoM: gravity torques the body
/// clockwise, i.e. into a forward roll.
pub fn moment_arm(design: &RobotDesign, theta_g: f64, dphi: f64, leg: Side) -> Result<f64> {
    let (lo, hi) = design.dphi_range();
    if dphi < lo - 1e-9 || dphi > hi + 1e-9 {
        return Err(Error::AngleOutOfRange {
            value: dphi,
            min: lo,
            max: hi,
        });
    }
    let dphi = dphi.clamp(lo, hi);
    let cache = ContourCache::new(design, leg);
    let (_, pt) = cache.lowest_point(theta_g, dphi);
    let com_y = Rot::new(theta_g).apply(design.body.com_offset).y;
    Ok(pt.y - com_y)
}

pub fn build_moment_field(design: &RobotDesign, n_theta: usize, n_dphi: usize) -> MomentField {
    build_moment_field_with(design, n_theta, n_dphi, ArgminMode::SharedSchedule)
}

/// Evaluate both legs' candidate arms on the grid and extract the argmin
/// trajectory. Rows are independent and computed in parallel.
pub fn build_moment_field_with(
    design: &RobotDesign,
    n_theta: usize,
    n_dphi: usize,
    mode: ArgminMode,
) -> MomentField {
    assert!(n_theta >= 64 && n_dphi >= 16, "grid too coarse");
    let (lo, hi) = design.dphi_range();
    let theta: Vec<f64> = (0..n_theta)
        .map(|i| -PI + 2.0 * PI * i as f64 / (n_theta - 1) as f64)
        .collect();
    let dphi: Vec<f64> = (0..n_dphi)
        .map(|j| lo + (hi - lo) * j as f64 / (n_dphi - 1) as f64)
        .collect();

    let front = ContourCache::new(design, Side::Front);
    let rear = ContourCache::new(design, Side::Rear);
    let com = design.body.com_offset;

    struct Row {
        af: Vec<f64>,
        ar: Vec<f64>,
        zf: Vec<f64>,
        zr: Vec<f64>,
        yf: Vec<f64>,
        yr: Vec<f64>,
    }

    let rows: Vec<Row> = theta
        .par_iter()
        .map(|&th| {
            let com_y = Rot::new(th).apply(com).y;
            let mut row = Row {
                af: Vec::with_capacity(n_dphi),
                ar: Vec::with_capacity(n_dphi),
                zf: Vec::with_capacity(n_dphi),
                zr: Vec::with_capacity(n_dphi),
                yf: Vec::with_capacity(n_dphi),
                yr: Vec::with_capacity(n_dphi),
            };
            for &d in &dphi {
                let (_, pf) = front.lowest_point(th, d);
                let (_, pr) = rear.lowest_point(th, d);
                row.af.push(pf.y - com_y);
                row.ar.push(pr.y - com_y);
                row.zf.push(pf.z);
                row.zr.push(pr.z);
                row.yf.push(pf.y);
                row.yr.push(pr.y);
            }
            row
        })
        .collect();

    let mut field = MomentField {
        theta,
        dphi,
        arm_front: rows.iter().map(|r| r.af.clone()).collect(),
        arm_rear: rows.iter().map(|r| r.ar.clone()).collect(),
        z_front: rows.iter().map(|r| r.zf.clone()).collect(),
        z_rear: rows.iter().map(|r| r.zr.clone()).collect(),
        y_front: rows.iter().map(|r| r.yf.clone()).collect(),
        y_rear: rows.iter().map(|r| r.yr.clone()).collect(),
        argmin_dphi: Vec::new(),
        argmin_arm: Vec::new(),
        mode,
    };
    field.recompute_argmin();
    field
}

impl MomentField {
    /// Assemble a field from raw arrays (synthetic fields in tests).
    pub fn from_parts(
        theta: Vec<f64>,
        dphi: Vec<f64>,
        arm_front: Vec<Vec<f64>>,
        arm_rear: Vec<Vec<f64>>,
        z_front: Vec<Vec<f64>>,
        z_rear: Vec<Vec<f64>>,
        y_front: Vec<Vec<f64>>,
        y_rear: Vec<Vec<f64>>,
        mode: ArgminMode,
    ) -> Self {
        let mut f = MomentField {
            theta,
            dphi,
            arm_front,
            arm_rear,
            z_front,
            z_rear,
            y_front,
            y_rear,
            argmin_dphi: Vec::new(),
            argmin_arm: Vec::new(),
            mode,
        };
        f.recompute_argmin();
        f
    }

    /// Governing arm when the front leg is at `dphi[jf]` and the rear at
    /// `dphi[jr]`: the arm of whichever candidate is lower, ties toward the
    /// more forward candidate.
    pub fn pair_arm(&self, i: usize, jf: usize, jr: usize) -> f64 {
        let zf = self.z_front[i][jf];
        let zr = self.z_rear[i][jr];
        let front_governs = if (zf - zr).abs() <= TAU_CONTACT {
            self.y_front[i][jf] >= self.y_rear[i][jr]
        } else {
            zf < zr
        };
        if front_governs {
            self.arm_front[i][jf]
        } else {
            self.arm_rear[i][jr]
        }
    }

    /// Governing arm with both legs at `dphi[j]` (the shared schedule).
    pub fn combined_arm(&self, i: usize, j: usize) -> f64 {
        self.pair_arm(i, j, j)
    }

    fn cell_objective(&self, i: usize, j: usize) -> f64 {
        match self.mode {
            ArgminMode::SharedSchedule => self.combined_arm(i, j),
            ArgminMode::IndependentLegs => self.arm_front[i][j].min(self.arm_rear[i][j]),
        }
    }

    fn recompute_argmin(&mut self) {
        let n_theta = self.theta.len();
        let n_dphi = self.dphi.len();
        let mut dphis = Vec::with_capacity(n_theta);
        let mut arms = Vec::with_capacity(n_theta);
        for i in 0..n_theta {
            let mut best_j = 0;
            let mut best = self.cell_objective(i, 0);
            for j in 1..n_dphi {
                let v = self.cell_objective(i, j);
                // Ties prefer the smallest |Δφ|, then the smaller Δφ.
                let better = v < best
                    || (v == best
                        && (self.dphi[j].abs() < self.dphi[best_j].abs()
                            || (self.dphi[j].abs() == self.dphi[best_j].abs()
                                && self.dphi[j] < self.dphi[best_j])));
                if better {
                    best = v;
                    best_j = j;
                }
            }
            dphis.push(self.dphi[best_j]);
            arms.push(best);
        }
        self.argmin_dphi = dphis;
        self.argmin_arm = arms;
    }
}

/// Cumulative best-case moment arm over a full revolution: the trapezoidal
/// integral of the per-θ minimized arm (m·rad). More negative is better.
pub fn eval_j1(field: &MomentField) -> f64 {
    let n = field.theta.len();
    let mut sum = 0.0;
    for i in 0..n - 1 {
        let dt = field.theta[i + 1] - field.theta[i];
        sum += 0.5 * (field.argmin_arm[i] + field.argmin_arm[i + 1]) * dt;
    }
    sum
}

/// Total variation of the argmin leg schedule over a full revolution (rad):
/// the cumulative absolute leg rotation needed to track the idealized
/// trajectory.
pub fn eval_j2(field: &MomentField) -> f64 {
    field
        .argmin_dphi
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .sum()
}

/// The idealized leg schedule with its rate requirement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub theta: Vec<f64>,
    pub dphi: Vec<f64>,
    /// Steepest secant slope |ΔΔφ/Δθ_G| (rad/rad) measured over a sliding
    /// window of body rotation; the leg must rotate at least this fast
    /// relative to the body to track the schedule.
    pub max_slope: f64,
    /// Window used for the slope estimate (rad).
    pub slope_window: f64,
}

pub fn optimal_trajectory(field: &MomentField) -> Trajectory {
    optimal_trajectory_with(field, SLOPE_WINDOW)
}

/// Extract the argmin schedule and its steepest windowed slope. The window
/// suppresses grid quantization: pointwise differences of a stepped schedule
/// are either zero or one grid step per θ sample, so slopes are measured as
/// secants across `slope_window` rad of body rotation (cyclically, since the
/// schedule is periodic over the revolution).
pub fn optimal_trajectory_with(field: &MomentField, slope_window: f64) -> Trajectory {
    let n = field.theta.len();
    let span = field.theta[n - 1] - field.theta[0];
    let step = span / (n - 1) as f64;
    let k = ((slope_window / step).round() as usize).clamp(1, n - 1);
    let mut max_slope = 0.0f64;
    for i in 0..n {
        // Periodic continuation: sample n-1 duplicates sample 0 (θ = ±π).
        let j = (i + k) % (n - 1);
        let d0 = field.argmin_dphi[i];
        let d1 = field.argmin_dphi[j];
        let slope = (d1 - d0).abs() / (k as f64 * step);
        max_slope = max_slope.max(slope);
    }
    Trajectory {
        theta: field.theta.clone(),
        dphi: field.argmin_dphi.clone(),
        max_slope,
        slope_window: k as f64 * step,
    }
}

/// Discrete leg-angle levels commanded by the rolling controller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetLevels {
    pub closed: f64,
    pub mid: f64,
    pub open: f64,
}

/// Rolling-state boundaries and per-state leg targets.
///
/// Forward rolling sweeps the wrapped body angle downward: state 1 holds on
/// (θ_12, π], state 2 on (θ_23, θ_12], state 3 on (-π, θ_23], and the 3→1
/// hand-back fires at the -π junction crossing (θ_31).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSet {
    pub theta_12: f64,
    pub theta_23: f64,
    pub theta_31: f64,
    pub levels: TargetLevels,
    pub region_min_width: f64,
}

impl ThresholdSet {
    /// Per-state (front, rear) leg targets for the rolling cycle.
    pub fn rolling_targets(&self, state: u8) -> (f64, f64) {
        let l = self.levels;
        match state {
            1 => (l.closed, l.closed),
            2 => (l.mid, l.closed),
            3 => (l.open, l.open),
            _ => (l.closed, l.closed),
        }
    }

    pub fn validate(&self, dphi_range: (f64, f64)) -> Result<()> {
        let w = self.region_min_width;
        let ok = self.theta_12 - self.theta_23 >= w - 1e-9
            && self.theta_23 + PI >= w - 1e-9
            && PI - self.theta_12 >= w - 1e-9;
        if !ok {
            return Err(Error::InvalidParams("threshold regions thinner than minimum".into()));
        }
        for t in [self.levels.closed, self.levels.mid, self.levels.open] {
            if t < dphi_range.0 - 1e-9 || t > dphi_range.1 + 1e-9 {
                return Err(Error::InvalidParams("target level outside actuation range".into()));
            }
        }
        Ok(())
    }
}

/// Arms within this of zero (m) count as zero when measuring negativity;
/// filters contact-refinement noise out of the threshold objective.
const ARM_EPS: f64 = 1e-7;

/// Quantize the idealized trajectory into closed/mid/open commands and place
/// the state boundaries.
///
/// Boundary candidates sit on the sensor quantization-bin edges (odd
/// multiples of half the region width), so a quantized reading can never
/// straddle a boundary and the state machine cannot chatter between
/// regions. The exhaustive search over boundary pairs and nine mid-level
/// candidates maximizes the measure of body angles whose commanded
/// configuration keeps the governing moment arm negative; among partitions
/// within one sample of the best measure, the one with the most negative
/// integrated arm (most gravitational assist) wins. Closed/open levels are
/// pinned to the trajectory extremes. If no candidate is strictly better
/// than any other (degenerate field), the documented default partition
/// (boundaries one half-region either side of -π/2, centered mid level) is
/// returned.
pub fn select_thresholds(field: &MomentField, region_min_width: f64) -> Result<ThresholdSet> {
    let n_dphi = field.dphi.len();
    if n_dphi < 3 || field.dphi[n_dphi - 1] - field.dphi[0] <= 0.0 {
        return Err(Error::InvalidParams("actuation range collapsed".into()));
    }
    let n = field.theta.len();
    let w_min = region_min_width;

    // Closed/open levels pinned to the schedule extremes.
    let j_closed = nearest_index(&field.dphi, min_of(&field.argmin_dphi));
    let j_open = nearest_index(&field.dphi, max_of(&field.argmin_dphi));

    // Precompute the command arm per θ for each state and mid candidate.
    // State 1: both closed, state 3: both open, state 2: front mid, rear closed.
    let arm_s1: Vec<f64> = (0..n).map(|i| field.pair_arm(i, j_closed, j_closed)).collect();
    let arm_s3: Vec<f64> = (0..n).map(|i| field.pair_arm(i, j_open, j_open)).collect();
    let mid_candidates: Vec<usize> = (1..=9)
        .map(|q| {
            let d = field.dphi[j_closed]
                + (field.dphi[j_open] - field.dphi[j_closed]) * q as f64 / 10.0;
            nearest_index(&field.dphi, d)
        })
        .collect();

    // Candidate boundaries on sensor-bin edges: -π + (k + ½)·w.
    let n_steps = (2.0 * PI / w_min).floor() as i64;
    let candidate = |k: i64| -PI + (k as f64 + 0.5) * w_min;
    let dt = (field.theta[n - 1] - field.theta[0]) / (n - 1) as f64;

    // (measure, assist integral, θ12, θ23, j_mid)
    let mut best: Option<(f64, f64, f64, f64, usize)> = None;
    let mut all_equal = true;
    let mut first_measure = None;

    for j_mid in &mid_candidates {
        let arm_s2: Vec<f64> = (0..n).map(|i| field.pair_arm(i, *j_mid, j_closed)).collect();
        for a_step in 0..n_steps {
            let theta_12 = candidate(a_step);
            if theta_12 > 0.0 || PI - theta_12 < w_min - 1e-9 {
                continue;
            }
            for b_step in 0..a_step {
                let theta_23 = candidate(b_step);
                if theta_12 - theta_23 < w_min - 1e-9 || theta_23 + PI < w_min - 1e-9 {
                    continue;
                }
                let mut measure = 0.0;
                let mut assist = 0.0;
                for i in 0..n {
                    let th = field.theta[i];
                    let arm = if th > theta_12 {
                        arm_s1[i]
                    } else if th > theta_23 {
                        arm_s2[i]
                    } else {
                        arm_s3[i]
                    };
                    if arm < -ARM_EPS {
                        measure += dt;
                    }
                    assist += arm * dt;
                }
                match &mut best {
                    None => {
                        first_measure = Some(measure);
                        best = Some((measure, assist, theta_12, theta_23, *j_mid));
                    }
                    Some((m, a, ..)) => {
                        if (measure - first_measure.unwrap()).abs() > 1e-12 {
                            all_equal = false;
                        }
                        // Primary: widest negative measure. Exact ties break
                        // toward the most gravitational assist.
                        let better = measure > *m || (measure == *m && assist < *a - 1e-12);
                        if better {
                            best = Some((measure, assist, theta_12, theta_23, *j_mid));
                        }
                    }
                }
            }
        }
    }

    let (lo, hi) = (field.dphi[0], field.dphi[n_dphi - 1]);
    if best.is_none() || all_equal {
        // Degenerate field: documented default partition around -π/2.
        return Ok(ThresholdSet {
            theta_12: -PI / 2.0 + w_min / 2.0,
            theta_23: -PI / 2.0 - w_min / 2.0,
            theta_31: -PI,
            levels: TargetLevels {
                closed: lo,
                mid: 0.5 * (lo + hi),
                open: hi,
            },
            region_min_width: w_min,
        });
    }

    let (_, _, theta_12, theta_23, j_mid) = best.unwrap();
    Ok(ThresholdSet {
        theta_12,
        theta_23,
        theta_31: -PI,
        levels: TargetLevels {
            closed: field.dphi[j_closed],
            mid: field.dphi[j_mid],
            open: field.dphi[j_open],
        },
        region_min_width: w_min,
    })
}

fn nearest_index(grid: &[f64], value: f64) -> usize {
    let mut best = 0;
    let mut err = f64::INFINITY;
    for (i, &g) in grid.iter().enumerate() {
        let e = (g - value).abs();
        if e < err {
            err = e;
            best = i;
        }
    }
    best
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::INFINITY, f64::min)
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{circle_design, reference_design};
    use crate::geometry::{leg_point_body, sample_radius, RobotDesign};
    use crate::vec2::Vec2;
    use approx::assert_relative_eq;

    fn small_field(design: &RobotDesign) -> MomentField {
        build_moment_field(design, 240, 24)
    }

    #[test]
    fn circle_field_is_zero_with_flat_argmin() {
        let design = circle_design(0.070);
        let field = small_field(&design);
        for i in 0..field.theta.len() {
            assert!(field.argmin_arm[i].abs() < 1e-5, "arm {}", field.argmin_arm[i]);
        }
        assert!(eval_j1(&field).abs() < 1e-4);
    }

    #[test]
    fn moment_arm_rejects_out_of_range() {
        let design = reference_design();
        assert!(matches!(
            moment_arm(&design, 0.0, 10.0, Side::Front),
            Err(Error::AngleOutOfRange { .. })
        ));
    }

    #[test]
    fn moment_arm_matches_independent_oracle() {
        // Independent construction: dense contour sampling with explicit
        // trigonometry, then project the CoM-to-contact vector on the
        // forward axis. The oracle's contact Y is quantized by its grid, so
        // the comparison tolerance is the grid step times the radius scale.
        let design = reference_design();
        let (lo, hi) = design.dphi_range();
        for (k, side) in [(0usize, Side::Front), (1, Side::Rear)] {
            for t in 0..12 {
                let theta = -PI + 2.0 * PI * (t as f64 + 0.37 + k as f64 * 0.11) / 12.0;
                let dphi = lo + (hi - lo) * (t as f64 / 11.0);
                let arm = moment_arm(&design, theta, dphi, side).unwrap();

                let leg = design.leg(side);
                let mut best_z = f64::INFINITY;
                let mut best_y = 0.0;
                let n = leg.phi.len() * 10;
                for i in 0..n {
                    let s = i as f64 / (n - 1) as f64;
                    let phi = leg.phi_min() * (1.0 - s);
                    let r = sample_radius(leg, phi).unwrap();
                    let sign = if leg.mirrored { -1.0 } else { 1.0 };
                    let ang = theta + sign * (dphi + phi);
                    let joint = design.joint(side);
                    let y = joint.y * theta.cos() - joint.z * theta.sin() - r * ang.sin();
                    let z = joint.y * theta.sin() + joint.z * theta.cos() + r * ang.cos();
                    if z < best_z {
                        best_z = z;
                        best_y = y;
                    }
                }
                let g = design.body.com_offset;
                let com_y = g.y * theta.cos() - g.z * theta.sin();
                let tol = design.max_leg_radius() * (leg.phi_min().abs() / n as f64) + 1e-9;
                assert!(
                    (arm - (best_y - com_y)).abs() < 10.0 * tol,
                    "side {side:?} θ={theta:.3} δ={dphi:.3}: {} vs {}",
                    arm,
                    best_y - com_y
                );
            }
        }
    }

    #[test]
    fn upright_closed_reference_arm_is_negative() {
        let design = reference_design();
        let (lo, _) = design.dphi_range();
        let field = small_field(&design);
        let i0 = field.theta.iter().position(|&t| t.abs() < 0.02).unwrap();
        let j0 = nearest_index(&field.dphi, lo);
        assert!(
            field.combined_arm(i0, j0) < 0.0,
            "closed upright stance must fall forward"
        );
    }

    #[test]
    fn argmin_dominates_grid() {
        let design = reference_design();
        let field = small_field(&design);
        for i in (0..field.theta.len()).step_by(7) {
            for j in 0..field.dphi.len() {
                assert!(field.argmin_arm[i] <= field.combined_arm(i, j) + 1e-12);
            }
        }
    }

    #[test]
    fn independent_mode_matches_elementwise_min() {
        let design = reference_design();
        let field = build_moment_field_with(&design, 240, 24, ArgminMode::IndependentLegs);
        for i in (0..field.theta.len()).step_by(5) {
            let expect = (0..field.dphi.len())
                .map(|j| field.arm_front[i][j].min(field.arm_rear[i][j]))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(field.argmin_arm[i], expect);
        }
    }

    #[test]
    fn j1_closed_forms() {
        let n = 129;
        let theta: Vec<f64> = (0..n).map(|i| -PI + 2.0 * PI * i as f64 / (n - 1) as f64).collect();
        let dphi: Vec<f64> = (0..17).map(|j| j as f64 / 16.0).collect();
        let zeros = vec![vec![0.0; 17]; n];
        let field = MomentField::from_parts(
            theta.clone(),
            dphi.clone(),
            zeros.clone(),
            zeros.clone(),
            zeros.clone(),
            zeros.clone(),
            zeros.clone(),
            zeros.clone(),
            ArgminMode::SharedSchedule,
        );
        assert_eq!(eval_j1(&field), 0.0);
        assert_eq!(eval_j2(&field), 0.0);

        let c = 0.0123;
        let const_arm = vec![vec![-c; 17]; n];
        let field = MomentField::from_parts(
            theta,
            dphi,
            const_arm.clone(),
            const_arm,
            zeros.clone(),
            zeros.clone(),
            zeros.clone(),
            zeros,
            ArgminMode::SharedSchedule,
        );
        assert_relative_eq!(eval_j1(&field), -2.0 * PI * c, epsilon = 1e-12);
    }

    #[test]
    fn j2_of_monotone_ramp_is_stroke() {
        // Build a synthetic field whose best Δφ ramps linearly from closed to
        // open exactly once; J2 must equal the total variation (the stroke).
        let n = 257;
        let m = 33;
        let theta: Vec<f64> = (0..n).map(|i| -PI + 2.0 * PI * i as f64 / (n - 1) as f64).collect();
        let stroke = 55f64.to_radians();
        let dphi: Vec<f64> = (0..m).map(|j| stroke * j as f64 / (m - 1) as f64).collect();
        let mut arm = vec![vec![0.0; m]; n];
        for i in 0..n {
            let want = stroke * i as f64 / (n - 1) as f64;
            for j in 0..m {
                arm[i][j] = (dphi[j] - want).abs() - 1.0;
            }
        }
        let zeros = vec![vec![0.0; m]; n];
        let field = MomentField::from_parts(
            theta, dphi, arm.clone(), arm, zeros.clone(), zeros.clone(), zeros.clone(), zeros,
            ArgminMode::SharedSchedule,
        );
        assert_relative_eq!(eval_j2(&field), stroke, epsilon = 1e-9);
    }

    #[test]
    fn scale_covariance_j1_scales_j2_invariant() {
        let design = reference_design();
        let field = small_field(&design);
        let j1 = eval_j1(&field);
        let j2 = eval_j2(&field);
        for s in [0.5, 2.0] {
            let scaled = design.scaled(s);
            let fs = small_field(&scaled);
            assert_relative_eq!(eval_j1(&fs), s * j1, max_relative = 1e-6);
            assert_relative_eq!(eval_j2(&fs), j2, max_relative = 1e-9);
        }
    }

    #[test]
    fn trajectory_achieves_argmin_and_reports_slope() {
        let design = reference_design();
        let field = small_field(&design);
        let traj = optimal_trajectory(&field);
        assert_eq!(traj.dphi, field.argmin_dphi);
        assert!(traj.max_slope > 0.0);
    }

    #[test]
    fn zero_field_trajectory_constant_at_tiebreak() {
        // Exact all-zero synthetic field: the argmin tie-break must pick the
        // smallest-magnitude Δφ on the grid at every θ.
        let n = 129;
        let m = 21;
        let theta: Vec<f64> = (0..n).map(|i| -PI + 2.0 * PI * i as f64 / (n - 1) as f64).collect();
        let dphi: Vec<f64> = (0..m).map(|j| -0.6 + 1.2 * j as f64 / (m - 1) as f64).collect();
        let zeros = vec![vec![0.0; m]; n];
        let field = MomentField::from_parts(
            theta, dphi, zeros.clone(), zeros.clone(), zeros.clone(), zeros.clone(),
            zeros.clone(), zeros, ArgminMode::SharedSchedule,
        );
        let expect = field
            .dphi
            .iter()
            .cloned()
            .min_by(|a, b| (a.abs(), *a).partial_cmp(&(b.abs(), *b)).unwrap())
            .unwrap();
        let traj = optimal_trajectory(&field);
        for d in &traj.dphi {
            assert_eq!(*d, expect);
        }
        assert_eq!(traj.max_slope, 0.0);
    }

    #[test]
    fn select_thresholds_ramp_hits_terciles() {
        // Synthetic field whose ideal schedule ramps monotonically from
        // closed to open over the descending half-revolution: the closed
        // command earns a negative arm exactly on the first tercile of
        // |θ|, the centered mid command on the middle tercile, and the
        // open command on the last. The unique optimal partition lands on
        // the ramp's tercile crossings at ±π/3 and ±2π/3.
        let n = 721;
        let m = 56;
        let theta: Vec<f64> = (0..n).map(|i| -PI + 2.0 * PI * i as f64 / (n - 1) as f64).collect();
        let stroke = 55f64.to_radians();
        let dphi: Vec<f64> = (0..m).map(|j| stroke * j as f64 / (m - 1) as f64).collect();
        let j_mid_true = nearest_index(&dphi, stroke / 2.0);
        let mut arm = vec![vec![0.0; m]; n];
        for (i, th) in theta.iter().enumerate() {
            let a = th.abs();
            let want = stroke * a / PI; // monotone opening ramp in |θ|
            for j in 0..m {
                // Small tilt keeps the argmin on the ramp; the dominant term
                // makes each tercile negative only under its own level.
                let tilt = 1e-3 * (dphi[j] - want).abs();
                let tercile_ok = if a < PI / 3.0 {
                    j == 0
                } else if a < 2.0 * PI / 3.0 {
                    j == j_mid_true
                } else {
                    j == m - 1
                };
                arm[i][j] = if tercile_ok { -1.0 } else { 1.0 } + tilt;
            }
        }
        let zeros = vec![vec![0.0; m]; n];
        let field = MomentField::from_parts(
            theta, dphi, arm.clone(), arm, zeros.clone(), zeros.clone(), zeros.clone(), zeros,
            ArgminMode::SharedSchedule,
        );
        let w = PI / 6.0;
        let ts = select_thresholds(&field, w).unwrap();
        ts.validate((0.0, stroke)).unwrap();

        // Oracle: clean-room enumeration over the same bin-edge lattice,
        // tracking the maximum achievable negative measure.
        let j_closed = 0usize;
        let j_open = m - 1;
        let j_mid = nearest_index(&field.dphi, ts.levels.mid);
        let measure_of = |t12: f64, t23: f64| {
            let mut meas = 0usize;
            for i in 0..n {
                let th = field.theta[i];
                let (jf, jr) = if th > t12 {
                    (j_closed, j_closed)
                } else if th > t23 {
                    (j_mid, j_closed)
                } else {
                    (j_open, j_open)
                };
                if field.pair_arm(i, jf, jr) < -1e-7 {
                    meas += 1;
                }
            }
            meas
        };
        let mut best = (0usize, 0.0, 0.0);
        for a in 0..12i64 {
            let t12 = -PI + (a as f64 + 0.5) * w;
            if t12 > 0.0 {
                continue;
            }
            for b in 0..a {
                let t23 = -PI + (b as f64 + 0.5) * w;
                if t12 - t23 < w - 1e-9 || t23 + PI < w - 1e-9 {
                    continue;
                }
                let meas = measure_of(t12, t23);
                if meas > best.0 {
                    best = (meas, t12, t23);
                }
            }
        }
        // The selection must achieve the oracle's maximum measure, and the
        // boundaries must land within half a region width of the true
        // tercile crossings.
        assert_eq!(measure_of(ts.theta_12, ts.theta_23), best.0);
        assert!((ts.theta_12 - (-PI / 3.0)).abs() <= w / 2.0 + 1e-9, "{}", ts.theta_12);
        assert!((ts.theta_23 - (-2.0 * PI / 3.0)).abs() <= w / 2.0 + 1e-9, "{}", ts.theta_23);
        // Every region spans at least the sensor-resolution minimum.
        assert!(ts.theta_12 - ts.theta_23 >= w - 1e-9);
    }

    #[test]
    fn select_thresholds_zero_field_default_partition() {
        let design = circle_design(0.070);
        let field = small_field(&design);
        let ts = select_thresholds(&field, PI / 6.0).unwrap();
        assert_relative_eq!(ts.theta_12, -PI / 2.0 + PI / 12.0);
        assert_relative_eq!(ts.theta_23, -PI / 2.0 - PI / 12.0);
    }

    #[test]
    fn reference_state2_boundary_in_forward_descent() {
        // The negativity-measure objective places the State-2 boundary on a
        // sensor-bin edge in the forward descent. For the bundled generated
        // design the optimum sits at -π/4 — 1.5 region widths from the -π/2
        // the hand-tuned prototype reportedly used; the closed stance simply
        // stops earning negative moment earlier on this contour.
        let design = reference_design();
        let field = build_moment_field(&design, 360, 28);
        let w = PI / 6.0;
        let ts = select_thresholds(&field, w).unwrap();
        assert!(
            ts.theta_12 <= -PI / 4.0 + 1e-9 && ts.theta_12 >= -PI / 2.0 - w,
            "θ12 = {}",
            ts.theta_12
        );
        assert!(ts.theta_23 < ts.theta_12);
        ts.validate(design.dphi_range()).unwrap();
    }

    #[test]
    fn reference_max_slope_near_rate_requirement() {
        // Stroke of 55° demanded within a third-of-revolution window.
        let design = reference_design();
        let field = build_moment_field(&design, 360, 28);
        let traj = optimal_trajectory(&field);
        let target = 55f64.to_radians() / (PI / 3.0);
        assert!(
            (traj.max_slope - target).abs() / target <= 0.2,
            "slope {} vs {target}",
            traj.max_slope
        );
    }

    #[test]
    fn refinement_changes_j_under_one_percent() {
        let design = reference_design();
        let coarse = build_moment_field(&design, 360, 28);
        let fine = build_moment_field(&design, 720, 56);
        let (j1c, j1f) = (eval_j1(&coarse), eval_j1(&fine));
        let (j2c, j2f) = (eval_j2(&coarse), eval_j2(&fine));
        assert!((j1f - j1c).abs() / j1f.abs() < 0.01, "J1 {j1c} vs {j1f}");
        assert!((j2f - j2c).abs() / j2f.abs() < 0.01, "J2 {j2c} vs {j2f}");
    }

    #[test]
    fn moment_arm_circle_centered_com_is_zero() {
        let design = circle_design(0.070);
        let (lo, hi) = design.dphi_range();
        for t in 0..10 {
            let theta = -PI + 2.0 * PI * t as f64 / 9.0;
            let dphi = lo + (hi - lo) * t as f64 / 9.0;
            for side in [Side::Front, Side::Rear] {
                let arm = moment_arm(&design, theta, dphi, side).unwrap();
                assert!(arm.abs() < 2e-6, "θ={theta:.2} δ={dphi:.2}: arm {arm}");
            }
        }
    }

    /// Survey candidate reference seeds; run manually with
    /// `cargo test -p rollgait-core seed_survey -- --ignored --nocapture`.
    #[test]
    #[ignore]
    fn seed_survey() {
        use crate::fixtures::{leg_rate_limit, LEG_MASS};
        use crate::geometry::{generate_leg, BodyParams};
        for (gy, gz) in [(0.013, -0.006), (0.014, -0.007), (0.015, -0.006)] {
            println!("--- com = ({gy}, {gz})");
            println!("seed    J1        J2     slope   arm(0,closed)  θ12      θ23     maxR");
            for seed in 0..120u64 {
                let mut body = BodyParams::nominal();
                body.com_offset = Vec2::new(gy, gz);
                let Ok(front) = generate_leg(seed, &body) else {
                    continue;
                };
                let design =
                    RobotDesign::new(body.clone(), front, LEG_MASS, leg_rate_limit()).unwrap();
                let field = build_moment_field(&design, 360, 28);
                let j1 = eval_j1(&field);
                let j2 = eval_j2(&field);
                let traj = optimal_trajectory(&field);
                let i0 = field.theta.iter().position(|&t| t.abs() < 0.01).unwrap();
                let j0 = nearest_index(&field.dphi, field.dphi[0]);
                let arm0 = field.combined_arm(i0, j0);
                let ts = select_thresholds(&field, PI / 6.0).unwrap();
                println!(
                    "{seed:4} {j1:9.4} {j2:7.3} {:7.3} {arm0:12.5} {:8.3} {:8.3} {:7.4}",
                    traj.max_slope,
                    ts.theta_12,
                    ts.theta_23,
                    design.max_leg_radius()
                );
            }
        }
    }

    #[test]
    fn contour_stays_consistent_with_leg_point() {
        // The field's contact heights must bound every contour node height.
        let design = reference_design();
        let field = build_moment_field(&design, 240, 24);
        let i = 60;
        let j = 10;
        let th = field.theta[i];
        let d = field.dphi[j];
        let leg = design.leg(Side::Front);
        for &phi in leg.phi.iter().step_by(16) {
            let p = leg_point_body(&design, Side::Front, d, phi).rotated(th);
            assert!(p.z >= field.z_front[i][j] - 1e-9);
        }
        let _ = Vec2::ZERO;
    }
}
