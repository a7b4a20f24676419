//! Event-driven gait control.
//!
//! The outer loop runs at the sensor rate on the estimated body angle: a
//! finite state machine with three rolling states driven by quantized angle
//! regions, two recovery states for rollback and stall, and a time-scheduled
//! walking cycle. Mode changes latch and fire only in the upright standing
//! states. The inner loop is a per-leg PID on encoder angle producing a
//! signed PWM duty cycle; energy is charged at stall current whenever PWM is
//! on.

use crate::error::{Error, Result};
use crate::statics::ThresholdSet;
use crate::GRAVITY;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Walking,
    Rolling,
    /// Between modes: holding the target mode's entry stance until the body
    /// settles.
    Transition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum State {
    Roll1,
    Roll2,
    Roll3,
    Recover1,
    Recover2,
    WalkA,
    WalkB,
    WalkC,
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            State::Roll1 => "1",
            State::Roll2 => "2",
            State::Roll3 => "3",
            State::Recover1 => "R1",
            State::Recover2 => "R2",
            State::WalkA => "A",
            State::WalkB => "B",
            State::WalkC => "C",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reason {
    Rollback,
    Stall,
    Angle,
    Timer,
    ModeRequest,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Reason::Rollback => "rollback",
            Reason::Stall => "stall",
            Reason::Angle => "angle",
            Reason::Timer => "timer",
            Reason::ModeRequest => "mode_request",
        };
        f.write_str(s)
    }
}

/// One state-machine transition, formatted into the trace event column as
/// `STATE <from>-><to> reason=<reason>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitionEvent {
    pub from: State,
    pub to: State,
    pub reason: Reason,
}

impl fmt::Display for TransitionEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "STATE {}->{} reason={}", self.from, self.to, self.reason)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    /// Anti-windup bound on the integral term's contribution.
    pub i_clamp: f64,
}

impl Default for PidGains {
    /// Soft tracking tuned on the simulated servo: settles briskly from
    /// rest without overshoot, and lags gracefully at high body rates so the
    /// legs do not over-drive the rolling cycle.
    fn default() -> Self {
        PidGains {
            kp: 4.0,
            ki: 0.0,
            kd: 0.02,
            i_clamp: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PidState {
    pub gains: PidGains,
    pub integral: f64,
    pub prev_error: Option<f64>,
    pub output: f64,
}

impl PidState {
    pub fn new(gains: PidGains) -> Self {
        PidState {
            gains,
            integral: 0.0,
            prev_error: None,
            output: 0.0,
        }
    }

    pub fn reset(&mut self) {
        self.integral = 0.0;
        self.prev_error = None;
        self.output = 0.0;
    }
}

/// Standard PID with clamped integral and output saturated to [-1, 1]
/// (sign = direction, magnitude = PWM duty).
pub fn pid_update(pid: &mut PidState, target: f64, measured: f64, dt: f64) -> f64 {
    assert!(dt > 0.0, "pid dt must be positive");
    let g = pid.gains;
    let error = target - measured;
    pid.integral = (pid.integral + g.ki * error * dt).clamp(-g.i_clamp, g.i_clamp);
    let deriv = match pid.prev_error {
        Some(prev) => (error - prev) / dt,
        None => 0.0,
    };
    pid.prev_error = Some(error);
    pid.output = (g.kp * error + pid.integral + g.kd * deriv).clamp(-1.0, 1.0);
    pid.output
}

/// Battery and motor constants for the stall-current energy model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectricalParams {
    /// Supply voltage (V); two 3.7 V cells by default.
    pub voltage: f64,
    /// Motor stall current (A). Not a measured value; configuration.
    pub stall_current: f64,
}

impl Default for ElectricalParams {
    fn default() -> Self {
        ElectricalParams {
            voltage: 7.4,
            stall_current: 1.0,
        }
    }
}

/// Per-motor accumulated energy. Motors 0-1 drive the front leg pair, 2-3
/// the rear pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyLedger {
    pub per_motor: [f64; 4],
    pub electrical: ElectricalParams,
}

impl EnergyLedger {
    pub fn new(electrical: ElectricalParams) -> Self {
        EnergyLedger {
            per_motor: [0.0; 4],
            electrical,
        }
    }

    pub fn total(&self) -> f64 {
        self.per_motor.iter().sum()
    }
}

/// Charge each motor `d·V·i_stall·T` for one sampling period: the
/// conservative estimate that full stall current flows whenever PWM is on.
pub fn accumulate_energy(ledger: &mut EnergyLedger, duties: &[f64; 4], period: f64) -> Result<()> {
    if period < 0.0 {
        return Err(Error::InvalidParams("negative sampling period".into()));
    }
    if duties.iter().any(|d| *d < 0.0 || *d > 1.0) {
        return Err(Error::InvalidParams("duty cycles must be in [0, 1]".into()));
    }
    let e = ledger.electrical;
    for (acc, d) in ledger.per_motor.iter_mut().zip(duties) {
        *acc += d * e.voltage * e.stall_current * period;
    }
    Ok(())
}

/// Energy per unit weight per unit distance: ΣE / (m·g·D).
pub fn cost_of_transport(ledger: &EnergyLedger, mass: f64, distance: f64) -> Result<f64> {
    if distance <= 0.0 {
        return Err(Error::InvalidParams("distance must be positive".into()));
    }
    Ok(ledger.total() / (mass * GRAVITY * distance))
}

/// Dwell times for the time-scheduled walking cycle (s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkSchedule {
    pub dwell_a: f64,
    pub dwell_b: f64,
    pub dwell_c: f64,
}

impl Default for WalkSchedule {
    fn default() -> Self {
        WalkSchedule {
            dwell_a: 0.40,
            dwell_b: 0.30,
            dwell_c: 0.30,
        }
    }
}

impl WalkSchedule {
    pub fn cycle(&self) -> f64 {
        self.dwell_a + self.dwell_b + self.dwell_c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerConfig {
    pub thresholds: ThresholdSet,
    pub gains: PidGains,
    pub electrical: ElectricalParams,
    pub walk: WalkSchedule,
    /// Sensor quantization bin width (rad); rollback fires on a reversal of
    /// more than one bin.
    pub bin_width: f64,
    /// Sliding window for rollback detection (s).
    pub rollback_window: f64,
    /// Quantized angle unchanged for this long means a stall (s).
    pub stall_timeout: f64,
    /// Recovery dwell before re-evaluating (s).
    pub recovery_dwell: f64,
    /// Hard cap on time in a recovery state (s).
    pub recovery_max: f64,
    /// |θ| within this of π counts as near the junction (rad).
    pub near_pi_width: f64,
    /// |θ| below this counts as upright (rad).
    pub upright_width: f64,
}

impl ControllerConfig {
    pub fn new(thresholds: ThresholdSet) -> Self {
        ControllerConfig {
            thresholds,
            gains: PidGains::default(),
            electrical: ElectricalParams::default(),
            walk: WalkSchedule::default(),
            bin_width: PI / 6.0,
            rollback_window: 0.3,
            stall_timeout: 0.6,
            recovery_dwell: 0.3,
            recovery_max: 2.0,
            near_pi_width: PI / 6.0,
            upright_width: PI / 6.0,
        }
    }
}

/// Acknowledgement for a mode-change request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeAck {
    /// Fired immediately (controller was in an upright standing state).
    Immediate,
    /// Latched; fires at the next State A or upright State 1.
    Latched,
    /// Already in the requested mode.
    NoOp,
}

/// Output of one controller decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlUpdate {
    pub front_target: f64,
    pub rear_target: f64,
    pub event: Option<TransitionEvent>,
}

/// Inputs the rolling state machine decides on; factored out so the
/// transition relation is an enumerable pure function.
#[derive(Debug, Clone, Copy)]
pub struct RollInputs {
    /// Region of the wrapped angle: 1, 2, or 3.
    pub region: u8,
    pub near_pi: bool,
    pub upright: bool,
    /// Wrapped angle within ±π/2 of upright (the kick zone for recovery 1).
    pub front_half: bool,
    /// Body near-stationary over the detection window; recovery kicks only
    /// fire from a crawl, never against fast motion.
    pub slow: bool,
    pub rollback: bool,
    pub stalled: bool,
    /// Recovery dwell elapsed.
    pub dwell_done: bool,
    /// Recovery hard cap elapsed.
    pub dwell_capped: bool,
}

/// The rolling transition relation. Total: every (state, inputs) pair maps
/// to exactly one outcome.
///
/// Rollbacks while descending close both legs (state 1 brakes the backward
/// spin); the rear-leg kick of recovery 1 fires only from a near-upright
/// reversal or from a detected standstill, where re-initiation is needed.
pub fn next_roll_state(state: State, inp: RollInputs) -> Option<(State, Reason)> {
    match state {
        State::Roll1 => {
            if inp.rollback && inp.front_half && inp.slow {
                // Only a slow near-upright reversal earns the rear-leg
                // kick; fast reversals ride the ordinary region logic,
                // whose alternating stances bleed the backward momentum.
                Some((State::Recover1, Reason::Rollback))
            } else if inp.stalled {
                Some((State::Recover1, Reason::Stall))
            } else if inp.region == 2 {
                Some((State::Roll2, Reason::Angle))
            } else if inp.region == 3 {
                Some((State::Roll3, Reason::Angle))
            } else {
                None
            }
        }
        State::Roll2 => {
            if inp.rollback || inp.region == 1 {
                Some((State::Roll1, Reason::Rollback))
            } else if inp.stalled {
                Some((State::Recover1, Reason::Stall))
            } else if inp.region == 3 {
                Some((State::Roll3, Reason::Angle))
            } else {
                None
            }
        }
        State::Roll3 => {
            if inp.region == 1 {
                // Crossed the junction; close both legs and restart the cycle.
                Some((State::Roll1, Reason::Angle))
            } else if inp.rollback || inp.region == 2 {
                Some((State::Roll1, Reason::Rollback))
            } else if inp.stalled {
                Some((State::Recover2, Reason::Stall))
            } else {
                None
            }
        }
        State::Recover1 => {
            if inp.dwell_done && inp.near_pi {
                // The kick carried the body over the junction backward;
                // re-enter the open-leg state to roll down the front side.
                Some((State::Roll3, Reason::Angle))
            } else if inp.dwell_done && inp.region == 1 {
                Some((State::Roll1, Reason::Angle))
            } else if inp.dwell_capped {
                Some((State::Roll1, Reason::Timer))
            } else {
                None
            }
        }
        State::Recover2 => {
            if inp.dwell_done {
                if inp.near_pi {
                    Some((State::Roll3, Reason::Angle))
                } else {
                    Some((State::Roll1, Reason::Angle))
                }
            } else {
                None
            }
        }
        // Walking states never appear in rolling mode.
        _ => None,
    }
}

/// The gait controller: mode, discrete state, detectors, and per-leg PID.
#[derive(Debug, Clone)]
pub struct GaitController {
    pub cfg: ControllerConfig,
    pub mode: Mode,
    pub state: State,
    pub pid_front: PidState,
    pub pid_rear: PidState,
    /// Target mode while in transition / latched request.
    transition_to: Option<Mode>,
    pending_mode: Option<Mode>,
    /// Unwrapped sensed angle continuation.
    theta_u: Option<f64>,
    /// (t, unwrapped quantized angle) history for rollback/stall detection.
    history: VecDeque<(f64, f64)>,
    state_entry_t: f64,
    /// Start of the current progress stretch; reset at recovery boundaries
    /// and mode changes, not at ordinary state transitions, so stalls that
    /// straddle state churn are still seen.
    progress_anchor_t: f64,
    walk_anchor: f64,
    targets: (f64, f64),
}

impl GaitController {
    pub fn new(cfg: ControllerConfig, mode: Mode, t0: f64) -> Self {
        let state = match mode {
            Mode::Walking => State::WalkA,
            _ => State::Roll1,
        };
        let mut ctrl = GaitController {
            pid_front: PidState::new(cfg.gains),
            pid_rear: PidState::new(cfg.gains),
            cfg,
            mode,
            state,
            transition_to: None,
            pending_mode: None,
            theta_u: None,
            history: VecDeque::new(),
            state_entry_t: t0,
            progress_anchor_t: t0,
            walk_anchor: t0,
            targets: (0.0, 0.0),
        };
        ctrl.targets = ctrl.state_targets(ctrl.state);
        ctrl
    }

    pub fn targets(&self) -> (f64, f64) {
        self.targets
    }

    fn region_of(&self, theta_wrapped: f64) -> u8 {
        if theta_wrapped > self.cfg.thresholds.theta_12 {
            1
        } else if theta_wrapped > self.cfg.thresholds.theta_23 {
            2
        } else {
            3
        }
    }

    fn state_targets(&self, state: State) -> (f64, f64) {
        let l = self.cfg.thresholds.levels;
        match state {
            State::Roll1 => (l.closed, l.closed),
            State::Roll2 => (l.mid, l.closed),
            State::Roll3 => (l.open, l.open),
            // Close the front, kick/keep the rear open to re-initiate roll.
            State::Recover1 | State::Recover2 => (l.closed, l.open),
            State::WalkA => (l.open, l.open),
            State::WalkB => (l.open, l.closed),
            State::WalkC => (l.mid, l.closed),
        }
    }

    fn enter(&mut self, to: State, reason: Reason, t: f64) -> TransitionEvent {
        let ev = TransitionEvent {
            from: self.state,
            to,
            reason,
        };
        let recovery = |s: State| matches!(s, State::Recover1 | State::Recover2);
        // Detector history survives ordinary rolling transitions so that a
        // stall spanning a state see-saw is still caught; recovery
        // boundaries and mode changes start a fresh progress stretch.
        if recovery(self.state) || recovery(to) || reason == Reason::ModeRequest {
            self.history.clear();
            self.progress_anchor_t = t;
        }
        self.state = to;
        self.state_entry_t = t;
        self.targets = self.state_targets(to);
        ev
    }

    /// Latch (or immediately execute) a mode change; fires only in State A
    /// or upright State 1.
    pub fn request_mode_change(&mut self, target: Mode, theta_hat: f64, t: f64) -> ModeAck {
        if target == self.mode || (self.mode == Mode::Transition && self.transition_to == Some(target))
        {
            return ModeAck::NoOp;
        }
        self.pending_mode = Some(target);
        if self.try_fire_pending(theta_hat, t).is_some() {
            ModeAck::Immediate
        } else {
            ModeAck::Latched
        }
    }

    fn try_fire_pending(&mut self, theta_hat: f64, t: f64) -> Option<TransitionEvent> {
        let target = self.pending_mode?;
        let standing = match (self.mode, self.state) {
            (Mode::Walking, State::WalkA) => true,
            // Leaving the rolling gait requires State 1 at crawl speed; a
            // spinning body sweeps through every angle and must coast down
            // first. Opening into the standing stance rights the body
            // during the transition's settling phase.
            (Mode::Rolling, State::Roll1) => self.detector_inputs(theta_hat, t).slow,
            _ => false,
        };
        if !standing {
            return None;
        }
        self.pending_mode = None;
        self.transition_to = Some(target);
        self.mode = Mode::Transition;
        let to = match target {
            Mode::Walking => State::WalkA,
            _ => State::Roll1,
        };
        Some(self.enter(to, Reason::ModeRequest, t))
    }

    /// One sensor-rate decision. `theta_hat` is the (wrapped, quantized)
    /// sensed body angle; `settled` reports whether the legs have reached
    /// their targets with the body at rest, which completes transitions.
    pub fn update(&mut self, theta_hat: f64, t: f64, settled: bool) -> ControlUpdate {
        // Maintain the unwrapped continuation and detector history.
        let theta_u = match self.theta_u {
            None => theta_hat,
            Some(prev) => prev + crate::vec2::wrap_angle(theta_hat - prev),
        };
        self.theta_u = Some(theta_u);
        self.history.push_back((t, theta_u));
        let keep = self.cfg.rollback_window.max(self.cfg.stall_timeout) + 1.0;
        while let Some(&(t0, _)) = self.history.front() {
            if t - t0 > keep {
                self.history.pop_front();
            } else {
                break;
            }
        }

        let mut event = self.try_fire_pending(theta_hat, t);

        match self.mode {
            Mode::Transition => {
                if settled {
                    self.mode = self.transition_to.take().unwrap_or(Mode::Rolling);
                    if self.mode == Mode::Walking {
                        self.walk_anchor = t;
                    }
                    self.state_entry_t = t;
                    self.history.clear();
                }
            }
            Mode::Rolling => {
                let ev = self.rolling_step(theta_hat, t);
                event = event.or(ev);
            }
            Mode::Walking => {
                let ev = self.walking_step(t);
                event = event.or(ev);
            }
        }

        ControlUpdate {
            front_target: self.targets.0,
            rear_target: self.targets.1,
            event,
        }
    }

    fn detector_inputs(&self, theta_hat: f64, t: f64) -> RollInputs {
        let bin = self.cfg.bin_width;
        let quant = |x: f64| (x / bin).round() * bin;
        let now_q = quant(self.theta_u.unwrap_or(theta_hat));

        let mut min_q = now_q;
        let mut oldest_q = None;
        let mut stall_min = now_q;
        let mut stall_max = now_q;
        for &(ti, th) in self.history.iter() {
            let q = quant(th);
            if t - ti <= self.cfg.rollback_window {
                min_q = min_q.min(q);
            }
            if t - ti <= self.cfg.stall_timeout {
                if oldest_q.is_none() {
                    oldest_q = Some(q);
                }
                stall_min = stall_min.min(q);
                stall_max = stall_max.max(q);
            }
        }
        let oldest_q = oldest_q.unwrap_or(now_q);
        // Reversal of strictly more than one quantization bin against the
        // rolling direction within the window.
        let rollback = now_q - min_q > bin + 1e-9;
        // Crawling: total quantized sweep over the window stays within two
        // bins, so a fresh small reversal still counts but a fast rotation
        // does not.
        let mut win_min = now_q;
        let mut win_max = now_q;
        for &(ti, th) in self.history.iter() {
            if t - ti <= self.cfg.rollback_window {
                let q = quant(th);
                win_min = win_min.min(q);
                win_max = win_max.max(q);
            }
        }
        let slow = win_max - win_min <= 2.0 * bin + 1e-9;
        // A stall is a genuine standstill: no net quantized progress in
        // either direction and at most edge dither over the stall window.
        let in_stretch = t - self.progress_anchor_t;
        let in_state = t - self.state_entry_t;
        let stalled = in_stretch >= self.cfg.stall_timeout
            && (oldest_q - now_q).abs() < 0.5 * bin
            && stall_max - stall_min <= bin + 1e-9;

        RollInputs {
            region: self.region_of(theta_hat),
            near_pi: theta_hat.abs() >= PI - self.cfg.near_pi_width,
            upright: theta_hat.abs() <= self.cfg.upright_width,
            front_half: theta_hat.abs() <= std::f64::consts::FRAC_PI_2,
            slow,
            rollback,
            stalled,
            dwell_done: in_state >= self.cfg.recovery_dwell,
            dwell_capped: in_state >= self.cfg.recovery_max,
        }
    }

    /// Rolling-mode decision: emits per-leg targets for the PID loop.
    ///
    /// While a mode change is latched the cycle stops pumping: the
    /// controller holds the closed stance (recoveries still run) and coasts
    /// down until the pending change can fire at a slow upright passage.
    pub fn rolling_step(&mut self, theta_hat: f64, t: f64) -> Option<TransitionEvent> {
        let inp = self.detector_inputs(theta_hat, t);
        let next = next_roll_state(self.state, inp).filter(|(to, _)| {
            self.pending_mode.is_none() || !matches!(to, State::Roll2 | State::Roll3)
        });
        next.map(|(to, reason)| self.enter(to, reason, t))
    }

    /// Walking-mode decision: fixed A→B→C cycle on the configured schedule.
    pub fn walking_step(&mut self, t: f64) -> Option<TransitionEvent> {
        let w = self.cfg.walk;
        let phase = (t - self.walk_anchor).rem_euclid(w.cycle());
        let want = if phase < w.dwell_a {
            State::WalkA
        } else if phase < w.dwell_a + w.dwell_b {
            State::WalkB
        } else {
            State::WalkC
        };
        if want != self.state {
            Some(self.enter(want, Reason::Timer, t))
        } else {
            None
        }
    }

    /// Inner-loop PID for both legs; returns signed duty cycles.
    pub fn servo_duties(&mut self, front_angle: f64, rear_angle: f64, dt: f64) -> (f64, f64) {
        let df = pid_update(&mut self.pid_front, self.targets.0, front_angle, dt);
        let dr = pid_update(&mut self.pid_rear, self.targets.1, rear_angle, dt);
        (df, dr)
    }
}
