//! Linear time-invariant transfer-function blocks and the fixed-step clock.
//!
//! Every generator chain, the wind-unit converter lag and the redispatch
//! filters are built from three primitives:
//!
//! | kind | transfer function |
//! |------|-------------------|
//! | [`BlockKind::FirstOrderLag`] | `K / (1 + sT)` |
//! | [`BlockKind::Integrator`] | `K / s` |
//! | [`BlockKind::LeadLag`] | `K (1 + sT1) / (1 + sT2)` |
//!
//! Blocks are advanced with one classical RK4 step per call. The input over
//! the step is either held ([`LtiBlock::step`]) or interpolated linearly
//! between its start and end values ([`LtiBlock::advance`]); the latter is
//! what lets a cascade of blocks pass trajectories to each other without
//! losing an order of accuracy at every link.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Default integration step, seconds.
pub const DEFAULT_DT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockKind {
    FirstOrderLag {
        gain: f64,
        time_constant: f64,
    },
    Integrator {
        gain: f64,
    },
    /// `t_num` may be negative (non-minimum-phase stages such as a penstock)
    /// or larger than `t_den` (a lead).
    LeadLag {
        gain: f64,
        t_num: f64,
        t_den: f64,
    },
}

impl BlockKind {
    fn validate(&self) -> Result<()> {
        let finite = |v: f64, name: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be finite")))
            }
        };
        match *self {
            BlockKind::FirstOrderLag {
                gain,
                time_constant,
            } => {
                finite(gain, "lag gain")?;
                finite(time_constant, "lag time constant")?;
                if time_constant <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "lag time constant must be > 0, got {time_constant}"
                    )));
                }
            }
            BlockKind::Integrator { gain } => finite(gain, "integrator gain")?,
            BlockKind::LeadLag { gain, t_num, t_den } => {
                finite(gain, "lead-lag gain")?;
                finite(t_num, "lead-lag numerator time constant")?;
                finite(t_den, "lead-lag denominator time constant")?;
                if t_den <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "lead-lag denominator time constant must be > 0, got {t_den}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Steady-state gain, `None` for the integrator.
    pub fn dc_gain(&self) -> Option<f64> {
        match *self {
            BlockKind::FirstOrderLag { gain, .. } | BlockKind::LeadLag { gain, .. } => Some(gain),
            BlockKind::Integrator { .. } => None,
        }
    }

    /// State derivative for input `u`.
    #[inline]
    fn derivative(&self, x: f64, u: f64) -> f64 {
        match *self {
            BlockKind::FirstOrderLag {
                gain,
                time_constant,
            } => (gain * u - x) / time_constant,
            BlockKind::Integrator { gain } => gain * u,
            BlockKind::LeadLag { t_den, .. } => (u - x) / t_den,
        }
    }

    #[inline]
    fn output(&self, x: f64, u: f64) -> f64 {
        match *self {
            BlockKind::FirstOrderLag { .. } | BlockKind::Integrator { .. } => x,
            // Controllable canonical form with explicit feedthrough.
            BlockKind::LeadLag { gain, t_num, t_den } => {
                let ratio = t_num / t_den;
                gain * (ratio * u + (1.0 - ratio) * x)
            }
        }
    }
}

/// A single transfer-function block with its internal state.
#[derive(Debug, Clone, PartialEq)]
pub struct LtiBlock {
    kind: BlockKind,
    state: f64,
    output: f64,
}

impl LtiBlock {
    pub fn new(kind: BlockKind) -> Result<Self> {
        kind.validate()?;
        Ok(Self {
            kind,
            state: 0.0,
            output: 0.0,
        })
    }

    pub fn first_order_lag(gain: f64, time_constant: f64) -> Result<Self> {
        Self::new(BlockKind::FirstOrderLag {
            gain,
            time_constant,
        })
    }

    pub fn integrator(gain: f64) -> Result<Self> {
        Self::new(BlockKind::Integrator { gain })
    }

    pub fn lead_lag(gain: f64, t_num: f64, t_den: f64) -> Result<Self> {
        Self::new(BlockKind::LeadLag { gain, t_num, t_den })
    }

    pub fn kind(&self) -> &BlockKind {
        &self.kind
    }

    pub fn state(&self) -> f64 {
        self.state
    }

    pub fn output(&self) -> f64 {
        self.output
    }

    pub fn dc_gain(&self) -> Option<f64> {
        self.kind.dc_gain()
    }

    pub fn reset(&mut self) {
        self.state = 0.0;
        self.output = 0.0;
    }

    /// Places the block in equilibrium with a constant input `u`.
    /// For an integrator this only sets the output to its current state.
    pub fn settle_at(&mut self, u: f64) {
        self.state = match self.kind {
            BlockKind::FirstOrderLag { gain, .. } => gain * u,
            BlockKind::LeadLag { .. } => u,
            BlockKind::Integrator { .. } => self.state,
        };
        self.output = self.kind.output(self.state, u);
    }

    /// Overwrites the internal state. A lead-lag's output is taken at the
    /// equilibrium input for that state.
    pub fn set_state(&mut self, state: f64) {
        self.state = state;
        self.output = self.kind.output(state, state);
    }

    /// One RK4 step with the input held at `u`.
    pub fn step(&mut self, u: f64, dt: f64) -> Result<f64> {
        self.advance(u, u, dt)
    }

    /// One RK4 step with the input varying linearly from `u_start` to `u_end`
    /// across the step. Returns the new output.
    pub fn advance(&mut self, u_start: f64, u_end: f64, dt: f64) -> Result<f64> {
        ensure_finite(u_start, "transfer-function block")?;
        ensure_finite(u_end, "transfer-function block")?;
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "step must be > 0, got {dt}"
            )));
        }
        let u_mid = 0.5 * (u_start + u_end);
        let x = self.state;
        let k1 = self.kind.derivative(x, u_start);
        let k2 = self.kind.derivative(x + 0.5 * dt * k1, u_mid);
        let k3 = self.kind.derivative(x + 0.5 * dt * k2, u_mid);
        let k4 = self.kind.derivative(x + dt * k3, u_end);
        self.state = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        self.output = self.kind.output(self.state, u_end);
        Ok(self.output)
    }
}

/// Fixed-step simulation clock. Time is derived from the step count so it
/// never accumulates rounding drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimClock {
    dt: f64,
    step: u64,
}

impl SimClock {
    pub fn new(dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "step must be > 0, got {dt}"
            )));
        }
        Ok(Self { dt, step: 0 })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step_index(&self) -> u64 {
        self.step
    }

    pub fn t(&self) -> f64 {
        self.step as f64 * self.dt
    }

    pub fn tick(&mut self) -> f64 {
        self.step += 1;
        self.t()
    }

    /// Index of the grid point nearest to `time`.
    pub fn snap(&self, time: f64) -> u64 {
        (time / self.dt).round().max(0.0) as u64
    }
}
