//! Grid dynamic equivalent: swing-equation frequency and the balanced
//! three-phase voltage it drives.
//!
//! State is `(delta_omega, integ, theta)` with
//!
//! ```text
//! 2H d(delta_omega)/dt = (p_g - p_l) - D_u delta_omega - integ
//!    d(integ)/dt       = K_rest delta_omega
//!    d(theta)/dt       = (1 + delta_omega) 2 pi f0
//! ```
//!
//! advanced together with one RK4 step per call.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GdeParams {
    /// Equivalent inertia constant H, seconds.
    pub inertia: f64,
    /// Damping D_u, pu power per pu frequency.
    pub damping: f64,
    /// Gain of the stabilizing integrator on the frequency deviation, 1/s.
    /// Zero disables it.
    pub k_rest: f64,
    /// Nominal frequency, Hz.
    pub f0: f64,
    /// Voltage amplitude, pu.
    pub voltage: f64,
}

/// Stabilizing-integrator gain of a standalone equivalent, 1/s.
pub const STANDALONE_K_REST: f64 = 0.5;

/// Equivalent of an area that runs its own secondary control: the
/// stabilizing integrator is off (`k_rest = 0`), otherwise it would take an
/// undetermined share of every steady-state correction.
impl Default for GdeParams {
    fn default() -> Self {
        Self {
            inertia: 5.0,
            damping: 1.0,
            k_rest: 0.0,
            f0: 50.0,
            voltage: 1.0,
        }
    }
}

impl GdeParams {
    /// Equivalent of the rest of the system with its own secondary control
    /// folded into the stabilizing integrator.
    pub fn standalone() -> Self {
        Self {
            k_rest: STANDALONE_K_REST,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.inertia > 0.0
            && self.damping >= 0.0
            && self.k_rest >= 0.0
            && self.f0 > 0.0
            && self.voltage > 0.0
            && [
                self.inertia,
                self.damping,
                self.k_rest,
                self.f0,
                self.voltage,
            ]
            .iter()
            .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "grid equivalent needs H > 0, D_u >= 0, K_rest >= 0, f0 > 0, V > 0 (got {self:?})"
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gde {
    params: GdeParams,
    delta_omega: f64,
    integ: f64,
    /// Unwrapped electrical angle, rad.
    theta: f64,
}

impl Gde {
    pub fn new(params: GdeParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            delta_omega: 0.0,
            integ: 0.0,
            theta: 0.0,
        })
    }

    pub fn params(&self) -> &GdeParams {
        &self.params
    }

    /// Per-unit frequency, 1.0 at nominal.
    pub fn omega(&self) -> f64 {
        1.0 + self.delta_omega
    }

    pub fn delta_omega(&self) -> f64 {
        self.delta_omega
    }

    /// Frequency deviation in Hz.
    pub fn delta_f_hz(&self) -> f64 {
        self.delta_omega * self.params.f0
    }

    pub fn integrator_state(&self) -> f64 {
        self.integ
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Angle wrapped to `[0, 2pi)`.
    pub fn theta_wrapped(&self) -> f64 {
        self.theta.rem_euclid(TAU)
    }

    pub fn voltage(&self) -> f64 {
        self.params.voltage
    }

    /// Phase voltages `(Va, Vb, Vc)` at the current angle.
    pub fn three_phase(&self) -> (f64, f64, f64) {
        synthesize_three_phase(self.params.voltage, self.theta)
    }

    /// Advances one step under constant produced power `p_g` and load `p_l`
    /// (pu) and returns the per-unit frequency.
    pub fn step(&mut self, p_g: f64, p_l: f64, dt: f64) -> Result<f64> {
        ensure_finite(p_g, "grid equivalent generation")?;
        ensure_finite(p_l, "grid equivalent load")?;
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "step must be > 0, got {dt}"
            )));
        }
        let GdeParams {
            inertia,
            damping,
            k_rest,
            f0,
            ..
        } = self.params;
        let imbalance = p_g - p_l;
        let omega_base = TAU * f0;
        let f = |w: f64, i: f64| {
            (
                (imbalance - damping * w - i) / (2.0 * inertia),
                k_rest * w,
                (1.0 + w) * omega_base,
            )
        };

        let (w0, i0) = (self.delta_omega, self.integ);
        let k1 = f(w0, i0);
        let k2 = f(w0 + 0.5 * dt * k1.0, i0 + 0.5 * dt * k1.1);
        let k3 = f(w0 + 0.5 * dt * k2.0, i0 + 0.5 * dt * k2.1);
        let k4 = f(w0 + dt * k3.0, i0 + dt * k3.1);
        let h = dt / 6.0;
        self.delta_omega = w0 + h * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        self.integ = i0 + h * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        self.theta += h * (k1.2 + 2.0 * k2.2 + 2.0 * k3.2 + k4.2);

        ensure_finite(self.delta_omega, "grid equivalent frequency")?;
        Ok(self.omega())
    }
}

/// Balanced three-phase set `V sin(theta)`, `V sin(theta - 2pi/3)`,
/// `V sin(theta + 2pi/3)`.
pub fn synthesize_three_phase(voltage: f64, theta: f64) -> (f64, f64, f64) {
    let shift = 2.0 * PI / 3.0;
    (
        voltage * theta.sin(),
        voltage * (theta - shift).sin(),
        voltage * (theta + shift).sin(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gde(inertia: f64, damping: f64, k_rest: f64) -> Gde {
        Gde::new(GdeParams {
            inertia,
            damping,
            k_rest,
            ..GdeParams::default()
        })
        .unwrap()
    }

    #[test]
    fn equilibrium_is_exact() {
        let mut g = Gde::new(GdeParams::standalone()).unwrap();
        for _ in 0..10_000 {
            assert_eq!(g.step(0.3, 0.3, 0.01).unwrap(), 1.0);
        }
    }

    #[test]
    fn pure_inertia_ramp() {
        let mut g = gde(5.0, 0.0, 0.0);
        for _ in 0..100 {
            g.step(0.02, 0.0, 0.01).unwrap();
        }
        assert!((g.delta_omega() - 0.002).abs() < 1e-6);
    }

    #[test]
    fn damping_sets_steady_deviation() {
        let mut g = gde(5.0, 1.0, 0.0);
        for _ in 0..20_000 {
            g.step(0.01, 0.0, 0.01).unwrap();
        }
        assert!((g.delta_omega() - 0.01).abs() < 1e-6);
    }

    #[test]
    fn deficit_decreases_frequency_monotonically() {
        let mut g = gde(5.0, 0.0, 0.0);
        let mut last = g.omega();
        for _ in 0..1000 {
            let w = g.step(0.0, 0.05, 0.01).unwrap();
            assert!(w < last);
            last = w;
        }
    }

    #[test]
    fn stabilizing_integrator_rejects_imbalance() {
        // 2H s^2 + D_u s + K_rest is underdamped here; its envelope decays at
        // D_u / 4H, so five envelope time constants are 20H / D_u seconds.
        let (h, d) = (5.0, 1.0);
        let mut g = gde(h, d, 0.5);
        let dt = 0.01;
        let n = ((20.0 * h / d) / dt) as usize;
        let mut peak = 0.0f64;
        for _ in 0..n {
            g.step(0.0, 0.01, dt).unwrap();
            peak = peak.max(g.delta_omega().abs());
        }
        assert!(peak > 1e-3);
        assert!(g.delta_omega().abs() < 1e-4, "{}", g.delta_omega());
    }

    #[test]
    fn angle_advances_at_nominal_rate() {
        let mut g = Gde::new(GdeParams::default()).unwrap();
        for _ in 0..100 {
            g.step(0.0, 0.0, 0.01).unwrap();
        }
        assert!((g.theta() - TAU * 50.0).abs() < 1e-9);
        assert!(g.theta_wrapped() < 1e-6 || (TAU - g.theta_wrapped()) < 1e-6);
    }

    #[test]
    fn three_phase_reference_points() {
        let (a, b, c) = synthesize_three_phase(1.0, 0.0);
        assert!(
            a.abs() < 1e-9
                && (b + 0.866_025_403_8).abs() < 1e-9
                && (c - 0.866_025_403_8).abs() < 1e-9
        );
        let (a, b, c) = synthesize_three_phase(1.0, PI / 2.0);
        assert!((a - 1.0).abs() < 1e-9 && (b + 0.5).abs() < 1e-9 && (c + 0.5).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_params_and_inputs() {
        assert!(Gde::new(GdeParams {
            inertia: 0.0,
            ..GdeParams::default()
        })
        .is_err());
        assert!(Gde::new(GdeParams {
            damping: -1.0,
            ..GdeParams::default()
        })
        .is_err());
        assert!(Gde::new(GdeParams {
            voltage: 0.0,
            ..GdeParams::default()
        })
        .is_err());
        let mut g = Gde::new(GdeParams::default()).unwrap();
        assert!(g.step(f64::NAN, 0.0, 0.01).is_err());
    }
}
