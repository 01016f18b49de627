//! Classic equivalent generators: droop plus a governor-turbine chain.
//!
//! The governor reference is `sfc_command - delta_f / R`; it is passed through
//! the chain and the chain's output is the incremental mechanical power in pu.

use serde::{Deserialize, Serialize};

use crate::blocks::{BlockKind, LtiBlock};
use crate::error::{ensure_finite, Error, Result};

/// Default droop for every technology, Hz per pu.
pub const DEFAULT_DROOP: f64 = 2.4;
/// Default secondary-control participation factor of a classic unit.
pub const DEFAULT_PARTICIPATION: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Technology {
    Thermal,
    Hydro,
    Gas,
}

impl Technology {
    pub const ALL: [Technology; 3] = [Technology::Thermal, Technology::Hydro, Technology::Gas];

    pub fn name(self) -> &'static str {
        match self {
            Technology::Thermal => "thermal",
            Technology::Hydro => "hydro",
            Technology::Gas => "gas",
        }
    }

    /// Standard load-frequency-control chain for the technology.
    pub fn default_chain(self) -> Vec<BlockKind> {
        use BlockKind::*;
        match self {
            // governor, reheat, turbine
            Technology::Thermal => vec![
                FirstOrderLag {
                    gain: 1.0,
                    time_constant: 0.08,
                },
                LeadLag {
                    gain: 1.0,
                    t_num: 2.5,
                    t_den: 10.0,
                },
                FirstOrderLag {
                    gain: 1.0,
                    time_constant: 0.3,
                },
            ],
            // governor, transient droop, penstock
            Technology::Hydro => vec![
                FirstOrderLag {
                    gain: 1.0,
                    time_constant: 0.2,
                },
                LeadLag {
                    gain: 1.0,
                    t_num: 5.0,
                    t_den: 25.0,
                },
                LeadLag {
                    gain: 1.0,
                    t_num: -1.0,
                    t_den: 0.5,
                },
            ],
            // valve positioner, fuel system, combustor/turbine
            Technology::Gas => vec![
                FirstOrderLag {
                    gain: 1.0,
                    time_constant: 0.05,
                },
                LeadLag {
                    gain: 1.0,
                    t_num: 0.6,
                    t_den: 1.0,
                },
                FirstOrderLag {
                    gain: 1.0,
                    time_constant: 0.4,
                },
            ],
        }
    }
}

impl std::fmt::Display for Technology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.name())
    }
}

/// Output band for the incremental power, pu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputLimits {
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone)]
pub struct GeneratorUnit {
    pub id: String,
    pub tech: Technology,
    /// Droop R, Hz per pu.
    pub droop: f64,
    pub participation: f64,
    pub rated_power_mw: f64,
    pub limits: Option<OutputLimits>,
    /// Generation rate constraint, pu/s.
    pub ramp_limit: Option<f64>,
    chain: Vec<LtiBlock>,
    p_mech_delta: f64,
}

impl GeneratorUnit {
    pub fn new(
        id: impl Into<String>,
        tech: Technology,
        droop: f64,
        participation: f64,
        chain: &[BlockKind],
    ) -> Result<Self> {
        if !(droop > 0.0) || !droop.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "droop must be > 0, got {droop}"
            )));
        }
        if !(0.0..=1.0).contains(&participation) {
            return Err(Error::InvalidParameter(format!(
                "participation factor must lie in [0, 1], got {participation}"
            )));
        }
        if chain.is_empty() {
            return Err(Error::InvalidParameter(
                "governor-turbine chain is empty".into(),
            ));
        }
        let chain = chain
            .iter()
            .map(|k| LtiBlock::new(*k))
            .collect::<Result<Vec<_>>>()?;
        if chain.iter().any(|b| b.dc_gain().is_none()) {
            return Err(Error::InvalidParameter(
                "governor-turbine chain must not contain a pure integrator".into(),
            ));
        }
        Ok(Self {
            id: id.into(),
            tech,
            droop,
            participation,
            rated_power_mw: 100.0,
            limits: None,
            ramp_limit: None,
            chain,
            p_mech_delta: 0.0,
        })
    }

    /// Canonical unit of the given technology: standard chain, R = 2.4 Hz/pu,
    /// participation factor 0.3.
    pub fn default_unit(tech: Technology) -> Self {
        Self::new(
            tech.name(),
            tech,
            DEFAULT_DROOP,
            DEFAULT_PARTICIPATION,
            &tech.default_chain(),
        )
        .expect("default chain parameters are valid")
    }

    pub fn with_limits(mut self, limits: OutputLimits) -> Self {
        self.limits = Some(limits);
        self
    }

    pub fn with_ramp_limit(mut self, pu_per_s: f64) -> Self {
        self.ramp_limit = Some(pu_per_s);
        self
    }

    pub fn chain(&self) -> &[LtiBlock] {
        &self.chain
    }

    pub fn chain_dc_gain(&self) -> f64 {
        self.chain.iter().filter_map(LtiBlock::dc_gain).product()
    }

    /// Incremental mechanical power, pu.
    pub fn p_mech_delta(&self) -> f64 {
        self.p_mech_delta
    }

    /// Advances the unit by one step and returns the new incremental
    /// mechanical power in pu.
    pub fn step(&mut self, delta_f_hz: f64, sfc_command: f64, dt: f64) -> Result<f64> {
        ensure_finite(delta_f_hz, &format!("generator `{}` frequency", self.id))?;
        ensure_finite(sfc_command, &format!("generator `{}` command", self.id))?;

        let reference = sfc_command - delta_f_hz / self.droop;
        // The external reference is held over the step; downstream blocks see
        // their upstream neighbour's trajectory interpolated across it.
        let mut u_start = reference;
        let mut u_end = reference;
        for block in &mut self.chain {
            let out_start = block.output();
            let out_end = block.advance(u_start, u_end, dt)?;
            u_start = out_start;
            u_end = out_end;
        }

        let mut p = u_end;
        if let Some(rate) = self.ramp_limit {
            let max_step = rate * dt;
            p = p.clamp(self.p_mech_delta - max_step, self.p_mech_delta + max_step);
        }
        if let Some(lim) = self.limits {
            p = p.clamp(lim.min, lim.max);
        }
        ensure_finite(p, &format!("generator `{}` output", self.id))?;
        self.p_mech_delta = p;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settle(unit: &mut GeneratorUnit, df: f64, cmd: f64, seconds: f64) -> f64 {
        let dt = 0.01;
        let mut p = 0.0;
        for _ in 0..(seconds / dt).round() as usize {
            p = unit.step(df, cmd, dt).unwrap();
        }
        p
    }

    #[test]
    fn zero_inputs_stay_at_zero() {
        for tech in Technology::ALL {
            let mut u = GeneratorUnit::default_unit(tech);
            assert_eq!(settle(&mut u, 0.0, 0.0, 30.0), 0.0);
        }
    }

    #[test]
    fn thermal_droop_response() {
        let mut u = GeneratorUnit::default_unit(Technology::Thermal);
        let p = settle(&mut u, -0.1, 0.0, 120.0);
        assert!((p - 0.1 / 2.4).abs() < 1e-4, "{p}");
    }

    #[test]
    fn command_tracked_in_steady_state() {
        for tech in Technology::ALL {
            let mut u = GeneratorUnit::default_unit(tech);
            let p = settle(&mut u, 0.0, 0.054, 200.0);
            assert!((p - 0.054).abs() < 1e-4, "{tech}: {p}");
        }
    }

    #[test]
    fn all_techs_settle_to_command() {
        // The slowest open-loop pole is the 25 s hydro transient droop:
        // 0.8 e^{-t/25} < 1e-3 needs t > 167 s.
        let c = 0.05;
        for tech in Technology::ALL {
            let mut u = GeneratorUnit::default_unit(tech);
            let p = settle(&mut u, 0.0, c, 200.0);
            assert!((p - c).abs() < 1e-3 * c, "{tech}: {p}");
        }
        let mut gas = GeneratorUnit::default_unit(Technology::Gas);
        let p = settle(&mut gas, 0.0, c, 60.0);
        assert!((p - c).abs() < 1e-3 * c, "gas: {p}");
    }

    #[test]
    fn default_units() {
        for tech in Technology::ALL {
            let u = GeneratorUnit::default_unit(tech);
            assert_eq!(u.participation, 0.3);
            assert_eq!(u.droop, 2.4);
            assert!((u.chain_dc_gain() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn hydro_initial_reverse_response() {
        let mut u = GeneratorUnit::default_unit(Technology::Hydro);
        let dt = 0.01;
        let early: Vec<f64> = (0..50).map(|_| u.step(0.0, 1.0, dt).unwrap()).collect();
        assert!(early.iter().all(|p| *p < 0.0), "{early:?}");
        assert!(settle(&mut u, 0.0, 1.0, 200.0) > 0.99);
    }

    #[test]
    fn limits_and_ramp() {
        let mut u = GeneratorUnit::default_unit(Technology::Gas).with_limits(OutputLimits {
            min: -0.02,
            max: 0.02,
        });
        assert!((settle(&mut u, 0.0, 0.05, 60.0) - 0.02).abs() < 1e-15);

        let mut u = GeneratorUnit::default_unit(Technology::Gas).with_ramp_limit(0.001);
        let p = settle(&mut u, 0.0, 0.05, 10.0);
        assert!(p <= 0.01 + 1e-12, "{p}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut u = GeneratorUnit::default_unit(Technology::Thermal);
        assert!(u.step(f64::NAN, 0.0, 0.01).is_err());
        assert!(u.step(0.0, f64::INFINITY, 0.01).is_err());
        let chain = Technology::Thermal.default_chain();
        assert!(GeneratorUnit::new("x", Technology::Thermal, 0.0, 0.3, &chain).is_err());
        assert!(GeneratorUnit::new("x", Technology::Thermal, 2.4, 1.1, &chain).is_err());
        assert!(GeneratorUnit::new("x", Technology::Thermal, 2.4, 0.3, &[]).is_err());
    }
}
