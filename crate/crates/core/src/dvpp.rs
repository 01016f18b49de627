//! Dynamic virtual power plant: deloaded wind units and the internal
//! redispatch that splits the plant's secondary-control command among them.
//!
//! Each unit's share is its measured output over the plant total,
//! low-pass filtered (`1 / (1 + 4s)` by default) so the redistribution stays
//! slower than primary response and faster than the secondary loop.

use crate::blocks::LtiBlock;
use crate::error::{ensure_finite, Error, Result};

pub const DEFAULT_FILTER_T: f64 = 4.0;
pub const DEFAULT_RESPONSE_T: f64 = 0.5;
/// Bus rms voltage held during a fault on the unit's bus, pu.
pub const DEFAULT_FAULT_SAG: f64 = 0.1;

/// `D_i = P_i / sum(P)`. All zeros when the plant produces nothing.
pub fn compute_participation_factors(powers: &[f64]) -> Result<Vec<f64>> {
    if let Some(p) = powers.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "unit powers must be finite and >= 0, got {p}"
        )));
    }
    let total: f64 = powers.iter().sum();
    if total > 0.0 {
        Ok(powers.iter().map(|p| p / total).collect())
    } else {
        Ok(vec![0.0; powers.len()])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct FaultState {
    ceiling: f64,
    voltage_sag: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindUnit {
    pub id: String,
    /// Rated power, MW.
    pub p_rated: f64,
    /// Scheduled (deloaded) operating point, MW.
    pub p_deload: f64,
    /// Natural-resource ceiling, MW.
    pub p_available: f64,
    /// Converter-level response time constant, s.
    pub response_t: f64,
    online: bool,
    lag: LtiBlock,
    p_out: f64,
    fault: Option<FaultState>,
}

impl WindUnit {
    /// A unit running at its deloaded point.
    pub fn new(
        id: impl Into<String>,
        p_rated: f64,
        p_deload: f64,
        p_available: f64,
        response_t: f64,
    ) -> Result<Self> {
        let id = id.into();
        let finite = [p_rated, p_deload, p_available, response_t]
            .iter()
            .all(|v| v.is_finite());
        if !finite || p_rated <= 0.0 || p_deload < 0.0 || p_available < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "wind unit `{id}`: powers must be finite, rated > 0, deload and available >= 0"
            )));
        }
        if p_deload > p_rated {
            return Err(Error::InvalidParameter(format!(
                "wind unit `{id}`: deload point {p_deload} MW exceeds rating {p_rated} MW"
            )));
        }
        if p_available < p_deload {
            return Err(Error::InvalidParameter(format!(
                "wind unit `{id}`: available power {p_available} MW below deload point {p_deload} MW"
            )));
        }
        let mut lag = LtiBlock::first_order_lag(1.0, response_t)?;
        lag.settle_at(p_deload);
        Ok(Self {
            id,
            p_rated,
            p_deload,
            p_available,
            response_t,
            online: true,
            lag,
            p_out: p_deload,
            fault: None,
        })
    }

    pub fn p_out(&self) -> f64 {
        self.p_out
    }

    pub fn is_online(&self) -> bool {
        self.online
    }

    pub fn is_faulted(&self) -> bool {
        self.fault.is_some()
    }

    /// Upper bound on output without fault effects: `min(rated, available)`.
    pub fn headroom_ceiling(&self) -> f64 {
        self.p_rated.min(self.p_available)
    }

    fn ceiling(&self) -> f64 {
        match self.fault {
            Some(f) => self.headroom_ceiling().min(f.ceiling),
            None => self.headroom_ceiling(),
        }
    }

    /// Rms voltage at the unit's bus, as a fraction of the grid voltage.
    pub fn bus_voltage_factor(&self) -> f64 {
        self.fault.map_or(1.0, |f| f.voltage_sag)
    }

    pub fn set_online(&mut self, online: bool) {
        self.online = online;
        if !online {
            self.p_out = 0.0;
            self.lag.set_state(0.0);
        }
    }

    /// Collapses the output to `residual_fraction` of its present value
    /// until [`WindUnit::clear_fault`].
    pub fn begin_fault(&mut self, residual_fraction: f64, voltage_sag: f64) {
        let ceiling = residual_fraction * self.p_out;
        self.fault = Some(FaultState {
            ceiling,
            voltage_sag,
        });
        self.p_out = self.p_out.min(ceiling);
        self.lag.set_state(self.p_out);
    }

    /// Releases a fault; the output recovers through the unit's own lag.
    pub fn clear_fault(&mut self) {
        self.fault = None;
    }

    /// Follows `command` (MW) through the converter lag, clipped to
    /// `[0, ceiling]`. Offline units return 0.
    pub fn step(&mut self, command: f64, dt: f64) -> Result<f64> {
        ensure_finite(command, &format!("wind unit `{}` command", self.id))?;
        if !self.online {
            self.p_out = 0.0;
            return Ok(0.0);
        }
        let raw = self.lag.step(command, dt)?;
        let clipped = raw.clamp(0.0, self.ceiling());
        if clipped != raw {
            self.lag.set_state(clipped);
        }
        self.p_out = clipped;
        Ok(clipped)
    }
}

#[derive(Debug, Clone)]
pub struct Dvpp {
    units: Vec<WindUnit>,
    /// K_DVPP, the plant's share of the area secondary command.
    pub participation: f64,
    filter_t: f64,
    d_raw: Vec<f64>,
    filters: Vec<LtiBlock>,
    commands: Vec<f64>,
}

impl Dvpp {
    /// The redispatch filters start settled at the factors implied by the
    /// initial outputs.
    pub fn new(units: Vec<WindUnit>, participation: f64, filter_t: f64) -> Result<Self> {
        if units.is_empty() {
            return Err(Error::InvalidParameter(
                "virtual power plant has no units".into(),
            ));
        }
        if !(0.0..=1.0).contains(&participation) {
            return Err(Error::InvalidParameter(format!(
                "plant participation factor must lie in [0, 1], got {participation}"
            )));
        }
        let outputs: Vec<f64> = units.iter().map(WindUnit::p_out).collect();
        let d_raw = compute_participation_factors(&outputs)?;
        let filters = d_raw
            .iter()
            .map(|d| {
                let mut f = LtiBlock::first_order_lag(1.0, filter_t)?;
                f.settle_at(*d);
                Ok(f)
            })
            .collect::<Result<Vec<_>>>()?;
        let commands = units.iter().map(|u| u.p_deload).collect();
        Ok(Self {
            units,
            participation,
            filter_t,
            d_raw,
            filters,
            commands,
        })
    }

    pub fn units(&self) -> &[WindUnit] {
        &self.units
    }

    pub fn units_mut(&mut self) -> &mut [WindUnit] {
        &mut self.units
    }

    pub fn unit_mut(&mut self, id: &str) -> Option<&mut WindUnit> {
        self.units.iter_mut().find(|u| u.id == id)
    }

    pub fn unit_index(&self, id: &str) -> Option<usize> {
        self.units.iter().position(|u| u.id == id)
    }

    pub fn filter_t(&self) -> f64 {
        self.filter_t
    }

    pub fn d_raw(&self) -> &[f64] {
        &self.d_raw
    }

    pub fn d_filtered(&self) -> Vec<f64> {
        self.filters.iter().map(LtiBlock::output).collect()
    }

    pub fn commands(&self) -> &[f64] {
        &self.commands
    }

    /// Total output, MW.
    pub fn total_output(&self) -> f64 {
        self.units.iter().map(WindUnit::p_out).sum()
    }

    /// Scheduled output of the whole plant, MW. Tripped units stay in the
    /// schedule so their loss shows up as a power deficit.
    pub fn schedule(&self) -> f64 {
        self.units.iter().map(|u| u.p_deload).sum()
    }

    /// Recomputes the factors from measured outputs, filters them and
    /// returns per-unit power commands in MW.
    pub fn redispatch_step(&mut self, sfc_command_mw: f64, dt: f64) -> Result<Vec<f64>> {
        ensure_finite(sfc_command_mw, "virtual power plant command")?;
        let outputs: Vec<f64> = self.units.iter().map(WindUnit::p_out).collect();
        self.d_raw = compute_participation_factors(&outputs)?;
        for ((unit, filter), (d, cmd)) in self
            .units
            .iter()
            .zip(self.filters.iter_mut())
            .zip(self.d_raw.iter().zip(self.commands.iter_mut()))
        {
            let d_f = filter.step(*d, dt)?;
            *cmd = if unit.is_online() {
                (unit.p_deload + d_f * sfc_command_mw).clamp(0.0, unit.headroom_ceiling())
            } else {
                0.0
            };
        }
        Ok(self.commands.clone())
    }

    /// Redispatch followed by one step of every unit. Returns total output, MW.
    pub fn step(&mut self, sfc_command_mw: f64, dt: f64) -> Result<f64> {
        self.redispatch_step(sfc_command_mw, dt)?;
        for (unit, cmd) in self.units.iter_mut().zip(&self.commands) {
            unit.step(*cmd, dt)?;
        }
        Ok(self.total_output())
    }
}
