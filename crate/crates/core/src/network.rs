//! Multi-area assembly: per-area power balance, tie-line coupling and the
//! sequential stepping loop.
//!
//! Within a step every area first measures its frequency and tie-line
//! export, runs its secondary controller and steps its units; then the
//! tie-lines integrate the frequency differences; finally each grid
//! equivalent is driven by the new power balance.

use std::f64::consts::TAU;

use crate::agc::{allocate_sfc, compute_ace, validate_factors, AgcController, AgcParams};
use crate::dvpp::Dvpp;
use crate::error::{ensure_finite, Error, Result};
use crate::gde::Gde;
use crate::generators::GeneratorUnit;

/// Synchronizing coefficient with `2 pi T12 = 0.1` pu/s per Hz.
///
/// A stiffer line (`2 pi T12 = 0.5`) puts the inter-area mode near 3 rad/s,
/// where the hydro penstock's phase lag turns primary response into negative
/// damping and the pair of areas oscillates unstably.
pub const DEFAULT_T12: f64 = 0.1 / TAU;

#[derive(Debug, Clone, PartialEq)]
pub struct TieLine {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub t12: f64,
    delta_p_tie: f64,
}

impl TieLine {
    pub fn new(id: impl Into<String>, from: usize, to: usize, t12: f64) -> Result<Self> {
        let id = id.into();
        if from == to {
            return Err(Error::Config(format!(
                "tie-line `{id}` connects an area to itself"
            )));
        }
        if !(t12 > 0.0) || !t12.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tie-line `{id}`: T12 must be > 0, got {t12}"
            )));
        }
        Ok(Self {
            id,
            from,
            to,
            t12,
            delta_p_tie: 0.0,
        })
    }

    /// Incremental flow from `from` to `to`, pu.
    pub fn delta_p_tie(&self) -> f64 {
        self.delta_p_tie
    }

    /// Flow leaving `area`: positive at the sending end, negated at the
    /// receiving end, zero elsewhere.
    pub fn export_from(&self, area: usize) -> f64 {
        if area == self.from {
            self.delta_p_tie
        } else if area == self.to {
            -self.delta_p_tie
        } else {
            0.0
        }
    }

    /// `d(delta_p_tie)/dt = 2 pi T12 (delta_f_from - delta_f_to)`.
    pub fn step(&mut self, delta_f_from: f64, delta_f_to: f64, dt: f64) -> f64 {
        self.delta_p_tie += TAU * self.t12 * (delta_f_from - delta_f_to) * dt;
        self.delta_p_tie
    }
}

#[derive(Debug, Clone)]
pub struct Area {
    pub id: String,
    pub base_mva: f64,
    pub nominal_load_mw: f64,
    pub generators: Vec<GeneratorUnit>,
    pub dvpp: Option<Dvpp>,
    pub gde: Gde,
    pub agc: AgcController,
    /// Incremental load, pu.
    pub load_delta: f64,
    ace: f64,
    sfc_command: f64,
}

impl Area {
    /// Checks the participation factors and builds the secondary controller.
    /// Without an explicit bias, `B = D_u / f0 + sum(1 / R_i)` (pu per Hz).
    pub fn new(
        id: impl Into<String>,
        base_mva: f64,
        nominal_load_mw: f64,
        generators: Vec<GeneratorUnit>,
        dvpp: Option<Dvpp>,
        gde: Gde,
        agc: AgcParams,
    ) -> Result<Self> {
        let id = id.into();
        if !(base_mva > 0.0) || !base_mva.is_finite() {
            return Err(Error::Config(format!(
                "area `{id}`: base power must be > 0"
            )));
        }
        let mut factors: Vec<f64> = generators.iter().map(|g| g.participation).collect();
        if let Some(d) = &dvpp {
            factors.push(d.participation);
        }
        validate_factors(&factors).map_err(|e| Error::Config(format!("area `{id}`: {e}")))?;

        let mut seen = std::collections::HashSet::new();
        let unit_ids = generators.iter().map(|g| g.id.as_str()).chain(
            dvpp.iter()
                .flat_map(|d| d.units().iter().map(|u| u.id.as_str())),
        );
        for uid in unit_ids {
            if !seen.insert(uid) {
                return Err(Error::Config(format!(
                    "area `{id}`: duplicate unit id `{uid}`"
                )));
            }
        }

        let bias = agc.bias.unwrap_or_else(|| {
            let p = gde.params();
            p.damping / p.f0 + generators.iter().map(|g| 1.0 / g.droop).sum::<f64>()
        });
        let agc = AgcController::new(bias, agc.kp, agc.ki, agc.anti_windup)
            .map_err(|e| Error::Config(format!("area `{id}`: {e}")))?;
        Ok(Self {
            id,
            base_mva,
            nominal_load_mw,
            generators,
            dvpp,
            gde,
            agc,
            load_delta: 0.0,
            ace: 0.0,
            sfc_command: 0.0,
        })
    }

    pub fn delta_f_hz(&self) -> f64 {
        self.gde.delta_f_hz()
    }

    /// Area control error from the last step, pu.
    pub fn ace(&self) -> f64 {
        self.ace
    }

    /// Total secondary command from the last step, pu.
    pub fn sfc_command(&self) -> f64 {
        self.sfc_command
    }

    pub fn load_mw(&self) -> f64 {
        self.nominal_load_mw + self.load_delta * self.base_mva
    }

    /// Plant output relative to its schedule, pu.
    pub fn dvpp_delta(&self) -> f64 {
        self.dvpp
            .as_ref()
            .map_or(0.0, |d| (d.total_output() - d.schedule()) / self.base_mva)
    }

    /// Incremental generation of all units, pu.
    pub fn generation_delta(&self) -> f64 {
        self.generators
            .iter()
            .map(GeneratorUnit::p_mech_delta)
            .sum::<f64>()
            + self.dvpp_delta()
    }

    /// Accelerating power seen by the grid equivalent, pu:
    /// generation deltas minus load delta minus tie-line export.
    pub fn power_balance(&self, tie_export: f64) -> f64 {
        self.generation_delta() - self.load_delta - tie_export
    }

    fn control_step(&mut self, tie_export: f64, dt: f64) -> Result<()> {
        let df = self.delta_f_hz();
        self.ace = compute_ace(tie_export, self.agc.bias, df);
        self.sfc_command = self.agc.step(self.ace, dt);

        let mut factors: Vec<f64> = self.generators.iter().map(|g| g.participation).collect();
        if let Some(d) = &self.dvpp {
            factors.push(d.participation);
        }
        let parts = allocate_sfc(self.sfc_command, &factors)?;
        for (gen, cmd) in self.generators.iter_mut().zip(&parts) {
            gen.step(df, *cmd, dt)?;
        }
        if let Some(d) = &mut self.dvpp {
            let cmd_mw = parts[parts.len() - 1] * self.base_mva;
            d.step(cmd_mw, dt)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct PowerSystem {
    pub areas: Vec<Area>,
    pub tie_lines: Vec<TieLine>,
}

impl PowerSystem {
    pub fn new(areas: Vec<Area>, tie_lines: Vec<TieLine>) -> Result<Self> {
        if areas.is_empty() {
            return Err(Error::Config("system has no areas".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for a in &areas {
            if !seen.insert(a.id.as_str()) {
                return Err(Error::Config(format!("duplicate area id `{}`", a.id)));
            }
        }
        for l in &tie_lines {
            if l.from >= areas.len() || l.to >= areas.len() {
                return Err(Error::Config(format!(
                    "tie-line `{}` references a missing area",
                    l.id
                )));
            }
        }
        Ok(Self { areas, tie_lines })
    }

    pub fn area_index(&self, id: &str) -> Option<usize> {
        self.areas.iter().position(|a| a.id == id)
    }

    /// Net tie-line export of an area, pu.
    pub fn tie_export(&self, area: usize) -> f64 {
        self.tie_lines.iter().map(|l| l.export_from(area)).sum()
    }

    /// Accelerating power of an area, pu.
    pub fn area_power_balance(&self, area: usize) -> f64 {
        self.areas[area].power_balance(self.tie_export(area))
    }

    /// Advances every area, tie-line and grid equivalent by `dt`.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        let exports: Vec<f64> = (0..self.areas.len()).map(|i| self.tie_export(i)).collect();
        let dfs: Vec<f64> = self.areas.iter().map(Area::delta_f_hz).collect();

        for (area, export) in self.areas.iter_mut().zip(&exports) {
            area.control_step(*export, dt)?;
        }
        for line in &mut self.tie_lines {
            let flow = line.step(dfs[line.from], dfs[line.to], dt);
            ensure_finite(flow, &format!("tie-line `{}`", line.id))?;
        }
        for i in 0..self.areas.len() {
            let export = self.tie_export(i);
            let area = &mut self.areas[i];
            let p_g = area.generation_delta() - export;
            let p_l = area.load_delta;
            area.gde.step(p_g, p_l, dt)?;
        }
        Ok(())
    }
}
