//! Simulation configuration: a TOML document describing areas, tie-lines,
//! the event scenario and output options.
//!
//! Powers are in MW and frequencies in Hz at this boundary; everything is
//! converted to per-unit on each area's base when the system is built.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::agc::AgcParams;
use crate::blocks::{BlockKind, DEFAULT_DT};
use crate::dvpp::{Dvpp, WindUnit, DEFAULT_FILTER_T, DEFAULT_RESPONSE_T};
use crate::error::{Error, Result};
use crate::gde::{Gde, GdeParams};
use crate::generators::{GeneratorUnit, OutputLimits, Technology, DEFAULT_DROOP};
use crate::network::{Area, PowerSystem, TieLine, DEFAULT_T12};
use crate::output::ChannelGroup;
use crate::scenario::{builtin_scenarios, ScenarioEvent};

pub const SCHEMA_VERSION: u32 = 1;

fn default_dt() -> f64 {
    DEFAULT_DT
}
fn default_base() -> f64 {
    100.0
}
fn default_droop() -> f64 {
    DEFAULT_DROOP
}
fn default_filter_t() -> f64 {
    DEFAULT_FILTER_T
}
fn default_response_t() -> f64 {
    DEFAULT_RESPONSE_T
}
fn default_t12() -> f64 {
    DEFAULT_T12
}
fn default_decimation() -> usize {
    1
}
fn default_plot_dir() -> String {
    "plots".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub schema_version: u32,
    pub name: String,
    /// Simulated time, s.
    pub duration: f64,
    /// Integration step, s.
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Name of a built-in scenario whose events drive this run. Mutually
    /// exclusive with `events`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    #[serde(default)]
    pub output: OutputConfig,
    pub areas: Vec<AreaConfig>,
    #[serde(default)]
    pub tie_lines: Vec<TieLineConfig>,
    #[serde(default)]
    pub events: Vec<ScenarioEvent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// CSV file name, relative to the output directory. Defaults to `<name>.csv`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default = "default_plot_dir")]
    pub plot_dir: String,
    #[serde(default = "ChannelGroup::all")]
    pub channels: Vec<ChannelGroup>,
    /// Keep every n-th record in the CSV.
    #[serde(default = "default_decimation")]
    pub decimation: usize,
    /// Also write the three-phase grid voltage of every area, sampled at dt.
    #[serde(default)]
    pub three_phase: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            csv: None,
            plot_dir: default_plot_dir(),
            channels: ChannelGroup::all(),
            decimation: 1,
            three_phase: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AreaConfig {
    pub id: String,
    #[serde(default = "default_base")]
    pub base_mva: f64,
    #[serde(default = "default_base")]
    pub nominal_load_mw: f64,
    #[serde(default)]
    pub gde: GdeParams,
    #[serde(default)]
    pub agc: AgcParams,
    pub generators: Vec<GeneratorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dvpp: Option<DvppConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub id: String,
    pub tech: Technology,
    pub participation: f64,
    /// Hz per pu.
    #[serde(default = "default_droop")]
    pub droop: f64,
    /// Governor-turbine chain; the technology's standard chain when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<BlockKind>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<OutputLimits>,
    /// pu/s.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramp_limit: Option<f64>,
}

impl GeneratorConfig {
    pub fn standard(tech: Technology, participation: f64) -> Self {
        Self {
            id: tech.name().into(),
            tech,
            participation,
            droop: DEFAULT_DROOP,
            chain: None,
            limits: None,
            ramp_limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DvppConfig {
    pub participation: f64,
    #[serde(default = "default_filter_t")]
    pub filter_t: f64,
    pub units: Vec<WindUnitConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindUnitConfig {
    pub id: String,
    /// MW.
    pub p_rated: f64,
    /// MW.
    pub p_deload: f64,
    /// MW; equal to the rating when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_available: Option<f64>,
    #[serde(default = "default_response_t")]
    pub response_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TieLineConfig {
    pub id: String,
    pub from: String,
    pub to: String,
    #[serde(default = "default_t12")]
    pub t12: f64,
}

fn check_id(id: &str, what: &str) -> Result<()> {
    let ok = !id.is_empty()
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    if ok && !(what.ends_with("unit") && id == "dvpp") {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{what} id `{id}` must be non-empty ASCII letters, digits, `_` or `-` \
             (`dvpp` is reserved for the plant total)"
        )))
    }
}

impl SimConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: SimConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_toml_string()?).map_err(|e| Error::io(path, e))
    }

    /// Checks ranges and cross-references by building the system and
    /// resolving every event.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if !(self.duration >= 0.0) || !self.duration.is_finite() {
            return Err(Error::Config(format!(
                "duration must be >= 0, got {}",
                self.duration
            )));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be > 0, got {}", self.dt)));
        }
        if self.output.decimation < 1 {
            return Err(Error::Config("output decimation must be >= 1".into()));
        }
        check_id(&self.name, "scenario")?;
        let system = self.build_system()?;
        crate::scenario::EventSchedule::new(&self.resolved_events()?, &system, self.dt)?;
        Ok(())
    }

    /// Inline events, or those of the named built-in scenario.
    pub fn resolved_events(&self) -> Result<Vec<ScenarioEvent>> {
        match &self.scenario {
            None => Ok(self.events.clone()),
            Some(name) => {
                if !self.events.is_empty() {
                    return Err(Error::Config(
                        "give either `scenario` or inline `events`, not both".into(),
                    ));
                }
                builtin_scenarios()
                    .remove(name.as_str())
                    .map(|c| c.events)
                    .ok_or_else(|| Error::Config(format!("unknown built-in scenario `{name}`")))
            }
        }
    }

    pub fn build_system(&self) -> Result<PowerSystem> {
        let config_err = |e: Error| match e {
            Error::InvalidParameter(msg) => Error::Config(msg),
            other => other,
        };
        let mut areas = Vec::with_capacity(self.areas.len());
        for a in &self.areas {
            check_id(&a.id, "area")?;
            let mut generators = Vec::with_capacity(a.generators.len());
            for g in &a.generators {
                check_id(&g.id, "generator unit")?;
                let chain = g.chain.clone().unwrap_or_else(|| g.tech.default_chain());
                let mut unit = GeneratorUnit::new(&g.id, g.tech, g.droop, g.participation, &chain)
                    .map_err(config_err)?;
                unit.rated_power_mw = a.base_mva;
                unit.limits = g.limits;
                unit.ramp_limit = g.ramp_limit;
                generators.push(unit);
            }
            let dvpp = match &a.dvpp {
                None => None,
                Some(d) => {
                    let units = d
                        .units
                        .iter()
                        .map(|u| {
                            check_id(&u.id, "wind unit")?;
                            WindUnit::new(
                                &u.id,
                                u.p_rated,
                                u.p_deload,
                                u.p_available.unwrap_or(u.p_rated),
                                u.response_t,
                            )
                            .map_err(config_err)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Some(Dvpp::new(units, d.participation, d.filter_t).map_err(config_err)?)
                }
            };
            let gde = Gde::new(a.gde).map_err(config_err)?;
            areas.push(
                Area::new(
                    &a.id,
                    a.base_mva,
                    a.nominal_load_mw,
                    generators,
                    dvpp,
                    gde,
                    a.agc,
                )
                .map_err(config_err)?,
            );
        }
        let index = |id: &str| {
            areas
                .iter()
                .position(|a: &Area| a.id == id)
                .ok_or_else(|| Error::Config(format!("tie-line references unknown area `{id}`")))
        };
        let mut lines = Vec::with_capacity(self.tie_lines.len());
        for l in &self.tie_lines {
            check_id(&l.id, "tie-line")?;
            lines.push(
                TieLine::new(&l.id, index(&l.from)?, index(&l.to)?, l.t12).map_err(config_err)?,
            );
        }
        PowerSystem::new(areas, lines)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_round_trip_through_toml() {
        for (name, cfg) in builtin_scenarios() {
            let text = cfg.to_toml_string().unwrap();
            let back = SimConfig::from_toml_str(&text).unwrap();
            assert_eq!(back, cfg, "{name}");
        }
    }

    #[test]
    fn minimal_file_uses_defaults() {
        let text = r#"
schema_version = 1
name = "tiny"
duration = 10.0

[[areas]]
id = "a1"

[[areas.generators]]
id = "steam"
tech = "thermal"
participation = 1.0

[[events]]
time = 1.0
kind = "load_step"
area = "a1"
delta_mw = 2.0
"#;
        let cfg = SimConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.dt, 0.01);
        assert_eq!(cfg.areas[0].gde.k_rest, 0.0);
        assert_eq!(cfg.output.channels.len(), 5);
        let sys = cfg.build_system().unwrap();
        assert_eq!(sys.areas[0].generators[0].droop, 2.4);
    }

    #[test]
    fn rejects_bad_files() {
        let mut cfg = builtin_scenarios().remove("nominal").unwrap();
        cfg.areas[0].dvpp.as_mut().unwrap().participation = 0.0;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));

        let mut cfg = builtin_scenarios().remove("nominal").unwrap();
        cfg.schema_version = 2;
        assert!(cfg.validate().is_err());

        let mut cfg = builtin_scenarios().remove("nominal").unwrap();
        cfg.tie_lines[0].to = "area9".into();
        assert!(cfg.validate().is_err());

        let mut cfg = builtin_scenarios().remove("nominal").unwrap();
        cfg.areas[1].id = "area.2".into();
        assert!(cfg.validate().is_err());

        let mut cfg = builtin_scenarios().remove("nominal").unwrap();
        cfg.areas[0].dvpp.as_mut().unwrap().units[0].id = "dvpp".into();
        assert!(cfg.validate().is_err());

        let mut cfg = builtin_scenarios().remove("nominal").unwrap();
        cfg.scenario = Some("wt2-trip".into());
        assert!(cfg.validate().is_err());
        cfg.events.clear();
        assert_eq!(cfg.resolved_events().unwrap().len(), 2);
        cfg.scenario = Some("nope".into());
        assert!(cfg.validate().is_err());

        assert!(SimConfig::from_toml_str("schema_version = 1\nname = \"x\"").is_err());
    }
}
