//! Timed disturbances and the built-in experiment set.
//!
//! Event times are snapped to the nearest step boundary. An event at grid
//! index `k` is applied to the state at `t_k`, before the step that leaves
//! it, and each event fires exactly once.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::agc::AgcParams;
use crate::blocks::SimClock;
use crate::config::{
    AreaConfig, DvppConfig, GeneratorConfig, OutputConfig, SimConfig, TieLineConfig,
    WindUnitConfig, SCHEMA_VERSION,
};
use crate::dvpp::{DEFAULT_FAULT_SAG, DEFAULT_FILTER_T, DEFAULT_RESPONSE_T};
use crate::error::{Error, Result};
use crate::gde::GdeParams;
use crate::generators::{Technology, DEFAULT_DROOP, DEFAULT_PARTICIPATION};
use crate::network::{PowerSystem, DEFAULT_T12};

fn default_true() -> bool {
    true
}
fn default_sag() -> f64 {
    DEFAULT_FAULT_SAG
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEvent {
    /// s.
    pub time: f64,
    #[serde(flatten)]
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    /// Adds to the area's load. Give exactly one of `delta_mw` and `delta_pu`.
    LoadStep {
        area: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta_mw: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta_pu: Option<f64>,
    },
    /// Takes a plant unit out of service (`offline = true`) or back in.
    UnitTrip {
        area: String,
        unit: String,
        #[serde(default = "default_true")]
        offline: bool,
    },
    /// Short-circuit at the units' bus: their output collapses to
    /// `residual_fraction` of its pre-fault value and the bus rms voltage
    /// drops to `voltage_sag` for `duration` seconds.
    Fault {
        area: String,
        units: Vec<String>,
        duration: f64,
        #[serde(default)]
        residual_fraction: f64,
        #[serde(default = "default_sag")]
        voltage_sag: f64,
    },
}

impl ScenarioEvent {
    pub fn load_step_mw(time: f64, area: &str, delta_mw: f64) -> Self {
        Self {
            time,
            kind: EventKind::LoadStep {
                area: area.into(),
                delta_mw: Some(delta_mw),
                delta_pu: None,
            },
        }
    }

    pub fn unit_trip(time: f64, area: &str, unit: &str) -> Self {
        Self {
            time,
            kind: EventKind::UnitTrip {
                area: area.into(),
                unit: unit.into(),
                offline: true,
            },
        }
    }

    pub fn fault(time: f64, area: &str, units: &[&str], duration: f64) -> Self {
        Self {
            time,
            kind: EventKind::Fault {
                area: area.into(),
                units: units.iter().map(|u| u.to_string()).collect(),
                duration,
                residual_fraction: 0.0,
                voltage_sag: DEFAULT_FAULT_SAG,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Action {
    Load {
        area: usize,
        delta_pu: f64,
    },
    Online {
        area: usize,
        unit: usize,
        online: bool,
    },
    FaultStart {
        area: usize,
        units: Vec<usize>,
        residual: f64,
        sag: f64,
    },
    FaultClear {
        area: usize,
        units: Vec<usize>,
    },
}

/// Events resolved against a system and placed on the step grid.
#[derive(Debug, Clone)]
pub struct EventSchedule {
    actions: Vec<(u64, Action)>,
    next: usize,
    event_times: Vec<f64>,
}

impl EventSchedule {
    /// Resolves area and unit references; unknown ones are configuration
    /// errors.
    pub fn new(events: &[ScenarioEvent], system: &PowerSystem, dt: f64) -> Result<Self> {
        let clock = SimClock::new(dt)?;
        let area_of = |id: &str| {
            system
                .area_index(id)
                .ok_or_else(|| Error::Config(format!("event references unknown area `{id}`")))
        };
        let unit_of = |area: usize, id: &str| {
            system.areas[area]
                .dvpp
                .as_ref()
                .and_then(|d| d.unit_index(id))
                .ok_or_else(|| {
                    Error::Config(format!(
                        "event references unknown plant unit `{id}` in area `{}`",
                        system.areas[area].id
                    ))
                })
        };

        let mut actions = Vec::new();
        let mut event_times = Vec::new();
        for ev in events {
            if !(ev.time >= 0.0) || !ev.time.is_finite() {
                return Err(Error::Config(format!(
                    "event time must be >= 0, got {}",
                    ev.time
                )));
            }
            let at = clock.snap(ev.time);
            event_times.push(at as f64 * dt);
            match &ev.kind {
                EventKind::LoadStep {
                    area,
                    delta_mw,
                    delta_pu,
                } => {
                    let a = area_of(area)?;
                    let delta_pu = match (delta_mw, delta_pu) {
                        (Some(mw), None) => mw / system.areas[a].base_mva,
                        (None, Some(pu)) => *pu,
                        _ => {
                            return Err(Error::Config(
                                "load step needs exactly one of `delta_mw`, `delta_pu`".into(),
                            ))
                        }
                    };
                    if !delta_pu.is_finite() {
                        return Err(Error::Config("load step must be finite".into()));
                    }
                    actions.push((at, Action::Load { area: a, delta_pu }));
                }
                EventKind::UnitTrip {
                    area,
                    unit,
                    offline,
                } => {
                    let a = area_of(area)?;
                    let u = unit_of(a, unit)?;
                    actions.push((
                        at,
                        Action::Online {
                            area: a,
                            unit: u,
                            online: !offline,
                        },
                    ));
                }
                EventKind::Fault {
                    area,
                    units,
                    duration,
                    residual_fraction,
                    voltage_sag,
                } => {
                    if !(*duration > 0.0) || !duration.is_finite() {
                        return Err(Error::Config(format!(
                            "fault duration must be > 0, got {duration}"
                        )));
                    }
                    if !(0.0..=1.0).contains(residual_fraction) {
                        return Err(Error::Config(format!(
                            "fault residual fraction must lie in [0, 1], got {residual_fraction}"
                        )));
                    }
                    if !(0.0..=1.0).contains(voltage_sag) {
                        return Err(Error::Config(format!(
                            "fault voltage sag must lie in [0, 1], got {voltage_sag}"
                        )));
                    }
                    let a = area_of(area)?;
                    let idx = units
                        .iter()
                        .map(|u| unit_of(a, u))
                        .collect::<Result<Vec<_>>>()?;
                    if idx.is_empty() {
                        return Err(Error::Config("fault affects no units".into()));
                    }
                    let clear = clock.snap(ev.time + duration).max(at + 1);
                    actions.push((
                        at,
                        Action::FaultStart {
                            area: a,
                            units: idx.clone(),
                            residual: *residual_fraction,
                            sag: *voltage_sag,
                        },
                    ));
                    actions.push((
                        clear,
                        Action::FaultClear {
                            area: a,
                            units: idx,
                        },
                    ));
                }
            }
        }
        // stable: simultaneous events keep file order
        actions.sort_by_key(|(k, _)| *k);
        event_times.sort_by(f64::total_cmp);
        Ok(Self {
            actions,
            next: 0,
            event_times,
        })
    }

    /// Snapped times of the configured events (fault clearings excluded).
    pub fn event_times(&self) -> &[f64] {
        &self.event_times
    }

    pub fn pending(&self) -> usize {
        self.actions.len() - self.next
    }

    /// Applies every not-yet-fired action scheduled at or before grid index
    /// `step`. Returns how many fired.
    pub fn apply_due(&mut self, step: u64, system: &mut PowerSystem) -> usize {
        let start = self.next;
        while let Some((at, action)) = self.actions.get(self.next) {
            if *at > step {
                break;
            }
            apply(action, system);
            self.next += 1;
        }
        self.next - start
    }
}

fn wind(system: &mut PowerSystem, area: usize) -> &mut [crate::dvpp::WindUnit] {
    system.areas[area]
        .dvpp
        .as_mut()
        .expect("unit references resolved at schedule construction")
        .units_mut()
}

fn apply(action: &Action, system: &mut PowerSystem) {
    match action {
        Action::Load { area, delta_pu } => system.areas[*area].load_delta += delta_pu,
        Action::Online { area, unit, online } => wind(system, *area)[*unit].set_online(*online),
        Action::FaultStart {
            area,
            units,
            residual,
            sag,
        } => {
            let w = wind(system, *area);
            for u in units {
                w[*u].begin_fault(*residual, *sag);
            }
        }
        Action::FaultClear { area, units } => {
            let w = wind(system, *area);
            for u in units {
                w[*u].clear_fault();
            }
        }
    }
}

/// The benchmark: area 1 with three classic units (0.3 each) and a
/// two-turbine plant (0.1, 4.1 MW rated, deloaded at 3.5 MW); area 2 with
/// three classic units (1/3 each); one tie-line.
pub fn benchmark_system(name: &str, duration: f64, events: Vec<ScenarioEvent>) -> SimConfig {
    let classic = |k: f64| {
        Technology::ALL
            .iter()
            .map(|t| GeneratorConfig {
                droop: DEFAULT_DROOP,
                ..GeneratorConfig::standard(*t, k)
            })
            .collect::<Vec<_>>()
    };
    let wt = |id: &str| WindUnitConfig {
        id: id.into(),
        p_rated: 4.1,
        p_deload: 3.5,
        p_available: None,
        response_t: DEFAULT_RESPONSE_T,
    };
    SimConfig {
        schema_version: SCHEMA_VERSION,
        name: name.into(),
        duration,
        dt: crate::blocks::DEFAULT_DT,
        scenario: None,
        output: OutputConfig::default(),
        areas: vec![
            AreaConfig {
                id: "area1".into(),
                base_mva: 100.0,
                nominal_load_mw: 100.0,
                gde: GdeParams::default(),
                agc: AgcParams::default(),
                generators: classic(DEFAULT_PARTICIPATION),
                dvpp: Some(DvppConfig {
                    participation: 0.1,
                    filter_t: DEFAULT_FILTER_T,
                    units: vec![wt("wt1"), wt("wt2")],
                }),
            },
            AreaConfig {
                id: "area2".into(),
                base_mva: 100.0,
                nominal_load_mw: 100.0,
                gde: GdeParams::default(),
                agc: AgcParams::default(),
                generators: classic(1.0 / 3.0),
                dvpp: None,
            },
        ],
        tie_lines: vec![TieLineConfig {
            id: "tie12".into(),
            from: "area1".into(),
            to: "area2".into(),
            t12: DEFAULT_T12,
        }],
        events,
    }
}

pub const BUILTIN_NAMES: [&str; 4] = ["nominal", "wt2-trip", "two-area", "short-circuit"];

/// `nominal`: +6 MW in area 1 at 40 s. `wt2-trip`: nominal plus WT2 out of
/// service at 80 s. `two-area`: +6 MW in area 1 and +10 MW in area 2 at 40 s.
/// `short-circuit`: nominal plus a 100 ms zero-residual fault on WT1 at 90 s.
pub fn builtin_scenarios() -> BTreeMap<&'static str, SimConfig> {
    let step = || ScenarioEvent::load_step_mw(40.0, "area1", 6.0);
    let mut map = BTreeMap::new();
    map.insert("nominal", benchmark_system("nominal", 200.0, vec![step()]));
    map.insert(
        "wt2-trip",
        benchmark_system(
            "wt2-trip",
            200.0,
            vec![step(), ScenarioEvent::unit_trip(80.0, "area1", "wt2")],
        ),
    );
    map.insert(
        "two-area",
        benchmark_system(
            "two-area",
            200.0,
            vec![step(), ScenarioEvent::load_step_mw(40.0, "area2", 10.0)],
        ),
    );
    map.insert(
        "short-circuit",
        benchmark_system(
            "short-circuit",
            200.0,
            vec![step(), ScenarioEvent::fault(90.0, "area1", &["wt1"], 0.1)],
        ),
    );
    map
}
