//! Fixed-step driver: applies scheduled events, steps the system and
//! records one row per step.
//!
//! Rows are taken after each step, at `t = k dt` for `k = 1..=N` with
//! `N = round(duration / dt)`; a zero-length run records nothing.

use crate::blocks::SimClock;
use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::network::PowerSystem;
use crate::output::{Channel, TimeSeries};
use crate::scenario::EventSchedule;

#[derive(Debug, Clone)]
pub struct SimOutput {
    pub name: String,
    pub dt: f64,
    pub series: TimeSeries,
    /// Per-area `va`, `vb`, `vc` at every step, when requested.
    pub three_phase: Option<TimeSeries>,
    /// Snapped times of the scenario events.
    pub event_times: Vec<f64>,
}

pub struct Simulation {
    name: String,
    system: PowerSystem,
    schedule: EventSchedule,
    clock: SimClock,
    steps: u64,
    channels: Vec<Channel>,
}

impl Simulation {
    pub fn new(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let system = cfg.build_system()?;
        let schedule = EventSchedule::new(&cfg.resolved_events()?, &system, cfg.dt)?;
        let clock = SimClock::new(cfg.dt)?;
        let steps = clock.snap(cfg.duration);
        let channels = channels(&system);
        Ok(Self {
            name: cfg.name.clone(),
            system,
            schedule,
            clock,
            steps,
            channels,
        })
    }

    pub fn system(&self) -> &PowerSystem {
        &self.system
    }

    pub fn system_mut(&mut self) -> &mut PowerSystem {
        &mut self.system
    }

    pub fn time(&self) -> f64 {
        self.clock.t()
    }

    pub fn steps_total(&self) -> u64 {
        self.steps
    }

    pub fn is_finished(&self) -> bool {
        self.clock.step_index() >= self.steps
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn event_times(&self) -> &[f64] {
        self.schedule.event_times()
    }

    /// Fires due events, advances one step and returns the new time.
    /// Non-finite states are reported as divergence at the step's end time.
    pub fn step(&mut self) -> Result<f64> {
        let k = self.clock.step_index();
        self.schedule.apply_due(k, &mut self.system);
        let t_end = (k + 1) as f64 * self.clock.dt();
        self.system.step(self.clock.dt()).map_err(|e| match e {
            Error::NonFinite(what) => Error::Divergence {
                time: t_end,
                variable: what,
            },
            other => other,
        })?;
        Ok(self.clock.tick())
    }

    /// Current values of every channel, time first. Fails on the first
    /// non-finite value.
    pub fn record(&self) -> Result<Vec<f64>> {
        let row = record(&self.system, self.clock.t());
        if let Some(i) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::Divergence {
                time: self.clock.t(),
                variable: self.channels[i].name.clone(),
            });
        }
        Ok(row)
    }

    pub fn three_phase_row(&self) -> Vec<f64> {
        let mut row = vec![self.clock.t()];
        for a in &self.system.areas {
            let (va, vb, vc) = a.gde.three_phase();
            row.extend([va, vb, vc]);
        }
        row
    }

    pub fn run(mut self, three_phase: bool) -> Result<SimOutput> {
        let mut series = TimeSeries::new(self.channels.clone());
        series.rows.reserve(self.steps as usize);
        let mut tp = three_phase.then(|| {
            let mut ch = vec![Channel::new("t", "s")];
            for a in &self.system.areas {
                for phase in ["va", "vb", "vc"] {
                    ch.push(Channel::new(format!("{}.{phase}", a.id), "pu"));
                }
            }
            TimeSeries::new(ch)
        });
        while !self.is_finished() {
            self.step()?;
            series.rows.push(self.record()?);
            if let Some(tp) = &mut tp {
                tp.rows.push(self.three_phase_row());
            }
        }
        Ok(SimOutput {
            name: self.name,
            dt: self.clock.dt(),
            series,
            three_phase: tp,
            event_times: self.schedule.event_times().to_vec(),
        })
    }
}

/// Runs a configuration to completion.
pub fn run(cfg: &SimConfig) -> Result<SimOutput> {
    Simulation::new(cfg)?.run(cfg.output.three_phase)
}

fn channels(system: &PowerSystem) -> Vec<Channel> {
    let mut ch = vec![Channel::new("t", "s")];
    for a in &system.areas {
        let id = &a.id;
        ch.push(Channel::new(format!("{id}.df"), "Hz"));
        ch.push(Channel::new(format!("{id}.ace"), "pu"));
        ch.push(Channel::new(format!("{id}.load"), "MW"));
        ch.push(Channel::new(format!("{id}.v"), "pu"));
        for g in &a.generators {
            ch.push(Channel::new(format!("{id}.{}.dp", g.id), "MW"));
        }
        if let Some(d) = &a.dvpp {
            for u in d.units() {
                ch.push(Channel::new(format!("{id}.{}.p", u.id), "MW"));
                ch.push(Channel::new(format!("{id}.{}.d", u.id), "-"));
                ch.push(Channel::new(format!("{id}.{}.v", u.id), "pu"));
            }
            ch.push(Channel::new(format!("{id}.dvpp.p"), "MW"));
        }
    }
    for l in &system.tie_lines {
        ch.push(Channel::new(format!("{}.dp_tie", l.id), "pu"));
    }
    ch
}

fn record(system: &PowerSystem, t: f64) -> Vec<f64> {
    let mut row = vec![t];
    for a in &system.areas {
        row.push(a.delta_f_hz());
        row.push(a.ace());
        row.push(a.load_mw());
        row.push(a.gde.voltage());
        for g in &a.generators {
            row.push(g.p_mech_delta() * a.base_mva);
        }
        if let Some(d) = &a.dvpp {
            let df = d.d_filtered();
            for (u, f) in d.units().iter().zip(df) {
                row.push(u.p_out());
                row.push(f);
                row.push(a.gde.voltage() * u.bus_voltage_factor());
            }
            row.push(d.total_output());
        }
    }
    for l in &system.tie_lines {
        row.push(l.delta_p_tie());
    }
    row
}
