//! Figures of merit extracted from a recorded run.
//!
//! Works on a [`TimeSeries`] alone, so it applies equally to a fresh run and
//! to a CSV read back from disk. Steady-state values are means over the last
//! 10% of the rows; unit deltas are taken against the first row.

use std::fmt;

use crate::output::TimeSeries;

/// Fraction of the run treated as steady state.
pub const STEADY_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct AreaSummary {
    pub id: String,
    /// Largest-magnitude frequency deviation, signed, Hz.
    pub nadir_hz: f64,
    pub nadir_time: f64,
    pub steady_df_hz: f64,
    pub steady_ace: f64,
    /// `(event time, max |ACE|)` between each event and the next.
    pub max_ace_after_event: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitSummary {
    pub area: String,
    pub id: String,
    pub kind: UnitKind,
    /// Steady output change, MW.
    pub delta_mw: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitKind {
    Classic,
    Wind,
    /// Whole virtual power plant.
    Plant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub areas: Vec<AreaSummary>,
    pub units: Vec<UnitSummary>,
    /// `(tie-line id, steady delta_p_tie in pu)`.
    pub tie_lines: Vec<(String, f64)>,
}

impl Summary {
    pub fn area(&self, id: &str) -> Option<&AreaSummary> {
        self.areas.iter().find(|a| a.id == id)
    }

    pub fn unit_delta(&self, area: &str, id: &str) -> Option<f64> {
        self.units
            .iter()
            .find(|u| u.area == area && u.id == id)
            .map(|u| u.delta_mw)
    }

    /// Sum of the classic units' steady deltas in an area, MW.
    pub fn classic_total_mw(&self, area: &str) -> f64 {
        self.units
            .iter()
            .filter(|u| u.area == area && u.kind == UnitKind::Classic)
            .map(|u| u.delta_mw)
            .sum()
    }

    /// Steady change of the plant total, MW. Zero for areas without one.
    pub fn dvpp_delta_mw(&self, area: &str) -> f64 {
        self.units
            .iter()
            .find(|u| u.area == area && u.kind == UnitKind::Plant)
            .map_or(0.0, |u| u.delta_mw)
    }

    pub fn tie_line(&self, id: &str) -> Option<f64> {
        self.tie_lines
            .iter()
            .find(|(l, _)| l == id)
            .map(|(_, v)| *v)
    }
}

fn steady_mean(col: &[f64]) -> f64 {
    let n = ((col.len() as f64 * STEADY_FRACTION).ceil() as usize).clamp(1, col.len());
    col[col.len() - n..].iter().sum::<f64>() / n as f64
}

/// Summarizes a non-empty series. `event_times` bound the windows for the
/// per-event ACE maxima.
pub fn summarize(series: &TimeSeries, event_times: &[f64]) -> Summary {
    let mut summary = Summary {
        areas: Vec::new(),
        units: Vec::new(),
        tie_lines: Vec::new(),
    };
    if series.is_empty() {
        return summary;
    }
    let times = series.times();
    let mut events = event_times.to_vec();
    events.sort_by(f64::total_cmp);
    events.dedup();

    for (i, ch) in series.channels.iter().enumerate().skip(1) {
        let col: Vec<f64> = series.rows.iter().map(|r| r[i]).collect();
        let parts: Vec<&str> = ch.name.split('.').collect();
        match parts.as_slice() {
            [area, "df"] => {
                let (k, nadir) = col.iter().enumerate().fold((0, 0.0_f64), |best, (k, v)| {
                    if v.abs() > best.1.abs() {
                        (k, *v)
                    } else {
                        best
                    }
                });
                let ace = series.column(&format!("{area}.ace")).unwrap_or_default();
                let max_ace_after_event = events
                    .iter()
                    .enumerate()
                    .map(|(e, te)| {
                        let until = events.get(e + 1).copied().unwrap_or(f64::INFINITY);
                        let m = times
                            .iter()
                            .zip(&ace)
                            .filter(|(t, _)| **t > *te && **t <= until)
                            .fold(0.0_f64, |m, (_, a)| m.max(a.abs()));
                        (*te, m)
                    })
                    .collect();
                summary.areas.push(AreaSummary {
                    id: area.to_string(),
                    nadir_hz: nadir,
                    nadir_time: times[k],
                    steady_df_hz: steady_mean(&col),
                    steady_ace: if ace.is_empty() {
                        0.0
                    } else {
                        steady_mean(&ace)
                    },
                    max_ace_after_event,
                });
            }
            [area, unit, suffix @ ("dp" | "p")] => {
                let kind = match (*suffix, *unit) {
                    ("dp", _) => UnitKind::Classic,
                    ("p", "dvpp") => UnitKind::Plant,
                    _ => UnitKind::Wind,
                };
                summary.units.push(UnitSummary {
                    area: area.to_string(),
                    id: unit.to_string(),
                    kind,
                    delta_mw: steady_mean(&col) - col[0],
                });
            }
            [line, "dp_tie"] => summary
                .tie_lines
                .push((line.to_string(), steady_mean(&col))),
            _ => {}
        }
    }
    summary
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.areas {
            writeln!(f, "area {}", a.id)?;
            writeln!(
                f,
                "  nadir          {:+.5} Hz at {:.2} s",
                a.nadir_hz, a.nadir_time
            )?;
            writeln!(f, "  steady df      {:+.3e} Hz", a.steady_df_hz)?;
            writeln!(f, "  steady ACE     {:+.3e} pu", a.steady_ace)?;
            for (t, m) in &a.max_ace_after_event {
                writeln!(f, "  max |ACE| after {t:.2} s  {m:.5} pu")?;
            }
            for u in self.units.iter().filter(|u| u.area == a.id) {
                writeln!(f, "  {:<14} {:+.4} MW", u.id, u.delta_mw)?;
            }
            writeln!(
                f,
                "  classic total  {:+.4} MW",
                self.classic_total_mw(&a.id)
            )?;
        }
        for (id, v) in &self.tie_lines {
            writeln!(f, "tie-line {id}: steady dp_tie {v:+.3e} pu")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::Channel;

    fn series(rows: &[[f64; 5]]) -> TimeSeries {
        let mut s = TimeSeries::new(vec![
            Channel::new("t", "s"),
            Channel::new("a.df", "Hz"),
            Channel::new("a.ace", "pu"),
            Channel::new("a.g.dp", "MW"),
            Channel::new("a.dvpp.p", "MW"),
        ]);
        s.rows = rows.iter().map(|r| r.to_vec()).collect();
        s
    }

    #[test]
    fn quiet_run_has_zero_deltas() {
        let rows: Vec<[f64; 5]> = (1..=50).map(|k| [k as f64, 0.0, 0.0, 0.0, 7.0]).collect();
        let s = summarize(&series(&rows), &[]);
        let a = s.area("a").unwrap();
        assert_eq!(a.nadir_hz, 0.0);
        assert_eq!(a.steady_df_hz, 0.0);
        assert_eq!(s.classic_total_mw("a"), 0.0);
        assert_eq!(s.dvpp_delta_mw("a"), 0.0);
    }

    #[test]
    fn nadir_steady_and_event_windows() {
        let rows: Vec<[f64; 5]> = (1..=100)
            .map(|k| {
                let t = k as f64;
                let df = if t == 30.0 {
                    -0.2
                } else if t > 20.0 {
                    -0.01
                } else {
                    0.0
                };
                let ace = if t == 25.0 {
                    0.5
                } else if t == 70.0 {
                    -0.3
                } else {
                    0.0
                };
                [
                    t,
                    df,
                    ace,
                    if t > 20.0 { 2.0 } else { 0.0 },
                    7.0 + t / 100.0,
                ]
            })
            .collect();
        let s = summarize(&series(&rows), &[60.0, 20.0]);
        let a = s.area("a").unwrap();
        assert_eq!((a.nadir_hz, a.nadir_time), (-0.2, 30.0));
        assert!((a.steady_df_hz + 0.01).abs() < 1e-15);
        assert_eq!(a.max_ace_after_event, vec![(20.0, 0.5), (60.0, 0.3)]);
        assert_eq!(s.unit_delta("a", "g"), Some(2.0));
        // mean of 7.91..=8.00 minus 7.01
        assert!((s.dvpp_delta_mw("a") - (7.955 - 7.01)).abs() < 1e-12);
    }
}
