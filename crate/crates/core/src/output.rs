//! Time-series containers, CSV reading and writing, and SVG plots.
//!
//! CSV headers are `name [unit]` with the time column first. Values are
//! written in Rust's shortest round-trip representation, so a file read
//! back reproduces the recorded `f64`s exactly.

use std::fs;
use std::path::{Path, PathBuf};

use plotters::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::OutputConfig;
use crate::error::{Error, Result};
use crate::sim::SimOutput;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelGroup {
    Frequency,
    Powers,
    Ace,
    TieLine,
    Voltage,
}

impl ChannelGroup {
    pub fn all() -> Vec<Self> {
        vec![
            Self::Frequency,
            Self::Powers,
            Self::Ace,
            Self::TieLine,
            Self::Voltage,
        ]
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Frequency => "frequency",
            Self::Powers => "powers",
            Self::Ace => "ace",
            Self::TieLine => "tie_line",
            Self::Voltage => "voltage",
        }
    }

    fn title(self) -> &'static str {
        match self {
            Self::Frequency => "Frequency deviation [Hz]",
            Self::Powers => "Unit powers [MW]",
            Self::Ace => "Area control error [pu]",
            Self::TieLine => "Tie-line power deviation [pu]",
            Self::Voltage => "Bus voltage [pu]",
        }
    }

    /// Plot group of a recorded channel, from its name suffix. Load and
    /// redispatch-factor channels are not plotted.
    pub fn of(channel: &str) -> Option<Self> {
        match channel.rsplit('.').next()? {
            "df" => Some(Self::Frequency),
            "dp" | "p" => Some(Self::Powers),
            "ace" => Some(Self::Ace),
            "dp_tie" => Some(Self::TieLine),
            "v" => Some(Self::Voltage),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Channel {
    pub name: String,
    pub unit: String,
}

impl Channel {
    pub fn new(name: impl Into<String>, unit: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }

    fn header(&self) -> String {
        format!("{} [{}]", self.name, self.unit)
    }

    fn parse_header(field: &str) -> Option<Self> {
        let (name, rest) = field.trim().split_once(" [")?;
        let unit = rest.strip_suffix(']')?;
        Some(Self::new(name, unit))
    }
}

/// Row-major samples on a uniform time grid. Column 0 is time in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub channels: Vec<Channel>,
    pub rows: Vec<Vec<f64>>,
}

impl TimeSeries {
    pub fn new(channels: Vec<Channel>) -> Self {
        Self {
            channels,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.channels.iter().position(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.index_of(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0]).collect()
    }

    /// Every `n`-th row, ending on multiples of `n` steps.
    pub fn decimated(&self, n: usize) -> Self {
        let n = n.max(1);
        Self {
            channels: self.channels.clone(),
            rows: self.rows.iter().skip(n - 1).step_by(n).cloned().collect(),
        }
    }
}

pub fn write_csv(series: &TimeSeries, path: &Path) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(csv_err)?;
    w.write_record(series.channels.iter().map(Channel::header))
        .map_err(csv_err)?;
    for row in &series.rows {
        w.write_record(row.iter().map(|v| v.to_string()))
            .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a file written by [`write_csv`]. Every row must have the header's
/// column count and only finite values.
pub fn read_csv(path: &Path) -> Result<TimeSeries> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let format_err = |reason: String| Error::Format {
        path: path.to_path_buf(),
        reason,
    };
    let mut r = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(csv_err)?;
    let channels = r
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(|h| {
            Channel::parse_header(h).ok_or_else(|| format_err(format!("bad header field `{h}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    if channels.first().map(|c| c.name.as_str()) != Some("t") {
        return Err(format_err("first column must be `t [s]`".into()));
    }
    let mut series = TimeSeries::new(channels);
    for (i, record) in r.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let line = i + 2;
        if record.len() != series.channels.len() {
            return Err(format_err(format!(
                "line {line}: {} fields, expected {}",
                record.len(),
                series.channels.len()
            )));
        }
        let row = record
            .iter()
            .map(|f| match f.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(format_err(format!(
                    "line {line}: `{f}` is not a finite number"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        series.rows.push(row);
    }
    Ok(series)
}

/// Draws every channel of `group` into one SVG. Returns `false` when the
/// series has no channel in that group.
pub fn plot_group(series: &TimeSeries, group: ChannelGroup, path: &Path) -> Result<bool> {
    let columns: Vec<usize> = (1..series.channels.len())
        .filter(|i| ChannelGroup::of(&series.channels[*i].name) == Some(group))
        .collect();
    if columns.is_empty() {
        return Ok(false);
    }
    let plot_err = |e: String| Error::Format {
        path: path.to_path_buf(),
        reason: e,
    };

    let times = series.times();
    let (t0, t1) = match (times.first(), times.last()) {
        (Some(a), Some(b)) if b > a => (*a, *b),
        (Some(a), _) => (*a, a + 1.0),
        _ => (0.0, 1.0),
    };
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for row in &series.rows {
        for i in &columns {
            lo = lo.min(row[*i]);
            hi = hi.max(row[*i]);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        (lo, hi) = (-1.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 1.0 };
    let (lo, hi) = (lo - pad, hi + pad);

    let root = SVGBackend::new(path, (960, 540)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_err(e.to_string()))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(group.title(), ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(36)
        .y_label_area_size(72)
        .build_cartesian_2d(t0..t1, lo..hi)
        .map_err(|e| plot_err(e.to_string()))?;
    chart
        .configure_mesh()
        .x_desc("t [s]")
        .draw()
        .map_err(|e| plot_err(e.to_string()))?;
    for (n, i) in columns.iter().enumerate() {
        let color = Palette99::pick(n).to_rgba();
        chart
            .draw_series(LineSeries::new(
                series.rows.iter().map(|r| (r[0], r[*i])),
                color.stroke_width(2),
            ))
            .map_err(|e| plot_err(e.to_string()))?
            .label(series.channels[*i].name.clone())
            .legend(move |(x, y)| {
                PathElement::new(vec![(x, y), (x + 18, y)], color.stroke_width(2))
            });
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(|e| plot_err(e.to_string()))?;
    root.present().map_err(|e| plot_err(e.to_string()))?;
    Ok(true)
}

/// Writes the CSV, one plot per selected group and, when recorded, the
/// three-phase waveform CSV. Returns the written paths.
pub fn emit_outputs(
    output: &SimOutput,
    cfg: &OutputConfig,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();

    let csv_path = out_dir.join(
        cfg.csv
            .clone()
            .unwrap_or_else(|| format!("{}.csv", output.name)),
    );
    write_csv(&output.series.decimated(cfg.decimation), &csv_path)?;
    written.push(csv_path);

    if let Some(tp) = &output.three_phase {
        let path = out_dir.join(format!("{}_three_phase.csv", output.name));
        write_csv(tp, &path)?;
        written.push(path);
    }

    if !cfg.channels.is_empty() {
        let plot_dir = out_dir.join(&cfg.plot_dir);
        fs::create_dir_all(&plot_dir).map_err(|e| Error::io(&plot_dir, e))?;
        let mut groups = cfg.channels.clone();
        groups.sort();
        groups.dedup();
        for g in groups {
            let path = plot_dir.join(format!("{}_{}.svg", output.name, g.name()));
            if plot_group(&output.series, g, &path)? {
                written.push(path);
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TimeSeries {
        let mut s = TimeSeries::new(vec![
            Channel::new("t", "s"),
            Channel::new("a1.df", "Hz"),
            Channel::new("a1.thermal.dp", "MW"),
        ]);
        for k in 1..=20 {
            let t = k as f64 * 0.01;
            s.rows.push(vec![t, -0.1 * t.sin() / 3.0, 1.0 / 7.0 + t]);
        }
        s
    }

    #[test]
    fn groups_from_names() {
        assert_eq!(ChannelGroup::of("area1.df"), Some(ChannelGroup::Frequency));
        assert_eq!(
            ChannelGroup::of("area1.hydro.dp"),
            Some(ChannelGroup::Powers)
        );
        assert_eq!(ChannelGroup::of("area1.dvpp.p"), Some(ChannelGroup::Powers));
        assert_eq!(
            ChannelGroup::of("tie12.dp_tie"),
            Some(ChannelGroup::TieLine)
        );
        assert_eq!(ChannelGroup::of("area1.wt1.v"), Some(ChannelGroup::Voltage));
        assert_eq!(ChannelGroup::of("area1.load"), None);
        assert_eq!(ChannelGroup::of("area1.wt1.d"), None);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        let s = sample();
        write_csv(&s, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("t [s],a1.df [Hz],a1.thermal.dp [MW]\n"));
        assert!(!text.contains('\r'));
        assert_eq!(read_csv(&path).unwrap(), s);
    }

    #[test]
    fn decimation_keeps_every_nth() {
        let d = sample().decimated(10);
        assert_eq!(d.len(), 2);
        assert!((d.rows[0][0] - 0.1).abs() < 1e-12);
        assert!((d.rows[1][0] - 0.2).abs() < 1e-12);
        assert_eq!(sample().decimated(1), sample());
    }

    #[test]
    fn reader_rejects_malformed_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, "t [s],a.df [Hz]\n0.01,0\n0.02\n").unwrap();
        assert!(matches!(read_csv(&path), Err(Error::Format { .. })));
        fs::write(&path, "t [s],a.df [Hz]\n0.01,NaN\n").unwrap();
        assert!(read_csv(&path).is_err());
        fs::write(&path, "time,a.df [Hz]\n0.01,0\n").unwrap();
        assert!(read_csv(&path).is_err());
    }

    #[test]
    fn plot_written_only_for_present_groups() {
        let dir = tempfile::tempdir().unwrap();
        let s = sample();
        let p = dir.path().join("f.svg");
        assert!(plot_group(&s, ChannelGroup::Frequency, &p).unwrap());
        let svg = fs::read_to_string(&p).unwrap();
        assert!(svg.contains("<svg"));
        assert!(!plot_group(&s, ChannelGroup::TieLine, &dir.path().join("x.svg")).unwrap());
    }
}
