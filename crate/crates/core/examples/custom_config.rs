//! Builds a configuration from TOML text: a single area with a ramp-limited
//! thermal unit, a hydro unit and a three-turbine plant, then runs it and
//! writes its outputs.

use std::path::Path;

use dvpp_sfc::output::emit_outputs;
use dvpp_sfc::summary::summarize;
use dvpp_sfc::SimConfig;

const CONFIG: &str = r#"
schema_version = 1
name = "island"
duration = 150.0

[output]
decimation = 10
channels = ["frequency", "powers"]

[[areas]]
id = "island"
base_mva = 50.0
nominal_load_mw = 40.0
gde = { inertia = 3.0, damping = 1.5 }

[[areas.generators]]
id = "steam"
tech = "thermal"
participation = 0.5
ramp_limit = 0.05

[[areas.generators]]
id = "dam"
tech = "hydro"
participation = 0.3
droop = 3.0

[areas.dvpp]
participation = 0.2

[[areas.dvpp.units]]
id = "wt_a"
p_rated = 2.0
p_deload = 1.6

[[areas.dvpp.units]]
id = "wt_b"
p_rated = 2.0
p_deload = 1.6

[[areas.dvpp.units]]
id = "wt_c"
p_rated = 3.0
p_deload = 2.0
p_available = 2.4

[[events]]
time = 20.0
kind = "load_step"
area = "island"
delta_mw = 2.0

[[events]]
time = 70.0
kind = "unit_trip"
area = "island"
unit = "wt_b"
"#;

fn main() -> dvpp_sfc::Result<()> {
    let cfg = SimConfig::from_toml_str(CONFIG)?;
    let out = dvpp_sfc::run(&cfg)?;
    print!("{}", summarize(&out.series, &out.event_times));
    for path in emit_outputs(&out, &cfg.output, Path::new("out"))? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
