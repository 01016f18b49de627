//! The benchmark load step: +6 MW in area 1 at t = 40 s.
//!
//! Prints the steady-state shares picked up by the classic units and the
//! virtual power plant, then writes the CSV and plots under `out/`.

use std::path::Path;
use std::time::Instant;

use dvpp_sfc::output::emit_outputs;
use dvpp_sfc::scenario::builtin_scenarios;
use dvpp_sfc::summary::summarize;

fn main() -> dvpp_sfc::Result<()> {
    let cfg = builtin_scenarios().remove("nominal").expect("built-in");
    let start = Instant::now();
    let out = dvpp_sfc::run(&cfg)?;
    println!("simulated {} s in {:.2?}", cfg.duration, start.elapsed());

    let s = summarize(&out.series, &out.event_times);
    print!("{s}");
    println!(
        "classic {:.3} MW, plant {:.3} MW, wt1 {:.3} MW, wt2 {:.3} MW",
        s.classic_total_mw("area1"),
        s.dvpp_delta_mw("area1"),
        s.unit_delta("area1", "wt1").unwrap_or(0.0),
        s.unit_delta("area1", "wt2").unwrap_or(0.0),
    );

    for path in emit_outputs(&out, &cfg.output, Path::new("out"))? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
