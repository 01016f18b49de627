//! Primary (droop) response of each generator technology to a held
//! frequency drop, and the same units tracking a secondary command.

use dvpp_sfc::generators::{GeneratorUnit, Technology};

fn main() -> dvpp_sfc::Result<()> {
    let dt = 0.01;
    let df = -0.1;
    println!(
        "held df = {df} Hz, R = 2.4 Hz/pu: expected {:.5} pu",
        -df / 2.4
    );
    for tech in Technology::ALL {
        let mut g = GeneratorUnit::default_unit(tech);
        let mut trace = Vec::new();
        for k in 1..=30_000 {
            let p = g.step(df, 0.0, dt)?;
            if k == 10 || k == 100 || k == 1000 || k == 30_000 {
                trace.push(format!("{:.2}s {:+.5}", k as f64 * dt, p));
            }
        }
        println!("  {tech:<8} {}", trace.join("  "));
    }

    println!("secondary command 0.018 pu at nominal frequency:");
    for tech in Technology::ALL {
        let mut g = GeneratorUnit::default_unit(tech);
        for _ in 0..30_000 {
            g.step(0.0, 0.018, dt)?;
        }
        println!(
            "  {tech:<8} {:.4} MW after 300 s",
            g.p_mech_delta() * g.rated_power_mw
        );
    }
    Ok(())
}
