//! Grid dynamic equivalent under a power imbalance: frequency trajectory
//! and the balanced three-phase voltage it synthesizes.

use dvpp_sfc::gde::{Gde, GdeParams};

fn main() -> dvpp_sfc::Result<()> {
    let mut gde = Gde::new(GdeParams::standalone())?;
    let dt = 0.001;
    println!(
        "{:>7} {:>10} {:>9} {:>9} {:>9} {:>9}",
        "t", "df [Hz]", "va", "vb", "vc", "sum"
    );
    for k in 1..=20_000 {
        // 5% load increase at t = 1 s
        let load = if k as f64 * dt >= 1.0 { 0.05 } else { 0.0 };
        gde.step(0.0, load, dt)?;
        if k % 1000 == 0 {
            let (va, vb, vc) = gde.three_phase();
            println!(
                "{:>7.3} {:>+10.5} {:>+9.5} {:>+9.5} {:>+9.5} {:>+9.1e}",
                k as f64 * dt,
                gde.delta_f_hz(),
                va,
                vb,
                vc,
                va + vb + vc
            );
        }
    }
    println!("voltage amplitude stays at {} pu", gde.voltage());
    Ok(())
}
