//! Internal redispatch of a two-turbine plant: a share of a secondary
//! command, then the loss of one turbine and the other taking its share.

use dvpp_sfc::dvpp::{Dvpp, WindUnit};

fn main() -> dvpp_sfc::Result<()> {
    let units = vec![
        WindUnit::new("wt1", 4.1, 3.5, 4.1, 0.5)?,
        WindUnit::new("wt2", 4.1, 3.5, 4.1, 0.5)?,
    ];
    let mut plant = Dvpp::new(units, 0.1, 4.0)?;
    let dt = 0.01;
    let command_mw = 0.6;
    println!(
        "{:>6} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "t", "wt1", "wt2", "d1", "d2", "total"
    );
    for k in 1..=6000 {
        let t = k as f64 * dt;
        if k == 2000 {
            plant
                .unit_mut("wt2")
                .expect("unit exists")
                .set_online(false);
            println!("-- wt2 out of service at t = {t:.1} s");
        }
        let cmd = if t >= 5.0 { command_mw } else { 0.0 };
        plant.step(cmd, dt)?;
        if k % 250 == 0 {
            let d = plant.d_filtered();
            let u = plant.units();
            println!(
                "{:>6.2} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
                t,
                u[0].p_out(),
                u[1].p_out(),
                d[0],
                d[1],
                plant.total_output()
            );
        }
    }
    Ok(())
}
