//! Unit-step responses of the three transfer-function blocks, integrated
//! with fixed-step RK4.

use dvpp_sfc::blocks::LtiBlock;

fn main() -> dvpp_sfc::Result<()> {
    let mut blocks = [
        ("lag 1/(1+s)", LtiBlock::first_order_lag(1.0, 1.0)?),
        ("integrator 1/s", LtiBlock::integrator(1.0)?),
        (
            "lead-lag (1+2.5s)/(1+10s)",
            LtiBlock::lead_lag(1.0, 2.5, 10.0)?,
        ),
        (
            "penstock (1-s)/(1+0.5s)",
            LtiBlock::lead_lag(1.0, -1.0, 0.5)?,
        ),
    ];
    let dt = 0.01;
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12}",
        "t", "lag", "int", "lead-lag", "penstock"
    );
    for k in 1..=500 {
        let ys: Vec<f64> = blocks
            .iter_mut()
            .map(|(_, b)| b.step(1.0, dt))
            .collect::<dvpp_sfc::Result<_>>()?;
        if k % 50 == 0 {
            println!(
                "{:>6.2} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                k as f64 * dt,
                ys[0],
                ys[1],
                ys[2],
                ys[3]
            );
        }
    }
    println!("lag at t = 1 s vs 1 - e^-1:");
    let mut lag = LtiBlock::first_order_lag(1.0, 1.0)?;
    for _ in 0..100 {
        lag.step(1.0, dt)?;
    }
    println!("  {:.12} vs {:.12}", lag.output(), 1.0 - (-1.0f64).exp());
    for (name, b) in &blocks {
        println!("{name}: dc gain {:?}", b.dc_gain());
    }
    Ok(())
}
