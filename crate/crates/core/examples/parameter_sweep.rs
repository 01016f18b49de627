//! Sweeps the plant's share of the secondary command. Independent runs go
//! on their own threads; each owns its whole system.

use dvpp_sfc::scenario::builtin_scenarios;
use dvpp_sfc::summary::summarize;

fn main() -> dvpp_sfc::Result<()> {
    let base = builtin_scenarios().remove("nominal").expect("built-in");
    let shares: [f64; 5] = [0.0, 0.05, 0.1, 0.2, 0.4];
    let configs: Vec<_> = shares
        .iter()
        .map(|k| {
            let mut cfg = base.clone();
            cfg.name = format!("k{:03}", (k * 100.0).round() as u32);
            let classic = (1.0 - k) / 3.0;
            for g in &mut cfg.areas[0].generators {
                g.participation = classic;
            }
            cfg.areas[0].dvpp.as_mut().expect("plant").participation = *k;
            cfg
        })
        .collect();

    let results = std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| s.spawn(move || dvpp_sfc::run(c)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("run thread"))
            .collect::<Vec<_>>()
    });

    println!(
        "{:>6} {:>10} {:>10} {:>11} {:>9}",
        "K_dvpp", "classic", "plant", "nadir [Hz]", "at [s]"
    );
    for (k, r) in shares.iter().zip(results) {
        let out = r?;
        let s = summarize(&out.series, &out.event_times);
        let a = s.area("area1").expect("area");
        println!(
            "{k:>6.2} {:>10.4} {:>10.4} {:>11.5} {:>9.2}",
            s.classic_total_mw("area1"),
            s.dvpp_delta_mw("area1"),
            a.nadir_hz,
            a.nadir_time
        );
    }
    Ok(())
}
