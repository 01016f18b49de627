//! Simultaneous load steps in both areas: each area's secondary loop
//! returns its own ACE and the tie-line deviation to zero.

use dvpp_sfc::scenario::builtin_scenarios;
use dvpp_sfc::summary::summarize;

fn main() -> dvpp_sfc::Result<()> {
    let cfg = builtin_scenarios().remove("two-area").expect("built-in");
    let out = dvpp_sfc::run(&cfg)?;
    let s = &out.series;
    let cols = [
        "area1.df",
        "area2.df",
        "area1.ace",
        "area2.ace",
        "tie12.dp_tie",
    ];
    println!("{:>7} {}", "t", cols.map(|c| format!("{c:>14}")).join(""));
    for row in s.rows.iter().step_by(500) {
        let vals: String = cols
            .iter()
            .map(|c| format!("{:>+14.6}", row[s.index_of(c).expect("channel")]))
            .collect();
        println!("{:>7.2} {vals}", row[0]);
    }
    print!("{}", summarize(s, &out.event_times));
    Ok(())
}
