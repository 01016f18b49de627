//! A 100 ms bus fault at WT1 (t = 90 s): its output collapses, the bus
//! voltage sags, and both recover once the fault clears.

use dvpp_sfc::scenario::builtin_scenarios;

fn main() -> dvpp_sfc::Result<()> {
    let cfg = builtin_scenarios()
        .remove("short-circuit")
        .expect("built-in");
    let out = dvpp_sfc::run(&cfg)?;
    let s = &out.series;
    let cols = [
        "area1.wt1.p",
        "area1.wt1.v",
        "area1.wt2.p",
        "area1.df",
        "tie12.dp_tie",
    ];
    println!("{:>7} {}", "t", cols.map(|c| format!("{c:>14}")).join(""));
    for row in s.rows.iter().filter(|r| r[0] > 89.97 && r[0] < 96.0) {
        let k = (row[0] * 100.0).round() as i64;
        if k <= 9015 || k % 50 == 0 {
            let vals: String = cols
                .iter()
                .map(|c| format!("{:>14.6}", row[s.index_of(c).expect("channel")]))
                .collect();
            println!("{:>7.2} {vals}", row[0]);
        }
    }
    Ok(())
}
