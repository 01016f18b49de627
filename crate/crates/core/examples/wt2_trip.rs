//! WT2 goes out of service at t = 80 s after the nominal load step. The
//! filtered redispatch moves the plant's share onto WT1 and the classic
//! units cover the lost schedule.

use dvpp_sfc::scenario::builtin_scenarios;

fn main() -> dvpp_sfc::Result<()> {
    let cfg = builtin_scenarios().remove("wt2-trip").expect("built-in");
    let out = dvpp_sfc::run(&cfg)?;
    let s = &out.series;
    let cols = [
        "area1.wt1.p",
        "area1.wt2.p",
        "area1.wt1.d",
        "area1.dvpp.p",
        "area1.df",
    ];
    let idx: Vec<usize> = cols
        .iter()
        .map(|c| s.index_of(c).expect("channel"))
        .collect();
    println!("{:>7} {}", "t", cols.map(|c| format!("{c:>13}")).join(""));
    for row in s.rows.iter().filter(|r| {
        let t = r[0];
        ((79.0..=110.0).contains(&t) && (t * 100.0).round() as i64 % 200 == 0)
            || (t * 100.0).round() as i64 % 2000 == 0
    }) {
        let vals: String = idx.iter().map(|i| format!("{:>13.5}", row[*i])).collect();
        println!("{:>7.2} {vals}", row[0]);
    }
    Ok(())
}
