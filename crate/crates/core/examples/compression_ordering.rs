//! Regular turn sequences compress and are transmitted faster.
//!
//! cargo run --example compression_ordering

use formicode::coding::{complexity_class, compress_route};
use formicode::data::{load_table, Cell};
use formicode::maze::Route;
use formicode::stats::permutation_order_test;

fn main() -> formicode::Result<()> {
    let t2 = load_table(2)?;
    let (seq, mean) = (t2.column_index("sequence")?, t2.column_index("mean_s")?);
    println!(
        "{:<8} {:>10} {:>10} {:>8}",
        "route", "code", "proxy", "mean s"
    );
    for row in &t2.rows {
        if let (Cell::Text(s), Cell::Num(m)) = (&row[seq], &row[mean]) {
            let route: Route = s.parse()?;
            println!(
                "{:<8} {:>10} {:>10} {:>8}",
                s,
                compress_route(&route).to_string(),
                complexity_class(&route),
                m
            );
        }
    }
    // Seven six-turn routes fall into three complexity groups of sizes 2, 2, 3;
    // observed durations order the groups exactly.
    let p = permutation_order_test(&[2, 2, 3])?;
    println!("chance of that ordering under no effect: {p}");
    Ok(())
}
