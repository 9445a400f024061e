//! Recompute the published figures from the embedded tables.
//!
//! cargo run --example replicate_tables

use formicode::cli::replicate;
use formicode::data::{load_table, TABLE_IDS};

fn main() -> formicode::Result<()> {
    for id in TABLE_IDS {
        let t = load_table(id)?;
        println!(
            "table {id}: {} rows, sha256 {}{}",
            t.rows.len(),
            &t.checksum()[..16],
            if t.non_replicable {
                " (summary only)"
            } else {
                ""
            }
        );
    }
    let report = replicate("all")?;
    for c in &report.checks {
        println!(
            "[{}] {}: {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.selector,
            c.quantity
        );
    }
    println!("all pass: {}", report.all_pass);
    Ok(())
}
