//! Three-stage experiment: uniform goals, then two frequent "special"
//! branches, then uniform goals again with anchor coding.
//!
//! cargo run --example three_stage_anchor

use std::collections::BTreeMap;
use std::path::Path;

use formicode::cli::load_config;
use formicode::coding::{anchor_encode, AnchorScheme};
use formicode::data::{load_table, table_to_dataset, ColumnRoles};
use formicode::simulation::run_experiment;
use formicode::stats::linear_fit;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/three_stage_30branch.json");
    let (file, _) = load_config(&path)?;
    let config = file.to_experiment(file.seed.unwrap_or(0))?;
    let records = run_experiment(&config)?;

    let scheme = AnchorScheme::new(vec![10, 20])?;
    for i in [8, 10, 13, 26] {
        println!("branch {i:>2}: {}", anchor_encode(i, &scheme)?);
    }

    let mut means: BTreeMap<(u32, u64), (f64, u32)> = BTreeMap::new();
    for r in &records {
        let slot = means.entry((r.stage, r.goal)).or_default();
        slot.0 += r.contact_duration_s;
        slot.1 += 1;
    }
    println!("\nbranch  stage1  stage3");
    for i in 1..=30u64 {
        let m = |s| {
            means
                .get(&(s, i))
                .map(|(t, n)| t / f64::from(*n))
                .unwrap_or(f64::NAN)
        };
        println!("{i:>6} {:>7.1} {:>7.1}", m(1), m(3));
    }
    for stage in [1, 3] {
        let (xs, ts): (Vec<f64>, Vec<f64>) = records
            .iter()
            .filter(|r| r.stage == stage)
            .map(|r| (r.goal as f64, r.contact_duration_s))
            .unzip();
        println!("stage {stage}: r(t, i) = {:.3}", linear_fit(&xs, &ts)?.r);
    }

    let t5 = table_to_dataset(
        load_table(5)?,
        ColumnRoles {
            x: "distance",
            t: "times_s",
            label: None,
        },
    )?;
    let fit = linear_fit(&t5.xs(), &t5.ts())?;
    println!(
        "published third stage, distance to nearest anchor: r = {:.3} over {} contacts",
        fit.r, fit.n
    );
    Ok(())
}
