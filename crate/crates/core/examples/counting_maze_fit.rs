//! Counting (comb) maze: fit contact time against branch number and test
//! foraging success against chance.
//!
//! cargo run --example counting_maze_fit

use num_rational::Ratio;

use formicode::data::{load_table, table_to_dataset, ColumnRoles};
use formicode::maze::{chance_probability, CombLayout, CombMaze, Maze};
use formicode::stats::{binomial_test, linear_fit};

fn main() -> formicode::Result<()> {
    let ds = table_to_dataset(
        load_table(3)?,
        ColumnRoles {
            x: "branch",
            t: "contact_s",
            label: Some("scout"),
        },
    )?;
    let fit = linear_fit(&ds.xs(), &ds.ts())?;
    println!(
        "vertical trunk, {} contacts: t = {:.2} i {:+.2}, r = {:.3}",
        fit.n, fit.a, fit.b, fit.r
    );
    print!("{}", load_table(4)?.render());

    let maze: Maze = CombMaze::new(CombLayout::Horizontal, 25, 13)?.into();
    let chance = chance_probability(&maze);
    assert_eq!(chance, Ratio::new(1, 25));
    let test = binomial_test(152, 117, chance)?;
    println!(
        "117 of 152 foragers on the right branch vs chance {chance}: p = {:.3e}",
        test.p_value
    );
    Ok(())
}
