//! Binary-tree maze: routes as bits, and recovering a transmission rate
//! from simulated contact times.
//!
//! cargo run --example binary_tree_rate

use formicode::coding::TimeModel;
use formicode::maze::{chance_probability, leaf_to_route, total_routes, BinaryTreeMaze, Maze};
use formicode::simulation::{
    run_experiment, CodingPolicy, ExperimentConfig, MazeTemplate, StagePlan,
};
use formicode::stats::{linear_fit, REFERENCE_RATES};

fn main() -> formicode::Result<()> {
    let maze = BinaryTreeMaze::new(6, 0b101100)?;
    println!(
        "leaf {} of a depth-6 tree is route {}",
        maze.goal_leaf(),
        leaf_to_route(&maze)
    );
    println!(
        "chance of guessing it: {}",
        chance_probability(&Maze::from(maze))
    );
    println!(
        "distinct routes in trees of depth 1..=6: {}",
        total_routes(6)?
    );

    for reference in REFERENCE_RATES {
        let model = TimeModel::from_rate(reference.bits_per_minute, 30.0, 10.0)?;
        let mut depths = Vec::new();
        let mut times = Vec::new();
        for depth in 2..=6 {
            let template = MazeTemplate::BinaryTree { depth };
            let stage = StagePlan {
                goal_distribution: template.uniform_goals()?,
                coding: CodingPolicy::Unitary,
            };
            let config = ExperimentConfig::new(template, vec![stage], model, 60, u64::from(depth))?;
            for r in run_experiment(&config)? {
                depths.push(r.code_length);
                times.push(r.contact_duration_s);
            }
        }
        let fit = linear_fit(&depths, &times)?;
        println!(
            "{}: true {:.3} bits/min, fitted t = {:.1} i + {:.1} (r = {:.3}), recovered {:.3} bits/min",
            reference.species,
            reference.bits_per_minute,
            fit.a,
            fit.b,
            fit.r,
            60.0 / fit.a
        );
    }
    Ok(())
}
