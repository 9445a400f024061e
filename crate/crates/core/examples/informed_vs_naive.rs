//! Foragers that received a message against foragers searching blind,
//! compared with an exact rank-sum test.
//!
//! cargo run --example informed_vs_naive

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use formicode::coding::TimeModel;
use formicode::simulation::{
    naive_vs_informed, CodingPolicy, ExperimentConfig, MazeTemplate, StagePlan,
};
use formicode::stats::rank_sum_test;

fn main() -> formicode::Result<()> {
    let maze = MazeTemplate::BinaryTree { depth: 4 };
    let stage = StagePlan {
        goal_distribution: maze.uniform_goals()?,
        coding: CodingPolicy::Unitary,
    };
    let config = ExperimentConfig::new(
        maze,
        vec![stage],
        TimeModel::from_rate(0.738, 30.0, 10.0)?,
        9,
        1,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let times = naive_vs_informed(&config, &mut rng)?;
    println!("naive:    {:?}", times.naive);
    println!("informed: {:?}", times.informed);
    let test = rank_sum_test(&times.naive, &times.informed)?;
    println!(
        "U = {}, p = {:.4e}{} ({})",
        test.statistic,
        test.p_value,
        test.p_fraction
            .map(|f| format!(" = {f}"))
            .unwrap_or_default(),
        test.method
    );
    Ok(())
}
