//! Scout/forager trial protocol.
//!
//! A trial draws a goal from the stage's distribution, encodes it with the
//! stage's coding policy, times the contact with [`TimeModel`], and passes
//! the message through a channel that corrupts each symbol independently.
//! A corrupted message carries no position information, so the team heads to
//! a uniformly random position (which can still be the goal by luck). A team
//! that misses scans outward from where it arrived: `d, d+1, d-1, d+2, ...`.
//!
//! Each trial's randomness comes from a ChaCha stream keyed by
//! `(seed, trial_id)`, so records do not depend on execution order.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coding::{
    anchor_encode, compress_route, optimal_prefix_lengths, sample_transmission_time,
    unitary_encode, AnchorScheme, CodeWord, MessageDistribution, TimeModel, Token,
};
use crate::maze::{leaf_count, leaf_to_route, BinaryTreeMaze, CombLayout};
use crate::{Error, Result};

/// Search budget per forager, in seconds (30 minutes).
pub const DEFAULT_SEARCH_BUDGET_S: f64 = 1800.0;
/// Unvalidated default: chance that any one code symbol is misread.
pub const DEFAULT_DECODE_ERROR: f64 = 0.02;
/// Unvalidated default contact-time noise, in seconds.
pub const DEFAULT_NOISE_SD: f64 = 10.0;
pub const DEFAULT_SECONDS_PER_CHECK: f64 = 20.0;

/// Maze geometry without a goal; goals come from the stage distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MazeTemplate {
    BinaryTree {
        depth: u32,
    },
    Comb {
        layout: CombLayout,
        branch_count: u32,
    },
}

impl MazeTemplate {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MazeTemplate::BinaryTree { depth } => leaf_count(depth).map(|_| ()),
            MazeTemplate::Comb { branch_count, .. } if branch_count < 2 => Err(Error::InvalidMaze(
                format!("comb needs at least 2 branches, got {branch_count}"),
            )),
            MazeTemplate::Comb { .. } => Ok(()),
        }
    }

    /// Smallest and largest goal index.
    pub fn goal_range(&self) -> (u64, u64) {
        match *self {
            MazeTemplate::BinaryTree { depth } => (0, (1u64 << depth) - 1),
            MazeTemplate::Comb { branch_count, .. } => (1, u64::from(branch_count)),
        }
    }

    pub fn position_count(&self) -> u64 {
        let (lo, hi) = self.goal_range();
        hi - lo + 1
    }

    /// Every goal index, uniformly weighted.
    pub fn uniform_goals(&self) -> Result<MessageDistribution> {
        let (lo, hi) = self.goal_range();
        let hi = u32::try_from(hi).map_err(|_| {
            Error::InvalidConfig("maze has too many positions for a goal distribution".into())
        })?;
        MessageDistribution::uniform(lo as u32..=hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum CodingPolicy {
    /// Comb: `i` tally marks. Tree: one symbol per turn.
    Unitary,
    /// Tree only: period-compressed route.
    CompressedRoute,
    /// Comb only: nearest anchor plus offset.
    Anchor(AnchorScheme),
    /// Huffman lengths for the stage's goal distribution.
    OptimalPrefix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StagePlan {
    pub goal_distribution: MessageDistribution,
    pub coding: CodingPolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub maze: MazeTemplate,
    pub stages: Vec<StagePlan>,
    pub time_model: TimeModel,
    pub per_symbol_decode_error: f64,
    pub trials_per_stage: u32,
    pub seed: u64,
    pub seconds_per_check: f64,
    pub search_budget_s: f64,
}

impl ExperimentConfig {
    /// Config with default channel and search parameters.
    pub fn new(
        maze: MazeTemplate,
        stages: Vec<StagePlan>,
        time_model: TimeModel,
        trials_per_stage: u32,
        seed: u64,
    ) -> Result<Self> {
        let config = ExperimentConfig {
            maze,
            stages,
            time_model,
            per_symbol_decode_error: DEFAULT_DECODE_ERROR,
            trials_per_stage,
            seed,
            seconds_per_check: DEFAULT_SECONDS_PER_CHECK,
            search_budget_s: DEFAULT_SEARCH_BUDGET_S,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_decode_error(mut self, per_symbol: f64) -> Result<Self> {
        self.per_symbol_decode_error = per_symbol;
        self.validate()?;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.maze.validate()?;
        if self.stages.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one stage is required".into(),
            ));
        }
        if self.trials_per_stage == 0 {
            return Err(Error::InvalidConfig(
                "trials_per_stage must be positive".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.per_symbol_decode_error) {
            return Err(Error::InvalidConfig(format!(
                "per-symbol decode error {} not in [0, 1)",
                self.per_symbol_decode_error
            )));
        }
        if !(self.seconds_per_check.is_finite() && self.seconds_per_check >= 0.0) {
            return Err(Error::InvalidConfig(
                "seconds_per_check must be non-negative".into(),
            ));
        }
        if !(self.search_budget_s.is_finite() && self.search_budget_s > 0.0) {
            return Err(Error::InvalidConfig(
                "search budget must be positive".into(),
            ));
        }
        let (lo, hi) = self.maze.goal_range();
        for (s, stage) in self.stages.iter().enumerate() {
            let stage_no = s + 1;
            let dist = &stage.goal_distribution;
            if let Some(bad) = dist
                .support()
                .find(|&g| u64::from(g) < lo || u64::from(g) > hi)
            {
                return Err(Error::InvalidConfig(format!(
                    "stage {stage_no}: goal {bad} outside maze positions [{lo}, {hi}]"
                )));
            }
            match (&stage.coding, &self.maze) {
                (CodingPolicy::CompressedRoute, MazeTemplate::Comb { .. }) => {
                    return Err(Error::InvalidConfig(format!(
                        "stage {stage_no}: compressed-route coding needs a binary tree"
                    )));
                }
                (CodingPolicy::Anchor(_), MazeTemplate::BinaryTree { .. }) => {
                    return Err(Error::InvalidConfig(format!(
                        "stage {stage_no}: anchor coding needs a comb maze"
                    )));
                }
                (CodingPolicy::Anchor(scheme), MazeTemplate::Comb { branch_count, .. }) => {
                    scheme
                        .check_range(*branch_count)
                        .map_err(|e| Error::InvalidConfig(format!("stage {stage_no}: {e}")))?;
                }
                _ => {}
            }
            let lengths: Vec<f64> = stage_codebook(self, s)?
                .values()
                .map(CodeWord::length)
                .collect();
            let min = lengths.iter().copied().fold(f64::INFINITY, f64::min);
            let max = lengths.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            self.time_model
                .check_operating_range(min, max)
                .map_err(|e| Error::InvalidConfig(format!("stage {stage_no}: {e}")))?;
        }
        Ok(())
    }
}

/// One scout-to-team transfer and the team's search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_id: u64,
    /// 1-based stage number.
    pub stage: u32,
    pub goal: u64,
    pub code_length: f64,
    pub contact_duration_s: f64,
    pub decoded_goal: u64,
    pub success: bool,
    pub search_time_s: f64,
}

fn encode_goal(
    maze: &MazeTemplate,
    policy: &CodingPolicy,
    goal: u32,
    prefix: Option<&BTreeMap<u32, u32>>,
) -> Result<CodeWord> {
    match (policy, maze) {
        (CodingPolicy::Unitary, MazeTemplate::Comb { .. }) => unitary_encode(goal),
        (CodingPolicy::Unitary, MazeTemplate::BinaryTree { depth }) => {
            let route = leaf_to_route(&BinaryTreeMaze::new(*depth, u64::from(goal))?);
            let tokens = route.turns().iter().copied().map(Token::Turn).collect();
            Ok(CodeWord::new(tokens, route.len() as f64))
        }
        (CodingPolicy::CompressedRoute, MazeTemplate::BinaryTree { depth }) => Ok(compress_route(
            &leaf_to_route(&BinaryTreeMaze::new(*depth, u64::from(goal))?),
        )),
        (CodingPolicy::Anchor(scheme), MazeTemplate::Comb { .. }) => anchor_encode(goal, scheme),
        (CodingPolicy::OptimalPrefix, _) => {
            let bits = prefix.and_then(|p| p.get(&goal)).copied().ok_or_else(|| {
                Error::InvalidCode(format!("no prefix code word for goal {goal}"))
            })?;
            Ok(CodeWord::new(
                vec![Token::Unit; bits as usize],
                f64::from(bits),
            ))
        }
        (policy, maze) => Err(Error::InvalidConfig(format!(
            "coding policy {policy:?} does not apply to {maze:?}"
        ))),
    }
}

/// Code word for every goal in the stage's support.
pub fn stage_codebook(
    config: &ExperimentConfig,
    stage_index: usize,
) -> Result<BTreeMap<u32, CodeWord>> {
    let stage = config
        .stages
        .get(stage_index)
        .ok_or_else(|| Error::InvalidConfig(format!("no stage {}", stage_index + 1)))?;
    let prefix = match stage.coding {
        CodingPolicy::OptimalPrefix => {
            Some(optimal_prefix_lengths(&stage.goal_distribution.positive_part())?.lengths)
        }
        _ => None,
    };
    stage
        .goal_distribution
        .support()
        .map(|g| {
            Ok((
                g,
                encode_goal(&config.maze, &stage.coding, g, prefix.as_ref())?,
            ))
        })
        .collect()
}

/// Generator for one trial, independent of every other trial.
pub fn trial_rng(seed: u64, trial_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_id);
    rng
}

fn random_position<R: Rng + ?Sized>(maze: &MazeTemplate, rng: &mut R) -> u64 {
    let (lo, hi) = maze.goal_range();
    rng.random_range(lo..=hi)
}

/// Sends `word` through the per-symbol error channel and returns where the
/// team goes.
fn decode<R: Rng + ?Sized>(
    word: &CodeWord,
    goal: u64,
    config: &ExperimentConfig,
    rng: &mut R,
) -> u64 {
    let corrupted = config.per_symbol_decode_error > 0.0
        && (0..word.symbol_count()).any(|_| rng.random::<f64>() < config.per_symbol_decode_error);
    if corrupted {
        random_position(&config.maze, rng)
    } else {
        goal
    }
}

/// Positions visited scanning outward from `start` until `goal` is found,
/// alternating `+1, -1, +2, -2, ...` and skipping positions off the maze.
pub fn outward_scan_visits(start: u64, goal: u64, lo: u64, hi: u64) -> u64 {
    let mut visits = 1;
    if start == goal {
        return visits;
    }
    for step in 1..=(hi - lo) {
        if start + step <= hi {
            visits += 1;
            if start + step == goal {
                return visits;
            }
        }
        if start >= lo + step {
            visits += 1;
            if start - step == goal {
                return visits;
            }
        }
    }
    unreachable!("goal {goal} outside [{lo}, {hi}]")
}

fn search_time(visits: u64, config: &ExperimentConfig) -> f64 {
    (visits as f64 * config.seconds_per_check).min(config.search_budget_s)
}

fn run_trial_with(
    config: &ExperimentConfig,
    stage_index: usize,
    codebook: &BTreeMap<u32, CodeWord>,
    trial_id: u64,
) -> TrialRecord {
    let mut rng = trial_rng(config.seed, trial_id);
    let stage = &config.stages[stage_index];
    let goal = stage.goal_distribution.sample(&mut rng);
    let word = &codebook[&goal];
    let contact = sample_transmission_time(word, &config.time_model, &mut rng);
    let goal = u64::from(goal);
    let decoded = decode(word, goal, config, &mut rng);
    let (lo, hi) = config.maze.goal_range();
    TrialRecord {
        trial_id,
        stage: stage_index as u32 + 1,
        goal,
        code_length: word.length(),
        contact_duration_s: contact,
        decoded_goal: decoded,
        success: decoded == goal,
        search_time_s: search_time(outward_scan_visits(decoded, goal, lo, hi), config),
    }
}

/// Trial id of the `index`-th trial of stage `stage_index` (both 0-based).
pub fn trial_id(config: &ExperimentConfig, stage_index: usize, index: u32) -> u64 {
    stage_index as u64 * u64::from(config.trials_per_stage) + u64::from(index)
}

/// Runs a single trial. The record depends only on `(config.seed, trial_id)`.
pub fn run_trial(
    config: &ExperimentConfig,
    stage_index: usize,
    trial_id: u64,
) -> Result<TrialRecord> {
    let codebook = stage_codebook(config, stage_index)?;
    Ok(run_trial_with(config, stage_index, &codebook, trial_id))
}

/// Runs every stage in order, `trials_per_stage` trials each.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    let mut records = Vec::with_capacity(config.stages.len() * config.trials_per_stage as usize);
    for stage_index in 0..config.stages.len() {
        let codebook = stage_codebook(config, stage_index)?;
        records.extend((0..config.trials_per_stage).map(|k| {
            run_trial_with(
                config,
                stage_index,
                &codebook,
                trial_id(config, stage_index, k),
            )
        }));
    }
    Ok(records)
}

/// Search times of foragers with and without a scout contact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedSearchTimes {
    pub informed: Vec<f64>,
    pub naive: Vec<f64>,
}

/// Control experiment on the first stage: each pair shares a goal; the
/// informed forager decodes the scout's message, the naive one visits
/// positions in a uniformly random order without repeats. Both are capped at
/// the search budget.
pub fn naive_vs_informed<R: Rng + ?Sized>(
    config: &ExperimentConfig,
    rng: &mut R,
) -> Result<PairedSearchTimes> {
    config.validate()?;
    let codebook = stage_codebook(config, 0)?;
    let (lo, hi) = config.maze.goal_range();
    let mut positions: Vec<u64> = (lo..=hi).collect();
    let mut informed = Vec::with_capacity(config.trials_per_stage as usize);
    let mut naive = Vec::with_capacity(config.trials_per_stage as usize);
    for _ in 0..config.trials_per_stage {
        let goal = config.stages[0].goal_distribution.sample(rng);
        let word = &codebook[&goal];
        let goal = u64::from(goal);
        let decoded = decode(word, goal, config, rng);
        informed.push(search_time(
            outward_scan_visits(decoded, goal, lo, hi),
            config,
        ));

        positions.shuffle(rng);
        let rank = positions
            .iter()
            .position(|&p| p == goal)
            .expect("goal in range") as u64
            + 1;
        naive.push(search_time(rank, config));
    }
    Ok(PairedSearchTimes { informed, naive })
}
