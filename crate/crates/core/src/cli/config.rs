//! JSON experiment-config schema, version 1.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "maze": { "kind": "comb", "layout": "horizontal", "branch_count": 30 },
//!   "time_model": { "a": 6.0, "b": 5.0, "noise_sd": 5.0 },
//!   "trials_per_stage": 600,
//!   "seed": 7,
//!   "stages": [
//!     { "goals": { "type": "uniform" }, "coding": { "scheme": "unitary" } },
//!     { "goals": { "type": "anchored", "anchors": [10, 20], "anchor_probability": "1/3" },
//!       "coding": { "scheme": "anchor", "anchors": [10, 20] } }
//!   ]
//! }
//! ```
//!
//! Unknown fields are rejected everywhere. Probabilities are numbers or
//! `"p/q"` strings. Optional top-level fields: `seed`,
//! `per_symbol_decode_error`, `seconds_per_check`, `search_budget_s`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{canonical_hash, CliError};
use crate::coding::{AnchorScheme, MessageDistribution, TimeModel};
use crate::simulation::{
    CodingPolicy, ExperimentConfig, MazeTemplate, StagePlan, DEFAULT_DECODE_ERROR,
    DEFAULT_NOISE_SD, DEFAULT_SEARCH_BUDGET_S, DEFAULT_SECONDS_PER_CHECK,
};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema_version: u32,
    pub maze: MazeTemplate,
    pub time_model: TimeModelSpec,
    pub trials_per_stage: u32,
    pub stages: Vec<StageSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_symbol_decode_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds_per_check: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_budget_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeModelSpec {
    pub a: f64,
    pub b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_sd: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSpec {
    pub goals: GoalSpec,
    pub coding: CodingSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GoalSpec {
    /// Every maze position equally likely.
    Uniform,
    /// Comb only: each anchor gets `anchor_probability`, the rest share the remainder.
    Anchored {
        anchors: Vec<u32>,
        anchor_probability: Probability,
    },
    /// Keys are goal indices written as JSON object keys, e.g. `{"1": "1/2"}`.
    Explicit {
        probabilities: BTreeMap<String, Probability>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Probability {
    Number(f64),
    Text(String),
}

impl Probability {
    pub fn value(&self) -> Result<f64> {
        match self {
            Probability::Number(p) => Ok(*p),
            Probability::Text(s) => {
                let s = s.trim();
                if let Ok(r) = s.parse::<Ratio<u64>>() {
                    return Ok(*r.numer() as f64 / *r.denom() as f64);
                }
                s.parse::<f64>().map_err(|_| {
                    Error::InvalidDistribution(format!("cannot read probability {s:?}"))
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case", deny_unknown_fields)]
pub enum CodingSpec {
    Unitary,
    CompressedRoute,
    Anchor {
        anchors: Vec<u32>,
        #[serde(default = "default_name_length")]
        anchor_name_length: f64,
    },
    OptimalPrefix,
}

fn default_name_length() -> f64 {
    1.0
}

fn stage_error(stage_no: usize, e: Error) -> Error {
    Error::InvalidConfig(format!("stage {stage_no}: {e}"))
}

impl StageSpec {
    fn to_plan(&self, maze: &MazeTemplate, stage_no: usize) -> Result<StagePlan> {
        let goal_distribution = match &self.goals {
            GoalSpec::Uniform => maze.uniform_goals(),
            GoalSpec::Anchored {
                anchors,
                anchor_probability,
            } => match maze {
                MazeTemplate::Comb { branch_count, .. } => anchor_probability
                    .value()
                    .and_then(|p| MessageDistribution::anchored(*branch_count, anchors, p)),
                MazeTemplate::BinaryTree { .. } => Err(Error::InvalidDistribution(
                    "anchored goals need a comb maze".into(),
                )),
            },
            GoalSpec::Explicit { probabilities } => probabilities
                .iter()
                .map(|(i, p)| {
                    let index = i.trim().parse::<u32>().map_err(|_| {
                        Error::InvalidDistribution(format!("goal index {i:?} is not an integer"))
                    })?;
                    p.value().map(|v| (index, v))
                })
                .collect::<Result<BTreeMap<_, _>>>()
                .and_then(MessageDistribution::new),
        }
        .map_err(|e| stage_error(stage_no, e))?;
        let coding = match &self.coding {
            CodingSpec::Unitary => CodingPolicy::Unitary,
            CodingSpec::CompressedRoute => CodingPolicy::CompressedRoute,
            CodingSpec::OptimalPrefix => CodingPolicy::OptimalPrefix,
            CodingSpec::Anchor {
                anchors,
                anchor_name_length,
            } => CodingPolicy::Anchor(
                AnchorScheme::with_name_length(anchors.clone(), *anchor_name_length)
                    .map_err(|e| stage_error(stage_no, e))?,
            ),
        };
        Ok(StagePlan {
            goal_distribution,
            coding,
        })
    }
}

impl ConfigFile {
    /// Validated experiment for `seed`.
    pub fn to_experiment(&self, seed: u64) -> Result<ExperimentConfig> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidConfig(format!(
                "schema_version {} not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.maze.validate()?;
        let stages = self
            .stages
            .iter()
            .enumerate()
            .map(|(s, spec)| spec.to_plan(&self.maze, s + 1))
            .collect::<Result<Vec<_>>>()?;
        let tm = self.time_model;
        let config = ExperimentConfig {
            maze: self.maze,
            stages,
            time_model: TimeModel::new(tm.a, tm.b, tm.noise_sd.unwrap_or(DEFAULT_NOISE_SD))?,
            per_symbol_decode_error: self.per_symbol_decode_error.unwrap_or(DEFAULT_DECODE_ERROR),
            trials_per_stage: self.trials_per_stage,
            seed,
            seconds_per_check: self.seconds_per_check.unwrap_or(DEFAULT_SECONDS_PER_CHECK),
            search_budget_s: self.search_budget_s.unwrap_or(DEFAULT_SEARCH_BUDGET_S),
        };
        config.validate()?;
        Ok(config)
    }
}

/// Parses config text, returning the typed config and its raw JSON value.
pub fn parse_config(text: &str) -> Result<(ConfigFile, serde_json::Value), CliError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::usage(format!("config is not valid JSON: {e}")))?;
    let config = ConfigFile::deserialize(&value)
        .map_err(|e| CliError::usage(format!("invalid experiment config: {e}")))?;
    Ok((config, value))
}

pub fn load_config(path: &Path) -> Result<(ConfigFile, serde_json::Value), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text).map_err(|e| CliError::usage(format!("{}: {}", path.display(), e.message)))
}

/// Digest of the config as written, independent of key order and whitespace.
pub fn config_hash(value: &serde_json::Value) -> String {
    canonical_hash(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::EXIT_USAGE;

    const THREE_STAGE: &str = r#"{
        "schema_version": 1,
        "maze": {"kind": "comb", "layout": "horizontal", "branch_count": 30},
        "time_model": {"a": 6.0, "b": 5.0, "noise_sd": 5.0},
        "trials_per_stage": 10,
        "stages": [
            {"goals": {"type": "uniform"}, "coding": {"scheme": "unitary"}},
            {"goals": {"type": "anchored", "anchors": [10, 20], "anchor_probability": "1/3"},
             "coding": {"scheme": "anchor", "anchors": [10, 20]}},
            {"goals": {"type": "uniform"}, "coding": {"scheme": "anchor", "anchors": [10, 20], "anchor_name_length": 2}}
        ]
    }"#;

    #[test]
    fn three_stage_parses() {
        let (cfg, _) = parse_config(THREE_STAGE).unwrap();
        let exp = cfg.to_experiment(5).unwrap();
        assert_eq!(exp.stages.len(), 3);
        assert_eq!(exp.seed, 5);
        let s2 = &exp.stages[1].goal_distribution;
        assert!((s2.probability(10) - 1.0 / 3.0).abs() < 1e-15);
        assert!((s2.probability(11) - 1.0 / 84.0).abs() < 1e-15);
        match &exp.stages[2].coding {
            CodingPolicy::Anchor(s) => assert_eq!(s.anchor_name_length(), 2.0),
            other => panic!("{other:?}"),
        }
        assert_eq!(exp.per_symbol_decode_error, DEFAULT_DECODE_ERROR);
    }

    #[test]
    fn unknown_fields_rejected() {
        let extra = THREE_STAGE.replacen(
            "\"trials_per_stage\"",
            "\"colour\": 1, \"trials_per_stage\"",
            1,
        );
        assert_eq!(parse_config(&extra).unwrap_err().code, EXIT_USAGE);
        let nested = THREE_STAGE.replacen("\"b\": 5.0", "\"b\": 5.0, \"c\": 1", 1);
        assert!(parse_config(&nested).is_err());
        let coding =
            THREE_STAGE.replacen("{\"scheme\": \"unitary\"}", "{\"scheme\": \"morse\"}", 1);
        assert!(parse_config(&coding).is_err());
    }

    #[test]
    fn bad_sum_names_stage() {
        let text = r#"{
            "schema_version": 1,
            "maze": {"kind": "comb", "layout": "vertical", "branch_count": 5},
            "time_model": {"a": 6.0, "b": 5.0},
            "trials_per_stage": 3,
            "stages": [
                {"goals": {"type": "uniform"}, "coding": {"scheme": "unitary"}},
                {"goals": {"type": "explicit", "probabilities": {"1": 0.5, "2": "2/5"}},
                 "coding": {"scheme": "unitary"}}
            ]
        }"#;
        let (cfg, _) = parse_config(text).unwrap();
        let msg = cfg.to_experiment(0).unwrap_err().to_string();
        assert!(msg.contains("stage 2"), "{msg}");
        assert!(msg.contains("0.9"), "{msg}");
    }

    #[test]
    fn version_and_maze_checks() {
        let v2 = THREE_STAGE.replacen("\"schema_version\": 1", "\"schema_version\": 2", 1);
        assert!(parse_config(&v2).unwrap().0.to_experiment(0).is_err());
        let tree = r#"{
            "schema_version": 1,
            "maze": {"kind": "binary_tree", "depth": 3},
            "time_model": {"a": 60.0, "b": 30.0},
            "trials_per_stage": 3,
            "stages": [{"goals": {"type": "anchored", "anchors": [1], "anchor_probability": 0.5},
                        "coding": {"scheme": "unitary"}}]
        }"#;
        let msg = parse_config(tree)
            .unwrap()
            .0
            .to_experiment(0)
            .unwrap_err()
            .to_string();
        assert!(msg.contains("stage 1"), "{msg}");
    }

    #[test]
    fn probability_forms() {
        assert_eq!(Probability::Text("1/4".into()).value().unwrap(), 0.25);
        assert_eq!(Probability::Text("0.125".into()).value().unwrap(), 0.125);
        assert_eq!(Probability::Number(0.5).value().unwrap(), 0.5);
        assert!(Probability::Text("half".into()).value().is_err());
    }
}
