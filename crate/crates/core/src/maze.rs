//! Maze geometries as information sources.
//!
//! A [`BinaryTreeMaze`] with `depth` forks holds exactly `depth` bits: the goal
//! is one of `2^depth` leaves and the route to it is a sequence of `depth`
//! left/right turns. A [`CombMaze`] is a trunk with `branch_count` side
//! branches numbered from 1, and the goal is a branch index.
//!
//! Leaves are numbered so that `L` is binary 0 and the first fork is the most
//! significant bit: depth 3, leaf 5 (`101`) is reached by `RLR`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Deepest tree whose leaf count still fits in a `u64`.
pub const MAX_TREE_DEPTH: u32 = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Turn {
    L,
    R,
}

impl Turn {
    pub fn as_char(self) -> char {
        match self {
            Turn::L => 'L',
            Turn::R => 'R',
        }
    }
}

/// Sequence of turns taken from the maze entrance.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Route(Vec<Turn>);

impl Route {
    pub fn new(turns: Vec<Turn>) -> Self {
        Route(turns)
    }

    pub fn turns(&self) -> &[Turn] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<Turn>> for Route {
    fn from(turns: Vec<Turn>) -> Self {
        Route(turns)
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'L' | 'l' => Ok(Turn::L),
                'R' | 'r' => Ok(Turn::R),
                other => Err(Error::InvalidRoute(format!(
                    "unexpected symbol {other:?} in {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Route)
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            write!(f, "{}", t.as_char())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BinaryTreeMaze {
    depth: u32,
    goal_leaf: u64,
}

impl BinaryTreeMaze {
    pub fn new(depth: u32, goal_leaf: u64) -> Result<Self> {
        let leaves = leaf_count(depth)?;
        if goal_leaf >= leaves {
            return Err(Error::InvalidMaze(format!(
                "goal leaf {goal_leaf} outside [0, {leaves}) for depth {depth}"
            )));
        }
        Ok(BinaryTreeMaze { depth, goal_leaf })
    }

    /// Number of forks between the entrance and any leaf.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn goal_leaf(&self) -> u64 {
        self.goal_leaf
    }

    pub fn leaf_count(&self) -> u64 {
        1u64 << self.depth
    }

    pub fn with_goal(&self, goal_leaf: u64) -> Result<Self> {
        Self::new(self.depth, goal_leaf)
    }
}

/// Leaf count of a tree with `depth` forks, validating the depth.
pub fn leaf_count(depth: u32) -> Result<u64> {
    if depth == 0 {
        return Err(Error::InvalidMaze("tree depth must be at least 1".into()));
    }
    if depth > MAX_TREE_DEPTH {
        return Err(Error::InvalidMaze(format!(
            "tree depth {depth} exceeds {MAX_TREE_DEPTH}"
        )));
    }
    Ok(1u64 << depth)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombLayout {
    Horizontal,
    Vertical,
    Circle,
}

/// Trunk with equally spaced branches. Geometry is descriptive only and never
/// enters the timing model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CombMaze {
    layout: CombLayout,
    branch_count: u32,
    goal_branch: u32,
}

impl CombMaze {
    pub fn new(layout: CombLayout, branch_count: u32, goal_branch: u32) -> Result<Self> {
        if branch_count < 2 {
            return Err(Error::InvalidMaze(format!(
                "comb needs at least 2 branches, got {branch_count}"
            )));
        }
        if goal_branch == 0 || goal_branch > branch_count {
            return Err(Error::InvalidMaze(format!(
                "goal branch {goal_branch} outside [1, {branch_count}]"
            )));
        }
        Ok(CombMaze {
            layout,
            branch_count,
            goal_branch,
        })
    }

    pub fn layout(&self) -> CombLayout {
        self.layout
    }

    pub fn branch_count(&self) -> u32 {
        self.branch_count
    }

    /// 1-based index of the baited branch.
    pub fn goal_branch(&self) -> u32 {
        self.goal_branch
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Maze {
    BinaryTree(BinaryTreeMaze),
    Comb(CombMaze),
}

impl From<BinaryTreeMaze> for Maze {
    fn from(m: BinaryTreeMaze) -> Self {
        Maze::BinaryTree(m)
    }
}

impl From<CombMaze> for Maze {
    fn from(m: CombMaze) -> Self {
        Maze::Comb(m)
    }
}

impl Maze {
    pub fn information_bits(&self) -> f64 {
        information_bits(self)
    }

    pub fn chance_probability(&self) -> Ratio<u64> {
        chance_probability(self)
    }
}

/// Turn sequence reaching the goal leaf, most significant fork first.
pub fn leaf_to_route(maze: &BinaryTreeMaze) -> Route {
    let turns = (0..maze.depth)
        .rev()
        .map(|bit| {
            if (maze.goal_leaf >> bit) & 1 == 1 {
                Turn::R
            } else {
                Turn::L
            }
        })
        .collect();
    Route(turns)
}

/// Leaf index reached by `route`. The empty route is the single leaf 0.
///
/// Routes longer than [`MAX_TREE_DEPTH`] cannot name a `u64` leaf.
pub fn route_to_leaf(route: &Route) -> Result<u64> {
    if route.len() > MAX_TREE_DEPTH as usize {
        return Err(Error::InvalidRoute(format!(
            "route of {} turns exceeds {MAX_TREE_DEPTH}",
            route.len()
        )));
    }
    Ok(route
        .turns()
        .iter()
        .fold(0u64, |acc, t| (acc << 1) | u64::from(*t == Turn::R)))
}

pub fn information_bits(maze: &Maze) -> f64 {
    match maze {
        Maze::BinaryTree(t) => f64::from(t.depth),
        Maze::Comb(c) => f64::from(c.branch_count).log2(),
    }
}

/// Number of distinct routes across trees of depth 1 through `max_depth`.
pub fn total_routes(max_depth: u32) -> Result<u64> {
    if max_depth == 0 {
        return Err(Error::InvalidMaze("max depth must be at least 1".into()));
    }
    (1..=max_depth).try_fold(0u64, |acc, d| {
        1u64.checked_shl(d)
            .and_then(|leaves| acc.checked_add(leaves))
            .ok_or_else(|| Error::Overflow(format!("route count for depth {max_depth}")))
    })
}

/// Probability of reaching the goal by guessing: `(1/2)^depth` or
/// `1/branch_count`. Always exact since both denominators fit in `u64`.
pub fn chance_probability(maze: &Maze) -> Ratio<u64> {
    match maze {
        Maze::BinaryTree(t) => Ratio::new(1, t.leaf_count()),
        Maze::Comb(c) => Ratio::new(1, u64::from(c.branch_count)),
    }
}
