use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use rand::Rng;
use serde::Serialize;

use crate::{Error, Result};

/// Allowed deviation of a distribution's total from 1.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Probability of each message, keyed by goal index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MessageDistribution {
    probabilities: BTreeMap<u32, f64>,
}

impl MessageDistribution {
    pub fn new(probabilities: BTreeMap<u32, f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidDistribution("no messages".into()));
        }
        if let Some((i, p)) = probabilities
            .iter()
            .find(|(_, p)| !(p.is_finite() && **p >= 0.0))
        {
            return Err(Error::InvalidDistribution(format!(
                "probability of message {i} is {p}"
            )));
        }
        let total: f64 = probabilities.values().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(MessageDistribution { probabilities })
    }

    /// Equal probability on every index in `indices`.
    pub fn uniform(indices: impl IntoIterator<Item = u32>) -> Result<Self> {
        let keys: Vec<u32> = indices.into_iter().collect();
        let p = 1.0 / keys.len() as f64;
        Self::new(keys.into_iter().map(|k| (k, p)).collect())
    }

    /// Branches `1..=branch_count` where each anchor has `anchor_probability`
    /// and the remaining mass is spread evenly over the other branches.
    pub fn anchored(branch_count: u32, anchors: &[u32], anchor_probability: f64) -> Result<Self> {
        let others = branch_count as usize - anchors.len();
        let rest = 1.0 - anchor_probability * anchors.len() as f64;
        if others == 0 || !(0.0..=1.0).contains(&rest) {
            return Err(Error::InvalidDistribution(format!(
                "cannot give {} anchors probability {anchor_probability} among {branch_count} branches",
                anchors.len()
            )));
        }
        let other_p = rest / others as f64;
        Self::new(
            (1..=branch_count)
                .map(|i| {
                    let p = if anchors.contains(&i) {
                        anchor_probability
                    } else {
                        other_p
                    };
                    (i, p)
                })
                .collect(),
        )
    }

    pub fn probabilities(&self) -> &BTreeMap<u32, f64> {
        &self.probabilities
    }

    pub fn probability(&self, i: u32) -> f64 {
        self.probabilities.get(&i).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Messages with non-zero probability.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.probabilities
            .iter()
            .filter(|(_, p)| **p > 0.0)
            .map(|(i, _)| *i)
    }

    pub fn min_index(&self) -> u32 {
        self.support()
            .next()
            .expect("distribution has positive mass")
    }

    pub fn max_index(&self) -> u32 {
        self.support()
            .last()
            .expect("distribution has positive mass")
    }

    /// Same distribution with zero-probability messages dropped.
    pub fn positive_part(&self) -> Self {
        MessageDistribution {
            probabilities: self
                .probabilities
                .iter()
                .filter(|(_, p)| **p > 0.0)
                .map(|(i, p)| (*i, *p))
                .collect(),
        }
    }

    /// Inverse-CDF draw over the support.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, p) in &self.probabilities {
            acc += p;
            if u < acc && *p > 0.0 {
                return *i;
            }
        }
        self.max_index()
    }
}

/// Integer code lengths of a binary prefix code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixCode {
    pub lengths: BTreeMap<u32, u32>,
    /// Set when the source has a single message and needs no bits.
    pub degenerate: bool,
}

struct Node {
    weight: f64,
    order: usize,
    leaves: Vec<u32>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // reversed: BinaryHeap pops the lightest, oldest node first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .weight
            .total_cmp(&self.weight)
            .then_with(|| other.order.cmp(&self.order))
    }
}

/// Huffman code lengths for `dist`.
pub fn optimal_prefix_lengths(dist: &MessageDistribution) -> Result<PrefixCode> {
    if let Some((i, _)) = dist.probabilities.iter().find(|(_, p)| **p <= 0.0) {
        return Err(Error::InvalidDistribution(format!(
            "message {i} has zero probability; drop it before building a code"
        )));
    }
    let mut lengths: BTreeMap<u32, u32> = dist.probabilities.keys().map(|&i| (i, 0)).collect();
    if lengths.len() < 2 {
        return Ok(PrefixCode {
            lengths,
            degenerate: true,
        });
    }

    let mut heap: BinaryHeap<Node> = dist
        .probabilities
        .iter()
        .enumerate()
        .map(|(order, (&i, &p))| Node {
            weight: p,
            order,
            leaves: vec![i],
        })
        .collect();
    let mut next_order = heap.len();
    while heap.len() > 1 {
        let a = heap.pop().expect("two nodes");
        let b = heap.pop().expect("two nodes");
        let mut leaves = a.leaves;
        leaves.extend(b.leaves);
        for leaf in &leaves {
            *lengths.get_mut(leaf).expect("known leaf") += 1;
        }
        heap.push(Node {
            weight: a.weight + b.weight,
            order: next_order,
            leaves,
        });
        next_order += 1;
    }
    Ok(PrefixCode {
        lengths,
        degenerate: false,
    })
}

/// `sum 2^-l`; a prefix code exists iff this is at most 1.
pub fn kraft_sum<'a>(lengths: impl IntoIterator<Item = &'a u32>) -> f64 {
    lengths.into_iter().map(|&l| (-f64::from(l)).exp2()).sum()
}

/// Shannon entropy in bits; zero-probability messages contribute nothing.
pub fn entropy_bits(dist: &MessageDistribution) -> f64 {
    dist.probabilities
        .values()
        .filter(|p| **p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CodeStats {
    pub entropy_bits: f64,
    pub expected_length_bits: f64,
}

impl CodeStats {
    pub fn redundancy(&self) -> f64 {
        self.expected_length_bits - self.entropy_bits
    }
}

/// Entropy and expected code length of `lengths` under `dist`.
pub fn code_stats<L>(lengths: &BTreeMap<u32, L>, dist: &MessageDistribution) -> Result<CodeStats>
where
    L: Copy + Into<f64>,
{
    let mut expected = 0.0;
    for (i, p) in dist.probabilities.iter().filter(|(_, p)| **p > 0.0) {
        let l = lengths
            .get(i)
            .ok_or_else(|| Error::InvalidCode(format!("no code length for message {i}")))?;
        expected += p * (*l).into();
    }
    Ok(CodeStats {
        entropy_bits: entropy_bits(dist),
        expected_length_bits: expected,
    })
}
