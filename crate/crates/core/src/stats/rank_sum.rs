use num_integer::Integer;
use statrs::distribution::{ContinuousCDF, Normal};

use super::TestResult;
use crate::{Error, Result};

/// Combined sample size up to which p-values come from the exact null
/// distribution rather than the normal approximation.
pub const EXACT_RANK_SUM_MAX_N: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alternative {
    /// Informed values tend to be smaller than uninformed ones.
    Less,
    TwoSided,
}

/// Midranks of `values`, doubled so that ties stay integral.
fn doubled_midranks(values: &[f64]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0u64; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // ranks start+1..=end, doubled mean = start + 1 + end
        let doubled = (start + 1 + end) as u64;
        for &i in &order[start..end] {
            ranks[i] = doubled;
        }
        start = end;
    }
    ranks
}

fn tie_sizes(values: &[f64]) -> Vec<u64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .chunk_by(|a, b| a == b)
        .map(|c| c.len() as u64)
        .collect()
}

/// Number of `k`-subsets of `ranks` by total, indexed by summed doubled rank.
fn subset_sum_counts(ranks: &[u64], k: usize) -> Vec<Vec<u64>> {
    let max_sum: u64 = ranks.iter().sum();
    let mut counts = vec![vec![0u64; max_sum as usize + 1]; k + 1];
    counts[0][0] = 1;
    for &r in ranks {
        for j in (1..=k).rev() {
            for s in (r as usize..=max_sum as usize).rev() {
                counts[j][s] += counts[j - 1][s - r as usize];
            }
        }
    }
    counts
}

fn fraction(num: u64, den: u64) -> String {
    let g = num.gcd(&den);
    format!("{}/{}", num / g, den / g)
}

/// One-sided rank-sum test that informed searches are shorter.
pub fn rank_sum_test(sample_u: &[f64], sample_i: &[f64]) -> Result<TestResult> {
    rank_sum_test_with(sample_u, sample_i, Alternative::Less)
}

/// Wilcoxon-Mann-Whitney rank-sum test of uninformed vs informed samples.
///
/// The statistic is `U` of the informed sample (its rank sum minus
/// `n_i (n_i + 1) / 2`). Ties take midranks. Up to
/// [`EXACT_RANK_SUM_MAX_N`] values in total the p-value is counted exactly
/// over all rank assignments; beyond that a tie-corrected normal
/// approximation with continuity correction is used.
///
/// Samples that are the same multiset carry no evidence of a shift and
/// return `p = 1` with the degenerate flag set.
pub fn rank_sum_test_with(
    sample_u: &[f64],
    sample_i: &[f64],
    alternative: Alternative,
) -> Result<TestResult> {
    if sample_u.is_empty() || sample_i.is_empty() {
        return Err(Error::InvalidInput(
            "rank-sum test needs two non-empty samples".into(),
        ));
    }
    if sample_u.iter().chain(sample_i).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "rank-sum samples must be finite".into(),
        ));
    }
    let (n_u, n_i) = (sample_u.len(), sample_i.len());
    let n = n_u + n_i;
    let combined: Vec<f64> = sample_i.iter().chain(sample_u).copied().collect();
    let ranks = doubled_midranks(&combined);
    let observed: u64 = ranks[..n_i].iter().sum();
    let u_stat = observed as f64 / 2.0 - (n_i * (n_i + 1)) as f64 / 2.0;

    let same_multiset = {
        let mut a = sample_u.to_vec();
        let mut b = sample_i.to_vec();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        a == b
    };
    let all_tied = combined.iter().all(|v| *v == combined[0]);
    if same_multiset || all_tied {
        return Ok(TestResult {
            statistic: u_stat,
            p_value: 1.0,
            method: "rank-sum (degenerate: samples indistinguishable)".into(),
            exact: true,
            p_fraction: Some("1/1".into()),
            degenerate: true,
        });
    }

    let label = match alternative {
        Alternative::Less => "one-sided",
        Alternative::TwoSided => "two-sided",
    };

    if n <= EXACT_RANK_SUM_MAX_N {
        let counts = subset_sum_counts(&ranks, n_i);
        let dist = &counts[n_i];
        let total: u64 = dist.iter().sum();
        let at_most: u64 = dist[..=observed as usize].iter().sum();
        let at_least: u64 = dist[observed as usize..].iter().sum();
        let (num, den) = match alternative {
            Alternative::Less => (at_most, total),
            Alternative::TwoSided => ((2 * at_most.min(at_least)).min(total), total),
        };
        return Ok(TestResult {
            statistic: u_stat,
            p_value: num as f64 / den as f64,
            method: format!("exact rank-sum, {label}"),
            exact: true,
            p_fraction: Some(fraction(num, den)),
            degenerate: false,
        });
    }

    let (nu, ni, nf) = (n_u as f64, n_i as f64, n as f64);
    let tie_term: f64 = tie_sizes(&combined)
        .iter()
        .map(|&t| (t * t * t - t) as f64)
        .sum::<f64>()
        / (nf * (nf - 1.0));
    let sd = (nu * ni / 12.0 * ((nf + 1.0) - tie_term)).sqrt();
    let mean = nu * ni / 2.0;
    let std_normal = Normal::standard();
    let p_value = match alternative {
        Alternative::Less => std_normal.cdf((u_stat - mean + 0.5) / sd),
        Alternative::TwoSided => {
            let z = ((u_stat - mean).abs() - 0.5).max(0.0) / sd;
            (2.0 * std_normal.sf(z)).min(1.0)
        }
    };
    Ok(TestResult {
        statistic: u_stat,
        p_value,
        method: format!("rank-sum normal approximation with tie correction, {label}"),
        exact: false,
        p_fraction: None,
        degenerate: false,
    })
}
