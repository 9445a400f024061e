//! Hypothesis tests and regression used to argue that contacts carry
//! information, and how fast.

mod binomial;
mod permutation;
mod rank_sum;
mod regression;

use serde::Serialize;

pub use binomial::{binomial_tail, binomial_tail_exact, binomial_test, EXACT_BINOMIAL_MAX_N};
pub use permutation::{groups_strictly_ordered, permutation_order_test};
pub use rank_sum::{rank_sum_test, rank_sum_test_with, Alternative, EXACT_RANK_SUM_MAX_N};
pub use regression::{
    anchor_distance_correlation, distance_to_nearest_anchor, linear_fit, transmission_rate,
    FitResult, ReferenceRate, REFERENCE_RATES,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub method: String,
    pub exact: bool,
    /// Reduced fraction for p-values computed by exact counting.
    pub p_fraction: Option<String>,
    pub degenerate: bool,
}

impl TestResult {
    pub fn significant_at(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}
