use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::{Error, Result};

fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Chance that a uniformly random order of `sum(group_sizes)` items puts
/// every group wholly before the next: `prod(size!) / n!`.
///
/// Seven routes in groups of 2, 2 and 3 give `2! 2! 3! / 7! = 1/210`.
pub fn permutation_order_test(group_sizes: &[u64]) -> Result<BigRational> {
    if group_sizes.is_empty() || group_sizes.contains(&0) {
        return Err(Error::InvalidInput(format!(
            "group sizes must be positive, got {group_sizes:?}"
        )));
    }
    let n: u64 = group_sizes.iter().sum();
    let within: BigInt = group_sizes.iter().map(|&s| factorial(s)).product();
    Ok(BigRational::new(within, factorial(n)))
}

/// True when every value of group `j` is strictly below every value of
/// group `j + 1`.
pub fn groups_strictly_ordered(groups: &[Vec<f64>]) -> bool {
    groups.windows(2).all(|w| {
        let hi = w[0].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = w[1].iter().copied().fold(f64::INFINITY, f64::min);
        hi < lo
    })
}
