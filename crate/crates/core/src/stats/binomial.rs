use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use super::TestResult;
use crate::{Error, Result};

/// Largest trial count for which [`binomial_test`] reports the exact rational
/// tail alongside the log-space value.
pub const EXACT_BINOMIAL_MAX_N: u64 = 30;

fn check_counts(n: u64, k: u64) -> Result<()> {
    if k > n {
        return Err(Error::InvalidInput(format!(
            "{k} successes out of {n} trials"
        )));
    }
    Ok(())
}

fn ln_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// `P(X >= k)` for `X ~ Binomial(n, p)`, summed in log space.
pub fn binomial_tail(n: u64, k: u64, p: f64) -> Result<f64> {
    check_counts(n, k)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidInput(format!(
            "success probability {p} not in (0, 1)"
        )));
    }
    if k == 0 {
        return Ok(1.0);
    }
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    // ln C(n, k), then step j -> j + 1 by (n - j) / (j + 1)
    let mut ln_choose: f64 = (1..=k)
        .map(|i| ((n - k + i) as f64).ln() - (i as f64).ln())
        .sum();
    let mut terms = Vec::with_capacity((n - k + 1) as usize);
    for j in k..=n {
        terms.push(ln_choose + j as f64 * ln_p + (n - j) as f64 * ln_q);
        if j < n {
            ln_choose += ((n - j) as f64).ln() - ((j + 1) as f64).ln();
        }
    }
    Ok(ln_sum_exp(&terms).exp().min(1.0))
}

/// Exact rational `P(X >= k)`.
pub fn binomial_tail_exact(n: u64, k: u64, p: &BigRational) -> Result<BigRational> {
    check_counts(n, k)?;
    if !(*p > BigRational::zero() && *p < BigRational::one()) {
        return Err(Error::InvalidInput(format!(
            "success probability {p} not in (0, 1)"
        )));
    }
    let q = BigRational::one() - p;
    let mut choose = BigInt::one();
    let mut total = BigRational::zero();
    for j in 0..=n {
        if j >= k {
            let term = BigRational::from_integer(choose.clone())
                * num_traits::pow(p.clone(), j as usize)
                * num_traits::pow(q.clone(), (n - j) as usize);
            total += term;
        }
        choose = choose * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    Ok(total)
}

/// One-sided test of `k` successes in `n` trials against the chance rate,
/// e.g. [`crate::maze::chance_probability`].
pub fn binomial_test(n: u64, k: u64, chance: Ratio<u64>) -> Result<TestResult> {
    let p = chance.to_f64().unwrap_or(f64::NAN);
    let p_value = binomial_tail(n, k, p)?;
    let p_fraction = if n <= EXACT_BINOMIAL_MAX_N {
        let exact_p = BigRational::new((*chance.numer()).into(), (*chance.denom()).into());
        Some(binomial_tail_exact(n, k, &exact_p)?.to_string())
    } else {
        None
    };
    Ok(TestResult {
        statistic: k as f64,
        p_value,
        method: format!("exact binomial upper tail, n = {n}, p0 = {chance}"),
        exact: true,
        p_fraction,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Pascal-triangle summation, independent of the multiplicative update.
    fn pascal_tail(n: usize, k: usize, p: &BigRational) -> BigRational {
        let mut row = vec![BigUint::one()];
        for _ in 0..n {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        let q = BigRational::one() - p;
        (k..=n)
            .map(|j| {
                BigRational::from_integer(BigInt::from(row[j].clone()))
                    * num_traits::pow(p.clone(), j)
                    * num_traits::pow(q.clone(), n - j)
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Sum over every one of the 2^n outcome sequences.
    fn enumerate_tail(n: u32, k: u32, p: &BigRational) -> BigRational {
        let q = BigRational::one() - p;
        (0u32..(1 << n))
            .filter(|mask| mask.count_ones() >= k)
            .map(|mask| {
                let s = mask.count_ones() as usize;
                num_traits::pow(p.clone(), s) * num_traits::pow(q.clone(), n as usize - s)
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    #[test]
    fn counting_maze_argument() {
        let tail = binomial_tail(152, 117, 1.0 / 25.0).unwrap();
        assert!(tail < 1e-10);
        assert!(tail > 0.0);
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(binomial_tail(40, 0, 0.3).unwrap(), 1.0);
        let all = binomial_tail(10, 10, 0.5).unwrap();
        assert!((all - 2f64.powi(-10)).abs() < 1e-18);
        assert!(binomial_tail(3, 4, 0.5).is_err());
        assert!(binomial_tail(3, 1, 0.0).is_err());
        assert!(binomial_tail(3, 1, 1.0).is_err());
    }

    #[test]
    fn exact_matches_enumeration() {
        for (n, p) in [(6u32, ratio(1, 2)), (9, ratio(1, 25)), (12, ratio(2, 7))] {
            for k in 0..=n {
                assert_eq!(
                    binomial_tail_exact(n as u64, k as u64, &p).unwrap(),
                    enumerate_tail(n, k, &p)
                );
            }
        }
    }

    #[test]
    fn exact_complements_lower_tail() {
        let p = ratio(1, 25);
        for n in [1u64, 10, 30] {
            for k in 1..=n {
                let upper = binomial_tail_exact(n, k, &p).unwrap();
                let lower =
                    pascal_tail(n as usize, 0, &p) - pascal_tail(n as usize, k as usize, &p);
                assert_eq!(pascal_tail(n as usize, 0, &p), BigRational::one());
                assert_eq!(upper.clone() + lower, BigRational::one());
                assert_eq!(upper, pascal_tail(n as usize, k as usize, &p));
            }
        }
    }

    #[test]
    fn log_space_agrees_with_rational_oracle() {
        let p = ratio(1, 25);
        for n in [5usize, 17, 30] {
            for k in 0..=n {
                let oracle = pascal_tail(n, k, &p).to_f64().unwrap();
                let got = binomial_tail(n as u64, k as u64, 0.04).unwrap();
                assert!(
                    ((got - oracle) / oracle).abs() < 1e-12,
                    "n={n} k={k}: {got} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn monotone_in_k() {
        let tails: Vec<f64> = (0..=152)
            .map(|k| binomial_tail(152, k, 0.04).unwrap())
            .collect();
        assert!(tails.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn test_result_carries_fraction_for_small_n() {
        let r = binomial_test(10, 10, Ratio::new(1, 2)).unwrap();
        assert_eq!(r.p_fraction.as_deref(), Some("1/1024"));
        let big = binomial_test(152, 117, Ratio::new(1, 25)).unwrap();
        assert!(big.p_fraction.is_none());
        assert!(big.significant_at(1e-10));
    }
}
