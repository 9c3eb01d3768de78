//! Local densities and the effective lower bounds built from them.
//!
//! Everything here is exact: counts are `BigInt`, densities are
//! [`ExactRational`]. The only floating point in the module is the default
//! choice `Y = (log p)^(1/4)` in [`epsilon_hat`].

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{fourth_root_floor_strict, prime_pi, primes_up_to, require_prime};
use crate::{Error, ExactRational, RationalInterval, Result};

fn big_pow(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

fn check_prime_degree(p: u64, n: u32) -> Result<()> {
    require_prime("p", p)?;
    if n == 0 {
        return Err(Error::precondition("degree n must be positive"));
    }
    Ok(())
}

/// Number of monic degree-`n` polynomials over `F_p` with no root in `F_p`,
/// by inclusion-exclusion over the set of forced roots:
/// `sum_{k=0}^{n} (-1)^k binom(p, k) p^(n-k)`.
pub fn count_rootless(p: u64, n: u32) -> Result<BigInt> {
    check_prime_degree(p, n)?;
    let mut total = BigInt::zero();
    let mut binom = BigInt::one();
    for k in 0..=n as u64 {
        if k > p {
            break;
        }
        let term = &binom * big_pow(p, n - k as u32);
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        binom = binom * BigInt::from(p - k) / BigInt::from(k + 1);
    }
    Ok(total)
}

/// `(p-1)^p * p^(n-p)`, the value of [`count_rootless`] once `n >= p`.
pub fn count_rootless_closed_form(p: u64, n: u32) -> Result<BigInt> {
    check_prime_degree(p, n)?;
    if (n as u64) < p {
        return Err(Error::precondition(format!("closed form needs n >= p (n = {n}, p = {p})")));
    }
    Ok(big_pow(p - 1, p as u32) * big_pow(p, n - p as u32))
}

/// `C_p(n) = A_p(n) / p^n`.
pub fn rootless_density(p: u64, n: u32) -> Result<ExactRational> {
    Ok(ExactRational::new(count_rootless(p, n)?, big_pow(p, n)))
}

/// Density of `p`-Eisenstein coefficient tuples modulo `p^2`: `(p-1) / p^(n+1)`.
pub fn eisenstein_density(p: u64, n: u32) -> Result<ExactRational> {
    check_prime_degree(p, n)?;
    Ok(ExactRational::new(BigInt::from(p - 1), big_pow(p, n + 1)))
}

/// Certified enclosure of the density of Eisenstein polynomials among all
/// monic degree-`n` integer polynomials, `1 - prod_p (1 - p^-n + p^-(n+1))`.
///
/// `lo` is the product truncated at primes `<= bound`; `hi` adds the tail
/// bound `sum_{m > bound} m^-n <= 1 / ((n-1) bound^(n-1))`.
pub fn dubickas_density(n: u32, bound: u64) -> Result<RationalInterval> {
    if n < 2 {
        return Err(Error::precondition("dubickas_density needs n >= 2"));
    }
    if bound < 2 {
        return Err(Error::precondition(format!("truncation bound {bound} must be at least 2")));
    }
    let product: ExactRational = primes_up_to(bound)
        .into_iter()
        .map(|p| {
            let pn = big_pow(p, n);
            // 1 - 1/p^n + 1/p^(n+1) = (p^(n+1) - p + 1) / p^(n+1)
            ExactRational::new(&pn * BigInt::from(p) - BigInt::from(p) + 1, pn * BigInt::from(p))
        })
        .product();
    let lo = ExactRational::one() - product;
    let tail = ExactRational::new(1, BigInt::from(n - 1) * big_pow(bound, n - 1));
    let hi = &lo + &tail;
    Ok(RationalInterval::new(lo, hi))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityBounds {
    pub lo: ExactRational,
    pub hi: ExactRational,
}

/// `((p^2 - 1) / (3 p^2), (p - 1) / (2 p))`, which bracket `C_p(n)` for `n >= 2`.
pub fn density_bounds(p: u64, n: u32) -> Result<DensityBounds> {
    require_prime("p", p)?;
    if n < 2 {
        return Err(Error::precondition("density bounds hold only for n >= 2"));
    }
    let p2 = BigInt::from(p) * BigInt::from(p);
    Ok(DensityBounds { lo: ExactRational::new(&p2 - 1, 3 * &p2), hi: ExactRational::new(BigInt::from(p - 1), BigInt::from(2 * p)) })
}

/// `(1 + t) (3/4)^t`.
pub fn uniform_tail_bound(t: usize) -> ExactRational {
    ExactRational::from_integer(BigInt::from(t + 1)) * ExactRational::new(3, 4).pow(t as u32)
}

/// The parameter `Y` used by [`epsilon`]: the largest integer with `Y^4 < p`.
pub fn epsilon_pair_bound(p: u64) -> u64 {
    fourth_root_floor_strict(p)
}

/// `ε(p) = (1 + π(Y)) (3/4)^π(Y)` with `Y` the largest integer such that `Y^4 < p`.
pub fn epsilon(p: u64) -> Result<ExactRational> {
    require_prime("p", p)?;
    Ok(uniform_tail_bound(prime_pi(epsilon_pair_bound(p))))
}

/// Default pair bound `(log p)^(1/4)` for [`epsilon_hat`].
pub fn default_epsilon_hat_bound(p: u64) -> f64 {
    (p as f64).ln().powf(0.25)
}

/// `ε̂(p) = (1 + π(⌊Y⌋)) (3/4)^π(⌊Y⌋)`; `Y` defaults to `(log p)^(1/4)`.
pub fn epsilon_hat(p: u64, y: Option<f64>) -> Result<ExactRational> {
    require_prime("p", p)?;
    if p < 5 {
        return Err(Error::precondition("epsilon_hat needs p >= 5"));
    }
    let y = y.unwrap_or_else(|| default_epsilon_hat_bound(p));
    if y.is_nan() || y < 1.0 || !y.is_finite() {
        return Err(Error::precondition(format!("pair bound Y = {y} must be a finite value >= 1")));
    }
    Ok(uniform_tail_bound(prime_pi(y.floor() as u64)))
}

/// Degree-aware version of [`epsilon`]: the probability that at most one of
/// the primes `q <= Y` (with `Y^4 < p`) leaves `f` rootless,
/// `prod (1 - C_q(n)) + sum_j C_{q_j}(n) prod_{i != j} (1 - C_{q_i}(n))`.
///
/// Diagnostic only; `epsilon` is the uniform bound it is compared against.
pub fn epsilon_degree_aware(p: u64, n: u32) -> Result<ExactRational> {
    require_prime("p", p)?;
    if n < 2 {
        return Err(Error::precondition("degree-aware epsilon needs n >= 2"));
    }
    let densities = primes_up_to(epsilon_pair_bound(p)).into_iter().map(|q| rootless_density(q, n)).collect::<Result<Vec<_>>>()?;
    let complement = |c: &ExactRational| ExactRational::one() - c.clone();
    let none: ExactRational = densities.iter().map(complement).product();
    let exactly_one: ExactRational = (0..densities.len())
        .map(|j| densities.iter().enumerate().map(|(i, c)| if i == j { c.clone() } else { complement(c) }).product::<ExactRational>())
        .sum();
    Ok(none + exactly_one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn rootless_counts() {
        assert_eq!(count_rootless(2, 2).unwrap(), BigInt::from(1));
        assert_eq!(count_rootless(5, 3).unwrap(), BigInt::from(40));
        assert_eq!(count_rootless(3, 5).unwrap(), BigInt::from(72));
        assert_eq!(count_rootless_closed_form(3, 5).unwrap(), BigInt::from(72));
        assert!(count_rootless(4, 3).is_err());
        assert!(count_rootless(5, 0).is_err());
        assert!(count_rootless_closed_form(5, 3).is_err());
    }

    #[test]
    fn brute_force_agreement() {
        for p in [2u64, 3, 5, 7] {
            for n in 1..=6u32 {
                if p.pow(n) > 200_000 {
                    continue;
                }
                assert_eq!(count_rootless(p, n).unwrap(), BigInt::from(oracle::brute_rootless_count(p, n)), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn closed_form_agreement() {
        for p in primes_up_to(13) {
            for n in p as u32..=p as u32 + 3 {
                assert_eq!(count_rootless(p, n).unwrap(), count_rootless_closed_form(p, n).unwrap());
            }
        }
    }

    #[test]
    fn small_prime_density_values() {
        for n in 2..=8 {
            assert_eq!(rootless_density(2, n).unwrap(), r(1, 4));
        }
        for n in 3..=8 {
            assert_eq!(rootless_density(3, n).unwrap(), r(8, 27));
        }
        assert_eq!(rootless_density(5, 3).unwrap(), r(8, 25));
    }

    #[test]
    fn eisenstein_values() {
        assert_eq!(eisenstein_density(5, 3).unwrap(), r(4, 625));
        assert_eq!(eisenstein_density(2, 2).unwrap(), r(1, 8));
        assert_eq!(eisenstein_density(3, 1).unwrap(), r(2, 9));
        for (p, n) in [(5u64, 3u32), (2, 2), (3, 1), (3, 2), (2, 3)] {
            assert_eq!(eisenstein_density(p, n).unwrap(), oracle::brute_eisenstein_density(p, n));
        }
    }

    #[test]
    fn bounds_values_and_sandwich() {
        let b = density_bounds(2, 2).unwrap();
        assert_eq!((b.lo, b.hi), (r(1, 4), r(1, 4)));
        let b = density_bounds(7, 3).unwrap();
        assert_eq!((b.lo, b.hi.clone()), (r(16, 49), r(3, 7)));
        assert_eq!(rootless_density(7, 2).unwrap(), b.hi);
        let b = density_bounds(5, 4).unwrap();
        assert_eq!((b.lo, b.hi), (r(8, 25), r(2, 5)));
        assert!(density_bounds(5, 1).is_err());

        for p in primes_up_to(50) {
            for n in 2..=8 {
                let b = density_bounds(p, n).unwrap();
                let c = rootless_density(p, n).unwrap();
                assert!(b.lo <= c && c <= b.hi, "p={p} n={n}");
                assert!(b.lo >= r(1, 4) && b.hi < r(1, 2));
            }
        }
    }

    #[test]
    fn binomial_ratio_strictly_decreasing() {
        for p in primes_up_to(50) {
            let term = |k: u64| {
                let mut b = BigInt::one();
                for i in 0..k {
                    b = b * BigInt::from(p - i) / BigInt::from(i + 1);
                }
                ExactRational::new(b, big_pow(p, k as u32))
            };
            assert_eq!(term(0), term(1));
            for k in 1..p {
                assert!(term(k) > term(k + 1), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn dubickas_examples() {
        assert_eq!(dubickas_density(2, 2).unwrap().lo, r(1, 8));
        assert_eq!(dubickas_density(2, 3).unwrap().lo, r(41, 216));
        assert!(dubickas_density(1, 10).is_err());
        assert!(dubickas_density(3, 1).is_err());
        for n in 2..=4 {
            let mut prev = dubickas_density(n, 2).unwrap();
            for b in 3..=60 {
                let cur = dubickas_density(n, b).unwrap();
                assert!(cur.is_within(&prev), "n={n} b={b}");
                assert!(cur.width() <= prev.width());
                prev = cur;
            }
        }
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(5).unwrap(), ExactRational::one());
        assert_eq!(epsilon(17).unwrap(), r(3, 2));
        let big = epsilon(100_000_007).unwrap();
        let expect = ExactRational::from_integer(26) * r(3, 4).pow(25);
        assert_eq!(big, expect);
        assert!((big.to_f64() - 26.0 * 0.75f64.powi(25)).abs() < 1e-12);
        assert!((big.to_f64() - 0.01957).abs() < 5e-5);
    }

    #[test]
    fn epsilon_hat_examples() {
        assert_eq!(epsilon_hat(101, Some(1.0)).unwrap(), ExactRational::one());
        assert_eq!(epsilon_hat(101, Some(10.0)).unwrap(), r(405, 256));
        // (log p)^(1/4) = 2 at p ~ e^16 ~ 8.886e6
        let p = 8_886_113u64;
        assert!(crate::arith::is_prime(p));
        assert_eq!(default_epsilon_hat_bound(p).floor(), 2.0);
        assert_eq!(epsilon_hat(p, None).unwrap(), r(3, 2));
        assert!(epsilon_hat(3, None).is_err());
        assert!(epsilon_hat(101, Some(0.5)).is_err());
    }

    #[test]
    fn epsilon_monotone_once_three_primes() {
        let primes: Vec<u64> = primes_up_to(2_000_000).into_iter().filter(|&p| p > 625).step_by(97).collect();
        for w in primes.windows(2) {
            assert!(prime_pi(epsilon_pair_bound(w[0])) >= 3);
            assert!(epsilon(w[1]).unwrap() <= epsilon(w[0]).unwrap());
        }
    }

    #[test]
    fn degree_aware_is_sharper() {
        for p in [101u64, 10_007, 100_000_007] {
            for n in 2..=7 {
                assert!(epsilon_degree_aware(p, n).unwrap() <= epsilon(p).unwrap());
            }
        }
    }
}
