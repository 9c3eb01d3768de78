//! Brute-force reference computations.
//!
//! Each function here answers a question the library answers more cleverly,
//! by the most direct enumeration available, and shares no code path with the
//! implementation it checks beyond `ExactRational`. Used by the unit tests and
//! by the `verify` subcommand.

use std::collections::BTreeSet;

use crate::criterion::HeilbronnWitness;
use crate::ExactRational;

fn naive_eval(coeffs: &[i64], x: i64, q: i64) -> i64 {
    // x^n + sum a_i x^i mod q, term by term
    let n = coeffs.len() as u32;
    let mut total: i128 = (x as i128).pow(n);
    for (i, &c) in coeffs.iter().enumerate() {
        total += c as i128 * (x as i128).pow(i as u32);
    }
    total.rem_euclid(q as i128) as i64
}

fn naive_has_root(coeffs: &[i64], q: i64) -> bool {
    (0..q).any(|x| naive_eval(coeffs, x, q) == 0)
}

fn naive_gcd(a: u64, b: u64) -> u64 {
    (1..=a.min(b)).rev().find(|d| a.is_multiple_of(*d) && b.is_multiple_of(*d)).unwrap_or(a.max(b))
}

fn naive_is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Calls `visit` on every tuple in `values^n`.
fn for_each_tuple(values: &[i64], n: usize, visit: &mut dyn FnMut(&[i64])) {
    let mut t = vec![0i64; n];
    fn rec(values: &[i64], t: &mut Vec<i64>, pos: usize, visit: &mut dyn FnMut(&[i64])) {
        if pos == t.len() {
            visit(t);
            return;
        }
        for &v in values {
            t[pos] = v;
            rec(values, t, pos + 1, visit);
        }
    }
    rec(values, &mut t, 0, visit);
}

/// Monic degree-`n` polynomials over `F_p` with no root, counted one by one.
pub fn brute_rootless_count(p: u64, n: u32) -> u64 {
    let values: Vec<i64> = (0..p as i64).collect();
    let mut count = 0;
    for_each_tuple(&values, n as usize, &mut |t| {
        if !naive_has_root(t, p as i64) {
            count += 1;
        }
    });
    count
}

fn is_eisenstein_tuple(t: &[i64], p: i64) -> bool {
    t.iter().all(|c| c % p == 0) && t[0] % (p * p) != 0
}

/// Proportion of `(Z/p^2)^n` that is `p`-Eisenstein.
pub fn brute_eisenstein_density(p: u64, n: u32) -> ExactRational {
    let m = (p * p) as i64;
    let values: Vec<i64> = (0..m).collect();
    let mut count = 0i64;
    for_each_tuple(&values, n as usize, &mut |t| {
        if is_eisenstein_tuple(t, p as i64) {
            count += 1;
        }
    });
    ExactRational::new(count, m.pow(n))
}

/// Proportion of `(Z/m)^n`, `m = p^2 prod q`, meeting the Eisenstein
/// condition and the given root conditions.
pub fn brute_local_density(p: u64, n: u32, rootless: &[u64], rooted: &[u64]) -> ExactRational {
    let m: i64 = (p * p) as i64 * rootless.iter().chain(rooted).product::<u64>() as i64;
    let values: Vec<i64> = (0..m).collect();
    let mut count = 0i64;
    for_each_tuple(&values, n as usize, &mut |t| {
        if tuple_meets(t, p, rootless, rooted) {
            count += 1;
        }
    });
    ExactRational::new(count, m.pow(n))
}

fn tuple_meets(t: &[i64], p: u64, rootless: &[u64], rooted: &[u64]) -> bool {
    is_eisenstein_tuple(t, p as i64)
        && rootless.iter().all(|&q| !naive_has_root(t, q as i64))
        && rooted.iter().all(|&q| naive_has_root(t, q as i64))
}

/// Tuples in the full box `[lo, hi]^n` meeting the conditions.
pub fn brute_count_box(p: u64, n: u32, rootless: &[u64], rooted: &[u64], lo: i64, hi: i64) -> u64 {
    let values: Vec<i64> = (lo..=hi).collect();
    let mut count = 0;
    for_each_tuple(&values, n as usize, &mut |t| {
        if tuple_meets(t, p, rootless, rooted) {
            count += 1;
        }
    });
    count
}

/// Smallest-`u` pair `(u, v)` with `p = u q1 + v q2`, `q1 ∤ u`, `q2 ∤ v`, found by a double loop.
pub fn brute_min_decomposition(p: u64, q1: u64, q2: u64) -> Option<(u64, u64)> {
    for u in 1..=p {
        for v in 1..=p {
            if u * q1 + v * q2 == p && u % q1 != 0 && v % q2 != 0 {
                return Some((u, v));
            }
        }
    }
    None
}

/// `{x^n mod p : 1 <= x < p}`.
pub fn brute_power_residues(p: u64, n: u64) -> BTreeSet<u64> {
    (1..p)
        .map(|x| {
            let mut acc = 1u64;
            for _ in 0..n {
                acc = acc * x % p;
            }
            acc
        })
        .collect()
}

/// All `u < p/q1 - 2 q2` with `gcd(u, q1) = 1`, `q1 u ≡ p (mod q2)` and
/// `u q1` an `n`-th power mod `p`, using a table of powers.
pub fn brute_admissible_us(p: u64, n: u64, q1: u64, q2: u64) -> Vec<u64> {
    let limit = p as f64 / q1 as f64 - 2.0 * q2 as f64;
    let powers = brute_power_residues(p, n);
    (1..p)
        .filter(|&u| (u as f64) < limit)
        .filter(|&u| naive_gcd(u, q1) == 1)
        .filter(|&u| (q1 * u) % q2 == p % q2)
        .filter(|&u| powers.contains(&(u * q1 % p)))
        .collect()
}

/// Checks a witness against `f` using only the naive helpers above.
pub fn independent_witness_check(coeffs: &[i64], w: &HeilbronnWitness) -> bool {
    let HeilbronnWitness { p, n, q1, q2, u, v, a, b, g, .. } = *w;
    naive_is_prime(p)
        && naive_is_prime(q1)
        && naive_is_prime(q2)
        && q1 < q2
        && coeffs.len() as u64 == n
        && is_eisenstein_tuple(coeffs, p as i64)
        && a == u * q1
        && b == v * q2
        && a + b == p
        && naive_gcd(u, q1) == 1
        && naive_gcd(v, q2) == 1
        && g == naive_gcd(p - 1, n)
        && brute_power_residues(p, n).contains(&(a % p))
        && !naive_has_root(coeffs, q1 as i64)
        && !naive_has_root(coeffs, q2 as i64)
}
