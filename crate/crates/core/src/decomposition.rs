//! Splitting a prime as `p = u*q1 + v*q2` with `q1 ∤ u` and `q2 ∤ v`.

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, require_prime};
use crate::{Error, Result};

/// A verified representation `p = u*q1 + v*q2` with `u, v >= 1`,
/// `gcd(u, q1) = 1` and `gcd(v, q2) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    pub p: u64,
    pub q1: u64,
    pub q2: u64,
    pub u: u64,
    pub v: u64,
}

impl Decomposition {
    /// Builds a decomposition, checking every invariant.
    pub fn new(p: u64, q1: u64, q2: u64, u: u64, v: u64) -> Result<Self> {
        let d = Decomposition { p, q1, q2, u, v };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let Decomposition { p, q1, q2, u, v } = *self;
        if u == 0 || v == 0 {
            return Err(Error::Internal(format!("non-positive part in {self:?}")));
        }
        let sum = u as u128 * q1 as u128 + v as u128 * q2 as u128;
        if sum != p as u128 {
            return Err(Error::Internal(format!("{u}*{q1} + {v}*{q2} = {sum} != {p}")));
        }
        if gcd(u, q1) != 1 || gcd(v, q2) != 1 {
            return Err(Error::Internal(format!("coprimality fails in {self:?}")));
        }
        Ok(())
    }

    /// `a = u*q1`.
    pub fn a(&self) -> u64 {
        self.u * self.q1
    }

    /// `b = v*q2`.
    pub fn b(&self) -> u64 {
        self.v * self.q2
    }
}

fn check_primes(p: u64, q1: u64, q2: u64) -> Result<()> {
    require_prime("p", p)?;
    require_prime("q1", q1)?;
    require_prime("q2", q2)?;
    if !(q1 < q2 && q2 < p) {
        return Err(Error::precondition(format!("need q1 < q2 < p, got q1={q1}, q2={q2}, p={p}")));
    }
    Ok(())
}

/// The decomposition with the smallest `u`, or `None` if there is none.
///
/// Direct scan over `u = 1 ..= (p - q2) / q1`.
pub fn frobenius_decompose(p: u64, q1: u64, q2: u64) -> Result<Option<Decomposition>> {
    Ok(first_decomposition_where(p, q1, q2, |_| true)?.0)
}

/// Scans decompositions of `p` in increasing `u` and returns the first one
/// accepted by `accept`, along with whether any decomposition exists at all.
pub fn first_decomposition_where(
    p: u64,
    q1: u64,
    q2: u64,
    mut accept: impl FnMut(&Decomposition) -> bool,
) -> Result<(Option<Decomposition>, bool)> {
    check_primes(p, q1, q2)?;
    let max_u = (p - q2) / q1;
    let mut any = false;
    for u in 1..=max_u {
        if u % q1 == 0 {
            continue;
        }
        let rest = p - u * q1;
        if !rest.is_multiple_of(q2) {
            continue;
        }
        let v = rest / q2;
        if v.is_multiple_of(q2) {
            continue;
        }
        let d = Decomposition { p, q1, q2, u, v };
        d.validate()?;
        any = true;
        if accept(&d) {
            return Ok((Some(d), true));
        }
    }
    Ok((None, any))
}

/// `q1^2 * q2^2`: every prime at or above it has a decomposition.
pub fn guarantee_threshold(q1: u64, q2: u64) -> Result<u128> {
    if q1 >= q2 {
        return Err(Error::precondition(format!("need q1 < q2, got {q1} and {q2}")));
    }
    Ok((q1 as u128 * q2 as u128).pow(2))
}

/// Repairs `p = u*q1 + v*q2` (with `gcd(u, q1) = 1`, `v > 0`) when `q2 | v`
/// by trying `(u, v)`, `(u + q2, v - q1)` and `(u + 2 q2, v - 2 q1)` in turn.
/// Returns the first candidate that validates and how many `q2` steps it took.
pub fn adjust_for_criterion(p: u64, q1: u64, q2: u64, u: u64, v: u64) -> Result<(Decomposition, u32)> {
    if u == 0 || v == 0 || gcd(u, q1) != 1 {
        return Err(Error::precondition(format!("adjustment needs u, v > 0 and gcd(u, q1) = 1, got u={u}, v={v}")));
    }
    if u as u128 * q1 as u128 + v as u128 * q2 as u128 != p as u128 {
        return Err(Error::precondition(format!("{u}*{q1} + {v}*{q2} != {p}")));
    }
    for step in 0..3u64 {
        let Some(v2) = v.checked_sub(step * q1) else { break };
        let u2 = u + step * q2;
        let candidate = Decomposition { p, q1, q2, u: u2, v: v2 };
        if candidate.validate().is_ok() {
            return Ok((candidate, step as u32));
        }
    }
    Err(Error::Internal(format!(
        "no adjustment of (u={u}, v={v}) for p={p}, q1={q1}, q2={q2} validates; precondition u + 2*q2 < p/q1 was likely breached"
    )))
}
