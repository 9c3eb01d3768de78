//! Small-integer number theory: primality, sieving, modular powers.

/// `a * b mod m` without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by square-and-multiply. `pow_mod(_, 0, 1) == 0`.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// `π(x)`, the number of primes `<= x`.
pub fn prime_pi(x: u64) -> usize {
    primes_up_to(x).len()
}

/// Largest integer `y` with `y^4 < p`, for `p >= 2`.
pub fn fourth_root_floor_strict(p: u64) -> u64 {
    // y^4 < p  <=>  y <= floor((p - 1)^(1/4))
    let target = p.saturating_sub(1) as u128;
    let mut y = (target as f64).powf(0.25) as u128;
    while y.pow(4) > target {
        y -= 1;
    }
    while (y + 1).pow(4) <= target {
        y += 1;
    }
    y as u64
}

/// Least non-negative residue of `a` modulo `m`.
#[inline]
pub fn rem_i64(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

#[inline]
pub fn rem_i128(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

pub(crate) fn require_prime(name: &str, value: u64) -> crate::Result<()> {
    if is_prime(value) {
        Ok(())
    } else {
        Err(crate::Error::precondition(format!("{name} = {value} is not prime")))
    }
}
