//! Monic integer polynomials, height, the Eisenstein predicate and roots mod `q`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `x^n + a_{n-1} x^{n-1} + ... + a_0`, stored as `[a_0, ..., a_{n-1}]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MonicIntPolynomial {
    coeffs: Vec<BigInt>,
}

impl MonicIntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("a monic polynomial needs at least one non-leading coefficient"));
        }
        Ok(MonicIntPolynomial { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Non-leading coefficients, ascending by degree.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `max(|a_0|, ..., |a_{n-1}|, 1)`.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).fold(BigInt::from(1), |m, c| m.max(c))
    }

    pub fn is_eisenstein_at(&self, p: u64) -> bool {
        if p < 2 {
            return false;
        }
        let p = BigInt::from(p);
        let p2 = &p * &p;
        self.coeffs.iter().all(|c| c.is_multiple_of(&p)) && !self.coeffs[0].is_multiple_of(&p2)
    }

    pub fn reduce_mod(&self, q: u64) -> Result<ResiduePolynomial> {
        if q < 2 {
            return Err(Error::precondition(format!("modulus {q} must be at least 2")));
        }
        let qb = BigInt::from(q);
        let coeffs = self.coeffs.iter().map(|c| c.mod_floor(&qb).to_u64().expect("residue fits in u64")).collect();
        Ok(ResiduePolynomial { modulus: q, coeffs })
    }

    /// Whether `f(r) == 0` in `F_q` for some `r`.
    pub fn has_root_mod(&self, q: u64) -> Result<bool> {
        Ok(self.reduce_mod(q)?.has_root())
    }

    /// Coefficients as `i64`, if they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }
}

impl TryFrom<String> for MonicIntPolynomial {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<MonicIntPolynomial> for String {
    fn from(f: MonicIntPolynomial) -> Self {
        f.to_string()
    }
}

/// Parses the comma-separated ascending form `"a0,a1,...,a{n-1}"`.
impl FromStr for MonicIntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<BigInt>().map_err(|_| Error::invalid(format!("bad coefficient {t:?} in polynomial {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

impl fmt::Display for MonicIntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A monic polynomial reduced modulo `q >= 2`; the leading 1 stays implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePolynomial {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl ResiduePolynomial {
    pub fn new(modulus: u64, coeffs: Vec<u64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::precondition("modulus must be at least 2"));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= modulus) {
            return Err(Error::invalid(format!("residue {c} not reduced modulo {modulus}")));
        }
        Ok(ResiduePolynomial { modulus, coeffs })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Horner evaluation of the monic polynomial at `r`.
    pub fn eval(&self, r: u64) -> u64 {
        let q = self.modulus as u128;
        let r = r as u128 % q;
        let mut acc = 1u128;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * r + c as u128) % q;
        }
        acc as u64
    }

    pub fn has_root(&self) -> bool {
        (0..self.modulus).any(|r| self.eval(r).is_zero())
    }
}

/// Marks in `out` (length `q`) the residues `a_0 mod q` that give `f` a root
/// mod `q`, for fixed `a_1 .. a_{n-1}` given ascending in `upper`.
///
/// `f(r) = a_0 + g(r)`, so a root exists iff `a_0 == -g(r)` for some `r`.
pub(crate) fn mark_rooted_constants(upper: &[u64], q: u64, out: &mut [bool]) {
    debug_assert_eq!(out.len() as u64, q);
    out.fill(false);
    let qq = q as u128;
    for r in 0..q as u128 {
        let mut acc = 1u128;
        for &c in upper.iter().rev() {
            acc = (acc * r + c as u128) % qq;
        }
        let g = (acc * r % qq) as u64;
        out[((q - g) % q) as usize] = true;
    }
}
