//! Counting Eisenstein polynomials with local conditions, and estimating the
//! proportion of them that the criterion applies to.
//!
//! Enumeration walks only Eisenstein-admissible coefficients: `a_0` over
//! multiples of `p` that are not multiples of `p^2`, every other coefficient
//! over multiples of `p`. The `a_0` axis is cut into contiguous chunks that
//! workers own exclusively; per-chunk tallies are summed, so results do not
//! depend on the number of workers.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, rem_i128, rem_i64, require_prime};
use crate::criterion::CriterionEngine;
use crate::density::{default_epsilon_hat_bound, eisenstein_density, epsilon, epsilon_hat, rootless_density};
use crate::poly::mark_rooted_constants;
use crate::rational::big_decimal;
use crate::{Error, ExactRational, Result};

/// Largest full box `(2km)^n` that [`exact_count_aligned`] cross-checks by enumeration.
pub const ALIGNED_ENUMERATION_CAP: u128 = 100_000_000;

/// Samples per Monte Carlo block; each block has its own RNG stream.
const MC_BLOCK: u64 = 4096;

/// Local conditions imposed on top of being `p`-Eisenstein.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSpec {
    pub p: u64,
    pub n: u32,
    /// Primes modulo which `f` must have no root.
    pub rootless_at: BTreeSet<u64>,
    /// Primes modulo which `f` must have a root.
    pub rooted_at: BTreeSet<u64>,
}

impl LocalSpec {
    pub fn new(p: u64, n: u32, rootless_at: impl IntoIterator<Item = u64>, rooted_at: impl IntoIterator<Item = u64>) -> Result<Self> {
        let spec = LocalSpec { p, n, rootless_at: rootless_at.into_iter().collect(), rooted_at: rooted_at.into_iter().collect() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        require_prime("p", self.p)?;
        if self.n == 0 {
            return Err(Error::precondition("degree n must be positive"));
        }
        for &q in self.rootless_at.iter().chain(&self.rooted_at) {
            if !is_prime(q) || q >= self.p {
                return Err(Error::precondition(format!("local condition prime {q} must be a prime below p = {}", self.p)));
            }
        }
        if let Some(q) = self.rootless_at.intersection(&self.rooted_at).next() {
            return Err(Error::precondition(format!("prime {q} is both rootless and rooted")));
        }
        Ok(())
    }

    /// Primes carrying a condition, ascending.
    pub fn primes(&self) -> Vec<u64> {
        self.rootless_at.union(&self.rooted_at).copied().collect()
    }

    /// `m = p^2 * prod q`.
    pub fn modulus(&self) -> BigInt {
        self.primes().into_iter().fold(BigInt::from(self.p) * BigInt::from(self.p), |m, q| m * q)
    }

    /// `E_p(n) * prod_{rootless} C_q(n) * prod_{rooted} (1 - C_q(n))`, the
    /// proportion of `(Z/m)^n` meeting the spec.
    pub fn density(&self) -> Result<ExactRational> {
        let mut d = eisenstein_density(self.p, self.n)?;
        for &q in &self.rootless_at {
            d = d * rootless_density(q, self.n)?;
        }
        for &q in &self.rooted_at {
            d = d * (ExactRational::one() - rootless_density(q, self.n)?);
        }
        Ok(d)
    }

    fn mask_matches(&self, primes: &[u64], rootless_mask: u64) -> bool {
        primes.iter().enumerate().all(|(i, q)| {
            let rootless = rootless_mask >> i & 1 == 1;
            (!self.rootless_at.contains(q) || rootless) && (!self.rooted_at.contains(q) || !rootless)
        })
    }
}

/// Inclusive coefficient range `[lo, hi]` shared by every coordinate.
#[derive(Clone, Copy, Debug)]
struct CoefficientRange {
    lo: i64,
    hi: i64,
}

fn multiples_in(range: CoefficientRange, p: i64) -> Vec<i64> {
    let first = range.lo.div_euclid(p) + if range.lo.rem_euclid(p) == 0 { 0 } else { 1 };
    let last = range.hi.div_euclid(p);
    (first..=last).map(|j| j * p).collect()
}

struct Enumeration {
    n: usize,
    primes: Vec<u64>,
    constants: Vec<i64>,
    others: Vec<i64>,
}

impl Enumeration {
    fn new(p: u64, n: usize, range: CoefficientRange, primes: Vec<u64>) -> Result<Self> {
        if primes.len() > 64 {
            return Err(Error::LimitExceeded(format!("{} condition primes; at most 64 are supported", primes.len())));
        }
        let pi = p as i64;
        let others = multiples_in(range, pi);
        let constants: Vec<i64> = others.iter().copied().filter(|a| a % (pi * pi) != 0).collect();
        Ok(Enumeration { n, primes, constants, others })
    }

    fn size(&self) -> u128 {
        self.constants.len() as u128 * (self.others.len() as u128).pow(self.n as u32 - 1)
    }

    /// Tallies candidates into `buckets` classes by their rootless mask.
    fn tally(&self, buckets: usize, classify: &(dyn Fn(u64) -> usize + Sync)) -> Vec<u64> {
        let n_upper = self.n - 1;
        let chunk = (self.constants.len() / (4 * rayon::current_num_threads()).max(1)).max(64);
        let reduced: Vec<Vec<u64>> = self.primes.iter().map(|&q| self.constants.iter().map(|&a| rem_i64(a, q)).collect()).collect();
        let indices: Vec<usize> = (0..self.constants.len()).collect();
        indices
            .par_chunks(chunk)
            .map(|idx| {
                let mut counts = vec![0u64; buckets];
                let mut marks: Vec<Vec<bool>> = self.primes.iter().map(|&q| vec![false; q as usize]).collect();
                let mut upper_res = vec![0u64; n_upper];
                let mut odometer = vec![0usize; n_upper];
                if n_upper > 0 && self.others.is_empty() {
                    return counts;
                }
                loop {
                    for (k, &q) in self.primes.iter().enumerate() {
                        for (slot, &i) in upper_res.iter_mut().zip(&odometer) {
                            *slot = rem_i64(self.others[i], q);
                        }
                        mark_rooted_constants(&upper_res, q, &mut marks[k]);
                    }
                    for &c in idx {
                        let mut mask = 0u64;
                        for (k, m) in marks.iter().enumerate() {
                            if !m[reduced[k][c] as usize] {
                                mask |= 1 << k;
                            }
                        }
                        counts[classify(mask)] += 1;
                    }
                    // advance the odometer over a_1 .. a_{n-1}
                    let mut axis = 0;
                    loop {
                        if axis == n_upper {
                            return counts;
                        }
                        odometer[axis] += 1;
                        if odometer[axis] < self.others.len() {
                            break;
                        }
                        odometer[axis] = 0;
                        axis += 1;
                    }
                }
            })
            .reduce(
                || vec![0u64; buckets],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    }
}

fn range_for_height(x: u64) -> Result<CoefficientRange> {
    let x = i64::try_from(x)
        .ok()
        .filter(|&x| x <= 1 << 62)
        .ok_or_else(|| Error::LimitExceeded(format!("X = {x} too large for enumeration")))?;
    Ok(CoefficientRange { lo: -x, hi: x })
}

fn range_aligned(half_width: u64) -> Result<CoefficientRange> {
    let r = range_for_height(half_width)?;
    Ok(CoefficientRange { lo: r.lo + 1, hi: r.hi })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignedCount {
    pub k: u64,
    #[serde(with = "big_decimal")]
    pub modulus: BigInt,
    /// `density * (2km)^n`.
    #[serde(with = "big_decimal")]
    pub formula: BigInt,
    /// Direct count over `(-km, km]^n`, when the box is small enough.
    #[serde(with = "big_decimal::option")]
    pub enumerated: Option<BigInt>,
    pub verified: bool,
}

/// Exact number of coefficient tuples in `(-km, km]^n` meeting `spec`,
/// from the product of local densities and, for boxes up to
/// [`ALIGNED_ENUMERATION_CAP`], by direct enumeration as well.
pub fn exact_count_aligned(spec: &LocalSpec, k: u64) -> Result<AlignedCount> {
    spec.validate()?;
    if k == 0 {
        return Err(Error::precondition("k must be at least 1"));
    }
    let m = spec.modulus();
    let side = BigInt::from(2 * k) * &m;
    let volume = num_traits::pow(side.clone(), spec.n as usize);
    let exact = spec.density()? * ExactRational::from_integer(volume.clone());
    if !exact.denom().is_one() {
        return Err(Error::Internal(format!("aligned count {exact} is not an integer")));
    }
    let formula = exact.numer().clone();
    let enumerated = match volume.to_u128() {
        Some(v) if v <= ALIGNED_ENUMERATION_CAP => {
            let half = (BigInt::from(k) * &m).to_u64().expect("within cap");
            let e = Enumeration::new(spec.p, spec.n as usize, range_aligned(half)?, spec.primes())?;
            let primes = e.primes.clone();
            let counts = e.tally(2, &|mask| spec.mask_matches(&primes, mask) as usize);
            Some(BigInt::from(counts[1]))
        }
        _ => None,
    };
    if let Some(e) = &enumerated {
        if *e != formula {
            return Err(Error::Internal(format!("aligned count mismatch: formula {formula}, enumeration {e}")));
        }
    }
    let verified = enumerated.is_some();
    Ok(AlignedCount { k, modulus: m, formula, enumerated, verified })
}

/// `E_p(n) * prod C_q(n) * prod (1 - C_q(n)) * (2X)^n`.
pub fn main_term(spec: &LocalSpec, x: u64) -> Result<ExactRational> {
    spec.validate()?;
    if x == 0 {
        return Err(Error::precondition("X must be at least 1"));
    }
    let volume = num_traits::pow(BigInt::from(2) * BigInt::from(x), spec.n as usize);
    Ok(spec.density()? * ExactRational::from_integer(volume))
}

/// `4 n 2^n m (2X)^(n-1)`: explicit allowance for the box-edge error.
pub fn count_error_bound(spec: &LocalSpec, x: u64) -> BigInt {
    let n = spec.n as usize;
    BigInt::from(4 * spec.n) * num_traits::pow(BigInt::from(2), n) * spec.modulus() * num_traits::pow(BigInt::from(2 * x), n - 1)
}

/// Number of tuples with every `|a_i| <= X` meeting `spec`, by enumeration.
pub fn exact_count_height(spec: &LocalSpec, x: u64, cap: u128) -> Result<u64> {
    spec.validate()?;
    let e = Enumeration::new(spec.p, spec.n as usize, range_for_height(x)?, spec.primes())?;
    if e.size() > cap {
        return Err(Error::LimitExceeded(format!("{} candidates exceed the enumeration cap {cap}", e.size())));
    }
    let primes = e.primes.clone();
    Ok(e.tally(2, &|mask| spec.mask_matches(&primes, mask) as usize)[1])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub spec: LocalSpec,
    pub x: u64,
    pub exact: u64,
    pub main_term: ExactRational,
    pub main_term_approx: f64,
    #[serde(with = "big_decimal")]
    pub error_bound: BigInt,
}

pub fn count_report(spec: &LocalSpec, x: u64, cap: u128) -> Result<CountReport> {
    let exact = exact_count_height(spec, x, cap)?;
    let main = main_term(spec, x)?;
    Ok(CountReport {
        spec: spec.clone(),
        x,
        exact,
        main_term_approx: main.to_f64(),
        main_term: main,
        error_bound: count_error_bound(spec, x),
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoxKind {
    /// `(-X, X]^n`. Every residue class mod `m` is hit equally often when
    /// `m | X`, so the proportion is then exactly the local density.
    #[default]
    HalfOpen,
    /// `[-X, X]^n`: height at most `X`.
    Height,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SurveyMode {
    Exhaustive,
    MonteCarlo { seed: u64, samples: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub p: u64,
    pub n: u32,
    pub x_requested: u64,
    /// Half-width of the box actually covered.
    pub x_used: u64,
    pub pair_bound: u64,
    pub box_kind: BoxKind,
    /// Modulus the box was aligned to (decimal string; may exceed 64 bits).
    pub alignment_modulus: String,
    pub mode: SurveyMode,
    pub g: u64,
    pub total_eisenstein: u64,
    pub applies_count: u64,
    pub delta_empirical: ExactRational,
    pub delta_approx: f64,
    /// Binomial standard error, Monte Carlo only.
    pub std_error: Option<f64>,
    /// Limit of the applies-proportion over aligned boxes for this pair bound.
    pub main_term_density: Option<ExactRational>,
    pub theoretical_lower_bound: ExactRational,
    pub lower_bound: LowerBoundReport,
    pub wall_time_ms: u64,
}

impl SurveyReport {
    /// CSV header matching [`SurveyReport::csv_row`].
    pub const CSV_HEADER: [&'static str; 9] = ["p", "n", "X", "mode", "total", "applies", "delta_num", "delta_den", "bound"];

    pub fn csv_row(&self) -> [String; 9] {
        let mode = match self.mode {
            SurveyMode::Exhaustive => "exhaustive".to_string(),
            SurveyMode::MonteCarlo { .. } => "mc".to_string(),
        };
        [
            self.p.to_string(),
            self.n.to_string(),
            self.x_requested.to_string(),
            mode,
            self.total_eisenstein.to_string(),
            self.applies_count.to_string(),
            self.delta_empirical.numer().to_string(),
            self.delta_empirical.denom().to_string(),
            self.theoretical_lower_bound.to_string(),
        ]
    }
}

/// Parameters shared by both survey modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurveyParams {
    pub p: u64,
    pub n: u32,
    pub x: u64,
    pub pair_bound: u64,
    pub box_kind: BoxKind,
}

fn survey_engine(params: &SurveyParams) -> Result<CriterionEngine> {
    if params.n < 2 {
        return Err(Error::precondition("surveys need degree n >= 2"));
    }
    let engine = CriterionEngine::new(params.p, params.n as u64, params.pair_bound)?;
    if engine.primes().len() > 64 {
        return Err(Error::LimitExceeded("surveys support at most 64 primes below the pair bound".into()));
    }
    Ok(engine)
}

fn alignment_modulus(engine: &CriterionEngine) -> BigInt {
    let p = engine.p();
    engine.primes().iter().fold(BigInt::from(p) * BigInt::from(p), |m, &q| m * q)
}

/// Exact limiting proportion for `engine` over aligned boxes: the sum over
/// rootless patterns that trigger the criterion of their local probability.
pub fn limiting_density(engine: &CriterionEngine) -> Result<Option<ExactRational>> {
    let k = engine.primes().len();
    if k > 12 {
        return Ok(None);
    }
    let n = engine.degree() as u32;
    let c = engine.primes().iter().map(|&q| rootless_density(q, n)).collect::<Result<Vec<_>>>()?;
    let total = (0..1u64 << k)
        .filter(|&mask| engine.applies_for_mask(mask))
        .map(|mask| {
            (0..k).map(|i| if mask >> i & 1 == 1 { c[i].clone() } else { ExactRational::one() - c[i].clone() }).product::<ExactRational>()
        })
        .sum();
    Ok(Some(total))
}

#[allow(clippy::too_many_arguments)]
fn finish_report(
    params: &SurveyParams,
    engine: &CriterionEngine,
    box_kind: BoxKind,
    x_used: u64,
    modulus: BigInt,
    mode: SurveyMode,
    total: u64,
    applies: u64,
    started: Instant,
) -> Result<SurveyReport> {
    if total == 0 {
        return Err(Error::precondition(format!("no {}-Eisenstein polynomials in the box; X must be at least p", params.p)));
    }
    let delta = ExactRational::new(applies, total);
    let delta_approx = delta.to_f64();
    let std_error = match mode {
        SurveyMode::MonteCarlo { .. } => Some((delta_approx * (1.0 - delta_approx) / total as f64).sqrt()),
        SurveyMode::Exhaustive => None,
    };
    let lower_bound = lower_bound_report(params.p, params.n)?;
    Ok(SurveyReport {
        p: params.p,
        n: params.n,
        x_requested: params.x,
        x_used,
        pair_bound: params.pair_bound,
        box_kind,
        alignment_modulus: modulus.to_string(),
        mode,
        g: engine.residue_order(),
        total_eisenstein: total,
        applies_count: applies,
        delta_empirical: delta,
        delta_approx,
        std_error,
        main_term_density: limiting_density(engine)?,
        theoretical_lower_bound: lower_bound.best_bound(),
        lower_bound,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}

/// Runs the criterion on every `p`-Eisenstein tuple in the box.
pub fn exhaustive_survey(params: &SurveyParams, cap: u128) -> Result<SurveyReport> {
    let started = Instant::now();
    let engine = survey_engine(params)?;
    let modulus = alignment_modulus(&engine);
    let box_kind = params.box_kind;
    let range = match box_kind {
        BoxKind::Height => range_for_height(params.x)?,
        BoxKind::HalfOpen => range_aligned(params.x)?,
    };
    let e = Enumeration::new(params.p, params.n as usize, range, engine.primes().to_vec())?;
    if e.size() > cap {
        return Err(Error::LimitExceeded(format!(
            "{} Eisenstein candidates exceed the enumeration cap {cap}; use Monte Carlo mode",
            e.size()
        )));
    }
    let counts = e.tally(2, &|mask| engine.applies_for_mask(mask) as usize);
    let total = counts[0] + counts[1];
    finish_report(params, &engine, box_kind, params.x, modulus, SurveyMode::Exhaustive, total, counts[1], started)
}

/// Estimates the applies-proportion by uniform sampling from the
/// Eisenstein tuples of an aligned sub-box. Deterministic given `seed`,
/// whatever the number of workers.
pub fn montecarlo_survey(params: &SurveyParams, seed: u64, samples: u64) -> Result<SurveyReport> {
    let started = Instant::now();
    if samples == 0 {
        return Err(Error::precondition("samples must be positive"));
    }
    let engine = survey_engine(params)?;
    let p = params.p;
    let p2 = p as u128 * p as u128;
    let full = alignment_modulus(&engine);
    let modulus: u128 = match full.to_u128() {
        Some(m) if m <= params.x as u128 => m,
        _ => p2,
    };
    if (params.x as u128) < modulus {
        return Err(Error::precondition(format!("X = {} is below the sampling modulus {modulus}", params.x)));
    }
    let half = (params.x as u128 / modulus) * modulus;
    let blocks_of_p2 = 2 * half / p2; // choices for the a_0 block
    let multiples = 2 * half / p as u128; // choices for the other coefficients
    let base = -((half / p as u128) as i128);
    let n = params.n as usize;
    let primes = engine.primes().to_vec();

    let blocks = samples.div_ceil(MC_BLOCK);
    let applies: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let len = MC_BLOCK.min(samples - b * MC_BLOCK);
            let mut coeffs = vec![0i128; n];
            let mut hits = 0u64;
            for _ in 0..len {
                let block = rng.gen_range(0..blocks_of_p2) as i128;
                let r = rng.gen_range(1..p) as i128;
                coeffs[0] = p as i128 * (base + block * p as i128 + r);
                for c in coeffs.iter_mut().skip(1) {
                    *c = p as i128 * (base + 1 + rng.gen_range(0..multiples) as i128);
                }
                let mut mask = 0u64;
                for (k, &q) in primes.iter().enumerate() {
                    if !has_root_residues(&coeffs, q) {
                        mask |= 1 << k;
                    }
                }
                hits += engine.applies_for_mask(mask) as u64;
            }
            hits
        })
        .sum();
    let modulus = BigInt::from(modulus);
    let mode = SurveyMode::MonteCarlo { seed, samples };
    finish_report(params, &engine, BoxKind::HalfOpen, half as u64, modulus, mode, samples, applies, started)
}

fn has_root_residues(coeffs: &[i128], q: u64) -> bool {
    let reduced: Vec<u64> = coeffs.iter().map(|&c| rem_i128(c, q)).collect();
    (0..q).any(|r| {
        let mut acc = 1u64;
        for &c in reduced.iter().rev() {
            acc = ((acc as u128 * r as u128 + c as u128) % q as u128) as u64;
        }
        acc == 0
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    /// `ε` or `ε̂` as an exact rational.
    pub epsilon: ExactRational,
    pub epsilon_approx: f64,
    /// `1 - ε`, clamped to `[0, 1]`.
    pub one_minus_epsilon: ExactRational,
    /// `1 - ε <= 0`: the bound says nothing.
    pub vacuous: bool,
}

impl BoundValue {
    fn from_epsilon(epsilon: ExactRational) -> Self {
        let raw = ExactRational::one() - epsilon.clone();
        BoundValue { epsilon_approx: epsilon.to_f64(), vacuous: raw <= ExactRational::zero(), one_minus_epsilon: raw.clamp_unit(), epsilon }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub p: u64,
    pub n: u32,
    pub g: u64,
    /// `g == 1`.
    pub gcd_ok: bool,
    /// `max(2/27, 1 - ε(p))`, present when `n` is odd, `n >= 3` and `g == 1`.
    pub bound_t1: Option<ExactRational>,
    pub bound_t1_approx: Option<f64>,
    pub epsilon: BoundValue,
    /// Pair bound used for `ε̂`, the default `(log p)^(1/4)`.
    pub t2_pair_bound: f64,
    pub epsilon_hat: BoundValue,
    /// `g < p^(1/2) / (log p)^2`.
    pub t2_hypothesis: bool,
}

impl LowerBoundReport {
    /// Strongest applicable lower bound, `0` when none applies.
    pub fn best_bound(&self) -> ExactRational {
        let t2 = if self.t2_hypothesis { self.epsilon_hat.one_minus_epsilon.clone() } else { ExactRational::zero() };
        match &self.bound_t1 {
            Some(t1) if *t1 > t2 => t1.clone(),
            _ => t2,
        }
    }
}

/// The lower bounds on the liminf of the applies-proportion for `(p, n)`.
pub fn lower_bound_report(p: u64, n: u32) -> Result<LowerBoundReport> {
    require_prime("p", p)?;
    if p < 5 {
        return Err(Error::precondition("lower bounds need p >= 5"));
    }
    if n == 0 {
        return Err(Error::precondition("degree n must be positive"));
    }
    let g = gcd(p - 1, n as u64);
    let eps = BoundValue::from_epsilon(epsilon(p)?);
    let bound_t1 = (n >= 3 && n % 2 == 1 && g == 1).then(|| {
        let floor = ExactRational::new(2, 27);
        if eps.one_minus_epsilon > floor {
            eps.one_minus_epsilon.clone()
        } else {
            floor
        }
    });
    let pf = p as f64;
    Ok(LowerBoundReport {
        p,
        n,
        g,
        gcd_ok: g == 1,
        bound_t1_approx: bound_t1.as_ref().map(|b| b.to_f64()),
        bound_t1,
        epsilon: eps,
        t2_pair_bound: default_epsilon_hat_bound(p),
        epsilon_hat: BoundValue::from_epsilon(epsilon_hat(p, None)?),
        t2_hypothesis: (g as f64) < pf.sqrt() / pf.ln().powi(2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn spec(p: u64, n: u32, rootless: &[u64], rooted: &[u64]) -> LocalSpec {
        LocalSpec::new(p, n, rootless.iter().copied(), rooted.iter().copied()).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(LocalSpec::new(5, 3, [2, 3], [3]).is_err());
        assert!(LocalSpec::new(5, 3, [7], []).is_err());
        assert!(LocalSpec::new(5, 3, [4], []).is_err());
        assert!(LocalSpec::new(6, 3, [], []).is_err());
        assert!(LocalSpec::new(5, 0, [], []).is_err());
    }

    #[test]
    fn aligned_examples() {
        let c = exact_count_aligned(&spec(5, 3, &[2, 3], &[]), 1).unwrap();
        assert_eq!(c.formula, BigInt::from(12800));
        assert_eq!(c.enumerated, Some(BigInt::from(12800)));
        // No condition primes: m = 25, so (-150, 150]^3 is k = 6.
        let c = exact_count_aligned(&spec(5, 3, &[], &[]), 1).unwrap();
        assert_eq!(c.formula, BigInt::from(800));
        let c = exact_count_aligned(&spec(5, 3, &[], &[]), 6).unwrap();
        assert_eq!(c.formula, BigInt::from(172_800));
        assert_eq!(c.enumerated, Some(BigInt::from(172_800)));
        assert!(exact_count_aligned(&spec(5, 3, &[], &[]), 0).is_err());
        // (2 * 2 * 150)^3 exceeds the cross-check cap: formula only.
        let c = exact_count_aligned(&spec(5, 3, &[2, 3], &[]), 2).unwrap();
        assert!(!c.verified);
        assert_eq!(c.formula, BigInt::from(12800 * 8));
    }

    #[test]
    fn aligned_formula_matches_enumeration_small_moduli() {
        let cases: &[(u64, u32, &[u64], &[u64])] = &[
            (5, 2, &[2], &[]),
            (5, 2, &[], &[3]),
            (5, 3, &[3], &[2]),
            (7, 2, &[2, 3], &[]),
            (7, 2, &[3], &[2, 5]),
            (3, 2, &[2], &[]),
            (5, 4, &[2], &[]),
            (11, 2, &[], &[]),
        ];
        for &(p, n, rootless, rooted) in cases {
            let s = spec(p, n, rootless, rooted);
            for k in 1..=2 {
                let c = exact_count_aligned(&s, k).unwrap();
                if c.verified {
                    assert_eq!(c.enumerated.as_ref(), Some(&c.formula), "{s:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn local_density_factorizes() {
        let cases: &[(u64, u32, &[u64], &[u64])] =
            &[(5, 2, &[2], &[]), (5, 2, &[], &[2]), (3, 2, &[2], &[]), (5, 2, &[2, 3], &[]), (7, 2, &[], &[2]), (5, 3, &[2], &[])];
        for &(p, n, rootless, rooted) in cases {
            let s = spec(p, n, rootless, rooted);
            assert_eq!(s.density().unwrap(), oracle::brute_local_density(p, n, rootless, rooted), "{s:?}");
        }
    }

    #[test]
    fn main_term_examples() {
        assert_eq!(main_term(&spec(5, 3, &[2, 3], &[]), 150).unwrap(), ExactRational::from_integer(12800));
        assert_eq!(main_term(&spec(5, 3, &[], &[]), 1).unwrap(), ExactRational::new(32, 625));
        let rooted = main_term(&spec(5, 3, &[], &[2]), 150).unwrap();
        assert_eq!(rooted, ExactRational::new(4, 625) * ExactRational::new(3, 4) * ExactRational::from_integer(300i64.pow(3)));
        assert_eq!(rooted, ExactRational::from_integer(129_600));
    }

    #[test]
    fn height_counts_match_naive_box() {
        for (p, n, rootless, rooted, x) in
            [(5u64, 2u32, vec![2u64], vec![3u64], 40u64), (7, 3, vec![2], vec![], 30), (5, 3, vec![2, 3], vec![], 26)]
        {
            let s = spec(p, n, &rootless, &rooted);
            let fast = exact_count_height(&s, x, u128::MAX).unwrap();
            assert_eq!(fast, oracle::brute_count_box(p, n, &rootless, &rooted, -(x as i64), x as i64));
        }
    }

    #[test]
    fn unaligned_error_within_explicit_bound() {
        let s = spec(5, 3, &[2, 3], &[]);
        for x in (50..=500).step_by(7) {
            let count = exact_count_height(&s, x, u128::MAX).unwrap();
            let main = main_term(&s, x).unwrap();
            let diff = (ExactRational::from_integer(count) - main).as_big().clone();
            let diff = if diff < num_rational::BigRational::from_integer(0.into()) { -diff } else { diff };
            assert!(diff <= num_rational::BigRational::from_integer(count_error_bound(&s, x)), "x={x}");
        }
    }

    fn params(p: u64, n: u32, x: u64, y: u64) -> SurveyParams {
        SurveyParams { p, n, x, pair_bound: y, box_kind: BoxKind::HalfOpen }
    }

    #[test]
    fn exhaustive_aligned_is_exact() {
        let r = exhaustive_survey(&params(5, 3, 150, 3), u128::MAX).unwrap();
        assert_eq!(r.box_kind, BoxKind::HalfOpen);
        assert_eq!(r.total_eisenstein, 172_800);
        assert_eq!(r.applies_count, 12_800);
        assert_eq!(r.delta_empirical, ExactRational::new(2, 27));
        assert_eq!(r.main_term_density, Some(ExactRational::new(2, 27)));
        let aligned = exact_count_aligned(&spec(5, 3, &[2, 3], &[]), 1).unwrap();
        assert_eq!(BigInt::from(r.applies_count), aligned.formula);
    }

    #[test]
    fn exhaustive_unaligned_close() {
        let r = exhaustive_survey(&params(5, 3, 100, 3), u128::MAX).unwrap();
        assert_eq!(r.box_kind, BoxKind::HalfOpen);
        assert_eq!((r.total_eisenstein, r.applies_count), (51_200, 4_260));
        assert!((r.delta_approx - 2.0 / 27.0).abs() <= 0.01);
        // The closed box carries one extra residue class per axis.
        let closed = SurveyParams { box_kind: BoxKind::Height, ..params(5, 3, 100, 3) };
        let r = exhaustive_survey(&closed, u128::MAX).unwrap();
        assert_eq!((r.total_eisenstein, r.applies_count), (53_792, 4_536));
    }

    #[test]
    fn exhaustive_matches_per_polynomial_verdicts() {
        let engine = CriterionEngine::new(7, 4, 20).unwrap();
        for (box_kind, lo) in [(BoxKind::Height, -14), (BoxKind::HalfOpen, -13)] {
            let r = exhaustive_survey(&SurveyParams { box_kind, ..params(7, 4, 14, 20) }, u128::MAX).unwrap();
            let mut total = 0;
            let mut applies = 0;
            let vals: Vec<i64> = (lo..=14).filter(|v| v % 7 == 0).collect();
            for &a0 in vals.iter().filter(|&&v| v % 49 != 0) {
                for &a1 in &vals {
                    for &a2 in &vals {
                        for &a3 in &vals {
                            let f = crate::MonicIntPolynomial::from_i64s(&[a0, a1, a2, a3]).unwrap();
                            total += 1;
                            applies += engine.verdict(&f).unwrap().applies() as u64;
                        }
                    }
                }
            }
            assert_eq!((r.total_eisenstein, r.applies_count), (total, applies), "{box_kind:?}");
        }
    }

    #[test]
    fn p7_cubic_has_no_witness() {
        let r = exhaustive_survey(&params(7, 3, 1470, 5), u128::MAX).unwrap();
        assert_eq!(r.box_kind, BoxKind::HalfOpen);
        assert_eq!(r.applies_count, 0);
        assert_eq!(r.main_term_density, Some(ExactRational::zero()));
    }

    #[test]
    fn cap_and_small_x() {
        assert!(matches!(exhaustive_survey(&params(5, 3, 1000, 3), 1000), Err(Error::LimitExceeded(_))));
        assert!(exhaustive_survey(&params(5, 3, 4, 3), u128::MAX).is_err());
        assert!(exhaustive_survey(&params(5, 1, 100, 3), u128::MAX).is_err());
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
                let mut r = exhaustive_survey(&params(5, 3, 130, 20), u128::MAX).unwrap();
                r.wall_time_ms = 0;
                let mut m = montecarlo_survey(&params(11, 3, 100_000, 20), 9, 10_000).unwrap();
                m.wall_time_ms = 0;
                (r, m)
            })
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn montecarlo_near_exact_density() {
        let r = montecarlo_survey(&params(5, 3, 1_000_000, 3), 42, 100_000).unwrap();
        let se = r.std_error.unwrap();
        assert!((r.delta_approx - 2.0 / 27.0).abs() <= 4.0 * se, "{} vs 2/27, se {se}", r.delta_approx);
        assert_eq!(r.x_used % 150, 0);
        let again = montecarlo_survey(&params(5, 3, 1_000_000, 3), 42, 100_000).unwrap();
        assert_eq!(r.applies_count, again.applies_count);
        assert!(montecarlo_survey(&params(5, 3, 1_000_000, 3), 42, 0).is_err());
        assert!(montecarlo_survey(&params(5, 3, 10, 3), 42, 10).is_err());
    }

    #[test]
    fn montecarlo_sampler_is_uniform_on_residues() {
        // With the full modulus 150 = 25 * 2 * 3 available, the sampled
        // proportion converges to the exact local density for every spec.
        let r = montecarlo_survey(&params(5, 2, 150 * 1000, 3), 1, 200_000).unwrap();
        let exact = r.main_term_density.clone().unwrap().to_f64();
        assert!((r.delta_approx - exact).abs() <= 4.0 * r.std_error.unwrap());
    }

    #[test]
    fn lower_bounds() {
        let r = lower_bound_report(5, 3).unwrap();
        assert_eq!(r.bound_t1, Some(ExactRational::new(2, 27)));
        assert!(r.epsilon.vacuous);
        let r = lower_bound_report(100_000_007, 3).unwrap();
        let expect = ExactRational::one() - ExactRational::from_integer(26) * ExactRational::new(3, 4).pow(25);
        assert_eq!(r.bound_t1, Some(expect));
        assert!((r.bound_t1_approx.unwrap() - (1.0 - 26.0 * 0.75f64.powi(25))).abs() < 1e-12);
        let r = lower_bound_report(13, 12).unwrap();
        assert_eq!(r.g, 12);
        assert!(!r.t2_hypothesis);
        assert!(r.bound_t1.is_none());
        assert_eq!(r.best_bound(), ExactRational::zero());
        assert!(lower_bound_report(3, 3).is_err());
    }
}
