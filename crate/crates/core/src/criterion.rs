//! The Heilbronn criterion engine.
//!
//! For a `p`-Eisenstein `f` of degree `n`, the engine looks for primes
//! `q1 < q2` at which `f` has no root, together with `p = u*q1 + v*q2`
//! (`q1 ∤ u`, `q2 ∤ v`) such that `a = u*q1` is an `n`-th power residue
//! modulo `p`. Whether a pair `(q1, q2)` admits such a decomposition does not
//! depend on `f`, so [`CriterionEngine`] settles every pair once and a verdict
//! reduces to root tests.

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, pow_mod, primes_up_to, require_prime};
use crate::decomposition::{adjust_for_criterion, first_decomposition_where, frobenius_decompose, Decomposition};
use crate::{Error, MonicIntPolynomial, Result};

/// Recorded with every verdict: the root test certifies that `q1` and `q2`
/// are not norms, and the verdict takes this to cover `u*q1` and `-v*q2`.
pub const NON_NORM_ASSUMPTION: &str = "q1 and q2 have no degree-one primes above them (f is rootless mod q1 and q2); \
     the verdict takes this as sufficient for u*q1 and -v*q2 to be non-norms";

/// `g = gcd(p - 1, n)`.
pub fn residue_order(p: u64, n: u64) -> Result<u64> {
    if p < 3 {
        return Err(Error::precondition("residue_order needs p >= 3"));
    }
    if n == 0 {
        return Err(Error::precondition("degree n must be positive"));
    }
    Ok(gcd(p - 1, n))
}

/// Whether `x^n ≡ a (mod p)` is solvable, via `a^((p-1)/g) ≡ 1` with `g = gcd(p-1, n)`.
pub fn is_nth_power_residue(a: u64, p: u64, n: u64) -> Result<bool> {
    require_prime("p", p)?;
    if a.is_multiple_of(p) {
        return Err(Error::precondition(format!("p = {p} divides a = {a}")));
    }
    if p == 2 {
        return Ok(true);
    }
    let g = residue_order(p, n)?;
    Ok(g == 1 || pow_mod(a, (p - 1) / g, p) == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InconclusiveReason {
    /// No pair of primes below the bound splits `p` at all.
    NoPrimePair,
    /// Some pair works for `p`, but `f` has a root modulo one of its primes.
    AllPairsHaveRoots,
    /// Pairs split `p`, but no split has `u*q1` an `n`-th power residue.
    NoResidueAdmissibleU,
    /// Pairs split `p`, but only with non-residue `u*q1`, and `p` is below
    /// the range where the character-sum count guarantees a residue.
    PTooSmall,
}

/// How a witness decomposition was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessRoute {
    /// `gcd(p - 1, n) = 1`: the minimal decomposition, every `a` is a residue.
    Frobenius,
    /// The scan over `u < p/q1 - 2 q2` with `q1 u ≡ p (mod q2)` and the
    /// residue condition, followed by the `q2 | v` repair.
    CharacterScan { scanned_u: u64, shift_steps: u32, rejected_after_shift: u64 },
    /// Direct scan of all decompositions filtered by the residue condition.
    ResidueScan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeilbronnWitness {
    pub p: u64,
    pub n: u64,
    pub q1: u64,
    pub q2: u64,
    pub u: u64,
    pub v: u64,
    pub a: u64,
    pub b: u64,
    pub g: u64,
    pub route: WitnessRoute,
}

impl HeilbronnWitness {
    fn from_decomposition(d: Decomposition, n: u64, g: u64, route: WitnessRoute) -> Self {
        HeilbronnWitness { p: d.p, n, q1: d.q1, q2: d.q2, u: d.u, v: d.v, a: d.a(), b: d.b(), g, route }
    }

    /// Re-checks every witness invariant against `f` from scratch.
    pub fn verify(&self, f: &MonicIntPolynomial) -> Result<()> {
        let fail = |what: &str| Err(Error::Internal(format!("witness check failed: {what} in {self:?}")));
        let HeilbronnWitness { p, n, q1, q2, u, v, a, b, g, .. } = *self;
        if !(is_prime(p) && is_prime(q1) && is_prime(q2) && q1 < q2 && q2 < p) {
            return fail("primes out of order");
        }
        if f.degree() as u64 != n || !f.is_eisenstein_at(p) {
            return fail("polynomial is not p-Eisenstein of degree n");
        }
        if u == 0 || v == 0 || a != u * q1 || b != v * q2 || a as u128 + b as u128 != p as u128 {
            return fail("a + b != p");
        }
        if gcd(u, q1) != 1 || gcd(v, q2) != 1 {
            return fail("coprimality");
        }
        if g != gcd(p - 1, n) || pow_mod(a, (p - 1) / g, p) != 1 {
            return fail("a is not an n-th power residue");
        }
        if f.has_root_mod(q1)? || f.has_root_mod(q2)? {
            return fail("f has a root modulo q1 or q2");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum HeilbronnVerdict {
    Applies { witness: HeilbronnWitness },
    Inconclusive { reason: InconclusiveReason },
}

impl HeilbronnVerdict {
    pub fn applies(&self) -> bool {
        matches!(self, HeilbronnVerdict::Applies { .. })
    }
}

/// Result of the character-constrained search for one pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Theorem2Search {
    Found {
        decomposition: Decomposition,
        /// The admissible `u` the scan stopped at (before the repair shift).
        scanned_u: u64,
        shift_steps: u32,
        /// Admissible `u` skipped because the repaired `a` lost the residue property.
        rejected_after_shift: u64,
    },
    PTooSmall,
    NoAdmissibleU,
}

fn check_theorem2_pre(p: u64, n: u64, q1: u64, q2: u64) -> Result<()> {
    require_prime("p", p)?;
    require_prime("q1", q1)?;
    require_prime("q2", q2)?;
    if n == 0 {
        return Err(Error::precondition("degree n must be positive"));
    }
    if !(q1 < q2 && 4 * (q2 as u128) < (p as u128)) {
        return Err(Error::precondition(format!("need q1 < q2 < p/4, got q1={q1}, q2={q2}, p={p}")));
    }
    Ok(())
}

/// `u < p/q1 - 2 q2`, in integers.
#[inline]
fn below_scan_limit(u: u64, p: u64, q1: u64, q2: u64) -> bool {
    (u as u128 + 2 * q2 as u128) * (q1 as u128) < (p as u128)
}

fn is_admissible(u: u64, p: u64, q1: u64, q2: u64, g: u64) -> bool {
    !u.is_multiple_of(q1) && (q1 as u128 * u as u128) % q2 as u128 == (p % q2) as u128 && (g == 1 || pow_mod(u * q1, (p - 1) / g, p) == 1)
}

/// Scans `u = 1, 2, ...` below `X = p/q1 - 2 q2` for the first `u` with
/// `gcd(u, q1) = 1`, `q1 u ≡ p (mod q2)` and `u*q1` an `n`-th power residue,
/// then repairs `q2 | v`. A repaired `a` that is no longer a residue is
/// skipped and the scan continues.
pub fn theorem2_witness(p: u64, n: u64, q1: u64, q2: u64) -> Result<Theorem2Search> {
    check_theorem2_pre(p, n, q1, q2)?;
    if !below_scan_limit(1, p, q1, q2) {
        return Ok(Theorem2Search::PTooSmall);
    }
    let g = gcd(p - 1, n);
    let mut rejected = 0;
    let mut u = 1;
    while below_scan_limit(u, p, q1, q2) {
        if is_admissible(u, p, q1, q2, g) {
            let v = (p - u * q1) / q2;
            let (d, steps) = adjust_for_criterion(p, q1, q2, u, v)?;
            if steps == 0 || g == 1 || pow_mod(d.a(), (p - 1) / g, p) == 1 {
                return Ok(Theorem2Search::Found { decomposition: d, scanned_u: u, shift_steps: steps, rejected_after_shift: rejected });
            }
            rejected += 1;
        }
        u += 1;
    }
    Ok(Theorem2Search::NoAdmissibleU)
}

/// Number of `u < p/q1 - 2 q2` meeting the three scan conditions.
pub fn count_admissible(p: u64, n: u64, q1: u64, q2: u64) -> Result<u64> {
    check_theorem2_pre(p, n, q1, q2)?;
    let g = gcd(p - 1, n);
    let mut count = 0;
    let mut u = 1;
    while below_scan_limit(u, p, q1, q2) {
        if is_admissible(u, p, q1, q2, g) {
            count += 1;
        }
        u += 1;
    }
    Ok(count)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainTermEstimate {
    /// `X = p/q1 - 2 q2`.
    pub x: f64,
    pub g: u64,
    /// `m = p q1 q2`.
    pub modulus: u64,
    /// `X (q1 - 1)/q1 / q2 / g`.
    pub main: f64,
    /// `C m^(1/2) log m`.
    pub error: f64,
}

/// Expected count of admissible `u` and the character-sum error allowance.
pub fn main_term_and_error(p: u64, n: u64, q1: u64, q2: u64, pv_constant: f64) -> Result<MainTermEstimate> {
    check_theorem2_pre(p, n, q1, q2)?;
    if pv_constant.is_nan() || pv_constant < 0.0 {
        return Err(Error::precondition("Polya-Vinogradov constant must be non-negative"));
    }
    let g = gcd(p - 1, n);
    let x = p as f64 / q1 as f64 - 2.0 * q2 as f64;
    let modulus = p * q1 * q2;
    let m = modulus as f64;
    Ok(MainTermEstimate {
        x,
        g,
        modulus,
        main: x * ((q1 - 1) as f64 / q1 as f64) / q2 as f64 / g as f64,
        error: pv_constant * m.sqrt() * m.ln(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GcdCondition {
    pub g: u64,
    /// `p^(1/2) / (2 C Y^3 log(p Y^2)) - 1 / (C p^(1/2) log p)`.
    pub sufficient_rhs: f64,
    /// `g` is below `sufficient_rhs`.
    pub sufficient: bool,
    /// `p^(1/2) / (log p)^2`.
    pub hypothesis_rhs: f64,
    pub hypothesis: bool,
}

/// Evaluates the sufficient condition on `g = gcd(p - 1, n)` for the
/// character-constrained search to succeed, and separately the hypothesis
/// `g < p^(1/2) / (log p)^2`.
pub fn gcd_condition_holds(p: u64, n: u64, y: f64, pv_constant: f64) -> Result<GcdCondition> {
    require_prime("p", p)?;
    if p < 5 {
        return Err(Error::precondition("gcd condition needs p >= 5"));
    }
    if y.is_nan() || y < 2.0 {
        return Err(Error::precondition(format!("pair bound Y = {y} must be at least 2")));
    }
    if pv_constant.is_nan() || pv_constant <= 0.0 {
        return Err(Error::precondition("Polya-Vinogradov constant must be positive"));
    }
    let g = residue_order(p, n)?;
    let pf = p as f64;
    let sqrt_p = pf.sqrt();
    let log_p = pf.ln();
    let sufficient_rhs = sqrt_p / (2.0 * pv_constant * y.powi(3) * (pf * y * y).ln()) - 1.0 / (pv_constant * sqrt_p * log_p);
    let hypothesis_rhs = sqrt_p / (log_p * log_p);
    Ok(GcdCondition { g, sufficient_rhs, sufficient: (g as f64) < sufficient_rhs, hypothesis_rhs, hypothesis: (g as f64) < hypothesis_rhs })
}

/// Per-pair outcome, independent of the polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PairStatus {
    Witness { witness: HeilbronnWitness },
    NoDecomposition,
    NoResidue { character_scan_ran: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPlan {
    pub q1: u64,
    pub q2: u64,
    /// Positions of `q1`, `q2` in [`CriterionEngine::primes`].
    pub index: (usize, usize),
    pub status: PairStatus,
}

/// Settles every prime pair for a fixed `(p, n, Y)`.
#[derive(Clone, Debug)]
pub struct CriterionEngine {
    p: u64,
    n: u64,
    g: u64,
    primes: Vec<u64>,
    pairs: Vec<PairPlan>,
    /// Indices into `pairs` of the pairs that carry a witness, in search order.
    usable: Vec<usize>,
    fallback: InconclusiveReason,
    /// `applies_table[mask]` for rootless masks when there are at most 16 primes.
    applies_table: Option<Vec<Option<u16>>>,
}

impl CriterionEngine {
    pub fn new(p: u64, n: u64, pair_bound: u64) -> Result<Self> {
        require_prime("p", p)?;
        if p < 5 {
            return Err(Error::precondition("the criterion never applies for p = 2 or p = 3"));
        }
        if n == 0 {
            return Err(Error::precondition("degree n must be positive"));
        }
        if pair_bound < 2 {
            return Err(Error::precondition("pair bound must be at least 2"));
        }
        let g = gcd(p - 1, n);
        let primes = primes_up_to(pair_bound.min(p - 1));
        let mut pairs = Vec::new();
        for i in 0..primes.len() {
            for j in i + 1..primes.len() {
                let (q1, q2) = (primes[i], primes[j]);
                let status = Self::settle_pair(p, n, g, q1, q2)?;
                pairs.push(PairPlan { q1, q2, index: (i, j), status });
            }
        }
        let usable: Vec<usize> =
            pairs.iter().enumerate().filter(|(_, pp)| matches!(pp.status, PairStatus::Witness { .. })).map(|(k, _)| k).collect();
        let fallback = if !usable.is_empty() {
            InconclusiveReason::AllPairsHaveRoots
        } else if pairs.iter().all(|pp| pp.status == PairStatus::NoDecomposition) {
            InconclusiveReason::NoPrimePair
        } else if pairs.iter().any(|pp| pp.status == PairStatus::NoResidue { character_scan_ran: true }) {
            InconclusiveReason::NoResidueAdmissibleU
        } else {
            InconclusiveReason::PTooSmall
        };
        let mut engine = CriterionEngine { p, n, g, primes, pairs, usable, fallback, applies_table: None };
        if engine.primes.len() <= 16 {
            let table = (0..1u64 << engine.primes.len()).map(|mask| engine.first_usable_pair(mask)).collect();
            engine.applies_table = Some(table);
        }
        Ok(engine)
    }

    fn settle_pair(p: u64, n: u64, g: u64, q1: u64, q2: u64) -> Result<PairStatus> {
        if g == 1 {
            return Ok(match frobenius_decompose(p, q1, q2)? {
                Some(d) => PairStatus::Witness { witness: HeilbronnWitness::from_decomposition(d, n, g, WitnessRoute::Frobenius) },
                None => PairStatus::NoDecomposition,
            });
        }
        let mut character_scan_ran = false;
        if 4 * (q2 as u128) < (p as u128) {
            match theorem2_witness(p, n, q1, q2)? {
                Theorem2Search::Found { decomposition, scanned_u, shift_steps, rejected_after_shift } => {
                    let route = WitnessRoute::CharacterScan { scanned_u, shift_steps, rejected_after_shift };
                    return Ok(PairStatus::Witness { witness: HeilbronnWitness::from_decomposition(decomposition, n, g, route) });
                }
                Theorem2Search::NoAdmissibleU => character_scan_ran = true,
                Theorem2Search::PTooSmall => {}
            }
        }
        // Below the scan's range (or when it comes up empty) every split is tried directly.
        let (found, any) = first_decomposition_where(p, q1, q2, |d| pow_mod(d.a(), (p - 1) / g, p) == 1)?;
        Ok(match found {
            Some(d) => PairStatus::Witness { witness: HeilbronnWitness::from_decomposition(d, n, g, WitnessRoute::ResidueScan) },
            None if !any => PairStatus::NoDecomposition,
            None => PairStatus::NoResidue { character_scan_ran },
        })
    }

    fn first_usable_pair(&self, rootless_mask: u64) -> Option<u16> {
        self.usable
            .iter()
            .copied()
            .find(|&k| {
                let (i, j) = self.pairs[k].index;
                rootless_mask >> i & 1 == 1 && rootless_mask >> j & 1 == 1
            })
            .map(|k| k as u16)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u64 {
        self.n
    }

    pub fn residue_order(&self) -> u64 {
        self.g
    }

    /// Primes `q <= min(Y, p - 1)`, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn pairs(&self) -> &[PairPlan] {
        &self.pairs
    }

    pub fn has_usable_pair(&self) -> bool {
        !self.usable.is_empty()
    }

    /// Verdict given which primes leave `f` rootless (`rootless[i]` for `primes()[i]`).
    pub fn verdict_from_rootless(&self, rootless: &[bool]) -> HeilbronnVerdict {
        debug_assert_eq!(rootless.len(), self.primes.len());
        let hit = self.usable.iter().find(|&&k| {
            let (i, j) = self.pairs[k].index;
            rootless[i] && rootless[j]
        });
        match hit {
            Some(&k) => self.applies_for_pair(k),
            None => HeilbronnVerdict::Inconclusive { reason: self.fallback },
        }
    }

    fn applies_for_pair(&self, k: usize) -> HeilbronnVerdict {
        match &self.pairs[k].status {
            PairStatus::Witness { witness } => HeilbronnVerdict::Applies { witness: witness.clone() },
            _ => unreachable!("usable pairs carry witnesses"),
        }
    }

    /// Bit `i` of `rootless_mask` set iff `f` is rootless modulo `primes()[i]`.
    /// Needs at most 64 primes.
    #[inline]
    pub fn applies_for_mask(&self, rootless_mask: u64) -> bool {
        match &self.applies_table {
            Some(t) => t[rootless_mask as usize].is_some(),
            None => self.first_usable_pair(rootless_mask).is_some(),
        }
    }

    pub fn verdict(&self, f: &MonicIntPolynomial) -> Result<HeilbronnVerdict> {
        if f.degree() as u64 != self.n {
            return Err(Error::precondition(format!("polynomial has degree {}, engine expects {}", f.degree(), self.n)));
        }
        if !f.is_eisenstein_at(self.p) {
            return Err(Error::precondition(format!("polynomial {f} is not Eisenstein at p = {}", self.p)));
        }
        let rootless = self.primes.iter().map(|&q| f.has_root_mod(q).map(|r| !r)).collect::<Result<Vec<_>>>()?;
        Ok(self.verdict_from_rootless(&rootless))
    }
}

/// One-shot verdict for `f` at `p` with prime pairs bounded by `pair_bound`.
pub fn criterion_verdict(f: &MonicIntPolynomial, p: u64, pair_bound: u64) -> Result<HeilbronnVerdict> {
    require_prime("p", p)?;
    if p < 5 {
        return Err(Error::precondition("the criterion never applies for p = 2 or p = 3"));
    }
    if !f.is_eisenstein_at(p) {
        return Err(Error::precondition(format!("polynomial {f} is not Eisenstein at p = {p}")));
    }
    CriterionEngine::new(p, f.degree() as u64, pair_bound)?.verdict(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    fn poly(s: &str) -> MonicIntPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn residue_orders() {
        assert_eq!(residue_order(5, 3).unwrap(), 1);
        assert_eq!(residue_order(7, 3).unwrap(), 3);
        assert_eq!(residue_order(13, 2).unwrap(), 2);
        assert!(residue_order(2, 3).is_err());
    }

    #[test]
    fn power_residue_examples() {
        assert!(!is_nth_power_residue(2, 7, 3).unwrap());
        for a in 1..5 {
            assert!(is_nth_power_residue(a, 5, 3).unwrap());
        }
        assert!(is_nth_power_residue(3, 13, 2).unwrap());
        assert!(is_nth_power_residue(14, 7, 3).is_err());
    }

    #[test]
    fn power_residue_matches_brute_force() {
        for p in primes_up_to(97) {
            for n in 1..=10 {
                let cubes = oracle::brute_power_residues(p, n);
                let mut count = 0;
                for a in 1..p {
                    let fast = is_nth_power_residue(a, p, n).unwrap();
                    assert_eq!(fast, cubes.contains(&a), "a={a} p={p} n={n}");
                    count += fast as u64;
                }
                if p > 2 {
                    assert_eq!(count, (p - 1) / gcd(p - 1, n));
                }
            }
        }
    }

    #[test]
    fn verdict_examples() {
        let v = criterion_verdict(&poly("5,5,0"), 5, 3).unwrap();
        let HeilbronnVerdict::Applies { witness } = v else { panic!("expected Applies") };
        assert_eq!((witness.q1, witness.q2, witness.u, witness.v, witness.a, witness.b, witness.g), (2, 3, 1, 1, 2, 3, 1));
        witness.verify(&poly("5,5,0")).unwrap();

        let v = criterion_verdict(&poly("5,5,5"), 5, 3).unwrap();
        assert_eq!(v, HeilbronnVerdict::Inconclusive { reason: InconclusiveReason::AllPairsHaveRoots });

        let v = criterion_verdict(&poly("7,7,0"), 7, 3).unwrap();
        assert_eq!(v, HeilbronnVerdict::Inconclusive { reason: InconclusiveReason::NoPrimePair });
    }

    #[test]
    fn verdict_rejections() {
        assert!(criterion_verdict(&poly("25,5,0"), 5, 3).is_err());
        assert!(criterion_verdict(&poly("3,3,3"), 3, 3).is_err());
        assert!(CriterionEngine::new(10, 3, 20).is_err());
        assert!(CriterionEngine::new(11, 3, 1).is_err());
    }

    #[test]
    fn p7_cubic_pairs() {
        // g = gcd(6, 3) = 3: 7 = 2 + 5 has a = 2, not a cube mod 7.
        let e = CriterionEngine::new(7, 3, 5).unwrap();
        assert!(!e.has_usable_pair());
        assert_eq!(e.verdict(&poly("7,7,0")).unwrap(), HeilbronnVerdict::Inconclusive { reason: InconclusiveReason::PTooSmall });
        // For quartics g = 2, and 2 = 3^2 is a square mod 7.
        let e = CriterionEngine::new(7, 4, 5).unwrap();
        assert!(e.has_usable_pair());
        let mut applied = 0;
        for a0 in [-42i64, -35, -28, -21, -14, -7, 7, 14, 21, 28, 35, 42] {
            for a1 in [-14i64, -7, 0, 7, 14] {
                let f = MonicIntPolynomial::from_i64s(&[a0, a1, 0, 7]).unwrap();
                if let HeilbronnVerdict::Applies { witness } = e.verdict(&f).unwrap() {
                    assert_eq!((witness.q1, witness.q2, witness.a, witness.b), (2, 5, 2, 5));
                    witness.verify(&f).unwrap();
                    applied += 1;
                }
            }
        }
        assert!(applied > 0);
    }

    #[test]
    fn theorem2_examples() {
        assert_eq!(theorem2_witness(13, 2, 2, 3).unwrap(), Theorem2Search::PTooSmall);
        // 5 = 2 + 3, but q2 = 3 is not below p/4.
        assert!(theorem2_witness(5, 3, 2, 3).is_err());
        match theorem2_witness(41, 3, 2, 3).unwrap() {
            Theorem2Search::Found { decomposition, scanned_u, shift_steps, .. } => {
                assert_eq!((decomposition.u, decomposition.v, scanned_u, shift_steps), (1, 13, 1, 0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn theorem2_p101() {
        let expected = oracle::brute_admissible_us(101, 2, 2, 3);
        assert!(!expected.is_empty());
        match theorem2_witness(101, 2, 2, 3).unwrap() {
            Theorem2Search::Found { scanned_u, decomposition, .. } => {
                assert_eq!(scanned_u, expected[0]);
                decomposition.validate().unwrap();
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(count_admissible(101, 2, 2, 3).unwrap(), expected.len() as u64);
        assert_eq!(count_admissible(101, 3, 2, 3).unwrap(), 8);
        assert_eq!(oracle::brute_admissible_us(101, 3, 2, 3), vec![1, 7, 13, 19, 25, 31, 37, 43]);
        assert_eq!(count_admissible(13, 2, 2, 3).unwrap(), 0);
    }

    #[test]
    fn theorem2_preconditions() {
        assert!(theorem2_witness(11, 2, 2, 3).is_err());
        assert!(theorem2_witness(21, 2, 2, 3).is_err());
        assert!(count_admissible(101, 0, 2, 3).is_err());
    }

    #[test]
    fn main_terms() {
        let e = main_term_and_error(101, 3, 2, 3, 1.0).unwrap();
        assert!((e.main - 44.5 / 6.0).abs() < 1e-12);
        let e = main_term_and_error(101, 2, 2, 3, 1.0).unwrap();
        assert!((e.main - 44.5 / 12.0).abs() < 1e-12);
        assert!((e.error - (606f64).sqrt() * (606f64).ln()).abs() < 1e-9);
        assert_eq!(main_term_and_error(101, 2, 2, 3, 0.0).unwrap().error, 0.0);
    }

    #[test]
    fn gcd_conditions() {
        let big = gcd_condition_holds(1_000_000_000_000_000_003, 1, 3.0, 1.0).unwrap();
        assert_eq!(big.g, 1);
        assert!(big.sufficient && big.hypothesis);
        let c = gcd_condition_holds(101, 2, 3.0, 1.0).unwrap();
        let pf = 101f64;
        let rhs = pf.sqrt() / (2.0 * 27.0 * (pf * 9.0).ln()) - 1.0 / (pf.sqrt() * pf.ln());
        assert!((c.sufficient_rhs - rhs).abs() < 1e-12);
        assert_eq!(c.sufficient, 2.0 < rhs);
        let c = gcd_condition_holds(13, 12, 3.0, 1.0).unwrap();
        assert!(!c.sufficient && !c.hypothesis);
        assert!(gcd_condition_holds(13, 12, 1.0, 1.0).is_err());
    }

    #[test]
    fn main_term_tracks_count() {
        for p in primes_up_to(10_000).into_iter().filter(|&p| p > 50) {
            for n in [2u64, 3] {
                for (q1, q2) in [(2u64, 3u64), (2, 5), (3, 5)] {
                    let e = main_term_and_error(p, n, q1, q2, 1.0).unwrap();
                    let c = count_admissible(p, n, q1, q2).unwrap() as f64;
                    assert!((c - e.main).abs() <= e.error, "p={p} n={n} q=({q1},{q2})");
                }
            }
        }
    }

    #[test]
    fn engine_mask_agrees_with_verdict() {
        for (p, n, y) in [(5u64, 3u64, 3u64), (7, 3, 5), (7, 4, 20), (13, 3, 20), (101, 5, 20), (11, 2, 20)] {
            let e = CriterionEngine::new(p, n, y).unwrap();
            for mask in 0..1u64 << e.primes().len() {
                let rootless: Vec<bool> = (0..e.primes().len()).map(|i| mask >> i & 1 == 1).collect();
                assert_eq!(e.applies_for_mask(mask), e.verdict_from_rootless(&rootless).applies());
            }
        }
    }

    proptest! {
        #[test]
        fn applies_witnesses_verify(p in prop::sample::select(vec![5u64, 7, 11, 13, 101]),
                                    n in 2u64..6,
                                    raw in prop::collection::vec(-40i64..40, 6)) {
            let p_i = p as i64;
            let mut coeffs: Vec<i64> = raw[..n as usize].iter().map(|c| c * p_i).collect();
            if coeffs[0] % (p_i * p_i) == 0 {
                coeffs[0] += p_i;
            }
            let f = MonicIntPolynomial::from_i64s(&coeffs).unwrap();
            prop_assume!(f.is_eisenstein_at(p));
            if let HeilbronnVerdict::Applies { witness } = criterion_verdict(&f, p, 20).unwrap() {
                prop_assert!(witness.verify(&f).is_ok());
                prop_assert!(oracle::independent_witness_check(&coeffs, &witness));
            }
        }

        #[test]
        fn theorem2_found_has_admissible_pre_shift_u(p in prop::sample::select(primes_up_to(3000).into_iter().filter(|&p| p > 60).collect::<Vec<_>>()),
                                                     n in 2u64..7,
                                                     pair in prop::sample::select(vec![(2u64, 3u64), (2, 5), (3, 5), (2, 7), (3, 7)])) {
            let (q1, q2) = pair;
            let count = count_admissible(p, n, q1, q2).unwrap();
            let found = theorem2_witness(p, n, q1, q2).unwrap();
            if let Theorem2Search::Found { decomposition, scanned_u, .. } = &found {
                decomposition.validate().unwrap();
                let g = gcd(p - 1, n);
                prop_assert!(pow_mod(scanned_u * q1, (p - 1) / g, p) == 1);
                prop_assert!(pow_mod(decomposition.a(), (p - 1) / g, p) == 1);
                prop_assert!(count >= 1);
            } else {
                // Only possible if every admissible u lost the residue property after the shift.
                prop_assert!(count == 0 || matches!(found, Theorem2Search::NoAdmissibleU));
            }
        }
    }
}
