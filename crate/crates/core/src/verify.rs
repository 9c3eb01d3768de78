//! The `verify` suite: every worked example with a brute-force oracle,
//! recomputed and compared.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, primes_up_to};
use crate::criterion::{self, HeilbronnVerdict, InconclusiveReason, Theorem2Search};
use crate::decomposition::{adjust_for_criterion, frobenius_decompose};
use crate::density;
use crate::oracle;
use crate::survey::{self, BoxKind, LocalSpec, SurveyParams};
use crate::{ExactRational, MonicIntPolynomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyItem {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: usize,
    pub failed: usize,
    pub items: Vec<VerifyItem>,
}

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(got: T, want: T) -> Result<(), String> {
    ensure(got == want, || format!("got {got:?}, expected {want:?}"))
}

fn poly(s: &str) -> MonicIntPolynomial {
    s.parse().expect("literal polynomial")
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn roots_mod_small_primes() -> Result<(), String> {
    eq(e(poly("5,5,0").has_root_mod(2))?, false)?;
    eq(e(poly("5,5,0").has_root_mod(3))?, false)?;
    eq(e(poly("5,5,5").has_root_mod(2))?, true)
}

fn rootless_counts_vs_enumeration() -> Result<(), String> {
    for p in [2u64, 3, 5, 7] {
        for n in 1..=6 {
            eq(e(density::count_rootless(p, n))?, BigInt::from(oracle::brute_rootless_count(p, n)))?;
        }
    }
    Ok(())
}

fn eisenstein_densities() -> Result<(), String> {
    for (p, n, num, den) in [(5u64, 3u32, 4i64, 625i64), (2, 2, 1, 8), (3, 1, 2, 9)] {
        let d = e(density::eisenstein_density(p, n))?;
        eq(d.clone(), ExactRational::new(num, den))?;
        eq(d, oracle::brute_eisenstein_density(p, n))?;
    }
    Ok(())
}

fn dubickas_truncations() -> Result<(), String> {
    eq(e(density::dubickas_density(2, 2))?.lo, ExactRational::new(1, 8))?;
    eq(e(density::dubickas_density(2, 3))?.lo, ExactRational::new(41, 216))
}

fn density_bound_values() -> Result<(), String> {
    let b = e(density::density_bounds(7, 2))?;
    eq((b.lo, b.hi), (ExactRational::new(16, 49), ExactRational::new(3, 7)))?;
    let b = e(density::density_bounds(5, 2))?;
    eq((b.lo, b.hi), (ExactRational::new(8, 25), ExactRational::new(2, 5)))
}

fn epsilon_values() -> Result<(), String> {
    eq(e(density::epsilon(17))?, ExactRational::new(3, 2))?;
    eq(e(density::epsilon(100_000_007))?, ExactRational::from_integer(26) * ExactRational::new(3, 4).pow(25))?;
    eq(e(density::epsilon_hat(101, Some(10.0)))?, ExactRational::new(405, 256))
}

fn decompositions_vs_double_loop() -> Result<(), String> {
    for p in primes_up_to(600).into_iter().filter(|&p| p > 3) {
        let got = e(frobenius_decompose(p, 2, 3))?.map(|d| (d.u, d.v));
        eq(got, oracle::brute_min_decomposition(p, 2, 3))?;
    }
    eq(e(frobenius_decompose(37, 2, 3))?.map(|d| (d.u, d.v)), Some((11, 5)))
}

fn adjustment_scan() -> Result<(), String> {
    let mut seen = 0;
    for p in primes_up_to(500).into_iter().filter(|&p| p > 5) {
        for u in (1..p / 2).filter(|u| u % 2 == 1) {
            if (p - 2 * u) % 3 != 0 || (u + 6) * 2 >= p {
                continue;
            }
            let v = (p - 2 * u) / 3;
            if v % 3 != 0 {
                continue;
            }
            let (d, _) = e(adjust_for_criterion(p, 2, 3, u, v))?;
            e(d.validate())?;
            seen += 1;
        }
    }
    ensure(seen > 0, || "no q2 | v cases found".into())
}

fn power_residues_vs_table() -> Result<(), String> {
    eq(e(criterion::is_nth_power_residue(2, 7, 3))?, false)?;
    eq(e(criterion::is_nth_power_residue(3, 13, 2))?, true)?;
    for p in primes_up_to(97) {
        for n in 1..=10 {
            let table = oracle::brute_power_residues(p, n);
            for a in 1..p {
                eq(e(criterion::is_nth_power_residue(a, p, n))?, table.contains(&a))?;
            }
            if p > 2 {
                eq(table.len() as u64, (p - 1) / gcd(p - 1, n))?;
            }
        }
    }
    Ok(())
}

fn verdict_examples() -> Result<(), String> {
    match e(criterion::criterion_verdict(&poly("5,5,0"), 5, 3))? {
        HeilbronnVerdict::Applies { witness } => {
            eq((witness.q1, witness.q2, witness.u, witness.v, witness.a, witness.b, witness.g), (2, 3, 1, 1, 2, 3, 1))?;
            ensure(oracle::independent_witness_check(&[5, 5, 0], &witness), || "witness failed oracle".into())?;
        }
        other => return Err(format!("expected applies, got {other:?}")),
    }
    eq(
        e(criterion::criterion_verdict(&poly("5,5,5"), 5, 3))?,
        HeilbronnVerdict::Inconclusive { reason: InconclusiveReason::AllPairsHaveRoots },
    )?;
    eq(e(criterion::criterion_verdict(&poly("7,7,0"), 7, 3))?, HeilbronnVerdict::Inconclusive { reason: InconclusiveReason::NoPrimePair })
}

fn theorem2_scan_vs_oracle() -> Result<(), String> {
    let us = oracle::brute_admissible_us(101, 2, 2, 3);
    eq(e(criterion::count_admissible(101, 2, 2, 3))?, us.len() as u64)?;
    match e(criterion::theorem2_witness(101, 2, 2, 3))? {
        Theorem2Search::Found { scanned_u, .. } => eq(Some(scanned_u), us.first().copied())?,
        other => return Err(format!("expected a witness, got {other:?}")),
    }
    eq(e(criterion::count_admissible(101, 3, 2, 3))?, 8)?;
    eq(e(criterion::theorem2_witness(13, 2, 2, 3))?, Theorem2Search::PTooSmall)
}

fn theorem2_main_terms() -> Result<(), String> {
    let m = e(criterion::main_term_and_error(101, 3, 2, 3, 1.0))?;
    ensure((m.main - 7.416_666_666_666_667).abs() < 1e-9, || format!("main {}", m.main))?;
    let m = e(criterion::main_term_and_error(101, 2, 2, 3, 1.0))?;
    ensure((m.main - 3.708_333_333_333_333_5).abs() < 1e-9, || format!("main {}", m.main))
}

fn aligned_counts() -> Result<(), String> {
    let with = e(LocalSpec::new(5, 3, [2, 3], []))?;
    let c = e(survey::exact_count_aligned(&with, 1))?;
    eq((c.formula.clone(), c.enumerated.clone()), (BigInt::from(12_800), Some(BigInt::from(12_800))))?;
    let none = e(LocalSpec::new(5, 3, [], []))?;
    let c = e(survey::exact_count_aligned(&none, 1))?;
    eq((c.formula, c.enumerated), (BigInt::from(800), Some(BigInt::from(800))))?;
    let c = e(survey::exact_count_aligned(&none, 6))?;
    eq((c.formula, c.enumerated), (BigInt::from(172_800), Some(BigInt::from(172_800))))?;
    let rooted = e(LocalSpec::new(5, 3, [], [2]))?;
    eq(e(survey::main_term(&rooted, 150))?, ExactRational::from_integer(129_600))
}

fn local_density_factorization() -> Result<(), String> {
    for (p, n, rootless, rooted) in [(5u64, 2u32, vec![2u64], vec![]), (5, 2, vec![2], vec![3]), (7, 2, vec![], vec![2])] {
        let s = e(LocalSpec::new(p, n, rootless.clone(), rooted.clone()))?;
        eq(e(s.density())?, oracle::brute_local_density(p, n, &rootless, &rooted))?;
    }
    Ok(())
}

fn exhaustive_survey_aligned() -> Result<(), String> {
    let params = SurveyParams { p: 5, n: 3, x: 150, pair_bound: 3, box_kind: BoxKind::HalfOpen };
    let r = e(survey::exhaustive_survey(&params, u128::MAX))?;
    eq((r.total_eisenstein, r.applies_count), (172_800, 12_800))?;
    eq(r.delta_empirical, ExactRational::new(2, 27))
}

fn exhaustive_survey_p7() -> Result<(), String> {
    // g = gcd(6, 3) = 3 and 7 = 2 + 5 has a = 2, not a cube: no witness at all.
    let params = SurveyParams { p: 7, n: 3, x: 1470, pair_bound: 5, box_kind: BoxKind::HalfOpen };
    let r = e(survey::exhaustive_survey(&params, u128::MAX))?;
    eq(r.applies_count, 0)?;
    eq(r.main_term_density, Some(ExactRational::zero()))
}

fn exhaustive_survey_unaligned() -> Result<(), String> {
    let params = SurveyParams { p: 5, n: 3, x: 100, pair_bound: 3, box_kind: BoxKind::HalfOpen };
    let r = e(survey::exhaustive_survey(&params, u128::MAX))?;
    ensure((r.delta_approx - 2.0 / 27.0).abs() <= 0.01, || format!("delta {}", r.delta_approx))
}

fn montecarlo_near_two_27ths() -> Result<(), String> {
    let params = SurveyParams { p: 5, n: 3, x: 1_000_000, pair_bound: 3, box_kind: BoxKind::HalfOpen };
    let r = e(survey::montecarlo_survey(&params, 42, 100_000))?;
    let se = r.std_error.unwrap_or(0.0);
    ensure((r.delta_approx - 2.0 / 27.0).abs() <= 4.0 * se, || format!("estimate {} se {se}", r.delta_approx))?;
    let again = e(survey::montecarlo_survey(&params, 42, 100_000))?;
    eq(again.applies_count, r.applies_count)
}

fn lower_bound_values() -> Result<(), String> {
    eq(e(survey::lower_bound_report(5, 3))?.bound_t1, Some(ExactRational::new(2, 27)))?;
    let r = e(survey::lower_bound_report(100_000_007, 3))?;
    ensure(r.bound_t1_approx.is_some_and(|b| (b - 0.98047).abs() < 5e-5), || format!("{:?}", r.bound_t1_approx))?;
    eq(e(survey::lower_bound_report(13, 12))?.t2_hypothesis, false)
}

const CHECKS: &[(&str, Check)] = &[
    ("poly_core.has_root_mod examples", roots_mod_small_primes),
    ("local_density.count_rootless vs enumeration (p<=7, n<=6)", rootless_counts_vs_enumeration),
    ("local_density.eisenstein_density vs residues mod p^2", eisenstein_densities),
    ("local_density.dubickas_density truncations", dubickas_truncations),
    ("local_density.density_bounds values", density_bound_values),
    ("local_density.epsilon values", epsilon_values),
    ("decomposition.frobenius_decompose vs double loop (p<600)", decompositions_vs_double_loop),
    ("decomposition.adjust_for_criterion repairs (p<=500)", adjustment_scan),
    ("heilbronn.is_nth_power_residue vs power table (p<=97)", power_residues_vs_table),
    ("heilbronn.criterion_verdict examples", verdict_examples),
    ("heilbronn.theorem2_witness/count_admissible vs scan", theorem2_scan_vs_oracle),
    ("heilbronn.main_term_and_error values", theorem2_main_terms),
    ("survey.exact_count_aligned and main_term", aligned_counts),
    ("survey local densities factor over primes", local_density_factorization),
    ("survey.exhaustive_survey p=5 n=3 X=150", exhaustive_survey_aligned),
    ("survey.exhaustive_survey p=5 n=3 X=100", exhaustive_survey_unaligned),
    ("survey.exhaustive_survey p=7 n=3 X=1470", exhaustive_survey_p7),
    ("survey.montecarlo_survey p=5 n=3 seed=42", montecarlo_near_two_27ths),
    ("survey.lower_bound_report values", lower_bound_values),
];

pub fn run_verification() -> VerifyReport {
    let items: Vec<VerifyItem> = CHECKS
        .iter()
        .map(|(name, check)| {
            let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
            VerifyItem { name: name.to_string(), passed: outcome.is_ok(), detail: outcome.err() }
        })
        .collect();
    let passed = items.iter().filter(|i| i.passed).count();
    VerifyReport { passed, failed: items.len() - passed, items }
}
