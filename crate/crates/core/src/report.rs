//! Serializable records emitted by the CLI.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::criterion::{self, GcdCondition, HeilbronnVerdict, Theorem2Search};
use crate::decomposition::{frobenius_decompose, guarantee_threshold};
use crate::density::{self, DensityBounds};
use crate::rational::big_decimal;
use crate::{ExactRational, MonicIntPolynomial, RationalInterval, Result};

/// Wraps a report with the command name, crate version and run configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub command: String,
    pub version: String,
    pub config: RunConfig,
    #[serde(flatten)]
    pub report: T,
}

impl<T> Envelope<T> {
    pub fn new(command: &str, config: &RunConfig, report: T) -> Self {
        Envelope { command: command.to_string(), version: crate::VERSION.to_string(), config: config.clone(), report }
    }
}

/// Truncation bound for the Eisenstein density enclosure in density reports.
pub const DUBICKAS_BOUND: u64 = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub p: u64,
    pub n: u32,
    #[serde(rename = "A", with = "big_decimal")]
    pub rootless_count: BigInt,
    #[serde(rename = "C")]
    pub rootless_density: ExactRational,
    #[serde(rename = "E")]
    pub eisenstein_density: ExactRational,
    /// Absent for `n < 2`.
    pub bounds: Option<DensityBounds>,
    pub epsilon: ExactRational,
    pub epsilon_approx: f64,
    /// Absent for `p < 5`.
    pub epsilon_hat: Option<ExactRational>,
    pub epsilon_hat_approx: Option<f64>,
    /// Degree-aware diagnostic companion of `epsilon`.
    pub epsilon_degree_aware: Option<ExactRational>,
    /// Enclosure of the density of Eisenstein polynomials among all monic
    /// degree-`n` polynomials, primes truncated at [`DUBICKAS_BOUND`].
    pub eisenstein_overall: Option<RationalInterval>,
}

pub fn density_report(p: u64, n: u32) -> Result<DensityReport> {
    let epsilon = density::epsilon(p)?;
    let epsilon_hat = if p >= 5 { Some(density::epsilon_hat(p, None)?) } else { None };
    Ok(DensityReport {
        p,
        n,
        rootless_count: density::count_rootless(p, n)?,
        rootless_density: density::rootless_density(p, n)?,
        eisenstein_density: density::eisenstein_density(p, n)?,
        bounds: if n >= 2 { Some(density::density_bounds(p, n)?) } else { None },
        epsilon_approx: epsilon.to_f64(),
        epsilon,
        epsilon_hat_approx: epsilon_hat.as_ref().map(ExactRational::to_f64),
        epsilon_hat,
        epsilon_degree_aware: if n >= 2 { Some(density::epsilon_degree_aware(p, n)?) } else { None },
        eisenstein_overall: if n >= 2 { Some(density::dubickas_density(n, DUBICKAS_BOUND)?) } else { None },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub p: u64,
    pub q1: u64,
    pub q2: u64,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub u: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub v: Option<u64>,
    /// `q1^2 q2^2` as a decimal string.
    pub guarantee_threshold: String,
}

pub fn decompose_report(p: u64, q1: u64, q2: u64) -> Result<DecomposeReport> {
    let d = frobenius_decompose(p, q1, q2)?;
    Ok(DecomposeReport {
        p,
        q1,
        q2,
        found: d.is_some(),
        u: d.map(|d| d.u),
        v: d.map(|d| d.v),
        guarantee_threshold: guarantee_threshold(q1, q2)?.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub poly: MonicIntPolynomial,
    pub p: u64,
    pub n: usize,
    pub pair_bound: u64,
    #[serde(flatten)]
    pub verdict: HeilbronnVerdict,
    pub assumption: String,
}

pub fn check_report(f: &MonicIntPolynomial, p: u64, pair_bound: u64) -> Result<CheckReport> {
    let verdict = criterion::criterion_verdict(f, p, pair_bound)?;
    if let HeilbronnVerdict::Applies { witness } = &verdict {
        witness.verify(f)?;
    }
    Ok(CheckReport { poly: f.clone(), p, n: f.degree(), pair_bound, verdict, assumption: criterion::NON_NORM_ASSUMPTION.to_string() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub p: u64,
    pub n: u64,
    pub q1: u64,
    pub q2: u64,
    pub g: u64,
    /// `X = p/q1 - 2 q2`.
    pub x: f64,
    pub count: u64,
    pub main: f64,
    pub error: f64,
    pub within_error: bool,
    pub witness: Theorem2Search,
    /// Evaluated with `Y` set to the pair bound.
    pub gcd_condition: GcdCondition,
}

pub fn theorem2_report(p: u64, n: u64, q1: u64, q2: u64, config: &RunConfig) -> Result<Theorem2Report> {
    let estimate = criterion::main_term_and_error(p, n, q1, q2, config.pv_constant)?;
    let count = criterion::count_admissible(p, n, q1, q2)?;
    Ok(Theorem2Report {
        p,
        n,
        q1,
        q2,
        g: estimate.g,
        x: estimate.x,
        count,
        main: estimate.main,
        error: estimate.error,
        within_error: (count as f64 - estimate.main).abs() <= estimate.error,
        witness: criterion::theorem2_witness(p, n, q1, q2)?,
        gcd_condition: criterion::gcd_condition_holds(p, n, config.pair_bound as f64, config.pv_constant)?,
    })
}
