//! Fibre-count polynomials `Π_{μ;ν}^{ρ;σ}(t)`.
//!
//! Fibre counts over the representative of `(ρ;σ)` are measured at several
//! finite fields, interpolated exactly over `Q`, and then checked at held-out
//! fields (including non-prime ones), at random conjugates and for
//! nonnegative integer coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartitions::{as_label, enumerate_bipartitions, Bipartition};
use crate::enhanced_cone::{classify_all_by_jordan_type, orbit_dimension, representative, DEFAULT_CENSUS_BUDGET};
use crate::error::{Error, Result};
use crate::ff_linalg::{is_prime, Field, MAX_ORDER};
use crate::resolution::{
    conjugate_counts, fibre_points, job_seed, resolution_datum, total_space_count, total_space_dimension,
    DEFAULT_NODE_BUDGET,
};

/// Polynomial with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPolynomial(Vec<i64>);

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, t: i64) -> i128 {
        self.0.iter().rev().fold(0i128, |acc, &c| acc * t as i128 + c as i128)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let a = c.unsigned_abs();
            let coef = if a == 1 && k > 0 { String::new() } else { a.to_string() };
            let var = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            write!(f, "{sign}{coef}{var}")?;
            first = false;
        }
        Ok(())
    }
}

/// The unique polynomial of degree `< samples.len()` through the given `(q, count)` points.
///
/// Interpolation runs over exact rationals; a non-integral coefficient is an error.
pub fn interpolate(samples: &[(u64, u64)]) -> Result<IntPolynomial> {
    if samples.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, available: 0 });
    }
    for (i, (q, _)) in samples.iter().enumerate() {
        if samples[..i].iter().any(|(p, _)| p == q) {
            return Err(Error::DuplicateSample(*q));
        }
    }
    let xs: Vec<BigRational> = samples.iter().map(|&(q, _)| BigRational::from_integer(BigInt::from(q))).collect();
    // Newton divided differences, in place.
    let mut a: Vec<BigRational> = samples.iter().map(|&(_, c)| BigRational::from_integer(BigInt::from(c))).collect();
    let k = a.len();
    for level in 1..k {
        for i in (level..k).rev() {
            a[i] = (&a[i] - &a[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut poly: Vec<BigRational> = vec![a[k - 1].clone()];
    for i in (0..k - 1).rev() {
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * &xs[i];
        }
        next[0] += &a[i];
        poly = next;
    }
    let coeffs = poly
        .into_iter()
        .enumerate()
        .map(|(degree, c)| {
            if !c.is_integer() {
                return Err(Error::NonIntegral { degree, value: c.to_string() });
            }
            c.to_integer().to_i64().ok_or(Error::Overflow("polynomial coefficient"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPolynomial::new(coeffs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Candidate sample fields, used in order.
    pub fit_primes: Vec<u64>,
    /// Orders of held-out fields.
    pub holdout: Vec<u64>,
    pub seed: u64,
    /// Random conjugates checked at every field.
    pub conjugates: usize,
    pub node_budget: u64,
    /// Append further primes when `fit_primes` is too short for the degree bound.
    pub extend_primes: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            fit_primes: vec![2, 3, 5, 7, 11, 13],
            holdout: vec![17, 4, 9],
            seed: 0xC0FFEE,
            conjugates: 3,
            node_budget: DEFAULT_NODE_BUDGET,
            extend_primes: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiCertificate {
    pub degree_bound: usize,
    pub fit_q: Vec<u64>,
    pub holdout_q: Vec<u64>,
    /// Measured `(q, count)` pairs, fit fields first.
    pub samples: Vec<(u64, u64)>,
    pub seed: u64,
    pub fit_exact: bool,
    pub holdout_exact: bool,
    pub natural_coefficients: bool,
    pub degree_within_bound: bool,
    pub orbit_constant: bool,
    /// `Π(1)`; recorded only.
    pub value_at_one: i64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiPolynomial {
    #[serde(with = "as_label")]
    pub source: Bipartition,
    #[serde(with = "as_label")]
    pub target: Bipartition,
    pub coeffs: IntPolynomial,
    pub certificate: PiCertificate,
}

impl PiPolynomial {
    pub fn ensure_certified(&self) -> Result<&Self> {
        if self.certificate.passed {
            Ok(self)
        } else {
            Err(Error::Certificate(format!("{} over {}", self.source, self.target)))
        }
    }
}

/// `min(dim Z − dim O_target, dim of the flag variety)`.
pub fn pi_degree_bound(source: &Bipartition, target: &Bipartition) -> usize {
    let d = resolution_datum(source);
    total_space_dimension(&d)
        .saturating_sub(orbit_dimension(target))
        .min(d.flag_variety_dimension())
}

fn next_primes(after: u64, skip: &[u64], count: usize) -> Vec<u64> {
    (after + 1..=MAX_ORDER as u64)
        .filter(|&p| is_prime(p) && !skip.contains(&p))
        .take(count)
        .collect()
}

struct Measurement {
    count: u64,
    conjugates_agree: bool,
}

fn measure(source: &Bipartition, target: &Bipartition, q: u64, cfg: &FitConfig) -> Result<Measurement> {
    let f = Field::of_order(q)?;
    let datum = resolution_datum(source);
    let (pt, _) = representative(target, &f);
    let count = fibre_points(&datum, &pt, false, cfg.node_budget)?.count;
    let seed = job_seed(cfg.seed, &format!("pi/{source}/{target}/{q}"));
    let conj = conjugate_counts(&datum, &pt, cfg.conjugates, seed, cfg.node_budget)?;
    Ok(Measurement { count, conjugates_agree: conj.iter().all(|&c| c == count) })
}

/// Fits and certifies `Π_{source}^{target}`.
///
/// Targets outside the closure of the source yield the zero polynomial.
pub fn fit_pi(source: &Bipartition, target: &Bipartition, cfg: &FitConfig) -> Result<PiPolynomial> {
    if source.n() != target.n() {
        return Err(Error::SizeMismatch { left: source.n(), right: target.n() });
    }
    let bound = pi_degree_bound(source, target);
    let needed = bound + 1;
    let mut fit_q: Vec<u64> = cfg.fit_primes.iter().copied().take(needed).collect();
    if fit_q.len() < needed && cfg.extend_primes {
        let mut skip = cfg.fit_primes.clone();
        skip.extend(&cfg.holdout);
        let start = cfg.fit_primes.iter().copied().max().unwrap_or(1);
        fit_q.extend(next_primes(start, &skip, needed - fit_q.len()));
    }
    if fit_q.len() < needed {
        return Err(Error::InsufficientSamples { needed, available: fit_q.len() });
    }
    let fit: Vec<Measurement> = fit_q.iter().map(|&q| measure(source, target, q, cfg)).collect::<Result<_>>()?;
    let hold: Vec<Measurement> = cfg.holdout.iter().map(|&q| measure(source, target, q, cfg)).collect::<Result<_>>()?;
    let fit_samples: Vec<(u64, u64)> = fit_q.iter().zip(&fit).map(|(&q, m)| (q, m.count)).collect();
    let poly = interpolate(&fit_samples)?;
    let matches = |q: u64, m: &Measurement| poly.eval(q as i64) == m.count as i128;
    let fit_exact = fit_q.iter().zip(&fit).all(|(&q, m)| matches(q, m));
    let holdout_exact = cfg.holdout.iter().zip(&hold).all(|(&q, m)| matches(q, m));
    let natural_coefficients = poly.coeffs().iter().all(|&c| c >= 0);
    let degree_within_bound = poly.degree().map_or(true, |d| d <= bound);
    let orbit_constant = fit.iter().chain(&hold).all(|m| m.conjugates_agree);
    let value_at_one = poly.eval(1).to_i64().ok_or(Error::Overflow("value at one"))?;
    let mut samples = fit_samples;
    samples.extend(cfg.holdout.iter().zip(&hold).map(|(&q, m)| (q, m.count)));
    let certificate = PiCertificate {
        degree_bound: bound,
        fit_q,
        holdout_q: cfg.holdout.clone(),
        samples,
        seed: cfg.seed,
        fit_exact,
        holdout_exact,
        natural_coefficients,
        degree_within_bound,
        orbit_constant,
        value_at_one,
        passed: fit_exact && holdout_exact && natural_coefficients && degree_within_bound && orbit_constant,
    };
    Ok(PiPolynomial { source: source.clone(), target: target.clone(), coeffs: poly, certificate })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiTable {
    pub n: usize,
    pub config: FitConfig,
    pub entries: Vec<PiPolynomial>,
    pub passed: bool,
}

impl PiTable {
    /// `Π_{source}^{target}`, zero when the pair is absent.
    pub fn get(&self, source: &Bipartition, target: &Bipartition) -> IntPolynomial {
        self.entries
            .iter()
            .find(|e| &e.source == source && &e.target == target)
            .map(|e| e.coeffs.clone())
            .unwrap_or_default()
    }

    /// One row per entry: source, target, coefficients (`;`-separated), degree bound, `Π(1)`, passed.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(["source", "target", "coeffs", "degree_bound", "value_at_one", "passed"]).map_err(io)?;
        for e in &self.entries {
            let coeffs: Vec<String> = e.coeffs.coeffs().iter().map(ToString::to_string).collect();
            w.write_record([
                e.source.to_string(),
                e.target.to_string(),
                coeffs.join(";"),
                e.certificate.degree_bound.to_string(),
                e.certificate.value_at_one.to_string(),
                e.certificate.passed.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// All `(source, target)` pairs of `Q_n` with `target ≤ source` in the closure order.
pub fn closure_pairs(n: usize) -> Vec<(Bipartition, Bipartition)> {
    let all = enumerate_bipartitions(n);
    let mut pairs = Vec::new();
    for s in &all {
        for t in &all {
            if t.closure_leq(s).unwrap_or(false) {
                pairs.push((s.clone(), t.clone()));
            }
        }
    }
    pairs
}

pub fn pi_table(n: usize, cfg: &FitConfig) -> Result<PiTable> {
    let entries: Vec<PiPolynomial> = closure_pairs(n)
        .par_iter()
        .map(|(s, t)| fit_pi(s, t, cfg))
        .collect::<Result<_>>()?;
    let passed = entries.iter().all(|e| e.certificate.passed);
    Ok(PiTable { n, config: cfg.clone(), entries, passed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    #[serde(with = "as_label")]
    pub source: Bipartition,
    #[serde(with = "as_label")]
    pub target: Bipartition,
    pub primes_a: Vec<u64>,
    pub primes_b: Vec<u64>,
    pub fit_a: IntPolynomial,
    pub fit_b: IntPolynomial,
    pub identical: bool,
}

/// Fits from two prime sets (no holdout, no extension) and compares the results.
pub fn field_independence_check(
    source: &Bipartition,
    target: &Bipartition,
    primes_a: &[u64],
    primes_b: &[u64],
    cfg: &FitConfig,
) -> Result<IndependenceReport> {
    let fit_with = |primes: &[u64]| {
        let c = FitConfig { fit_primes: primes.to_vec(), holdout: Vec::new(), extend_primes: false, ..cfg.clone() };
        fit_pi(source, target, &c)
    };
    let a = fit_with(primes_a)?;
    let b = fit_with(primes_b)?;
    Ok(IndependenceReport {
        source: source.clone(),
        target: target.clone(),
        primes_a: a.certificate.fit_q,
        primes_b: b.certificate.fit_q,
        identical: a.coeffs == b.coeffs,
        fit_a: a.coeffs,
        fit_b: b.coeffs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalIdentity {
    #[serde(with = "as_label")]
    pub source: Bipartition,
    pub q: u64,
    pub stratified_sum: u128,
    pub total_space_count: u64,
    pub holds: bool,
}

/// `Σ_target census(target) · Π(q) = |Z(F_q)|`, with `Π` read from `table`.
pub fn global_identity_check(source: &Bipartition, q: u64, table: &PiTable) -> Result<GlobalIdentity> {
    let f = Field::of_order(q)?;
    let census = classify_all_by_jordan_type(source.n(), &f, DEFAULT_CENSUS_BUDGET)?;
    let mut sum: i128 = 0;
    for (t, &count) in &census.counts {
        let value = table.get(source, t).eval(q as i64);
        sum = value
            .checked_mul(count as i128)
            .and_then(|v| v.checked_add(sum))
            .ok_or(Error::Overflow("stratified sum"))?;
    }
    let total = total_space_count(&resolution_datum(source), q)?;
    let stratified_sum = u128::try_from(sum).map_err(|_| Error::Overflow("negative stratified sum"))?;
    Ok(GlobalIdentity { source: source.clone(), q, stratified_sum, total_space_count: total, holds: stratified_sum == total as u128 })
}
