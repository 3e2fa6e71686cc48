//! Report builders behind each subcommand.

use econe_core::bipartitions::{as_label, enumerate_bipartitions};
use econe_core::enhanced_cone::{
    classify_all, classify_all_by_jordan_type, classify_all_exhaustive, identify_orbit, orbit_dimension,
    random_invertible, representative, EnhancedPoint, OrbitCensus, PointDoc,
};
use econe_core::pi::{fit_pi, FitConfig, IntPolynomial, PiCertificate};
use econe_core::resolution::{
    fibre_points, job_seed, resolution_datum, validate_resolution, FibreReport, ResolutionReport,
};
use econe_core::slice::{certify_slice, SliceCertificate};
use econe_core::{Bipartition, Field, Partition};
use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerateRow {
    #[serde(with = "as_label")]
    pub bipartition: Bipartition,
    pub mu: Partition,
    pub nu: Partition,
    pub lambda: Partition,
    pub orbit_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerateReport {
    pub n: usize,
    pub count: usize,
    pub rows: Vec<EnumerateRow>,
}

pub fn cmd_enumerate(n: usize) -> EnumerateReport {
    let rows: Vec<EnumerateRow> = enumerate_bipartitions(n)
        .into_iter()
        .map(|b| EnumerateRow {
            mu: b.mu.clone(),
            nu: b.nu.clone(),
            lambda: b.lambda(),
            orbit_dimension: orbit_dimension(&b),
            bipartition: b,
        })
        .collect();
    EnumerateReport { n, count: rows.len(), rows }
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| CliError::BadArgs(e.to_string()))
}

impl EnumerateReport {
    pub fn to_csv(&self) -> Result<String, CliError> {
        csv_string(
            &["bipartition", "mu", "nu", "lambda", "orbit_dimension"],
            self.rows.iter().map(|r| {
                vec![
                    r.bipartition.to_string(),
                    r.mu.to_string(),
                    r.nu.to_string(),
                    r.lambda.to_string(),
                    r.orbit_dimension.to_string(),
                ]
            }),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentifyReport {
    pub q: u32,
    pub point: PointDoc,
    #[serde(with = "as_label")]
    pub bipartition: Bipartition,
    pub lambda: Partition,
    pub orbit_dimension: usize,
}

pub fn cmd_identify(pt: &EnhancedPoint) -> Result<IdentifyReport, CliError> {
    let b = identify_orbit(pt)?;
    Ok(IdentifyReport {
        q: pt.field.q(),
        point: pt.to_doc(),
        lambda: b.lambda(),
        orbit_dimension: orbit_dimension(&b),
        bipartition: b,
    })
}

/// A seeded random conjugate of the representative of `b`.
pub fn sample_point(b: &Bipartition, q: u64, seed: u64) -> Result<EnhancedPoint, CliError> {
    let f = Field::of_order(q)?;
    let (pt, _) = representative(b, &f);
    let mut rng = ChaCha8Rng::seed_from_u64(job_seed(seed, &format!("identify/{b}/{q}")));
    let (g, g_inv) = random_invertible(b.n(), &f, &mut rng);
    Ok(pt.conjugate(&g, &g_inv)?)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum CensusChoice {
    /// Exhaustive when `q^{n²}` fits the budget, otherwise by Jordan type.
    #[default]
    Auto,
    Exhaustive,
    Jordan,
}

pub fn cmd_census(n: usize, q: u64, method: CensusChoice, budget: u64) -> Result<OrbitCensus, CliError> {
    let f = Field::of_order(q)?;
    Ok(match method {
        CensusChoice::Auto => classify_all(n, &f, budget)?,
        CensusChoice::Exhaustive => classify_all_exhaustive(n, &f, budget)?,
        CensusChoice::Jordan => classify_all_by_jordan_type(n, &f, budget)?,
    })
}

pub fn census_csv(c: &OrbitCensus) -> Result<String, CliError> {
    csv_string(&["bipartition", "count"], c.counts.iter().map(|(b, n)| vec![b.to_string(), n.to_string()]))
}

pub fn cmd_verify_slice(n: usize) -> Result<Vec<SliceCertificate>, CliError> {
    if n == 0 {
        return Err(CliError::BadArgs("slice certificates need n ≥ 1".into()));
    }
    let certs = enumerate_bipartitions(n).par_iter().map(certify_slice).collect::<Result<Vec<_>, _>>()?;
    Ok(certs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionRun {
    pub n: usize,
    pub q: Vec<u64>,
    pub seed: u64,
    pub reports: Vec<ResolutionReport>,
    pub passed: bool,
}

pub fn cmd_validate_resolution(
    sources: &[Bipartition],
    n: usize,
    qs: &[u64],
    cfg: &RunConfig,
) -> Result<ResolutionRun, CliError> {
    let fields = qs.iter().map(|&q| Field::of_order(q)).collect::<Result<Vec<_>, _>>()?;
    let opts = cfg.validate_options();
    let reports = sources
        .iter()
        .map(|b| validate_resolution(b, &fields, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(|r| r.passed);
    Ok(ResolutionRun { n, q: qs.to_vec(), seed: cfg.seed, reports, passed })
}

pub fn cmd_count_fibre(
    source: &Bipartition,
    target: &Bipartition,
    q: u64,
    list: bool,
    budget: u64,
) -> Result<FibreReport, CliError> {
    if source.n() != target.n() {
        return Err(CliError::BadArgs(format!("source has n={} but target has n={}", source.n(), target.n())));
    }
    let f = Field::of_order(q)?;
    let (pt, _) = representative(target, &f);
    Ok(fibre_points(&resolution_datum(source), &pt, list, budget)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeEntry {
    #[serde(with = "as_label")]
    pub source: Bipartition,
    #[serde(with = "as_label")]
    pub target: Bipartition,
    pub pi: Option<IntPolynomial>,
    pub certificate: Option<PiCertificate>,
    /// Set when fitting failed or the certificate did not pass.
    pub finding: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub n: usize,
    pub q: Vec<u64>,
    pub entries: Vec<ProbeEntry>,
    pub findings: usize,
}

/// Certified `Π` for every source and every target with `v ∉ ker x` (some `μ_i ≥ 2`).
pub fn cmd_probe_paving(n: usize, qs: &[u64], cfg: &RunConfig) -> Result<ProbeReport, CliError> {
    if n > 4 {
        return Err(CliError::BadArgs("probe-paving supports n ≤ 4".into()));
    }
    let mut pairs = Vec::new();
    if !qs.is_empty() {
        let all = enumerate_bipartitions(n);
        for t in all.iter().filter(|t| t.mu.first() >= 2) {
            for s in &all {
                pairs.push((s.clone(), t.clone()));
            }
        }
    }
    let fit = FitConfig { fit_primes: qs.to_vec(), ..cfg.fit_config() };
    let entries: Vec<ProbeEntry> = pairs
        .par_iter()
        .map(|(s, t)| match fit_pi(s, t, &fit) {
            Ok(p) => ProbeEntry {
                source: s.clone(),
                target: t.clone(),
                finding: (!p.certificate.passed).then(|| "certificate failed".to_string()),
                pi: Some(p.coeffs),
                certificate: Some(p.certificate),
            },
            Err(e) => ProbeEntry {
                source: s.clone(),
                target: t.clone(),
                pi: None,
                certificate: None,
                finding: Some(e.to_string()),
            },
        })
        .collect();
    let findings = entries.iter().filter(|e| e.finding.is_some()).count();
    Ok(ProbeReport { n, q: qs.to_vec(), entries, findings })
}
